"""Exact univariate polynomial arithmetic over the rationals.

A polynomial is a list of coefficients, lowest degree first, with trailing
zeros stripped; ``[]`` is the zero polynomial.  Coefficients are
``fractions.Fraction`` (ints are promoted).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

Poly = list


def normalize(p: Sequence) -> Poly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Poly) -> int:
    return len(p) - 1


def add(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    res = list(a)
    for i, c in enumerate(b):
        res[i] += c
    return normalize(res)


def sub(a: Poly, b: Poly) -> Poly:
    return add(a, [-c for c in b])


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    res = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            res[i + j] += ca * cb
    return normalize(res)


def scale(a: Poly, c) -> Poly:
    return normalize([c * x for x in a])


def divmod_poly(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, cb in enumerate(b):
            a[shift + i] -= c * cb
        a = normalize(a)
    return normalize(q), a


def deriv(a: Poly) -> Poly:
    return normalize([i * c for i, c in enumerate(a)][1:])


def monic(a: Poly) -> Poly:
    if not a:
        return []
    return [c / a[-1] for c in a]


def gcd(a: Poly, b: Poly) -> Poly:
    a, b = normalize(a), normalize(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def evaluate(a: Poly, x):
    acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
    for c in reversed(a):
        acc = acc * x + (c if isinstance(acc, Fraction) else float(c))
    return acc


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = lc * prod(f_i ** i)`` with each ``f_i`` squarefree.

    Returns the non-constant factors as ``(f_i, i)`` pairs.
    """
    p = normalize(p)
    if len(p) <= 1:
        return []
    dp = deriv(p)
    a = gcd(p, dp)
    b = divmod_poly(p, a)[0]
    c = divmod_poly(dp, a)[0]
    d = sub(c, deriv(b))
    out = []
    i = 1
    while len(b) > 1:
        a = gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = sub(c, deriv(b))
        i += 1
    return out


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [normalize(p), deriv(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _signs_at_infinity(seq: list[Poly], positive: bool) -> list[int]:
    out = []
    for q in seq:
        if not q:
            continue
        s = 1 if q[-1] > 0 else -1
        if not positive and degree(q) % 2 == 1:
            s = -s
        out.append(s)
    return out


def count_real_roots(p: Poly) -> int:
    """Number of distinct real roots (Sturm's theorem)."""
    p = normalize(p)
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    return _sign_changes(_signs_at_infinity(seq, False)) - _sign_changes(
        _signs_at_infinity(seq, True)
    )


def _rationalize(x: float, p: Poly) -> Fraction | None:
    for den in (10**3, 10**6, 10**9):
        q = Fraction(x).limit_denominator(den)
        if evaluate(p, q) == 0:
            return q
    return None


def _polish(p: Poly, x: float) -> float:
    coeffs = [float(c) for c in p]
    dcoeffs = [float(c) for c in deriv(p)]
    for _ in range(50):
        fx = np.polyval(coeffs[::-1], x)
        dfx = np.polyval(dcoeffs[::-1], x)
        if dfx == 0:
            break
        step = fx / dfx
        x -= step
        if abs(step) <= 1e-16 * max(1.0, abs(x)):
            break
    return x


def squarefree_real_roots(p: Poly) -> list:
    """Real roots of a squarefree polynomial, sorted.

    Rational roots are returned as exact Fractions, the rest as polished
    floats.  The count is certified by a Sturm sequence.
    """
    p = normalize(p)
    if len(p) <= 1:
        return []
    if len(p) == 2:
        return [-p[0] / p[1]]
    n_real = count_real_roots(p)
    if n_real == 0:
        return []
    candidates = np.roots([float(c) for c in reversed(p)])
    candidates = sorted(candidates, key=lambda z: abs(z.imag))[:n_real]
    roots = []
    for z in candidates:
        x = _polish(p, float(z.real))
        exact = _rationalize(x, p)
        roots.append(exact if exact is not None else x)
    return sorted(roots, key=float)


def real_roots(p: Poly) -> list[tuple[object, int]]:
    """All real roots of ``p`` with multiplicities, sorted by value."""
    out = []
    for factor, mult in squarefree_decomposition(p):
        out.extend((r, mult) for r in squarefree_real_roots(factor))
    return sorted(out, key=lambda rm: float(rm[0]))


def root_multiplicity(p: Poly, root) -> int:
    """Multiplicity of ``root`` as a zero of ``p``.

    Exact for rational roots.  For float roots the multiplicity is read off
    the squarefree decomposition: the factor whose real root is closest.
    """
    p = normalize(p)
    if not p:
        raise ValueError("zero polynomial has no finite root multiplicity")
    if isinstance(root, (int, Fraction)):
        m = 0
        lin = [-Fraction(root), Fraction(1)]
        while True:
            q, r = divmod_poly(p, lin)
            if r:
                return m
            p, m = q, m + 1
    best, best_dist = 0, np.inf
    for r, mult in real_roots(p):
        dist = abs(float(r) - float(root))
        if dist < best_dist:
            best, best_dist = mult, dist
    scale_ = max(1.0, abs(float(root)))
    return best if best_dist <= 1e-7 * scale_ else 0


def deflate(p: Poly, root, times: int) -> Poly:
    """Exact quotient ``p / (y - root)**times`` for a rational root."""
    lin = [-Fraction(root), Fraction(1)]
    for _ in range(times):
        p, r = divmod_poly(p, lin)
        if r:
            raise ValueError("root multiplicity is lower than requested")
    return p
