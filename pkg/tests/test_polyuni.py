from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscdecay import polyuni as pu

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(small, min_size=1, max_size=6).map(pu.normalize)


def from_roots(roots):
    out = [F(1)]
    for r, m in roots:
        for _ in range(m):
            out = pu.mul(out, [-F(r), F(1)])
    return out


def test_arithmetic_basics():
    a = [F(1), F(2)]  # 1 + 2x
    b = [F(-1), F(0), F(1)]  # x^2 - 1
    assert pu.mul(a, b) == [F(-1), F(-2), F(1), F(2)]
    assert pu.deriv(b) == [F(0), F(2)]
    q, r = pu.divmod_poly(b, [F(-1), F(1)])
    assert q == [F(1), F(1)] and r == []
    assert pu.evaluate(b, F(3)) == 8


def test_multiplicities_from_known_roots():
    p = from_roots([(F(1, 2), 3), (-2, 1), (0, 2)])
    assert pu.root_multiplicity(p, F(1, 2)) == 3
    assert pu.root_multiplicity(p, 0) == 2
    assert pu.root_multiplicity(p, 5) == 0
    assert pu.count_real_roots(p) == 3
    roots = dict(pu.real_roots(p))
    assert roots == {F(-2): 1, F(0): 2, F(1, 2): 3}


def test_irrational_roots_are_floats():
    # 1 - y^4: real roots +-1; y^2 - 2: +-sqrt 2
    roots = pu.real_roots([F(-2), 0, F(1)])
    assert len(roots) == 2
    assert all(abs(abs(float(r)) - 2**0.5) < 1e-14 and m == 1 for r, m in roots)


def test_no_real_roots():
    assert pu.real_roots([F(1), 0, 0, 0, 0, 0, F(1)]) == []


@given(polys, polys)
def test_division_identity(a, b):
    if not b:
        return
    q, r = pu.divmod_poly(a, b)
    assert pu.add(pu.mul(q, b), r) == pu.normalize(a)
    assert len(r) < len(b)


@given(st.lists(st.tuples(small, st.integers(1, 3)), min_size=1, max_size=3, unique_by=lambda t: t[0]))
def test_deflate_recovers_cofactor(roots):
    p = from_roots(roots)
    r0, m0 = roots[0]
    cof = pu.deflate(p, r0, m0)
    assert pu.mul(cof, from_roots([(r0, m0)])) == p
    assert pu.evaluate(cof, r0) != 0


@given(polys)
def test_squarefree_decomposition_multiplies_back(p):
    if len(p) < 2:
        return
    prod = [F(1)]
    for factor, k in pu.squarefree_decomposition(p):
        for _ in range(k):
            prod = pu.mul(prod, factor)
    lead = p[-1] / prod[-1]
    assert pu.scale(prod, lead) == p


def test_zero_polynomial_has_no_multiplicity():
    with pytest.raises(Exception):
        pu.root_multiplicity([], 1)
