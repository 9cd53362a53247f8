"""Acceptance criteria, each at its stated tolerance and time budget.

Every test prints one ``CRITERION n PASS|FAIL`` line, visible in ``pytest -v``
output.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import json
import math
import time

import numpy as np
import pytest

from oscdecay import cli, decayfit, maxop, oscquad, verify
from oscdecay.cutoffs import CutoffSpec
from oscdecay.oscquad import SurfaceSpec

from conftest import cubic_damped_spec, matrix_specs, poly


@pytest.fixture
def report(capsys):
    def emit(n, ok, elapsed, budget, detail):
        ok = bool(ok) and elapsed <= budget
        with capsys.disabled():
            print(f"\nCRITERION {n} {'PASS' if ok else 'FAIL'} ({elapsed:.1f}s of {budget:g}s) {detail}")
        return ok

    return emit


def test_criterion_1_identities(report):
    t0 = time.perf_counter()
    checks = verify.check_identities(seed=1, polys=100, points=100, float_tol=1e-9)
    elapsed = time.perf_counter() - t0
    summary = ", ".join(f"{c.name} {c.passed}/{c.total} worst {c.worst:.1e}" for c in checks)
    assert all(c.total == 10_000 for c in checks)
    assert report(1, all(c.ok for c in checks), elapsed, 10, summary)


def test_criterion_2_structure(report):
    t0 = time.perf_counter()
    fac = verify.check_factorizations(seed=2, phases=20, tol=1e-8)
    dis = verify.check_disjunction(seed=2, phases=20, points=1000)
    cur = verify.check_curves(seed=2, count=10, step=1e-3, tol=1e-6)
    elapsed = time.perf_counter() - t0
    summary = ", ".join(f"{c.name} {c.passed}/{c.total} worst {c.worst:.1e}" for c in (fac, dis, cur))
    assert cur.total == 10 and fac.total >= 20
    assert report(2, fac.ok and dis.ok and cur.ok, elapsed, 30, summary)


def test_criterion_3_quadrature(report):
    t0 = time.perf_counter()
    tol = 1e-9
    worst = 0.0
    for spec in matrix_specs().values():
        for t in (0.0, 16.0, 128.0, 512.0, 1024.0):
            for s in ((0.0, 0.0), (0.3, -0.2), (-0.5, 0.4)):
                dy = oscquad.oscillatory_integral(spec, t, s, tol=tol).value
                orc = oscquad.quadrature_oracle(spec, t, s).value
                worst = max(worst, abs(dy - orc) / max(tol, 1e-3 * abs(orc)))
    part = verify.check_partition(seed=3, tol=1e-10)
    spec = cubic_damped_spec(alpha=0.1, radius=0.3)
    k0, k1, _ = oscquad.dyadic_range(spec, spec.cutoff.support_box(spec.weights))
    resc = 0.0
    for k in range(k0, k1 + 1):
        for t, s in ((64.0, (0.0, 0.0)), (1024.0, (0.3, -0.2))):
            a = oscquad.dyadic_piece(spec, t, s, k, rescaled=False, tol=1e-14)
            b = oscquad.dyadic_piece(spec, t, s, k, rescaled=True, tol=1e-14)
            resc = max(resc, abs(a - b) / max(abs(a), 1e-12))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1 and part.ok and resc <= 1e-6
    detail = f"matrix worst/allowed {worst:.2e}, partition {part.worst:.1e}, rescaling {resc:.1e}"
    assert report(3, ok, elapsed, 300, detail)


def test_criterion_4_calibration(report, paraboloid, sextic):
    t0 = time.perf_counter()
    grid = decayfit.geometric_grid(4, 14, 21)
    par = SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (0, 0), 0.5))
    sex = SurfaceSpec(sextic, CutoffSpec("product_bump", (0, 0), 0.8))
    a = decayfit.fit_decay_exponent(par, t_grid=grid).slope
    b = decayfit.fit_decay_exponent(sex, t_grid=grid).slope
    local = SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (1, 0), 0.1))
    probe = decayfit.fit_samples(decayfit.probe_samples(local, (1, 0), (0, 0), grid)).slope
    elapsed = time.perf_counter() - t0
    ok = abs(a + 1) <= 0.1 and abs(b + 1 / 3) <= 0.05 and probe <= -3
    assert report(4, ok, elapsed, 600, f"paraboloid {a:.4f}, sextic {b:.4f}, probe {probe:.2f}")


def test_criterion_5_damped_decay(report):
    t0 = time.perf_counter()
    spec = cubic_damped_spec(alpha=0.1, radius=0.25)
    assert spec.alpha > decayfit.height_threshold(spec)
    rep = decayfit.uniform_decay_sweep(spec, decayfit.sigma_square((0, 0), 0.5, 5), decayfit.geometric_grid(),
                                       threshold=-0.5, slack=0.05)
    elapsed = time.perf_counter() - t0
    fitted = sum(o.fit is not None for o in rep.per_sigma)
    detail = f"worst slope {rep.worst_slope:.4f} at sigma {rep.worst_sigma}, {fitted}/25 fitted"
    assert report(5, rep.pass_ and rep.worst_slope <= -0.45, elapsed, 1200, detail)


def test_criterion_6_sharpness(report):
    t0 = time.perf_counter()
    f = poly([(2, 1, 1)], "1/4", "1/2")
    spec = SurfaceSpec(f, maxop.sharpness_cutoff(), 1.0)
    n_list = (64, 128, 256, 512, 1024)
    lo = maxop.sharpness_experiment(spec, 1.8, n_list)
    hi = maxop.sharpness_experiment(spec, 2.5, n_list)
    ys = [1.0, 3.0, 16.0, 1e3, 1e6]
    law = max(abs(maxop.lower_bound_witness(spec, 0.5, 2 * y, "dilation")
                  / maxop.lower_bound_witness(spec, 0.5, y, "dilation") - 2 ** -0.75) for y in ys)
    edge = maxop.sharpness_experiment(spec, 4 / 3, n_list, "dilation")
    logs = np.log(edge.N_list)
    slopes = np.diff(edge.norms) / np.diff(logs)
    log_growth = slopes.min() > 0 and np.ptp(slopes) <= 1e-9 * slopes.max()
    elapsed = time.perf_counter() - t0
    ok = (lo.verdict is maxop.Verdict.DIVERGES and hi.verdict is maxop.Verdict.BOUNDED
          and law <= 1e-15 and log_growth)
    detail = (f"p=1.8 {lo.verdict.value}, p=2.5 {hi.verdict.value}, witness law err {law:.1e}, "
              f"p=4/3 norm per log N {slopes.mean():.4f}")
    assert report(6, ok, elapsed, 300, detail)


def test_criterion_7_determinism(report, tmp_path):
    cfg = tmp_path / "verify.json"
    cfg.write_text(json.dumps({"command": "verify", "weights": ["1/4", "1/2"], "monomials": [[2, 1, "1"]]}))
    t0 = time.perf_counter()
    codes, blobs = [], []
    for run in ("first", "second"):
        codes.append(cli.main(["verify", "--config", str(cfg), "--seed", "42", "--out", str(tmp_path / run)]))
        blobs.append((tmp_path / run / "verify.json").read_bytes())
    elapsed = time.perf_counter() - t0
    ok = blobs[0] == blobs[1] and codes == [0, 0]
    assert report(7, ok, elapsed, math.inf, f"exit codes {codes}, {len(blobs[0])} bytes, identical {blobs[0] == blobs[1]}")
