"""Command-line entry point: ``oscdecay <analyze|decay|sharpness|verify> --config FILE``.

Settings resolve as flags > config file > defaults.  Every output file
embeds the sha256 of the fully resolved configuration.
"""

from __future__ import annotations

import argparse
import copy
import enum
import hashlib
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import decayfit, homfn, maxop, verify
from .cutoffs import CutoffSpec
from .errors import HeterogeneityError, OscDecayError
from .homfn import DampingMode, DampingSpec, MixedHomPoly, Weights
from .oscquad import SurfaceSpec

log = logging.getLogger("oscdecay")


class Command(str, enum.Enum):
    ANALYZE = "analyze"
    DECAY = "decay"
    SHARPNESS = "sharpness"
    VERIFY = "verify"


class ConfigError(OscDecayError):
    """Invalid configuration; ``code`` names the failure class."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"[{code}] {message}")


DEFAULTS = {
    "offset_c": 0.0,
    "alpha": 0.0,
    "cutoff": {"kind": "radial_bump", "center": [0.0, 0.0], "radius": 1.0, "scale": 1.0},
    "damping": {"mode": "identity", "direction": None},
    "t_grid": {"lo_exp": 4, "hi_exp": 14, "points": 21},
    "sigma_grid": {"center": [0.0, 0.0], "half_width": 0.5, "points": 5},
    "tail_fraction": 0.5,
    "threshold": -0.5,
    "slack": 0.05,
    "tol": None,
    "rtol": 1e-6,
    "p": [1.8, 2.5],
    "N_list": [64, 128, 256, 512, 1024],
    "variant": None,
    "crosscheck_N": 16,
    "verify": {"polys": 100, "points": 100, "phases": 20, "disjunction_points": 1000, "curves": 10},
    "seed": 0,
    "threads": 1,
}

SHARPNESS_DEFAULTS = {"offset_c": 1.0, "cutoff": maxop.sharpness_cutoff().to_json()}

# settings that do not change any computed number
UNHASHED = ("out", "threads")


@dataclass(frozen=True)
class ExperimentConfig:
    command: Command
    settings: dict
    phase: MixedHomPoly
    surface: SurfaceSpec

    def resolved(self) -> dict:
        return copy.deepcopy(self.settings)

    @property
    def config_hash(self) -> str:
        hashed = {k: v for k, v in self.settings.items() if k not in UNHASHED}
        blob = json.dumps(hashed, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _positive(name, value, allow_none=False):
    if value is None and allow_none:
        return
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0 or not math.isfinite(value):
        raise ConfigError("bad-tolerance", f"{name} must be a positive number, got {value!r}")


def _phase(raw: dict) -> MixedHomPoly:
    try:
        w = raw["weights"]
        mons = raw["monomials"]
    except KeyError as exc:
        raise ConfigError("bad-field", f"missing field {exc.args[0]!r}") from None
    try:
        kappa = Weights(*[Fraction(str(v)) for v in w])
        monos = [(int(a), int(b), homfn.as_number(c)) for a, b, c in mons]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, HeterogeneityError):
            raise
        raise ConfigError("bad-field", f"cannot read weights/monomials: {exc}") from None
    try:
        deg = homfn.check_homogeneity(monos, kappa)
    except HeterogeneityError as exc:
        raise ConfigError("heterogeneous", str(exc)) from None
    return MixedHomPoly(monos, kappa, deg)


def _damping(raw: dict, f: MixedHomPoly) -> DampingSpec:
    mode = DampingMode(raw.get("mode", "identity"))
    if mode is not DampingMode.GRADIENT_POWER:
        return DampingSpec(mode)
    target = raw.get("direction")
    dirs = homfn.critical_directions(f)
    if not dirs:
        raise ConfigError("bad-field", "gradient_power damping needs a critical direction; the phase has none")
    if target is None:
        best = max(dirs, key=lambda d: d.order_n)
    else:
        t = np.asarray(target, dtype=float)
        best = min(dirs, key=lambda d: float(np.hypot(*(np.asarray(d.theta) - t / np.hypot(*t)))))
    return DampingSpec.gradient_power(best)


def parse_config(text: bytes | str, overrides: dict | None = None) -> ExperimentConfig:
    """Validate a JSON config and materialize every default."""
    try:
        raw = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError("malformed-json", str(exc)) from None
    if not isinstance(raw, dict):
        raise ConfigError("malformed-json", "the top level must be a JSON object")
    raw = _merge(raw, {k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        command = Command(raw.get("command"))
    except ValueError:
        raise ConfigError("bad-field", f"command must be one of {[c.value for c in Command]}") from None
    base = _merge(DEFAULTS, SHARPNESS_DEFAULTS) if command is Command.SHARPNESS else DEFAULTS
    settings = _merge(base, raw)
    unknown = set(settings) - set(DEFAULTS) - {"command", "weights", "monomials", "out"}
    if unknown:
        raise ConfigError("bad-field", f"unknown fields {sorted(unknown)}")
    f = _phase(settings)
    settings["weights"] = f.weights.to_json()
    settings["monomials"] = [[a, b, homfn._fmt(c)] for a, b, c in f.monomials()]
    settings["degree"] = str(f.degree)
    if command in (Command.DECAY, Command.SHARPNESS) and f.weights.is_conic:
        raise ConfigError("conic", "weights (1, 1) are excluded: the decay and sharpness results need kappa != (1, 1)")
    _positive("tol", settings["tol"], allow_none=True)
    _positive("rtol", settings["rtol"])
    _positive("slack", settings["slack"])
    if not isinstance(settings["seed"], int) or isinstance(settings["seed"], bool):
        raise ConfigError("bad-field", "seed must be an integer")
    ps = settings["p"]
    settings["p"] = [float(v) for v in (ps if isinstance(ps, list) else [ps])]
    for v in settings["p"]:
        _positive("p", v)
    try:
        cutoff = CutoffSpec.from_json(settings["cutoff"])
        settings["cutoff"] = cutoff.to_json()
        damping = DampingSpec(DampingMode.IDENTITY)
        surface = None
        if f.degree == 1:
            damping = _damping(settings["damping"], f)
            surface = SurfaceSpec(f, cutoff, float(settings["offset_c"]), float(settings["alpha"]), damping)
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("bad-field", str(exc)) from None
    if surface is None and command is not Command.ANALYZE:
        raise ConfigError("bad-field", f"{command.value} needs a degree-1 phase, got degree {f.degree}")
    settings["command"] = command.value
    return ExperimentConfig(command, settings, f, surface)


# ---------------------------------------------------------------------------
# commands


def _analyze(cfg: ExperimentConfig) -> tuple[dict, dict, bool]:
    f = cfg.phase
    out = {"degree": str(f.degree), "weights": f.weights.to_json()}
    if f.degree == 1 and not f.weights.is_conic:
        dirs = homfn.critical_directions(f)
        out["ord"] = homfn.global_order(f)
        out["height"] = str(homfn.height(f))
        out["critical_directions"] = [d.to_json() for d in dirs]
        facs = []
        for d in dirs:
            if d.tilt_axis is not None and d.tilt != 0:
                facs.append(None)
                continue
            g = f.swapped() if d.primary_axis == 1 else f
            if float(d.representative[0]) < 0:
                g = g.reflected(0)
            fac = homfn.factor_at_direction(g, (abs(d.representative[0]), d.representative[1]))
            facs.append({"b": homfn._fmt(fac.b), "n": fac.n, "g_at_x0": fac.g_at_x0,
                         "cofactor": [homfn._fmt(c) for c in fac.cofactor],
                         "coordinates_swapped": d.primary_axis == 1})
        out["factorizations"] = facs
    else:
        out["ord"] = homfn.global_order(f)
        out["height"] = None
        out["critical_directions"] = []
        out["factorizations"] = []
    return out, {}, True


def _decay(cfg: ExperimentConfig, threads: int) -> tuple[dict, dict, bool]:
    st = cfg.settings
    tg = st["t_grid"]
    t_grid = decayfit.geometric_grid(tg["lo_exp"], tg["hi_exp"], tg["points"])
    if "sigmas" in st["sigma_grid"]:
        sigmas = [tuple(v) for v in st["sigma_grid"]["sigmas"]]
    else:
        sg = st["sigma_grid"]
        sigmas = decayfit.sigma_square(tuple(sg["center"]), sg["half_width"], sg["points"])
    spec = cfg.surface

    def sample(sig):
        return decayfit.sample_decay(spec, sig, t_grid, st["tol"], st["rtol"])

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        samples = dict(zip(sigmas, pool.map(sample, sigmas)))
    report = decayfit.uniform_decay_sweep(
        spec, sigmas, t_grid, st["threshold"], st["slack"], st["tail_fraction"], sampler=lambda s: samples[tuple(s)]
    )
    out = report.to_json()
    out["per_sigma"] = [
        {"sigma": list(o.sigma), "fit": None if o.fit is None else o.fit.to_json(), "failure": o.failure}
        for o in report.per_sigma
    ]
    return out, {"decay.csv": report.to_csv({"config_hash": cfg.config_hash})}, report.pass_


def _sharpness(cfg: ExperimentConfig) -> tuple[dict, dict, bool]:
    st = cfg.settings
    reports = [
        maxop.sharpness_experiment(cfg.surface, p, st["N_list"], st["variant"], crosscheck_N=st["crosscheck_N"],
                                   seed=st["seed"])
        for p in st["p"]
    ]
    h = float(homfn.height(cfg.phase))
    out = {"height": h, "reports": [r.to_json() for r in reports]}
    csvs = {f"sharpness_p{r.p:g}.csv": r.to_csv(cfg.config_hash) for r in reports}
    # a report is consistent when p < h diverges and p > h stays bounded
    ok = all(
        r.verdict is (maxop.Verdict.DIVERGES if r.p <= h else maxop.Verdict.BOUNDED) for r in reports
    )
    return out, csvs, ok


def _verify(cfg: ExperimentConfig) -> tuple[dict, dict, bool]:
    res = verify.run_suite(cfg.settings["seed"], **cfg.settings["verify"])
    return res, {}, res["all_passed"]


def run(cfg: ExperimentConfig, out_dir: Path | str | None = None) -> int:
    """Execute the command, write artifacts, return the exit status."""
    out_dir = Path(out_dir or cfg.settings.get("out") or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    cmd = cfg.command
    if cmd is Command.ANALYZE:
        body, extra, ok = _analyze(cfg)
    elif cmd is Command.DECAY:
        body, extra, ok = _decay(cfg, int(cfg.settings["threads"]))
    elif cmd is Command.SHARPNESS:
        body, extra, ok = _sharpness(cfg)
    else:
        body, extra, ok = _verify(cfg)
    header = {k: v for k, v in cfg.resolved().items() if k not in UNHASHED}
    doc = {"config_hash": cfg.config_hash, "config": header, "result": body, "pass": bool(ok)}
    (out_dir / f"{cmd.value}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    for name, text in extra.items():
        with open(out_dir / name, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oscdecay", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=[c.value for c in Command])
    ap.add_argument("--config", required=True, type=Path)
    ap.add_argument("--out", type=Path, default=None)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--tol", type=float, default=None)
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    overrides = {"command": args.command, "seed": args.seed, "tol": args.tol, "threads": args.threads}
    try:
        cfg = parse_config(args.config.read_bytes(), overrides)
        return run(cfg, args.out)
    except ConfigError as exc:
        print(f"oscdecay: config error {exc}", file=sys.stderr)
        return 2
    except OscDecayError as exc:
        print(f"oscdecay: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"oscdecay: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
