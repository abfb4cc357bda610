"""Command-line runner: YAML config in, CSV/JSON results plus a manifest out.

Exit codes: 0 success, 1 verify mismatch, 2 validation error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Literal

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import __version__
from .chaos import BudgetError, pauli_string_matrix, sff_average, spread_profile
from .circuit import CircuitSpec, StateVector, evolve_real
from .entanglement import DEFAULT_KS, continuity_checks, entropies, partial_trace, theorem1_bounds
from .growth import KINDS, fit_timescales, run_growth
from .hamiltonians import SolverError, build_hamiltonian
from .optimize import SUCCESS_THRESHOLD, GroundReference, OptimizationError, OptimizerConfig, gradient_descent, success_sweep

log = logging.getLogger("entdiag")

EXPERIMENTS = ("grow", "optimize", "sweep", "diagnose", "sff", "spread", "tables")
WORKERS_ENV = "ENTDIAG_WORKERS"
EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3

# acceptance tolerances for the growth tables
TABLE_TOLERANCES = {"v_k": 0.05, "L_l": 8, "r": 0.1, "L_s": 8}


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class HamiltonianConfig(_Strict):
    kind: Literal["nn_ising", "long_range_ising", "syk4"]
    g: float = 1.0
    alpha: float = 1.0
    seed: int = 0


class OptimizerSection(_Strict):
    eta: float = Field(0.005, ge=0)
    max_steps: int = Field(10_000, ge=1)
    record_every: int = Field(10, ge=1)
    grad_tol: float = Field(0.0, ge=0)

    def build(self) -> OptimizerConfig:
        return OptimizerConfig(self.eta, self.max_steps, self.record_every, self.grad_tol)


class TauGrid(_Strict):
    start: float = 0.0
    stop: float = 50.0
    num: int = Field(501, ge=1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


class ExperimentConfig(_Strict):
    experiment: Literal["grow", "optimize", "sweep", "diagnose", "sff", "spread", "tables"]
    n: int = Field(8, ge=2, le=20)
    L: int | None = Field(None, ge=0)
    depths: list[int] | None = None
    L_max: int = Field(250, ge=1)
    architecture: Literal["brickwall", "stochastic", "restricted"] = "brickwall"
    p: float | None = Field(None, ge=0, le=1)
    hamiltonian: HamiltonianConfig | None = None
    seeds: int | list[int] = 50
    seed: int = 0
    optimizer: OptimizerSection = OptimizerSection()
    kinds: list[str] = list(KINDS)
    ns: list[int] = [8]
    ks: list[int] = list(DEFAULT_KS)
    taus: TauGrid = TauGrid()
    label: Literal["dimension", "qubits"] = "dimension"
    site: int = 0
    operator: Literal["x", "y", "z"] = "z"
    probe: Literal["x", "y", "z"] = "z"
    times: list[int] | None = None
    out: str | None = None
    workers: int | None = Field(None, ge=1)

    @field_validator("n")
    @classmethod
    def _even(cls, n):
        if n % 2:
            raise ValueError("n must be even")
        return n

    @field_validator("ns")
    @classmethod
    def _even_list(cls, ns):
        if not ns or any(n % 2 or n < 2 or n > 20 for n in ns):
            raise ValueError("ns must be a non-empty list of even sizes in [2, 20]")
        return ns

    @field_validator("kinds")
    @classmethod
    def _known_kinds(cls, kinds):
        bad = [k for k in kinds if k not in KINDS]
        if bad:
            raise ValueError(f"unknown entropy kinds {bad}; choose from {list(KINDS)}")
        return kinds

    @model_validator(mode="after")
    def _experiment_fields(self):
        e = self.experiment
        if e in ("optimize", "sweep") and self.hamiltonian is None:
            raise ValueError(f"{e} needs a hamiltonian section")
        if self.hamiltonian is not None and e in ("optimize", "sweep") and self.n > 16:
            raise ValueError("optimization diagnostics need n <= 16")
        if e in ("optimize", "spread") and self.L is None:
            raise ValueError(f"{e} needs L")
        if e == "sweep":
            if not self.depths:
                raise ValueError("sweep needs a non-empty depths list")
            if self.depths != sorted(self.depths):
                raise ValueError("depths must be sorted")
        if self.architecture == "restricted" or self.architecture == "brickwall":
            if self.p not in (None, 1.0):
                raise ValueError(f"p is fixed to 1 for the {self.architecture} architecture")
        if e == "spread" and not 0 <= self.site < self.n:
            raise ValueError("site out of range")
        if self.times is not None and self.L is not None and any(t < 0 or t > self.L for t in self.times):
            raise ValueError("times must lie in [0, L]")
        if isinstance(self.seeds, int) and self.seeds < 1:
            raise ValueError("seeds must be positive")
        return self

    def seed_list(self) -> list[int]:
        if isinstance(self.seeds, int):
            return list(range(self.seed, self.seed + self.seeds))
        return [int(s) for s in self.seeds]

    def depth_list(self) -> list[int]:
        if self.depths:
            return list(self.depths)
        return [self.L if self.L is not None else self.L_max]


# ------------------------------------------------------------ helpers


def fmt(x) -> str:
    """Shortest round-trip text for floats; plain text for everything else."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(obj), fh, indent=1, sort_keys=True)
        fh.write("\n")


def canonical_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def config_hash(cfg: ExperimentConfig) -> str:
    # where results go and how many processes compute them do not change them
    body = cfg.model_dump(exclude={"out", "workers"})
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


def file_sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Manifest:
    def __init__(self, out: Path, cfg: ExperimentConfig):
        self.path = out / "manifest.json"
        self.out = out
        self.data = {
            "config_hash": config_hash(cfg),
            "version": __version__,
            "experiment": cfg.experiment,
            "started": _now(),
            "finished": None,
            "status": "running",
            "tasks": {},
            "outputs": {},
            "failure": None,
        }
        self.save()

    def save(self) -> None:
        write_json(self.path, self.data)

    def task(self, name: str, status: str) -> None:
        self.data["tasks"][name] = status
        self.save()

    def output(self, path: Path) -> None:
        self.data["outputs"][str(path.relative_to(self.out))] = file_sha256(path)
        self.save()

    def finish(self, status: str, failure: dict | None = None) -> None:
        self.data["status"] = status
        self.data["failure"] = failure
        self.data["finished"] = _now()
        self.save()


def cached_ok(out: Path, digest: str) -> bool | None:
    """None when there is no finished run for this config; else whether its files are intact."""
    path = out / "manifest.json"
    if not path.exists():
        return None
    try:
        old = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        return None
    if old.get("config_hash") != digest or old.get("status") != "complete":
        return None
    for rel, sha in old.get("outputs", {}).items():
        f = out / rel
        if not f.exists() or file_sha256(f) != sha:
            return False
    return True


# --------------------------------------------------------- experiments


def _circuit_state(args):
    n, L, arch, p, seed = args
    return evolve_real(CircuitSpec.random(n, L, arch, p=p, seed=seed))


def _pmap(fn, tasks, workers: int):
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


def _fit_records(curve, kinds) -> list[dict]:
    return [fit_timescales(curve, kind=k).to_record() for k in kinds]


def run_grow(cfg: ExperimentConfig, out: Path, man: Manifest, workers: int) -> None:
    man.task("grow", "running")
    curve = run_growth(cfg.n, cfg.architecture, cfg.seed_list(), cfg.L_max, tuple(cfg.kinds), cfg.p, workers)
    path = out / "growth.csv"
    write_csv(path, ("L", "kind", "mean", "stderr"), curve.rows())
    man.output(path)
    if cfg.L_max >= 250:
        path = out / "fits.json"
        write_json(path, {"rows": _fit_records(curve, cfg.kinds)})
        man.output(path)
    man.task("grow", "done")


def run_tables(cfg: ExperimentConfig, out: Path, man: Manifest, workers: int) -> None:
    if cfg.L_max < 250:
        raise ValueError("tables need L_max >= 250 for the saturation window")
    rows = []
    for n in cfg.ns:
        man.task(f"n={n}", "running")
        curve = run_growth(n, cfg.architecture, cfg.seed_list(), cfg.L_max, tuple(cfg.kinds), cfg.p, workers)
        path = out / f"growth_n{n}.csv"
        write_csv(path, ("L", "kind", "mean", "stderr"), curve.rows())
        man.output(path)
        rows += _fit_records(curve, cfg.kinds)
        man.task(f"n={n}", "done")
    path = out / "tables.json"
    write_json(path, {"rows": rows})
    man.output(path)


def _opt_task(args):
    spec, H, ocfg, ref = args
    return gradient_descent(spec, H, ocfg, ref)


TRACE_HEADER = ("seed", "tau", "energy", "gap", "grad_norm", "renyi2", "trace_dist")


def run_optimize(cfg: ExperimentConfig, out: Path, man: Manifest, workers: int) -> None:
    H = build_hamiltonian({"n": cfg.n, **cfg.hamiltonian.model_dump()})
    ref = GroundReference.of(H)
    ocfg = cfg.optimizer.build()
    seeds = cfg.seed_list()
    man.task("ground_state", "done")
    tasks = [(CircuitSpec.random(cfg.n, cfg.L, cfg.architecture, p=cfg.p, seed=s), H, ocfg, ref) for s in seeds]
    man.task("descent", "running")
    traces = _pmap(_opt_task, tasks, workers)
    path = out / "trace.csv"
    write_csv(path, TRACE_HEADER, (row for tr in traces for row in tr.rows()))
    man.output(path)
    gaps = [tr.final_gap for tr in traces]
    summary = {
        "hamiltonian": H.kind,
        "n": cfg.n,
        "L": cfg.L,
        "ground_energy": ref.energy,
        "final_gaps": dict(zip(map(str, seeds), gaps)),
        "success_rate": float(np.mean(np.asarray(gaps) < SUCCESS_THRESHOLD)),
        "flags": sorted({f for tr in traces for f in tr.flags}),
    }
    path = out / "summary.json"
    write_json(path, summary)
    man.output(path)
    man.task("descent", "done")


def run_sweep(cfg: ExperimentConfig, out: Path, man: Manifest, workers: int) -> None:
    H = build_hamiltonian({"n": cfg.n, **cfg.hamiltonian.model_dump()})
    man.task("sweep", "running")
    table = success_sweep(
        cfg.n, H, cfg.depths, cfg.seed_list(), cfg.optimizer.build(), cfg.architecture, cfg.p, workers, keep_traces=True
    )
    (out / "traces").mkdir(exist_ok=True)
    for L in cfg.depths:
        path = out / "traces" / f"L{L}.csv"
        keys = sorted(k for k in table.traces if k[0] == L)
        write_csv(path, TRACE_HEADER, (row for k in keys for row in table.traces[k].rows()))
        man.output(path)
    summary = {f"{H.kind}/{cfg.n}/{r.L}": r.to_record() for r in table.rows}
    path = out / "sweep.json"
    write_json(
        path,
        {
            "architecture": cfg.architecture,
            "rows": summary,
            "failure_onset": table.failure_onset(),
            "success_edge": table.success_edge(),
        },
    )
    man.output(path)
    man.task("sweep", "done")


def run_diagnose(cfg: ExperimentConfig, out: Path, man: Manifest, workers: int) -> None:
    seeds = cfg.seed_list()
    rows, bound_viol, cont_viol = [], 0, 0
    for L in cfg.depth_list():
        man.task(f"L={L}", "running")
        states = _pmap(_circuit_state, [(cfg.n, L, cfg.architecture, cfg.p, s) for s in seeds], workers)
        states = [StateVector(psi) for psi in states]
        rhos = [partial_trace(psi) for psi in states]
        for i, (s, rho) in enumerate(zip(seeds, rhos)):
            b = theorem1_bounds(rho, cfg.ks)
            ent = entropies(rho, cfg.ks)
            j = (i + 1) % len(seeds)
            c = continuity_checks(rho, rhos[j], cfg.ks, full=(states[i], states[j])) if len(seeds) > 1 else None
            bound_viol += not b.holds()
            cont_viol += 0 if c is None else len(c.violations())
            rows.append(
                {
                    "L": L,
                    "seed": s,
                    "bounds": b.to_record(),
                    "entropies": ent.to_record(),
                    "continuity_violations": [] if c is None else c.violations(),
                }
            )
        man.task(f"L={L}", "done")
    path = out / "diagnose.json"
    write_json(path, {"n": cfg.n, "rows": rows, "bound_violations": bound_viol, "continuity_violations": cont_viol})
    man.output(path)


def run_sff(cfg: ExperimentConfig, out: Path, man: Manifest, workers: int) -> None:
    L = cfg.L if cfg.L is not None else cfg.L_max
    man.task("sff", "running")
    states = _pmap(_circuit_state, [(cfg.n, L, cfg.architecture, cfg.p, s) for s in cfg.seed_list()], workers)
    res = sff_average([partial_trace(psi) for psi in states], cfg.taus.values(), cfg.label)
    path = out / "sff.csv"
    write_csv(path, ("tau", "value"), res.rows())
    man.output(path)
    man.task("sff", "done")


def run_spread(cfg: ExperimentConfig, out: Path, man: Manifest, workers: int) -> None:
    spec = CircuitSpec.random(cfg.n, cfg.L, cfg.architecture, p=cfg.p, seed=cfg.seed_list()[0])
    op0 = pauli_string_matrix({cfg.site: cfg.operator}, cfg.n)
    times = cfg.times if cfg.times is not None else list(range(cfg.L + 1))
    man.task("spread", "running")
    prof = spread_profile(op0, spec, times, cfg.probe, label=f"{cfg.operator}{cfg.site}", support=[cfg.site])
    path = out / "spread.csv"
    write_csv(path, ("t", "x", "C"), prof.rows())
    man.output(path)
    path = out / "entropy.csv"
    write_csv(path, ("t", "S"), zip(prof.times, prof.entropy))
    man.output(path)
    path = out / "spread.json"
    write_json(
        path,
        {
            "label": prof.label,
            "probe": prof.probe,
            "times": prof.times,
            "norm2": prof.norm2,
            "front": prof.front(),
            "cone": [sorted(c) for c in prof.cones],
        },
    )
    man.output(path)
    man.task("spread", "done")


RUNNERS = {
    "grow": run_grow,
    "optimize": run_optimize,
    "sweep": run_sweep,
    "diagnose": run_diagnose,
    "sff": run_sff,
    "spread": run_spread,
    "tables": run_tables,
}

NUMERIC_ERRORS = (ArithmeticError, SolverError, OptimizationError, np.linalg.LinAlgError)


# -------------------------------------------------------------- verify


def reference_tables() -> dict:
    text = resources.files("entdiag").joinpath("data/reference_tables.json").read_text(encoding="utf-8")
    return json.loads(text)


def _row_key(row: dict) -> str:
    if "type" in row and "n" in row:
        return f"{row['type']}/n={row['n']}"
    if "L" in row:
        return f"L={row['L']}"
    return canonical_json(row)


def _rows_of(doc) -> dict[str, dict]:
    rows = doc.get("rows", doc) if isinstance(doc, dict) else doc
    if isinstance(rows, dict):
        return {str(k): v for k, v in rows.items()}
    return {_row_key(r): r for r in rows}


def verify(golden, results, tolerances: dict[str, float] | None = None) -> dict:
    """Compare result rows to golden rows field by field.

    Numeric fields pass within ``tolerances[field]`` (exact match when absent);
    any other field must be equal. A golden row missing from the results fails.
    """
    tol = dict(TABLE_TOLERANCES)
    tol.update(tolerances or {})
    g_rows, r_rows = _rows_of(golden), _rows_of(results)
    failures, missing, checked = [], [], 0
    for key, g in g_rows.items():
        r = r_rows.get(key)
        if r is None:
            missing.append(key)
            continue
        for field, gv in g.items():
            if field not in r:
                failures.append({"criterion": f"{key}:{field}", "reason": "field absent"})
                continue
            rv = r[field]
            checked += 1
            if isinstance(gv, (int, float)) and isinstance(rv, (int, float)) and not isinstance(gv, bool):
                t = tol.get(field, 0.0)
                if not abs(rv - gv) <= t:
                    failures.append(
                        {"criterion": f"{key}:{field}", "golden": gv, "result": rv, "diff": rv - gv, "tolerance": t}
                    )
            elif gv != rv:
                failures.append({"criterion": f"{key}:{field}", "golden": gv, "result": rv, "reason": "mismatch"})
    return {
        "passed": not failures and not missing,
        "checked": checked,
        "failures": failures,
        "missing": missing,
        "tolerances": tol,
    }


def _load_json(spec: str):
    if spec == "reference":
        return reference_tables()
    return json.loads(Path(spec).read_text(encoding="utf-8"))


def _verify_main(args) -> int:
    try:
        tols = {}
        for item in args.tol or []:
            k, _, v = item.partition("=")
            tols[k] = float(v)
        golden, results = _load_json(args.golden), _load_json(args.results)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.only_n:
        keep = set(args.only_n)
        golden = {"rows": [r for r in golden["rows"] if r.get("n") in keep]}
    rep = verify(golden, results, tols)
    for f in rep["failures"]:
        print(f"FAIL {f['criterion']}: " + ", ".join(f"{k}={v}" for k, v in f.items() if k != "criterion"))
    for m in rep["missing"]:
        print(f"FAIL missing row {m}")
    print(f"{'PASS' if rep['passed'] else 'FAIL'}: {rep['checked']} fields checked, {len(rep['failures'])} diffs, {len(rep['missing'])} missing rows")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "verify.json", rep)
    return EXIT_OK if rep["passed"] else EXIT_MISMATCH


# ---------------------------------------------------------------- main


def load_config(path: str, experiment: str, overrides: dict) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ValueError("config must be a mapping")
    if raw.get("experiment", experiment) != experiment:
        raise ValueError(f"config is for {raw['experiment']!r}, not {experiment!r}")
    raw["experiment"] = experiment
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.model_validate(raw)


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _report_error(out: str | None, kind: str, exc: Exception) -> None:
    print(f"error ({kind}): {exc}", file=sys.stderr)
    if out:
        p = Path(out)
        p.mkdir(parents=True, exist_ok=True)
        write_json(p / "error.json", {"kind": kind, "message": str(exc)})


def run(args) -> int:
    overrides = {"seed": args.seed, "out": args.out, "workers": args.workers}
    try:
        cfg = load_config(args.config, args.command, overrides)
    except (OSError, yaml.YAMLError, ValueError, ValidationError) as exc:
        _report_error(args.out, "validation", exc)
        return EXIT_INVALID
    if cfg.out is None:
        _report_error(None, "validation", ValueError("no output directory: set out in the config or pass --out"))
        return EXIT_INVALID
    out = Path(cfg.out)
    workers = cfg.workers or _default_workers()
    digest = config_hash(cfg)

    if not args.force:
        state = cached_ok(out, digest)
        if state is True:
            print(f"{out}: results for config {digest[:12]} already present and verified")
            return EXIT_OK
        if state is False:
            print(f"{out}: cached results do not match their manifest; recomputing", file=sys.stderr)
        elif (out / "manifest.json").exists():
            old = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
            if old.get("config_hash") != digest:
                _report_error(None, "validation", ValueError(f"{out} holds results of another config; use --force"))
                return EXIT_INVALID

    out.mkdir(parents=True, exist_ok=True)
    stale = out / "error.json"
    if stale.exists():
        stale.unlink()
    man = Manifest(out, cfg)
    path = out / "config.resolved.yaml"
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(_jsonable(cfg.model_dump()), fh, sort_keys=True)
    man.output(path)
    try:
        RUNNERS[cfg.experiment](cfg, out, man, workers)
    except NUMERIC_ERRORS as exc:
        man.finish("failed", {"kind": "numerical", "type": type(exc).__name__, "message": str(exc), "tasks": man.data["tasks"]})
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, BudgetError) as exc:
        man.finish("failed", {"kind": "validation", "type": type(exc).__name__, "message": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BaseException as exc:
        man.finish("failed", {"kind": "internal", "type": type(exc).__name__, "message": str(exc)})
        raise
    man.finish("complete")
    log.info("wrote %d files to %s", len(man.data["outputs"]), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="entdiag", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run a {name} experiment")
        p.add_argument("--config", required=True, help="YAML experiment file")
        p.add_argument("--out", help="output directory (overrides the config)")
        p.add_argument("--workers", type=int, help=f"process count (default ${WORKERS_ENV} or 1)")
        p.add_argument("--seed", type=int, help="master seed (overrides the config)")
        p.add_argument("--force", action="store_true", help="recompute even if cached results exist")
    p = sub.add_parser("verify", help="compare results JSON against golden records")
    p.add_argument("golden", help="golden JSON, or 'reference' for the shipped growth tables")
    p.add_argument("results", help="results JSON")
    p.add_argument("--tol", action="append", metavar="FIELD=VALUE", help="override a field tolerance")
    p.add_argument("--only-n", type=int, action="append", help="restrict golden rows to these sizes")
    p.add_argument("--out", help="directory for verify.json")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "verify":
        return _verify_main(args)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
