"""Config-driven command line front end.

Subcommands ``cost``, ``aggregate``, ``reserve`` and ``discretize`` each
take a JSON config (one document per run, ``task`` field naming the
subcommand) and write a fixed-width summary to stdout plus machine-readable
results to the output directory.  ``validate`` parses and resolves any
config without computing.  Warnings stream as ``WARNING|<module>|<message>``
lines; the RISKKIT_LOG environment variable sets the logging verbosity.

Null stands for an infinite cover in layer blocks, since JSON has no
infinity literal.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import copulas as _cop
from . import distributions as _dist
from .discretize import DISCRETIZATION_METHODS, discretize
from .errors import ConfigError, RiskKitError
from .lossaggregation import DependentSum, MarginList
from .lossmodel import (
    EngineConfig,
    FrequencyModel,
    Layer,
    PolicyStructure,
    cost_policy,
    costing_summary,
)
from .lossreserve import (
    ReservingSpec,
    TriangleSet,
    crm_reserve,
    fisher_lange,
    read_triangle_csv,
    reserve_report,
)

logger = logging.getLogger("riskkit.cli")

TASKS = ("cost", "aggregate", "reserve", "discretize")


def _fail(kind: str, message: str) -> None:
    raise ConfigError(f"{kind}: {message}")


def _require(cfg: dict, key: str, where: str):
    if key not in cfg:
        _fail(where, f"missing required field '{key}'")
    return cfg[key]


def _num(value, where, allow_null_inf=False):
    if value is None and allow_null_inf:
        return math.inf
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        _fail(where, f"expected a number, got {value!r}")
    return float(value)


def load_config(path: str, task: str | None = None) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        _fail("config", f"file not found: {path}")
    except json.JSONDecodeError as exc:
        _fail("config", f"not valid JSON ({exc})")
    if not isinstance(cfg, dict):
        _fail("config", "top level must be an object")
    declared = _require(cfg, "task", "config")
    if declared not in TASKS:
        _fail("config.task", f"unknown task '{declared}'; expected one of {TASKS}")
    if task is not None and declared != task:
        _fail("config.task", f"config declares task '{declared}', command is '{task}'")
    return cfg


# ---------------------------------------------------------------------------
# block builders (shared by run and validate)
# ---------------------------------------------------------------------------


def build_frequency(block: dict) -> FrequencyModel:
    name = _require(block, "dist", "frequency")
    par = _require(block, "par", "frequency")
    if not isinstance(par, dict):
        _fail("frequency.par", "must be a parameter object")
    dist = _dist.frequency(name, par)
    return FrequencyModel(dist=dist, threshold=_num(block.get("threshold", 0.0), "frequency.threshold"))


def build_severity(block: dict) -> _dist.ContinuousDistribution:
    name = _require(block, "dist", "severity")
    par = _require(block, "par", "severity")
    if not isinstance(par, dict):
        _fail("severity.par", "must be a parameter object")
    return _dist.severity(name, par)


def build_copula(block: dict) -> _cop.Copula:
    name = _require(block, "dist", "copula")
    par = _require(block, "par", "copula")
    if not isinstance(par, dict):
        _fail("copula.par", "must be a parameter object")
    return _cop.copula(name, par)


def build_margins(block: dict) -> MarginList:
    names = _require(block, "dist", "margins")
    pars = _require(block, "par", "margins")
    if not isinstance(names, list) or not isinstance(pars, list) or len(names) != len(pars):
        _fail("margins", "'dist' and 'par' must be lists of equal length")
    return MarginList([_dist.severity(n, p) for n, p in zip(names, pars)])


def build_layer(block: dict, idx: int) -> Layer:
    where = f"policy.layers[{idx}]"
    known = {
        "cover",
        "deductible",
        "aggr_cover",
        "aggr_deductible",
        "n_reinst",
        "reinst_percentage",
        "share",
    }
    for key in block:
        if key not in known:
            _fail(where, f"unknown field '{key}'")
    kwargs = {
        "cover": _num(block.get("cover"), f"{where}.cover", allow_null_inf=True),
        "deductible": _num(block.get("deductible", 0.0), f"{where}.deductible"),
        "aggr_cover": _num(block.get("aggr_cover"), f"{where}.aggr_cover", allow_null_inf=True),
        "aggr_deductible": _num(block.get("aggr_deductible", 0.0), f"{where}.aggr_deductible"),
        "share": _num(block.get("share", 1.0), f"{where}.share"),
    }
    if block.get("n_reinst") is not None:
        kwargs["n_reinst"] = int(block["n_reinst"])
        kwargs["reinst_percentage"] = block.get("reinst_percentage", 1.0)
    return Layer(**kwargs)


def build_policy(block: dict) -> PolicyStructure:
    layers = _require(block, "layers", "policy")
    if isinstance(layers, dict):
        layers = [layers]
    if not isinstance(layers, list) or not layers:
        _fail("policy.layers", "must be a non-empty list of layer objects")
    return PolicyStructure([build_layer(b, i) for i, b in enumerate(layers)])


def build_engine(block: dict | None, seed_override=None) -> EngineConfig:
    block = dict(block or {})
    known = {
        "aggr_loss_dist_method",
        "n_aggr_dist_nodes",
        "sev_discr_method",
        "n_sev_discr_nodes",
        "sev_discr_step",
        "n_sim",
        "random_state",
    }
    for key in block:
        if key not in known:
            _fail("engine", f"unknown field '{key}'")
    if seed_override is not None:
        block["random_state"] = seed_override
    method = block.get("sev_discr_method", "massdispersal")
    if method not in DISCRETIZATION_METHODS:
        _fail("engine.sev_discr_method", f"unknown method '{method}'")
    return EngineConfig(
        aggr_loss_dist_method=block.get("aggr_loss_dist_method"),
        n_aggr_dist_nodes=int(block.get("n_aggr_dist_nodes", 2**17)),
        sev_discr_method=method,
        n_sev_discr_nodes=int(block.get("n_sev_discr_nodes", 2**14)),
        sev_discr_step=(
            None if block.get("sev_discr_step") is None else float(block["sev_discr_step"])
        ),
        n_sim=int(block.get("n_sim", 10**5)),
        random_state=block.get("random_state"),
    )


def build_triangles(block: dict, base: Path) -> TriangleSet:
    needed = [
        "incremental_payments",
        "payments_number",
        "cased_payments",
        "open_claims_number",
        "reported_claims",
    ]
    arrays = {}
    for key in needed:
        path = Path(_require(block, key, "triangles"))
        if not path.is_absolute():
            path = base / path
        if not path.exists():
            _fail(f"triangles.{key}", f"file not found: {path}")
        arrays[key] = read_triangle_csv(path)
    arrays["reported_claims"] = arrays["reported_claims"][:, 0]
    return TriangleSet(**arrays)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _write_rows(out_dir: Path, stem: str, fieldnames: list[str], rows: list[dict],
                fmt: str) -> list[Path]:
    written = []
    if fmt in ("csv", "table"):
        path = out_dir / f"{stem}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _csv_cell(row.get(k)) for k in fieldnames})
        written.append(path)
    if fmt in ("json", "table"):
        path = out_dir / f"{stem}.json"
        with open(path, "w") as fh:
            json.dump(rows, fh, indent=2, default=_json_cell)
            fh.write("\n")
        written.append(path)
    return written


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def _json_cell(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serialisable: {type(value)}")


def _print_warnings(records) -> None:
    for rec in records:
        print(str(rec))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_cost(cfg: dict, out_dir: Path, fmt: str, seed) -> int:
    freq = build_frequency(_require(cfg, "frequency", "config"))
    sev = build_severity(_require(cfg, "severity", "config"))
    policy = build_policy(cfg.get("policy", {"layers": [{}]}))
    engine = build_engine(cfg.get("engine"), seed)

    results = cost_policy(freq, sev, policy, engine)
    rows = []
    for res in results:
        _print_warnings(res.warnings)
        print(costing_summary(res))
        print()
        layer = res.layer
        rows.append(
            {
                "layer": res.idx + 1,
                "cover": layer.cover,
                "deductible": layer.deductible,
                "aggr_cover": layer.effective_aggr_cover,
                "aggr_deductible": layer.aggr_deductible,
                "n_reinst": layer.n_reinst,
                "share": layer.share,
                "pure_premium_closed": res.pure_premium_closed,
                "pure_premium_dist": res.pure_premium_dist,
            }
        )
    _write_rows(
        out_dir,
        "cost_results",
        list(rows[0].keys()),
        rows,
        fmt,
    )
    return 0


def _cmd_aggregate(cfg: dict, out_dir: Path, fmt: str, seed) -> int:
    margins = build_margins(_require(cfg, "margins", "config"))
    copula = build_copula(_require(cfg, "copula", "config"))
    method = cfg.get("method", "aep")
    if method not in ("aep", "mc"):
        _fail("config.method", f"expected 'aep' or 'mc', got '{method}'")
    if method == "aep" and not 2 <= copula.dim <= 5:
        _fail("config", f"the aep method supports dimensions 2..5, got {copula.dim}")
    n_iter = int(cfg.get("n_iter", 7))
    n_sim = cfg.get("n_sim")
    random_state = seed if seed is not None else cfg.get("random_state")
    ds = DependentSum(margins, copula, n_iter=n_iter)
    if method == "mc":
        if n_sim is None or random_state is None:
            _fail("config", "the mc method needs n_sim and random_state")
        ds.build_mc_sample(int(n_sim), random_state)

    s_points = [float(s) for s in cfg.get("s", [])]
    q_levels = [float(q) for q in cfg.get("q", [])]
    rows = []
    for s in s_points:
        p = ds.cdf(s, method=method)
        rows.append({"kind": "cdf", "x": s, "value": float(p)})
        print(f"P(S <= {s:g}) = {p:.10g}   [{method}]")
    for q in q_levels:
        x = ds.ppf(q, method=method)
        rows.append({"kind": "ppf", "x": q, "value": float(x)})
        print(f"ppf({q:g}) = {x:.10g}   [{method}]")
    if method == "mc":
        rows.append({"kind": "mean", "x": None, "value": ds.mean()})
        rows.append({"kind": "std", "x": None, "value": ds.std()})
        print(f"sample mean = {ds.mean():.10g}, sample std = {ds.std():.10g}")
    _write_rows(out_dir, "aggregate_results", ["kind", "x", "value"], rows, fmt)

    # plot data: cdf over a grid
    if method == "mc":
        grid = np.quantile(ds.mc_sample, np.linspace(0.005, 0.995, 199))
        cdf_vals = ds.mc_cdf(grid)
    else:
        hi = s_points and max(s_points) or ds_q_hint(ds, n_iter)
        grid = np.linspace(hi / 50.0, hi, 50)
        cdf_vals = np.array([ds.aep_cdf(x, n_iter) for x in grid])
    with open(out_dir / "aggregate_cdf.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "cdf"])
        for x, p in zip(grid, cdf_vals):
            writer.writerow([repr(float(x)), repr(float(p))])
    return 0


def ds_q_hint(ds: DependentSum, n_iter: int) -> float:
    """Fallback plot range: the 90th percentile of the sum."""
    return ds.ppf(0.9, method="aep", n_iter=max(2, n_iter - 2))


def _cmd_reserve(cfg: dict, out_dir: Path, fmt: str, seed, base: Path) -> int:
    tri = build_triangles(_require(cfg, "triangles", "config"), base)
    spec = ReservingSpec(
        reserving_method=cfg.get("reserving_method", "fisher_lange"),
        claims_inflation=np.asarray(cfg.get("claims_inflation", [1.0]), dtype=float),
        tail=bool(cfg.get("tail", False)),
        mixing_fq_par=float(cfg.get("mixing_fq_par", 0.01)),
        mixing_sev_par=float(cfg.get("mixing_sev_par", 0.01)),
        czj=np.asarray(cfg.get("czj", [0.0]), dtype=float),
    )
    rows = []
    if spec.reserving_method == "crm":
        random_state = seed if seed is not None else cfg.get("random_state")
        if random_state is None:
            _fail("config", "crm reserving needs random_state")
        res = crm_reserve(tri, spec, ntr_sim=int(cfg.get("ntr_sim", 1000)), random_state=random_state)
        print(reserve_report(res))
        for i, (m, s) in enumerate(zip(res.by_period_mean, res.by_period_std)):
            rows.append({"period": i, "reserve": float(m), "dispersion": float(s)})
        rows.append({"period": "total", "reserve": res.reserve, "dispersion": res.std})
        for q in cfg.get("quantiles", [0.25, 0.5, 0.75, 0.995]):
            rows.append({"period": f"q{q}", "reserve": float(res.ppf(q)), "dispersion": None})
    else:
        res = fisher_lange(tri, spec)
        print(reserve_report(res))
        for i, r in enumerate(res.reserve_by_period):
            rows.append({"period": i, "reserve": float(r), "dispersion": None})
        rows.append({"period": "total", "reserve": res.reserve, "dispersion": None})
    _write_rows(out_dir, "reserve_results", ["period", "reserve", "dispersion"], rows, fmt)
    return 0


def _cmd_discretize(cfg: dict, out_dir: Path, fmt: str, seed) -> int:
    sev = build_severity(_require(cfg, "severity", "config"))
    method = cfg.get("discr_method", "massdispersal")
    arith = discretize(
        sev,
        method=method,
        m=int(cfg.get("n_discr_nodes", 2**14)),
        h=None if cfg.get("discr_step") is None else float(cfg["discr_step"]),
        deductible=float(cfg.get("deductible", 0.0)),
        cover=math.inf if cfg.get("cover") is None else float(cfg["cover"]),
    )
    for msg in arith.warnings:
        print(f"WARNING|discretize|{msg.split('|', 1)[-1]}")
    mean = arith.mean()
    print(f"Discretised severity: method={arith.method}, nodes={arith.m}, step={arith.h:g}")
    print(f"Mean of the discretised distribution: {mean:.12g}")
    rows = [
        {"quantity": "method", "value": arith.method},
        {"quantity": "nodes", "value": arith.m},
        {"quantity": "step", "value": arith.h},
        {"quantity": "mean", "value": mean},
        {"quantity": "tail_mass", "value": arith.tail_mass},
    ]
    _write_rows(out_dir, "discretize_results", ["quantity", "value"], rows, fmt)
    cdf = arith.cdf_at_nodes()
    with open(out_dir / "severity_cdf.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "cdf"])
        for x, p in zip(arith.nodes, cdf):
            writer.writerow([repr(float(x)), repr(float(p))])
    return 0


def _cmd_validate(cfg: dict, base: Path) -> int:
    task = cfg["task"]
    print(f"config declares task: {task}")
    if task == "cost":
        freq = build_frequency(_require(cfg, "frequency", "config"))
        sev = build_severity(_require(cfg, "severity", "config"))
        policy = build_policy(cfg.get("policy", {"layers": [{}]}))
        engine = build_engine(cfg.get("engine"))
        print(f"frequency: {type(freq.dist).__name__} (pgf available, "
              f"analysis threshold {freq.threshold:g})")
        print(f"severity: {type(sev).__name__}")
        for i, layer in enumerate(policy.layers):
            line = (
                f"layer {i + 1}: cover={layer.cover:g} deductible={layer.deductible:g} "
                f"aggr_cover={layer.effective_aggr_cover:g} "
                f"aggr_deductible={layer.aggr_deductible:g} share={layer.share:g}"
            )
            if layer.cover != math.inf:
                step = layer.cover / (engine.n_sev_discr_nodes - 1)
                line += f" [auto discretisation step {step:g}]"
            print(line)
        print(f"engine: method={engine.aggr_loss_dist_method} "
              f"nodes={engine.n_aggr_dist_nodes} sev_nodes={engine.n_sev_discr_nodes}")
    elif task == "aggregate":
        margins = build_margins(_require(cfg, "margins", "config"))
        copula = build_copula(_require(cfg, "copula", "config"))
        method = cfg.get("method", "aep")
        if copula.dim != len(margins):
            _fail("config", f"copula dimension {copula.dim} != margins {len(margins)}")
        if method == "aep" and not 2 <= copula.dim <= 5:
            _fail("config", f"the aep method supports dimensions 2..5, got {copula.dim}")
        print(f"copula: {type(copula).__name__} (dim {copula.dim})")
        for i, dist in enumerate(margins.dists):
            print(f"margin {i + 1}: {type(dist).__name__}")
        print(f"method: {method}, n_iter={cfg.get('n_iter', 7)}")
    elif task == "reserve":
        tri = build_triangles(_require(cfg, "triangles", "config"), base)
        ReservingSpec(
            reserving_method=cfg.get("reserving_method", "fisher_lange"),
            claims_inflation=np.asarray(cfg.get("claims_inflation", [1.0]), dtype=float),
            tail=bool(cfg.get("tail", False)),
            mixing_fq_par=float(cfg.get("mixing_fq_par", 0.01)),
            mixing_sev_par=float(cfg.get("mixing_sev_par", 0.01)),
            czj=np.asarray(cfg.get("czj", [0.0]), dtype=float),
        )
        print(f"triangles: horizon J={tri.J} "
              f"({tri.J + 1} accident periods, all five triangles aligned)")
        print(f"method: {cfg.get('reserving_method', 'fisher_lange')}")
    elif task == "discretize":
        build_severity(_require(cfg, "severity", "config"))
        method = cfg.get("discr_method", "massdispersal")
        if method not in DISCRETIZATION_METHODS:
            _fail("config.discr_method", f"unknown method '{method}'")
        print(f"severity resolved; method: {method}")
    print("config OK")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="riskkit",
        description="Collective-risk modelling: costing, dependent sums, reserving.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*TASKS, "validate"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", default="table", choices=["csv", "json", "table"])
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    args = parser.parse_args(argv)

    logging.basicConfig(level=os.environ.get("RISKKIT_LOG", "WARNING"))

    try:
        task = None if args.command == "validate" else args.command
        cfg = load_config(args.config, task)
        base = Path(args.config).resolve().parent
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "validate":
            return _cmd_validate(cfg, base)
        if args.command == "cost":
            return _cmd_cost(cfg, out_dir, args.format, args.seed)
        if args.command == "aggregate":
            return _cmd_aggregate(cfg, out_dir, args.format, args.seed)
        if args.command == "reserve":
            return _cmd_reserve(cfg, out_dir, args.format, args.seed, base)
        return _cmd_discretize(cfg, out_dir, args.format, args.seed)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return 2
    except RiskKitError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
