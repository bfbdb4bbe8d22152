"""Command-line surface, configuration, and bit-exact file formats.

Output discipline: every float is printed with 9 significant digits
(``.`` decimal separator), lines end with ``\\n``, and an empty record
list still produces the header line.  Data files are pure functions of
the resolved parameters and master seed, so rerunning a command yields
byte-identical output; wall-clock metadata lives in a ``.manifest.json``
sidecar next to each file, never in the file itself.

Configuration precedence is flags > config file > defaults.  The config
file is plain ``key = value`` text; axis-valued keys accept a scalar
(``0.7``), a comma list (``0.5,0.6,0.7``) or ``start:step:count``
range syntax (``0.5:0.05:11``).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .errors import InvalidArgumentError
from .estimators import classify_exponent, estimate_scaling, estimate_speed, rescaled_density
from .oracles import averaged_speed, classify_regime, kks_exponent, reliable_steps, static_speed
from .params import BOUNDARY_MODES, ENV_KINDS, ModelParams
from .simulator import run, run_replica_fast
from .sweep import (
    MIN_SLICE_M,
    AxisRange,
    GridSpec,
    ScalingCell,
    SpeedCell,
    _cell_reliability,
    cell_key,
    collect_slices,
    g9,
    run_scaling_sweep,
    run_speed_sweep,
    speed_curve_diagram,
)

SPEED_HEADER = "env,p,rho,gamma,n,M,v_n,stderr,aborts,seed"
SCALING_HEADER = "env,p,rho,gamma,N,n,M,SD_n,alpha_n,alpha_star,symbol,seed,log2_nbar"
HIST_HEADER = "env,p,rho,gamma,N,alpha,bin_left,bin_right,mass"
LABELS_HEADER = "env,rho,gamma,label,seed"
TRAJECTORY_HEADER = "jump,time,position"
ENDPOINTS_HEADER = "replica,endpoint,duration"


# ------------------------------------------------------------- file writing

def _write_lines(path, header: str, rows: Sequence[str]) -> int:
    text = "\n".join([header, *rows]) + "\n"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return len(rows)


def _print_lines(header: str, rows: Sequence[str]) -> None:
    sys.stdout.write("\n".join([header, *rows]) + "\n")


def _read_rows(path, header: str) -> List[str]:
    """Rows of an existing output file, or [] when absent.

    A present file whose header differs from the pinned schema is a
    corrupt or foreign file; refuse to merge into it.
    """
    p = Path(path)
    if not p.exists():
        return []
    lines = p.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != header:
        raise OSError(f"{path}: header does not match {header!r}")
    ncol = header.count(",") + 1
    for k, line in enumerate(lines[1:], 2):
        if line.count(",") + 1 != ncol:
            raise OSError(f"{path}:{k}: expected {ncol} columns")
    return lines[1:]


def _speed_row(cell: SpeedCell) -> str:
    q, e = cell.params, cell.estimate
    return ",".join([q.env, g9(q.p), g9(q.rho), g9(q.gamma), str(cell.n),
                     str(e.M), g9(e.v_n), g9(e.stderr), str(cell.aborts),
                     str(cell.seed)])


def _scaling_rows(params: ModelParams, est, symbol: str, seed: int,
                  log2_nbar: Optional[float]) -> List[str]:
    nbar = "" if log2_nbar is None else g9(log2_nbar)
    rows = []
    for s in est.slices:
        rows.append(",".join([params.env, g9(params.p), g9(params.rho),
                              g9(params.gamma), str(s.N), str(s.n), str(s.M),
                              g9(s.sd), g9(s.alpha), g9(est.alpha_star),
                              symbol, str(seed), nbar]))
    return rows


def _hist_rows(params: ModelParams, N: int, hist) -> List[str]:
    rows = []
    for i in range(hist.mass.size):
        rows.append(",".join([params.env, g9(params.p), g9(params.rho),
                              g9(params.gamma), str(N), g9(hist.alpha),
                              g9(hist.edges[i]), g9(hist.edges[i + 1]),
                              g9(hist.mass[i])]))
    return rows


def write_speed_csv(cells: Sequence[SpeedCell], path) -> int:
    """Speed rows, one per cell; cells without an estimate are skipped."""
    return _write_lines(path, SPEED_HEADER,
                        [_speed_row(c) for c in cells if c.estimate is not None])


def write_scaling_csv(cells: Sequence[ScalingCell], path) -> int:
    """Scaling rows, one per usable slice of each estimable cell."""
    rows: List[str] = []
    for c in cells:
        if c.estimate is not None and c.phase is not None:
            rows.extend(_scaling_rows(c.params, c.estimate, c.phase.symbol,
                                      c.seed, c.log2_nbar))
    return _write_lines(path, SCALING_HEADER, rows)


def write_hist_csv(records: Sequence[Tuple[ModelParams, int, object]], path) -> int:
    """Histogram rows from (params, N, RescaledHistogram) records."""
    rows: List[str] = []
    for params, N, hist in records:
        rows.extend(_hist_rows(params, N, hist))
    return _write_lines(path, HIST_HEADER, rows)


def _manifest(out_path, command: str, resolved: Dict, seed: int,
              started: str, aborts: Dict[str, int], outputs: List[Tuple[str, int]]) -> None:
    doc = {
        "tool": f"rwre {__version__}",
        "command": command,
        "parameters": resolved,
        "master_seed": seed,
        "started": started,
        "finished": _now(),
        "aborts": aborts,
        "outputs": [{"path": str(p), "rows": k} for p, k in outputs],
    }
    with open(f"{out_path}.manifest.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ------------------------------------------------- configuration resolution

def parse_axis(text: str):
    """Axis syntax: scalar, comma list, or start:step:count range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidArgumentError(f"range syntax is start:step:count, got {text!r}")
        try:
            return AxisRange(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise InvalidArgumentError(f"bad axis range {text!r}: {exc}") from exc
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise InvalidArgumentError(f"bad axis value {text!r}: {exc}") from exc


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in str(text).split(","))
    except ValueError as exc:
        raise InvalidArgumentError(f"bad integer list {text!r}: {exc}") from exc


def _to_int(text) -> int:
    try:
        return int(text)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"bad integer {text!r}") from exc


def _to_float(text) -> float:
    try:
        return float(text)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"bad number {text!r}") from exc


def _to_env(text) -> str:
    if text not in ENV_KINDS:
        raise InvalidArgumentError(f"--env must be one of {ENV_KINDS}, got {text!r}")
    return text


def _to_boundary(text) -> str:
    if text not in BOUNDARY_MODES:
        raise InvalidArgumentError(f"--boundary must be one of {BOUNDARY_MODES}, got {text!r}")
    return text


#: converter per configuration key; keys double as config-file vocabulary
_CONVERTERS: Dict[str, Callable] = {
    "env": _to_env,
    "p": parse_axis,
    "rho": parse_axis,
    "gamma": parse_axis,
    "n_log2": _to_int,
    "n_list": _int_list,
    "samples": _to_int,
    "seed": _to_int,
    "boundary": _to_boundary,
    "threads": _to_int,
    "budget_seconds": _to_float,
    "out": str,
    "hist_out": str,
    "curves_out": str,
}


def read_config(path) -> Dict[str, str]:
    """key = value lines; blank lines and #-comment lines are skipped."""
    cfg: Dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        cfg[key.strip()] = value.strip()
    return cfg


def _resolve(args, defaults: Dict) -> Dict:
    """Merge flag, config-file and default values for the given keys."""
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}
    unknown = sorted(set(file_cfg) - set(_CONVERTERS))
    if unknown:
        raise InvalidArgumentError(f"unknown config keys: {', '.join(unknown)}")
    out = {}
    for key, default in defaults.items():
        conv = _CONVERTERS[key]
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = conv(flag)
        elif key in file_cfg:
            out[key] = conv(file_cfg[key])
        else:
            out[key] = default
    return out


def _axis_list(axis) -> Tuple[float, ...]:
    return axis.values() if isinstance(axis, AxisRange) else tuple(axis)


def _single(cfg: Dict, key: str) -> float:
    vals = _axis_list(cfg[key])
    if len(vals) != 1:
        raise InvalidArgumentError(f"--{key} must be a single value here, got {len(vals)}")
    return vals[0]


def _point(cfg: Dict) -> ModelParams:
    return ModelParams(p=_single(cfg, "p"), rho=_single(cfg, "rho"),
                       gamma=_single(cfg, "gamma"), env=cfg["env"],
                       boundary=cfg["boundary"])


def _public(cfg: Dict) -> Dict:
    """Manifest-ready view of a resolved configuration."""
    out = {}
    for key, value in cfg.items():
        if isinstance(value, AxisRange):
            out[key] = list(value.values())
        elif isinstance(value, tuple):
            out[key] = list(value)
        else:
            out[key] = value
    return out


# ---------------------------------------------------------------- commands

def _cmd_oracle(args) -> int:
    cfg = _resolve(args, {"p": None, "rho": None})
    if cfg["p"] is None or cfg["rho"] is None:
        raise InvalidArgumentError("oracle needs --p and --rho")
    p, rho = _single(cfg, "p"), _single(cfg, "rho")
    values: Dict[str, object] = {
        "static_speed": float(g9(static_speed(p, rho))),
        "averaged_speed": float(g9(averaged_speed(p, rho))),
    }
    try:
        values["s"] = float(g9(kks_exponent(p, rho)))
    except InvalidArgumentError:
        pass  # undefined on the p = 1/2 line and at rho in {0, 1}
    values["regime"] = classify_regime(p, rho).label.value
    for key, value in values.items():
        print(f"{key}={g9(value) if isinstance(value, float) else value}")
    print(json.dumps(values))
    return 0


def _cmd_reliable_n(args) -> int:
    cfg = _resolve(args, {"p": None, "rho": None, "gamma": None})
    for key in ("p", "rho", "gamma"):
        if cfg[key] is None:
            raise InvalidArgumentError(f"reliable-n needs --{key}")
    rs = reliable_steps(_single(cfg, "p"), _single(cfg, "rho"), _single(cfg, "gamma"))
    l_star = "saturated" if rs.l_star is None else rs.l_star
    nbar = float("nan") if rs.log2_nbar is None else rs.log2_nbar
    print(f"L_star={l_star} log2_nbar≈{nbar:.1f}")
    return 0


_POINT_DEFAULTS = dict(env="static", p=None, rho=None, gamma=(0.0,),
                       seed=0, boundary="torus", threads=1,
                       budget_seconds=600.0, out=None)


def _require_point(cfg: Dict) -> ModelParams:
    if cfg["p"] is None or cfg["rho"] is None:
        raise InvalidArgumentError("this command needs --p and --rho")
    return _point(cfg)


def _cmd_speed(args) -> int:
    cfg = _resolve(args, {**_POINT_DEFAULTS, "n_log2": 16, "samples": 2000})
    params = _require_point(cfg)
    started = _now()
    grid = GridSpec(p=(params.p,), rho=(params.rho,), gamma=(params.gamma,),
                    env_kind=params.env, n=1 << cfg["n_log2"], M=cfg["samples"],
                    master_seed=cfg["seed"], boundary=params.boundary,
                    budget_seconds=cfg["budget_seconds"])
    cell = run_speed_sweep(grid, threads=cfg["threads"])[0]
    rows = [_speed_row(cell)] if cell.estimate is not None else []
    if cfg["out"] is None:
        _print_lines(SPEED_HEADER, rows)
    else:
        count = _write_lines(cfg["out"], SPEED_HEADER, rows)
        _manifest(cfg["out"], "speed", _public(cfg), cfg["seed"], started,
                  {",".join(cell_key(params, grid.n, cfg["seed"])): cell.aborts},
                  [(cfg["out"], count)])
    return 3 if cell.failed else 0


def _cmd_scaling(args) -> int:
    cfg = _resolve(args, {**_POINT_DEFAULTS, "n_list": (10, 12, 14, 16),
                          "samples": 1000, "hist_out": None})
    params = _require_point(cfg)
    if len(cfg["n_list"]) < 3:
        raise InvalidArgumentError(f"scaling needs >= 3 slices, got {len(cfg['n_list'])}")
    started = _now()
    chunks, done, aborted = collect_slices(params, cfg["n_list"], cfg["samples"],
                                           cfg["seed"], cfg["budget_seconds"])
    usable = [c for c, d in zip(chunks, done) if d >= MIN_SLICE_M]
    aborts = len(cfg["n_list"]) * cfg["samples"] - sum(done)
    if len(usable) < 3:
        print(f"error: only {len(usable)} usable slices after "
              f"{aborts} aborted replicas", file=sys.stderr)
        return 3
    est = estimate_scaling(usable)
    symbol = classify_exponent(est.alpha_star)
    rows = _scaling_rows(params, est, symbol, cfg["seed"], _cell_reliability(params))
    outputs = []
    if cfg["out"] is None:
        _print_lines(SCALING_HEADER, rows)
    else:
        outputs.append((cfg["out"], _write_lines(cfg["out"], SCALING_HEADER, rows)))
    if cfg["hist_out"] is not None:
        records = []
        for batch in usable:
            merged = estimate_speed(batch)
            hist = rescaled_density(batch, merged.v_n, est.alpha_star)
            records.append((params, merged.n.bit_length() - 1, hist))
        outputs.append((cfg["hist_out"], write_hist_csv(records, cfg["hist_out"])))
    if cfg["out"] is not None:
        _manifest(cfg["out"], "scaling", _public(cfg), cfg["seed"], started,
                  {",".join(cell_key(params, None, cfg["seed"])): aborts}, outputs)
    return 3 if aborted else 0


def _cmd_simulate(args) -> int:
    cfg = _resolve(args, {**_POINT_DEFAULTS, "n_log2": 10, "samples": 1})
    params = _require_point(cfg)
    started = _now()
    n = 1 << cfg["n_log2"]
    if args.endpoints:
        sample = run(params, n, cfg["samples"], seed=cfg["seed"])
        rows = []
        for j in range(cfg["samples"]):
            dur = "" if sample.durations is None else g9(sample.durations[j])
            rows.append(f"{j},{sample.endpoints[j]},{dur}")
        header = ENDPOINTS_HEADER
    else:
        rec = run_replica_fast(params, n, seed=cfg["seed"], stream_index=0)
        rows = [f"{j},{g9(rec.times[j])},{rec.positions[j]}"
                for j in range(n + 1)]
        header = TRAJECTORY_HEADER
    if cfg["out"] is None:
        _print_lines(header, rows)
    else:
        count = _write_lines(cfg["out"], header, rows)
        _manifest(cfg["out"], "simulate", _public(cfg), cfg["seed"], started,
                  {}, [(cfg["out"], count)])
    return 0


_GRID_DEFAULTS = dict(env="static", p=None, rho=None, gamma=(0.0,),
                      seed=0, boundary="torus", threads=1,
                      budget_seconds=600.0, out=None)


def _grid_from(cfg: Dict, *, n: Optional[int] = None,
               N_list: Optional[Tuple[int, ...]] = None) -> GridSpec:
    if cfg["p"] is None or cfg["rho"] is None:
        raise InvalidArgumentError("sweeps need --p and --rho axes")
    if cfg["out"] is None:
        raise InvalidArgumentError("sweeps need --out (their resume state lives there)")
    return GridSpec(p=cfg["p"], rho=cfg["rho"], gamma=cfg["gamma"],
                    env_kind=cfg["env"], n=n, N_list=N_list, M=cfg["samples"],
                    master_seed=cfg["seed"], boundary=cfg["boundary"],
                    budget_seconds=cfg["budget_seconds"])


def _cmd_sweep_speed(args) -> int:
    cfg = _resolve(args, {**_GRID_DEFAULTS, "n_log2": 16, "samples": 2000})
    started = _now()
    grid = _grid_from(cfg, n=1 << cfg["n_log2"])
    old: Dict[Tuple[str, ...], str] = {}
    for row in _read_rows(cfg["out"], SPEED_HEADER):
        f = row.split(",")
        if f[8] == "0":  # only cleanly completed cells survive a resume
            old.setdefault((f[0], f[1], f[2], f[3], f[4], f[9]), row)
    cells = run_speed_sweep(grid, threads=cfg["threads"], skip=frozenset(old))
    rows, aborts, failed = [], {}, 0
    for i, pt in enumerate(grid.points()):
        key = cell_key(pt, grid.n, grid.master_seed)
        if key in old:
            rows.append(old[key])
            continue
        cell = cells[i]
        if cell.estimate is not None:
            rows.append(_speed_row(cell))
        if cell.aborts:
            aborts[",".join(key)] = cell.aborts
        failed += cell.failed
    count = _write_lines(cfg["out"], SPEED_HEADER, rows)
    _manifest(cfg["out"], "sweep-speed", _public(cfg), grid.master_seed,
              started, aborts, [(cfg["out"], count)])
    return 3 if failed else 0


def _cmd_sweep_scaling(args) -> int:
    cfg = _resolve(args, {**_GRID_DEFAULTS, "n_list": (10, 12, 14, 16),
                          "samples": 1000})
    if len(cfg["n_list"]) < 3:
        raise InvalidArgumentError(f"sweeps need >= 3 slices, got {len(cfg['n_list'])}")
    started = _now()
    grid = _grid_from(cfg, N_list=cfg["n_list"])
    old_rows: Dict[Tuple[str, ...], List[str]] = {}
    for row in _read_rows(cfg["out"], SCALING_HEADER):
        f = row.split(",")
        old_rows.setdefault((f[0], f[1], f[2], f[3], f[11]), []).append(row)
    old: Dict[Tuple[str, ...], List[str]] = {}
    want_N = {str(N) for N in grid.N_list}
    for key, rows_ in old_rows.items():
        have = {r.split(",")[4] for r in rows_ if r.split(",")[6] == str(grid.M)}
        if want_N <= have:
            old[key[:4] + ("", key[4])] = rows_
    cells = run_scaling_sweep(grid, threads=cfg["threads"], skip=frozenset(old))
    rows, aborts, failed = [], {}, 0
    for i, pt in enumerate(grid.points()):
        key = cell_key(pt, None, grid.master_seed)
        if key in old:
            rows.extend(old[key])
            continue
        cell = cells[i]
        if cell.estimate is not None and cell.phase is not None:
            rows.extend(_scaling_rows(cell.params, cell.estimate,
                                      cell.phase.symbol, cell.seed,
                                      cell.log2_nbar))
        if cell.aborts:
            aborts[",".join(key)] = cell.aborts
        failed += cell.failed
    count = _write_lines(cfg["out"], SCALING_HEADER, rows)
    _manifest(cfg["out"], "sweep-scaling", _public(cfg), grid.master_seed,
              started, aborts, [(cfg["out"], count)])
    return 3 if failed else 0


def _cmd_curve_diagram(args) -> int:
    cfg = _resolve(args, {**_GRID_DEFAULTS, "n_log2": 14, "samples": 400,
                          "curves_out": None})
    started = _now()
    grid = _grid_from(cfg, n=1 << cfg["n_log2"])
    diagram = speed_curve_diagram(grid, threads=cfg["threads"])
    rows = [",".join([grid.env_kind, g9(c.rho), g9(c.gamma), c.label,
                      str(grid.master_seed)])
            for c in diagram if not c.failed]
    count = _write_lines(cfg["out"], LABELS_HEADER, rows)
    outputs = [(cfg["out"], count)]
    if cfg["curves_out"] is not None:
        curve_rows = []
        for ip in range(len(grid.p)):
            for cell in diagram:
                curve_rows.append(_speed_row(cell.cells[ip]))
        outputs.append((cfg["curves_out"],
                        _write_lines(cfg["curves_out"], SPEED_HEADER, curve_rows)))
    aborts = {",".join(cell_key(c.params, grid.n, grid.master_seed)): c.aborts
              for d in diagram for c in d.cells if c.aborts}
    _manifest(cfg["out"], "curve-diagram", _public(cfg), grid.master_seed,
              started, aborts, outputs)
    return 3 if any(d.failed for d in diagram) else 0


# ------------------------------------------------------------------ parser

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rwre",
        description="Monte Carlo laboratory for random walks in random environments")
    ap.add_argument("--version", action="version", version=f"rwre {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(sp, *keys):
        flags = {
            "env": dict(help="environment kind: static, isf or sse"),
            "p": dict(help="jump bias; axis syntax allowed in sweeps"),
            "rho": dict(help="site density; axis syntax allowed in sweeps"),
            "gamma": dict(help="environment rate; axis syntax allowed in sweeps"),
            "n_log2": dict(help="log2 of the jump count"),
            "n_list": dict(help="comma list of log2 jump counts (slices)"),
            "samples": dict(help="replicas per cell (per slice for scaling)"),
            "seed": dict(help="master seed"),
            "boundary": dict(help="exclusion boundary: torus or resample"),
            "threads": dict(help="worker threads over cells"),
            "budget_seconds": dict(help="wall-clock budget per cell"),
            "out": dict(help="output file (stdout for point commands if omitted)"),
            "config": dict(help="key = value file; flags override it"),
            "hist_out": dict(help="also write rescaled histograms here"),
            "curves_out": dict(help="also write the underlying speed curves here"),
        }
        for key in keys:
            sp.add_argument("--" + key.replace("_", "-"), **flags[key])

    sp = sub.add_parser("simulate", help="dump one trajectory or raw endpoints")
    add(sp, "env", "p", "rho", "gamma", "n_log2", "samples", "seed",
        "boundary", "out", "config")
    sp.add_argument("--endpoints", action="store_true",
                    help="dump endpoint rows instead of one trajectory")

    sp = sub.add_parser("speed", help="speed estimate at one parameter point")
    add(sp, "env", "p", "rho", "gamma", "n_log2", "samples", "seed",
        "boundary", "threads", "budget_seconds", "out", "config")

    sp = sub.add_parser("scaling", help="scaling exponent at one parameter point")
    add(sp, "env", "p", "rho", "gamma", "n_list", "samples", "seed",
        "boundary", "threads", "budget_seconds", "out", "hist_out", "config")

    sp = sub.add_parser("sweep-speed", help="speed estimates over a parameter grid")
    add(sp, "env", "p", "rho", "gamma", "n_log2", "samples", "seed",
        "boundary", "threads", "budget_seconds", "out", "config")

    sp = sub.add_parser("sweep-scaling", help="scaling exponents over a parameter grid")
    add(sp, "env", "p", "rho", "gamma", "n_list", "samples", "seed",
        "boundary", "threads", "budget_seconds", "out", "config")

    sp = sub.add_parser("curve-diagram", help="m/c/+ map of p -> v curve shapes")
    add(sp, "env", "p", "rho", "gamma", "n_log2", "samples", "seed",
        "boundary", "threads", "budget_seconds", "out", "curves_out", "config")

    sp = sub.add_parser("oracle", help="closed-form speeds and exponent at a point")
    add(sp, "p", "rho", "config")

    sp = sub.add_parser("reliable-n", help="environment-reliability horizon")
    add(sp, "p", "rho", "gamma", "config")

    return ap


_COMMANDS = {
    "simulate": _cmd_simulate,
    "speed": _cmd_speed,
    "scaling": _cmd_scaling,
    "sweep-speed": _cmd_sweep_speed,
    "sweep-scaling": _cmd_sweep_scaling,
    "curve-diagram": _cmd_curve_diagram,
    "oracle": _cmd_oracle,
    "reliable-n": _cmd_reliable_n,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage / message
        return 0 if exc.code in (0, None) else 2
    try:
        return _COMMANDS[args.command](args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
