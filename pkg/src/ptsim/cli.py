"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dilation import (
    apply_postselected,
    channel_equivalence_error,
    dilate,
    phi_plus_success_probability,
)
from .errors import PTSimError
from .hamiltonian import build_hamiltonian, pt_map, specific_time
from .randamp import ProtocolConfig, SourceKind, SourceModel, simulate, _stats
from .signaling import (
    BobMeasurement,
    GapReport,
    brute_gap,
    distinguishability,
    gap_sigma_y,
    perturbation_distance,
    werner_bob_perturbation_formula,
)
from .states import parse_state, werner_like
from .verify import run_verification

COMMANDS = ("verify", "sweep", "randamp", "dilation-check", "dim-scan")
QUANTITIES = ("gap", "distinguishability", "bob_perturbation", "full_perturbation")
CSV_COLUMNS = ("family", "dim", "alpha", "p", "t", "quantity", "brute", "closed_form", "abs_err")

DEFAULTS = {
    "verify": {"seed": 2021, "n_random": 1000},
    "sweep": {"state": "werner", "p": "0:1:0.1", "alpha": "0.1:1.4:0.1", "quantity": "gap"},
    "dim-scan": {"p": "0:1:0.1", "alpha": "0.45pi", "dims": "2,3", "scope": "BobReduced"},
    "randamp": {"state": "phi-plus", "alpha": "0.5pi", "rounds": 100000, "epsilon": 0.0},
    "dilation-check": {"state": "phi-plus", "alpha": "0:0.5pi:0.05pi", "samples": 100000, "seed": 7},
}

# key -> (parser, allowed commands); None means every command
KEYS = {
    "state": ("str", None),
    "alpha": ("grid", None),
    "p": ("grid", None),
    "t": ("float", None),
    "dim": ("int", None),
    "dims": ("intlist", ("dim-scan",)),
    "quantity": ("str", ("sweep",)),
    "scope": ("str", ("dim-scan", "sweep")),
    "bob_z": ("float", ("sweep",)),
    "bob_u": ("float", ("sweep",)),
    "rounds": ("int", ("randamp",)),
    "epsilon": ("float", ("randamp",)),
    "source": ("str", ("randamp",)),
    "seed": ("int", None),
    "samples": ("int", ("dilation-check",)),
    "n_random": ("int", ("verify",)),
    "out": ("str", None),
    "format": ("str", None),
    "log": ("str", ("randamp",)),
}


class UsageError(Exception):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


@dataclass
class RunConfig:
    command: str
    state: str | None = None
    alpha: tuple = ()
    p: tuple = ()
    t: float | None = None
    dim: int = 2
    dims: tuple = (2, 3)
    quantity: str = "gap"
    scope: str = "BobReduced"
    bob_z: float = math.pi / 2
    bob_u: float = math.pi / 2
    rounds: int = 100000
    epsilon: float = 0.0
    source: str | None = None
    seed: int | None = None
    samples: int = 100000
    n_random: int = 1000
    out: str | None = None
    format: str = "csv"
    log: str | None = None
    echo: dict = field(default_factory=dict)


# -- value parsing ----------------------------------------------------------

_NUM = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*(pi)?\s*$")


def parse_number(text):
    """A float, optionally with a ``pi`` suffix: ``0.45pi``, ``pi``, ``-1e-3``."""
    m = _NUM.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"not a number: {text!r}")
    x = float(m.group(1)) if m.group(1) is not None else 1.0
    return x * math.pi if m.group(2) else x


def _tidy(x):
    # drop accumulation noise such as 0.30000000000000004 without touching pi multiples
    r = round(x, 12)
    return r if abs(r - x) <= 4 * np.finfo(float).eps * max(1.0, abs(x)) else x


def parse_grid(text):
    """``start:stop:step`` (stop included within half a step), a comma list, or one number."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid needs start:stop:step, got {text!r}")
        start, stop, step = (parse_number(x) for x in parts)
        if not step > 0:
            raise ValueError("grid step must be positive")
        k_max = math.floor((stop - start) / step + 0.5)
        if k_max < 0:
            raise ValueError(f"grid {text!r} is empty")
        vals = [_tidy(start + k * step) for k in range(k_max + 1)]
        if abs(vals[-1] - stop) <= 1e-9 * step:
            vals[-1] = stop
        return tuple(vals)
    vals = tuple(parse_number(x) for x in text.split(",") if x.strip())
    if not vals:
        raise ValueError("empty grid")
    return vals


def _convert(key, kind, raw):
    try:
        if kind == "str":
            return str(raw)
        if kind == "int":
            return int(raw) if isinstance(raw, int) else int(str(raw), 0)
        if kind == "float":
            return float(raw) if isinstance(raw, (int, float)) else parse_number(raw)
        if kind == "grid":
            if isinstance(raw, (list, tuple)):
                out = []
                for r in raw:
                    out.extend(parse_grid(str(r)))
                return tuple(out)
            return parse_grid(str(raw))
        if kind == "intlist":
            return tuple(int(x) for x in str(raw).split(",") if x.strip())
    except ValueError as exc:
        raise UsageError(key, str(exc)) from None
    raise AssertionError(kind)


def parse_config_text(text):
    """Flat ``key = value`` lines; ``#`` starts a comment; repeating a key builds a list."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(None, f"config line {lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key in values:
            prev = values[key]
            values[key] = (prev if isinstance(prev, list) else [prev]) + [value]
        else:
            values[key] = value
    return values


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ptsim", description="PT-symmetric signaling and randomness-amplification harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", help="flat key=value config file")
        for key, (_, cmds) in KEYS.items():
            if cmds is None or cmd in cmds:
                sp.add_argument("--" + key.replace("_", "-"), dest=key, default=None)
    return parser


def parse_config(argv, file_text=None):
    """Merge defaults < config file < flags into a :class:`RunConfig`."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        raise UsageError(None, "invalid command line") from exc
    cmd = ns.command
    merged = dict(DEFAULTS.get(cmd, {}))
    if ns.config is not None and file_text is None:
        try:
            with open(ns.config) as fh:
                file_text = fh.read()
        except OSError as exc:
            raise UsageError("config", f"cannot read {ns.config}: {exc}") from None
    if file_text:
        for key, value in parse_config_text(file_text).items():
            if key not in KEYS:
                raise UsageError(key, "unknown key")
            allowed = KEYS[key][1]
            if allowed is not None and cmd not in allowed:
                raise UsageError(key, f"not valid for '{cmd}'")
            merged[key] = value
    for key in KEYS:
        flag = getattr(ns, key, None)
        if flag is not None:
            merged[key] = flag

    cfg = RunConfig(command=cmd)
    for key, raw in merged.items():
        setattr(cfg, key, _convert(key, KEYS[key][0], raw))
    _validate(cfg)
    keys = sorted(set(merged) | ({"seed"} if cfg.seed is not None else set()))
    cfg.echo = {k: _echo(getattr(cfg, k)) for k in keys}
    return cfg


def _echo(v):
    return list(v) if isinstance(v, tuple) else v


def _validate(cfg):
    if cfg.command == "randamp":
        if cfg.seed is None:
            env = os.environ.get("PTSIM_SEED")
            if env is None:
                raise UsageError("seed", "randamp needs --seed (or PTSIM_SEED)")
            cfg.seed = _convert("seed", "int", env)
        if cfg.rounds < 1:
            raise UsageError("rounds", "must be >= 1")
        if not 0.0 <= cfg.epsilon <= 0.5:
            raise UsageError("epsilon", "must lie in [0, 1/2]")
        if cfg.source is None:
            cfg.source = "iid" if cfg.epsilon > 0 else "fair"
        if cfg.source not in {k.value for k in SourceKind}:
            raise UsageError("source", f"expected fair, iid or markov, got {cfg.source!r}")
        if len(cfg.alpha) != 1:
            raise UsageError("alpha", "randamp takes a single alpha")
    if cfg.command in ("sweep", "dim-scan", "dilation-check", "randamp") and not cfg.alpha:
        raise UsageError("alpha", "grid is empty")
    if cfg.quantity not in QUANTITIES:
        raise UsageError("quantity", f"expected one of {QUANTITIES}")
    if cfg.scope not in ("Full", "BobReduced"):
        raise UsageError("scope", "expected Full or BobReduced")
    if cfg.format not in ("csv", "json"):
        raise UsageError("format", "expected csv or json")
    if cfg.dim not in (2, 3) or any(d not in (2, 3) for d in cfg.dims):
        raise UsageError("dim", "dimensions 2 and 3 are supported")


# -- output -----------------------------------------------------------------


def _num(x):
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def _json_safe(x):
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps_json(obj):
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n"


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow([row[c] if c in ("family", "quantity") else _num(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


# -- commands ---------------------------------------------------------------


def _specific_t(dim, alpha):
    try:
        return specific_time(build_hamiltonian(dim, alpha)).t
    except PTSimError:
        return None


def _row(family, dim, alpha, p, t, quantity, rep):
    return {
        "family": family,
        "dim": dim,
        "alpha": alpha,
        "p": p,
        "t": t,
        "quantity": quantity,
        "brute": rep.brute,
        "closed_form": rep.closed_form,
        "abs_err": rep.abs_err,
    }


def sweep_rows(cfg):
    """Rows in grid-major order: p outer, alpha inner."""
    family = cfg.state.split(":")[0].lower()
    takes_p = family in ("werner", "werner-like") and ":" not in cfg.state
    ps = cfg.p if takes_p else (None,)
    bob = BobMeasurement(cfg.bob_z, cfg.bob_u)
    default_bob = cfg.bob_z == math.pi / 2 and cfg.bob_u == math.pi / 2
    rows = []
    for p in ps:
        rho = parse_state(cfg.state, p=p, dim=cfg.dim)
        d = int(round(math.sqrt(rho.dim)))
        for a in cfg.alpha:
            t_used = cfg.t if cfg.t is not None else _specific_t(d, a)
            q = cfg.quantity
            if q == "gap":
                if cfg.t is None and default_bob:
                    rep = gap_sigma_y(rho, a)
                else:
                    rep = GapReport("gap", {}, brute_gap(rho, a, bob, cfg.t))
            elif q == "distinguishability":
                rep = distinguishability(rho, a, cfg.t)
            else:
                scope = "Full" if q == "full_perturbation" else "BobReduced"
                brute = perturbation_distance(rho, a, cfg.t, scope)
                closed = None
                if scope == "BobReduced" and cfg.t is None and rho.origin and rho.origin[0] == "werner":
                    closed = werner_bob_perturbation_formula(rho.origin[1]["p"], a)
                rep = GapReport(q, {}, brute, closed)
            rows.append(_row(family, d, a, p, t_used, q, rep))
    return rows


def dim_scan_rows(cfg):
    quantity = "bob_perturbation" if cfg.scope == "BobReduced" else "full_perturbation"
    rows = []
    for d in cfg.dims:
        for a in cfg.alpha:
            t_used = cfg.t if cfg.t is not None else _specific_t(d, a)
            for p in cfg.p:
                rho = werner_like(d, p)
                brute = perturbation_distance(rho, a, cfg.t, cfg.scope)
                closed = None
                if d == 2 and cfg.scope == "BobReduced" and cfg.t is None:
                    closed = werner_bob_perturbation_formula(p, a)
                rows.append(
                    _row("werner-like", d, a, p, t_used, quantity, GapReport(quantity, {}, brute, closed))
                )
    return rows


def cmd_sweep(cfg):
    rows = sweep_rows(cfg) if cfg.command == "sweep" else dim_scan_rows(cfg)
    if cfg.format == "json":
        _emit(dumps_json({"columns": list(CSV_COLUMNS), "rows": rows}), cfg.out)
    else:
        _emit(rows_to_csv(rows), cfg.out)
    return 0


def cmd_verify(cfg):
    report = run_verification(seed=cfg.seed, n_random=cfg.n_random)
    _emit(dumps_json(report.to_dict()), cfg.out)
    return 0 if report.passed else 1


def randamp_report(cfg):
    p = cfg.p[0] if cfg.p else None
    rho = parse_state(cfg.state, p=p, dim=2)
    pcfg = ProtocolConfig(
        state=rho,
        alpha=cfg.alpha[0],
        rounds=cfg.rounds,
        source=SourceModel(SourceKind(cfg.source), cfg.epsilon),
        seed=cfg.seed,
        t=cfg.t,
    )
    bits, success, outcome, decode_map = simulate(pcfg)
    stats = _stats(pcfg.rounds, bits, success, outcome, decode_map)
    report = {
        "rounds": stats.rounds,
        "sifted": stats.sifted_length,
        "success_rate": stats.success_rate,
        "agreement_rate": stats.agreement_rate,
        "output_bias": stats.output_bias,
        "min_entropy_per_bit": stats.min_entropy_per_bit,
        "equality_certified": stats.equality_certified,
        "seed": cfg.seed,
        "config_echo": cfg.echo,
    }
    return report, (bits, success, outcome)


def cmd_randamp(cfg):
    report, (bits, success, outcome) = randamp_report(cfg)
    if cfg.log:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("round", "input_bit", "alice_op", "success", "bob_outcome", "kept"))
        for i, (b, s, o) in enumerate(zip(bits.tolist(), success.tolist(), outcome.tolist())):
            w.writerow((i, b, "Identity" if b else "FlipX", s, o if s else "", s))
        _emit(buf.getvalue(), cfg.log)
    _emit(dumps_json(report), cfg.out)
    return 0


def dilation_rows(cfg):
    p = cfg.p[0] if cfg.p else None
    rho = parse_state(cfg.state, p=p, dim=2)
    is_phi_plus = rho.origin is not None and (
        rho.origin[0] == "phi-plus" or (rho.origin[0] == "werner" and rho.origin[1]["p"] == 1.0)
    )
    rows = []
    for k, a in enumerate(cfg.alpha):
        v = pt_map(2, a, cfg.t)
        dil = dilate(v)
        unitarity = float(np.max(np.abs(dil.w.conj().T @ dil.w - np.eye(2 * dil.dim))))
        _, prob = apply_postselected(rho, v)
        u = _kernels.uniforms(cfg.seed, 16 + k, cfg.samples)
        empirical = float(np.mean(u < prob))
        sigma = math.sqrt(prob * (1 - prob) / cfg.samples)
        rows.append(
            {
                "alpha": a,
                "eta": dil.eta,
                "unitarity_err": unitarity,
                "channel_err": channel_equivalence_error(rho, v),
                "success_prob": prob,
                "analytic_success_prob": phi_plus_success_probability(a) if is_phi_plus and cfg.t is None else None,
                "empirical_success_rate": empirical,
                "binomial_sigma": sigma,
                "samples": cfg.samples,
            }
        )
    return rows


def _dilation_ok(row):
    ok = row["unitarity_err"] <= 1e-10 and row["channel_err"] <= 1e-10
    if row["analytic_success_prob"] is not None:
        ok = ok and abs(row["success_prob"] - row["analytic_success_prob"]) <= 1e-9
    sigma = row["binomial_sigma"]
    return ok and abs(row["empirical_success_rate"] - row["success_prob"]) <= max(3 * sigma, 1e-12)


def cmd_dilation_check(cfg):
    rows = dilation_rows(cfg)
    passed = all(_dilation_ok(r) for r in rows)
    if cfg.format == "csv" and cfg.out and cfg.out.endswith(".csv"):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = list(rows[0])
        w.writerow(cols)
        for r in rows:
            w.writerow([_num(r[c]) for c in cols])
        _emit(buf.getvalue(), cfg.out)
    else:
        _emit(dumps_json({"passed": passed, "rows": rows, "config_echo": cfg.echo}), cfg.out)
    return 0 if passed else 1


HANDLERS = {
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "dim-scan": cmd_sweep,
    "randamp": cmd_randamp,
    "dilation-check": cmd_dilation_check,
}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"ptsim: error: {exc}", file=sys.stderr)
        return 2
    try:
        return HANDLERS[cfg.command](cfg)
    except OSError as exc:
        print(f"ptsim: I/O error: {exc}", file=sys.stderr)
        return 3
    except PTSimError as exc:
        print(f"ptsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
