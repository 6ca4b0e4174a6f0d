"""Command-line front end.

Every result is JSON with complex numbers as ``[re, im]`` pairs and an explicit
status.  The resolved configuration is echoed under ``"config"`` so an output file
can be passed back through ``--config`` to reproduce it.

Exit codes: 0 success, 1 invalid configuration, 2 a required value diverged,
3 oracle disagreement in ``verify``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from typing import Any, Optional, Sequence

import numpy as np

from . import fock, su11, trace
from .algebra import (
    Group,
    SU2Irrep,
    SU3Irrep,
    SU11Irrep,
    build_algebra,
    element_from_json,
    irrep_to_dict,
    parse_irrep,
    random_element,
)
from .errors import BosonTraceError, DivergentError
from .numerics import DELTA_BRANCH, DELTA_PD

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGENT, EXIT_DISAGREE = 0, 1, 2, 3
THREADS_ENV = "BOSONTRACE_THREADS"  # applied in the package init before numpy loads

DEFAULTS: dict[str, Any] = {
    "group": None,
    "element": None,
    "irreps": [],
    "t": [],
    "tol": DELTA_PD,
    "branch_tol": DELTA_BRANCH,
    "contour_tol": 1e-10,
    "radius": None,
    "n_max": 200,
    "m_max": 400,
    "k": 0.5,
    "hamiltonian": None,
    "final": None,
    "beta": 1.0,
    "u": [],
    "grid": None,
    "res": [200, 200],
    "quantity": "partition",
    "refine": 1e-6,
    "samples": 20,
    "verify_tol": 1e-6,
    "seed": 0,
    "output": None,
    "summary": None,
    "format": "json",
}


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def cpair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def parse_complex(v) -> complex:
    """``1.5``, ``[re, im]``, ``"re,im"`` or a Python complex literal."""
    if isinstance(v, (int, float, complex)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(a, (int, float)) for a in v):
        return complex(v[0], v[1])
    if isinstance(v, str):
        s = v.strip()
        if s.startswith("["):
            return parse_complex(json.loads(s))
        if "," in s:
            a, b = s.split(",")
            return complex(float(a), float(b))
        return complex(s.replace("i", "j"))
    raise ConfigError(f"cannot read a complex number from {v!r}")


def _parse_t(v, group: Group):
    if group is Group.SU3:
        if isinstance(v, str):
            v = json.loads(v)
        if not (isinstance(v, (list, tuple)) and len(v) == 2):
            raise ConfigError("su3 generating traces need t as a pair [t, t']")
        return tuple(parse_complex(a) for a in v)
    return parse_complex(v)


def _load_json_arg(v):
    if v is None or isinstance(v, dict):
        return v
    if isinstance(v, str) and v.startswith("@"):
        with open(v[1:]) as fh:
            return json.load(fh)
    return json.loads(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bosontrace", description="Traces of exponentiated quadratic boson operators.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="JSON file; its values override flags (an emitted result file also works)")
        sp.add_argument("--group", choices=[g.value for g in Group])
        sp.add_argument("--tol", type=float, help=f"convergence-margin tolerance (default {DELTA_PD:g})")
        sp.add_argument("--seed", type=int, help="RNG seed for randomized sampling (default 0)")
        sp.add_argument("--output", "-o", help="write the result here instead of stdout")
        sp.add_argument("--format", choices=["json", "csv"])

    def elem(sp):
        sp.add_argument("--element", help="generator coefficients as JSON, or @file")

    sp = sub.add_parser("trace", help="closed-form trace over irreducible subspaces")
    common(sp)
    elem(sp)
    sp.add_argument("--irrep", action="append", dest="irreps", help="e.g. 2j=4, p=1,q=2, k=1.5 (repeatable)")

    sp = sub.add_parser("character", help="irrep traces from contour extraction of the generating trace")
    common(sp)
    elem(sp)
    sp.add_argument("--irrep", action="append", dest="irreps")
    sp.add_argument("--radius", type=float, help="contour radius (default: group-dependent)")
    sp.add_argument("--contour-tol", type=float, dest="contour_tol", help="coefficient tolerance (default 1e-10)")

    sp = sub.add_parser("generating", help="generating trace at given t")
    common(sp)
    elem(sp)
    sp.add_argument("--t", action="append", help="t value: 0.5, 're,im', or [t, t'] JSON for su3 (repeatable)")
    sp.add_argument("--branch-tol", type=float, dest="branch_tol", help=f"default {DELTA_BRANCH:g}")

    sp = sub.add_parser("scan-zeros", help="zero/pole scan of Z(beta) or chi(u) in the complex plane (su11)")
    common(sp)
    sp.add_argument("--grid", help="re_min,re_max,im_min,im_max")
    sp.add_argument("--res", help="nodes per axis: N or N,M (default 200)")
    sp.add_argument("--quantity", choices=["partition", "work"])
    sp.add_argument("--k", type=float, help="Bargmann index (default 0.5)")
    sp.add_argument("--hamiltonian", help="(initial) Hamiltonian coefficients, JSON or @file")
    sp.add_argument("--final", help="post-quench Hamiltonian for work scans")
    sp.add_argument("--beta", type=float, help="inverse temperature for work scans (default 1)")
    sp.add_argument("--refine", type=float, help="candidate cell size target (default 1e-6)")
    sp.add_argument("--summary", help="JSON summary path (default: output with .json suffix)")

    sp = sub.add_parser("work-stats", help="work characteristic function and Jarzynski check (su11)")
    common(sp)
    sp.add_argument("--k", type=float)
    sp.add_argument("--hamiltonian")
    sp.add_argument("--final")
    sp.add_argument("--beta", type=float)
    sp.add_argument("--u", action="append", help="time argument, real or 're,im' (repeatable)")

    sp = sub.add_parser("verify", help="closed forms against the Fock-space oracle")
    common(sp)
    sp.add_argument("--samples", type=int, help="random elements (default 20)")
    sp.add_argument("--nmax", type=int, dest="n_max", help="su11 oracle truncation (default 200)")
    sp.add_argument("--mmax", type=int, dest="m_max", help="ladder-sum truncation (default 400)")
    sp.add_argument("--verify-tol", type=float, dest="verify_tol", help="pass threshold (default 1e-6)")
    return p


def resolve_config(ns: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg["command"] = ns.command
    for key, val in vars(ns).items():
        if key in ("config", "command") or val is None:
            continue
        cfg[key] = val
    if ns.config:
        try:
            with open(ns.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if isinstance(data, dict) and isinstance(data.get("config"), dict):
            data = data["config"]
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        if data.get("command", ns.command) != ns.command:
            raise ConfigError(f"config is for {data['command']!r}, not {ns.command!r}")
        unknown = set(data) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    return _normalize(cfg)


def _normalize(cfg: dict) -> dict:
    try:
        for key in ("element", "hamiltonian", "final"):
            cfg[key] = _load_json_arg(cfg[key])
        for key in ("tol", "branch_tol", "contour_tol", "refine", "verify_tol"):
            cfg[key] = float(cfg[key])
            if not cfg[key] > 0:
                raise ConfigError(f"{key} must be positive")
        if isinstance(cfg["res"], str):
            cfg["res"] = [int(v) for v in cfg["res"].split(",")]
        elif isinstance(cfg["res"], int):
            cfg["res"] = [cfg["res"]]
        if len(cfg["res"]) == 1:
            cfg["res"] = cfg["res"] * 2
        if isinstance(cfg["grid"], str):
            cfg["grid"] = [float(v) for v in cfg["grid"].split(",")]
        if cfg["group"] is not None:
            cfg["group"] = Group(cfg["group"]).value
        g = Group(cfg["group"]) if cfg["group"] else None
        if g is not None:
            cfg["irreps"] = [str(parse_irrep(g, s)) for s in cfg["irreps"]]
            cfg["t"] = [_t_to_json(_parse_t(v, g)) for v in cfg["t"]]
        cfg["u"] = [cpair(parse_complex(v)) for v in cfg["u"]]
    except (ValueError, TypeError, json.JSONDecodeError, OSError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def _t_to_json(t):
    return [cpair(v) for v in t] if isinstance(t, tuple) else cpair(t)


def _element(cfg, key="element", group=None):
    data = cfg[key]
    if data is None:
        raise ConfigError(f"--{key} is required")
    group = group or cfg["group"]
    try:
        return element_from_json(data, group)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"bad {key}: {exc}") from exc


def _require_group(cfg) -> Group:
    if cfg["group"] is None:
        raise ConfigError("--group is required")
    return Group(cfg["group"])


def _outcome_json(out: trace.TraceOutcome) -> dict:
    return {
        "value": None if out.value is None else cpair(out.value),
        "status": out.status.value,
        "margin": None if out.margin is None or not math.isfinite(out.margin) else out.margin,
    }


# -- commands ------------------------------------------------------------------------


def cmd_trace(cfg):
    group = _require_group(cfg)
    x = _element(cfg)
    if not cfg["irreps"]:
        raise ConfigError("at least one --irrep is needed")
    results = []
    for s in cfg["irreps"]:
        label = parse_irrep(group, s)
        out = trace.irrep_trace(x, label) if group is not Group.SU11 else trace.irrep_trace_su11(x, label.k, tol=cfg["tol"])
        results.append({"irrep": irrep_to_dict(label), **_outcome_json(out)})
    return {"results": results}


def cmd_character(cfg):
    group = _require_group(cfg)
    x = _element(cfg)
    if not cfg["irreps"]:
        raise ConfigError("at least one --irrep is needed")
    results = []
    for s in cfg["irreps"]:
        label = parse_irrep(group, s)
        if group is Group.SU11 and abs(label.k * 2 - round(label.k * 2)) > 1e-12:
            raise ConfigError("contour extraction needs half-integer k")
        out = trace.extract_irrep_trace(x, label, radius=cfg["radius"], tol=cfg["contour_tol"])
        results.append({"irrep": irrep_to_dict(label), "radius": list(out.t_used or ()), **_outcome_json(out)})
    return {"results": results}


def cmd_generating(cfg):
    group = _require_group(cfg)
    x = _element(cfg)
    if not cfg["t"]:
        raise ConfigError("at least one --t is needed")
    results = []
    for tv in cfg["t"]:
        t = tuple(complex(*v) for v in tv) if group is Group.SU3 else complex(*tv)
        out = trace.generating_trace(x, t, tol=cfg["tol"], branch_tol=cfg["branch_tol"])
        row = {"t": tv, **_outcome_json(out)}
        if out.branch is not None:
            row["branch_steps"] = out.branch.steps
        results.append(row)
    return {"results": results}


def _su11_inputs(cfg):
    if cfg["group"] not in (None, Group.SU11.value):
        raise ConfigError("this command is su11-only")
    cfg["group"] = Group.SU11.value
    return _element(cfg, "hamiltonian", Group.SU11)


def cmd_scan(cfg):
    h = _su11_inputs(cfg)
    if cfg["grid"] is None or len(cfg["grid"]) != 4:
        raise ConfigError("--grid re_min,re_max,im_min,im_max is required")
    try:
        grid = su11.ScanGrid(*cfg["grid"], cfg["res"][0], cfg["res"][1], cfg["quantity"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if grid.quantity == "work":
        hf = _element(cfg, "final", Group.SU11)
        res = su11.scan_zeros(grid, cfg["k"], quench=(h, hf, cfg["beta"]), refine_to=cfg["refine"])
    else:
        res = su11.scan_zeros(grid, cfg["k"], hamiltonian=h, refine_to=cfg["refine"])
    return res


def cmd_work(cfg):
    hi = _su11_inputs(cfg)
    hf = _element(cfg, "final", Group.SU11)
    beta, k = cfg["beta"], cfg["k"]
    results = []
    for u in cfg["u"]:
        out = su11.work_characteristic(k, hi, hf, beta, complex(*u), tol=cfg["tol"])
        results.append({"u": u, **_outcome_json(out)})
    z_i = su11.partition_function(k, hi, beta)
    z_f = su11.partition_function(k, hf, beta)
    return {
        "results": results,
        "z_initial": z_i,
        "z_final": z_f,
        "jarzynski_residual": su11.jarzynski_residual(k, hi, hf, beta),
    }


def cmd_verify(cfg):
    group = _require_group(cfg)
    rng = np.random.default_rng(cfg["seed"])
    spec = build_algebra(group)
    rows = []
    if group is Group.SU2:
        for _ in range(cfg["samples"]):
            x = random_element(spec, rng)
            for two_j in range(0, 9):
                c = trace.irrep_trace_su2(x, two_j)
                o = fock.oracle_irrep_trace(x, SU2Irrep(two_j)).value
                rows.append(("2j=%d" % two_j, abs(c - o) / max(1.0, abs(o))))
    elif group is Group.SU3:
        for _ in range(cfg["samples"]):
            x = random_element(spec, rng, 1.5)
            for p in range(4):
                for q in range(4):
                    c = trace.irrep_trace_su3(x, p, q)
                    o = fock.oracle_irrep_trace(x, SU3Irrep(p, q)).value
                    rows.append((f"p={p},q={q}", abs(c - o) / max(1.0, abs(o))))
    else:
        for _ in range(cfg["samples"]):
            x = su11.random_hyperbolic(rng)
            for two_k in (1, 2, 3, 4):
                label = SU11Irrep(two_k / 2, 1 if two_k > 1 else 0)
                c = trace.irrep_trace_su11(x, label.k)
                o = fock.oracle_irrep_trace(x, label, cfg["n_max"])
                rows.append((str(label), abs(c.value - o.value) if c.status.has_value else math.inf))
            f = su11.gauss_decompose(x)
            for k in (0.37, 1.25):
                lad = fock.su11_ladder_trace(k, f.lp, f.l3, f.lm, cfg["m_max"])
                b = su11.bg_trace(k, x)
                rows.append((f"ladder k={k}", abs(lad.value - b.value) if b.status.has_value else math.inf))
    worst: dict = {}
    for name, dev in rows:
        worst[name] = max(worst.get(name, 0.0), dev)
    max_dev = max(worst.values()) if worst else 0.0
    passed = bool(max_dev < cfg["verify_tol"])
    return {"passed": passed, "max_deviation": max_dev, "checks": len(rows), "by_irrep": worst}


COMMANDS = {
    "trace": cmd_trace,
    "character": cmd_character,
    "generating": cmd_generating,
    "scan-zeros": cmd_scan,
    "work-stats": cmd_work,
    "verify": cmd_verify,
}


def atomic_write(path: str, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(cfg, payload: dict, stdout) -> None:
    text = dumps(payload)
    if cfg["output"]:
        atomic_write(cfg["output"], text)
    else:
        stdout.write(text)


def _exit_code(command: str, payload: dict) -> int:
    if command == "verify":
        return EXIT_OK if payload["passed"] else EXIT_DISAGREE
    for row in payload.get("results", []):
        if row["status"] not in (trace.Status.CONVERGENT.value, trace.Status.MARGINAL.value):
            return EXIT_DIVERGENT
    return EXIT_OK


def run(cfg: dict, stdout=None) -> int:
    """Execute a resolved configuration; returns the process exit code."""
    stdout = stdout or sys.stdout
    command = cfg["command"]
    # destinations are not part of the computation; leaving them out lets an
    # emitted file be replayed with --config without overwriting itself
    echo = {k: v for k, v in cfg.items() if k not in ("output", "summary")}
    if command == "scan-zeros":
        res = cmd_scan(cfg)
        echo["group"] = cfg["group"]
        summary = {"command": command, "config": echo, **res.summary()}
        if cfg["format"] == "csv" or cfg["output"]:
            csv_text = res.to_csv()
            if cfg["output"]:
                atomic_write(cfg["output"], csv_text)
                summary_path = cfg["summary"] or os.path.splitext(cfg["output"])[0] + ".json"
                atomic_write(summary_path, dumps(summary))
            else:
                stdout.write(csv_text)
                if cfg["summary"]:
                    atomic_write(cfg["summary"], dumps(summary))
        else:
            stdout.write(dumps(summary))
        return EXIT_OK
    payload = COMMANDS[command](cfg)
    if cfg["format"] == "csv":
        raise ConfigError("csv output is only available for scan-zeros")
    payload = {"command": command, "config": echo, **payload}
    _emit(cfg, payload, stdout)
    return _exit_code(command, payload)


_VALUE_FLAGS = ("--grid", "--t", "--u", "--beta", "--k", "--radius")


def _glue_negative_values(argv: Sequence[str]) -> list:
    # argparse reads "-1,1,-4,4" as an option; bind such values to their flag
    out, i = [], 0
    argv = list(argv)
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        ns = build_parser().parse_args(_glue_negative_values(argv))
        cfg = resolve_config(ns)
        return run(cfg, stdout)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergentError as exc:
        print(f"divergent: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except BosonTraceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT


def main_entry() -> None:
    sys.exit(main())
