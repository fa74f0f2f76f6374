"""Command-line front end.

Subcommands: thresholds, portrait, scan, rotation.  Settings resolve in
three layers: built-in defaults, then a flat key-value JSON config file
(--config), then explicit command-line flags.  Every run echoes its full
effective config into the output's provenance block, so a run can be
reproduced from its own output.

Exit codes: 0 success (including empty results), 2 config error, 3 domain
error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import __version__
from ._backend import kernel_backend
from .errors import ConfigError, DomainError, NontwistError, NumericalError
from .hamiltonian import equilibria
from .io import (
    provenance_block,
    write_csv,
    write_json,
    write_svg,
)
from .maps import Params, PhasePoint, twistless_circles, extremal_rotation_numbers
from .portrait import (
    PortraitSettings,
    Window,
    chain_topology,
    default_window,
    portrait,
)
from .reconnection import (
    PAIR_I_II,
    PAIR_II_III,
    ThresholdReport,
    regime,
    residual_I_II,
    residual_II_III,
    solve_threshold,
    triple_point,
)

TWO_PI = 2.0 * math.pi

DEFAULTS = {
    "a": 1.5,
    "k": 0.018,
    "b": None,
    "b_range": None,
    "y_range": "-1:2",
    "window": None,
    "res": "512:512",
    "dt": None,
    "steps": None,
    "seeds": None,
    "svg": None,
    "out": ".",
    "triple": False,
    "topology": False,
}

_FLAG_KEYS = tuple(DEFAULTS)


def _parse_range(text, name):
    try:
        lo_s, hi_s = str(text).split(":")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        raise ConfigError(f"--{name}: expected 'lo:hi', got {text!r}") from None
    if not (lo < hi) or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError(f"--{name}: need finite lo < hi, got {text!r}")
    return lo, hi


def _parse_window(text):
    try:
        parts = [float(v) for v in str(text).split(":")]
        if len(parts) != 4:
            raise ValueError
    except ValueError:
        raise ConfigError(f"--window: expected 'x0:x1:y0:y1', got {text!r}") from None
    return parts


def _parse_res(text):
    try:
        nx_s, ny_s = str(text).split(":")
        nx, ny = int(nx_s), int(ny_s)
    except ValueError:
        raise ConfigError(f"--res: expected 'NX:NY', got {text!r}") from None
    if nx < 2 or ny < 2:
        raise ConfigError(f"--res: grid must be at least 2x2, got {text!r}")
    return nx, ny


def _require_number(cfg, key):
    v = cfg.get(key)
    if v is None:
        raise ConfigError(f"--{key.replace('_', '-')}: required for this command")
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"--{key.replace('_', '-')}: expected a number, got {v!r}") from None


def _optional_number(cfg, key):
    v = cfg.get(key)
    if v is None:
        return None
    try:
        return float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"--{key.replace('_', '-')}: expected a number, got {v!r}") from None


def _optional_int(cfg, key):
    v = cfg.get(key)
    if v is None:
        return None
    try:
        iv = int(v)
    except (TypeError, ValueError):
        raise ConfigError(f"--{key.replace('_', '-')}: expected an integer, got {v!r}") from None
    if iv < 1:
        raise ConfigError(f"--{key.replace('_', '-')}: must be >= 1, got {v!r}")
    return iv


def resolve_config(args) -> dict:
    """Layer defaults <- config file <- explicit flags into one flat dict."""
    cfg = dict(DEFAULTS)
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"--config: cannot read {args.config!r}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--config: invalid JSON in {args.config!r}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("--config: expected a flat JSON object")
        for key, value in file_cfg.items():
            norm = key.replace("-", "_")
            if norm not in _FLAG_KEYS:
                raise ConfigError(f"--config: unknown key {key!r}")
            cfg[norm] = value
    for key in _FLAG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _params(cfg) -> Params:
    a = _require_number(cfg, "a")
    k = _require_number(cfg, "k")
    b = _require_number(cfg, "b")
    try:
        return Params(a=a, b=b, k=k)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _window_from(cfg, p: Params) -> Window:
    nx, ny = _parse_res(cfg["res"])
    if cfg["window"] is not None:
        x0, x1, y0, y1 = _parse_window(cfg["window"])
        try:
            return Window(y_min=y0, y_max=y1, x_min=x0, x_max=x1, nx=nx, ny=ny)
        except DomainError as exc:
            raise ConfigError(f"--window: {exc}") from None
    return default_window(p, nx=nx, ny=ny)


def _echo_config(cfg, command) -> dict:
    """Effective config, normalized for the provenance block."""
    keep = {
        "thresholds": ("a", "k", "b_range", "triple", "out"),
        "portrait": ("a", "b", "k", "window", "res", "dt", "steps", "seeds", "svg", "out"),
        "scan": ("a", "k", "b_range", "steps", "topology", "out"),
        "rotation": ("a", "b", "y_range", "steps", "out"),
    }[command]
    return {key: cfg[key] for key in keep}


def _load_seeds(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return [PhasePoint(float(x), float(y)) for x, y in data]
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise ConfigError(f"--seeds: cannot load seed list from {path!r}: {exc}") from None


def cmd_thresholds(cfg) -> int:
    a = _require_number(cfg, "a")
    want_triple = bool(cfg["triple"])
    b_range = cfg["b_range"]
    if b_range is None and not want_triple:
        raise ConfigError("--b-range: required unless --triple is given")
    doc = {
        "schema": "nontwist.thresholds.v1",
        "a": a,
        "k": None,
        "b_range": None,
        "i_ii": None,
        "ii_iii": None,
        "triple": None,
    }
    if b_range is not None:
        k = _require_number(cfg, "k")
        lo, hi = _parse_range(b_range, "b-range")
        doc["k"] = k
        doc["b_range"] = [lo, hi]
        rep_1 = ThresholdReport(
            kind=PAIR_I_II, a=a, k=k,
            roots=tuple(solve_threshold(lambda b: residual_I_II(a, b, k), lo, hi)),
        )
        rep_2 = ThresholdReport(
            kind=PAIR_II_III, a=a, k=k,
            roots=tuple(solve_threshold(lambda b: residual_II_III(a, b, k), lo, hi)),
        )
        doc["i_ii"] = rep_1.as_dict()
        doc["ii_iii"] = rep_2.as_dict()
    if want_triple:
        b3, k3 = triple_point(a)
        doc["triple"] = {
            "b": b3,
            "k": k3,
            "residual_i_ii": residual_I_II(a, b3, k3),
        }
    doc["provenance"] = provenance_block(
        "thresholds", _echo_config(cfg, "thresholds"), __version__, kernel_backend()
    )
    out = os.path.join(cfg["out"], "thresholds.json")
    write_json(out, doc)
    print(out)
    return 0


def cmd_portrait(cfg) -> int:
    p = _params(cfg)
    window = _window_from(cfg, p)
    dt = _optional_number(cfg, "dt")
    steps = _optional_int(cfg, "steps")
    settings = PortraitSettings()
    if dt is not None or steps is not None:
        dt_eff = dt if dt is not None else PortraitSettings.dt
        steps_eff = steps if steps is not None else round(
            0.5 * PortraitSettings.t_total / dt_eff
        )
        settings = PortraitSettings(dt=dt_eff, t_total=2.0 * steps_eff * dt_eff)
    seeds = _load_seeds(cfg["seeds"]) if cfg["seeds"] is not None else None
    result = portrait(p, window=window, seeds=seeds, settings=settings)
    if result.failures and not any(t.source == "flow" for t in result.traces):
        raise NumericalError("all portrait seeds exceeded the drift budget")

    rows = []
    for tid, tr in enumerate(result.traces):
        for x, y, e in zip(tr.xs, tr.ys, tr.energies):
            rows.append([tid, tr.source, x, y, e])
    csv_path = os.path.join(cfg["out"], "portrait_traces.csv")
    write_csv(csv_path, ["trace_id", "source", "x", "y", "H"], rows)

    eq_rows = [
        {
            "label": eq.label,
            "x": eq.position.x,
            "y": eq.position.y,
            "stability": eq.stability,
            "chain": eq.chain,
            "eigenvalue_squared": eq.eigenvalue_squared,
        }
        for eq in equilibria(p)
    ]
    doc = {
        "schema": "nontwist.portrait.v1",
        "params": {"a": p.a, "b": p.b, "k": p.k},
        "window": window.as_dict(),
        "equilibria": eq_rows,
        "n_traces": len(result.traces),
        "provenance": provenance_block(
            "portrait", _echo_config(cfg, "portrait"), __version__,
            kernel_backend(), failures=result.failures,
        ),
    }
    json_path = os.path.join(cfg["out"], "portrait_equilibria.json")
    write_json(json_path, doc)

    if cfg["svg"] is not None:
        write_svg(
            cfg["svg"],
            window.as_dict(),
            [(tr.source, tr.xs, tr.ys) for tr in result.traces],
            eq_rows,
            title=f"a={p.a} b={p.b} k={p.k}",
        )
        print(cfg["svg"])
    print(csv_path)
    print(json_path)
    return 0


_SENTINEL = "undefined"


def cmd_scan(cfg) -> int:
    a = _require_number(cfg, "a")
    k = _require_number(cfg, "k")
    try:
        Params(a=a, b=0.0, k=k)  # validate a and k once, up front
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    if cfg["b_range"] is None:
        raise ConfigError("--b-range: required for scan")
    lo, hi = _parse_range(cfg["b_range"], "b-range")
    samples = _optional_int(cfg, "steps") or 101
    with_topology = bool(cfg["topology"])
    header = [
        "b", "equilibrium_count", "residual_I_II", "residual_II_III",
        "regime_I_II", "regime_II_III",
    ]
    if with_topology:
        header.append("chain_topology_II_III")
    rows = []
    bs = [lo + i * (hi - lo) / (samples - 1) for i in range(samples)] if samples > 1 else [lo]
    for b in bs:
        row = [b]
        if b == 0.0:
            row += [_SENTINEL, _SENTINEL, _SENTINEL, _SENTINEL, _SENTINEL]
            if with_topology:
                row.append(_SENTINEL)
            rows.append(row)
            continue
        p = Params(a=a, b=b, k=k)
        row.append(len(equilibria(p)))
        disc = a * a - 4.0 * b
        if disc < 0.0:
            row += [_SENTINEL, _SENTINEL]
        else:
            row += [residual_I_II(a, b, k), residual_II_III(a, b, k)]
        lab1, lab2 = regime(a, k, b)
        row += [lab1.regime, lab2.regime]
        if with_topology:
            try:
                row.append(chain_topology(p, PAIR_II_III).verdict)
            except DomainError:
                row.append(_SENTINEL)
        rows.append(row)
    csv_path = os.path.join(cfg["out"], "scan.csv")
    write_csv(csv_path, header, rows)
    doc = {
        "schema": "nontwist.scan.v1",
        "a": a,
        "k": k,
        "b_range": [lo, hi],
        "samples": samples,
        "columns": header,
        "provenance": provenance_block(
            "scan", _echo_config(cfg, "scan"), __version__, kernel_backend()
        ),
    }
    json_path = os.path.join(cfg["out"], "scan.json")
    write_json(json_path, doc)
    print(csv_path)
    print(json_path)
    return 0


def cmd_rotation(cfg) -> int:
    a = _require_number(cfg, "a")
    b = _require_number(cfg, "b")
    try:
        p = Params(a=a, b=b, k=_optional_number(cfg, "k") or 0.0)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    lo, hi = _parse_range(cfg["y_range"], "y-range")
    samples = _optional_int(cfg, "steps") or 512
    ys = np.linspace(lo, hi, samples)
    F = ys * (1.0 - ys * (a - b * ys))
    dF = 1.0 - 2.0 * a * ys + 3.0 * b * ys * ys
    rows = [[y, f, f / TWO_PI, df] for y, f, df in zip(ys, F, dF)]
    csv_path = os.path.join(cfg["out"], "rotation.csv")
    write_csv(csv_path, ["y", "F", "F_over_2pi", "dF_dy"], rows)

    doc = {
        "schema": "nontwist.rotation.v1",
        "a": a,
        "b": b,
        "y_range": [lo, hi],
        "samples": samples,
        "twistless": None,
        "note": None,
    }
    try:
        tc = twistless_circles(p)
        rho1, rho2 = extremal_rotation_numbers(p)
        doc["twistless"] = {
            "y_c1": tc.y_c1,
            "y_c2": tc.y_c2,
            "rho_c1": tc.rho_c1,
            "rho_c2": tc.rho_c2,
            "rho_c1_closed_form": rho1,
            "rho_c2_closed_form": rho2,
        }
    except DomainError as exc:
        doc["note"] = str(exc)
    doc["provenance"] = provenance_block(
        "rotation", _echo_config(cfg, "rotation"), __version__, kernel_backend()
    )
    json_path = os.path.join(cfg["out"], "rotation.json")
    write_json(json_path, doc)
    print(csv_path)
    print(json_path)
    return 0


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that accepts negative ranges like '-3:-1' as values."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nontwist",
        description="Cubic nontwist map: reconnection thresholds, portraits, scans.",
    )
    parser.add_argument("--version", action="version", version=f"nontwist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(sp):
        sp.add_argument("--a", type=float, default=None, help="shape parameter a > 0")
        sp.add_argument("--b", type=float, default=None, help="shape parameter b")
        sp.add_argument("--k", type=float, default=None, help="perturbation amplitude k >= 0")
        sp.add_argument("--b-range", dest="b_range", default=None, metavar="LO:HI")
        sp.add_argument("--y-range", dest="y_range", default=None, metavar="LO:HI")
        sp.add_argument("--window", default=None, metavar="X0:X1:Y0:Y1")
        sp.add_argument("--res", default=None, metavar="NX:NY")
        sp.add_argument("--dt", type=float, default=None, help="integration time step")
        sp.add_argument("--steps", type=int, default=None,
                        help="steps per direction (portrait) / sample count (scan, rotation)")
        sp.add_argument("--seeds", default=None, metavar="FILE",
                        help="JSON file with a list of [x, y] seed points")
        sp.add_argument("--svg", default=None, metavar="PATH")
        sp.add_argument("--out", default=None, metavar="DIR")
        sp.add_argument("--config", default=None, metavar="PATH",
                        help="flat key-value JSON config (flags override it)")
        sp.add_argument("--triple", action="store_true", default=None)
        sp.add_argument("--topology", action="store_true", default=None)

    for name, fn in (
        ("thresholds", cmd_thresholds),
        ("portrait", cmd_portrait),
        ("scan", cmd_scan),
        ("rotation", cmd_rotation),
    ):
        sp = sub.add_parser(name)
        add_common(sp)
        sp.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        out_dir = cfg.get("out") or "."
        if not os.path.isdir(out_dir):
            os.makedirs(out_dir, exist_ok=True)
        return args.func(cfg)
    except ConfigError as exc:
        print(f"nontwist: config error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"nontwist: domain error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"nontwist: numerical failure: {exc}", file=sys.stderr)
        return 4
    except NontwistError as exc:
        print(f"nontwist: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
