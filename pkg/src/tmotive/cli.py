"""Configuration-driven command line frontend.

A run is described by an INI-style config file (parsed with configparser):

    [task]
    command = verify        ; zeta | lvalue | exp | log | bridge | verify
    q = 2
    precision = 10
    n = 1                   ; zeta / lvalue exponent
    mode = rigorous         ; or empirical
    max_degree = 22
    order = 6               ; exp / log series order
    exclude = x, x+1        ; finite places left out of the product
    point = 1               ; exp / log evaluation point (coordinates)
    shards = 1
    checkpoint = run.ckpt

    [motive]
    kind = drinfeld         ; carlitz | drinfeld | matrix
    coeffs = 1, 1
    power = 1               ; carlitz only
    wrappers = tensor_carlitz, sym2

    [motive.sigma]          ; matrix kind: one row per key, in order
    row1 = x+t, x^2+t^2
    row2 = x+t, 0

    [points]                ; verify: one point per key, in order
    z1 = 1, 0, 0
    z2 = 0, 0, 1

Command line flags override the corresponding [task] keys.  All output is
line oriented; --machine emits key=value lines instead.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys

from .bridge import lattice_det, motive_to_module
from .errors import ConfigError, TMotiveError
from .lseries import PrecisionPolicy, l_value, l_value_of_module
from .places import Place
from .sigma import SigmaModule, parse_motive
from .tmodule import KInfPoint, evaluate, exp_coefficients, log_coefficients
from .verify import verify_conjecture


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _split(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def load_config(path, overrides=None):
    """Read and validate a run config; returns a plain dict."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if "task" not in cp:
        raise ConfigError("config needs a [task] section")
    task = dict(cp["task"])
    for key, value in (overrides or {}).items():
        if value is not None:
            task[key] = str(value)

    cfg = {}
    command = task.get("command")
    if command not in ("zeta", "lvalue", "exp", "log", "bridge", "verify"):
        raise ConfigError(f"unknown command {command!r}")
    cfg["command"] = command
    try:
        cfg["q"] = int(task["q"])
    except (KeyError, ValueError):
        raise ConfigError("q must be an integer") from None
    if not _is_prime(cfg["q"]):
        raise ConfigError("q must be prime")
    try:
        cfg["precision"] = int(task.get("precision", "10"))
        cfg["n"] = int(task.get("n", "1"))
        cfg["order"] = int(task.get("order", "6"))
        cfg["shards"] = int(task.get("shards", os.environ.get("TMOTIVE_SHARDS", "1")))
        md = task.get("max_degree")
        cfg["max_degree"] = int(md) if md else None
    except ValueError as e:
        raise ConfigError(f"bad numeric field: {e}") from None
    if cfg["precision"] < 1:
        raise ConfigError("precision must be >= 1")
    cfg["mode"] = task.get("mode", "rigorous")
    if cfg["mode"] not in ("rigorous", "empirical"):
        raise ConfigError(f"unknown mode {cfg['mode']!r}")
    cfg["checkpoint"] = task.get("checkpoint") or None
    cfg["exclude"] = _split(task.get("exclude", ""))
    cfg["point"] = _split(task.get("point", "")) or None

    if command != "zeta":
        if "motive" not in cp:
            raise ConfigError(f"command {command} needs a [motive] section")
        msec = dict(cp["motive"])
        motive = {"kind": msec.get("kind")}
        if "coeffs" in msec:
            motive["coeffs"] = _split(msec["coeffs"])
        if "power" in msec:
            motive["power"] = int(msec["power"])
        if "wrappers" in msec:
            motive["wrappers"] = _split(msec["wrappers"])
        if motive["kind"] == "matrix":
            if "motive.sigma" not in cp:
                raise ConfigError("matrix motive needs a [motive.sigma] section")
            motive["sigma"] = [_split(v) for v in cp["motive.sigma"].values()]
        cfg["motive"] = motive

    cfg["points"] = None
    if "points" in cp:
        cfg["points"] = [_split(v) for v in cp["points"].values()]
    return cfg


def _policy(cfg):
    return PrecisionPolicy(
        precision=cfg["precision"],
        mode=cfg["mode"],
        max_degree=cfg["max_degree"],
    )


def _excluded(cfg):
    return [Place.parse(cfg["q"], s) for s in cfg["exclude"]]


def _emit(out, machine, pairs, lines):
    if machine:
        for k, v in pairs:
            print(f"{k}={v}", file=out)
    else:
        for line in lines:
            print(line, file=out)


def _lvalue_pairs(res, prefix="L"):
    return [
        (prefix, str(res.series)),
        ("mode", res.mode),
        ("degrees", str(res.degrees_used)),
        ("places", str(res.places_count)),
    ]


def cmd_zeta(cfg, out, machine):
    trivial = SigmaModule(cfg["q"], [["1"]])
    res = l_value(trivial, cfg["n"], _policy(cfg), excluded=_excluded(cfg),
                  shards=cfg["shards"], checkpoint=cfg["checkpoint"])
    _emit(out, machine,
          [("zeta", str(res.series))] + _lvalue_pairs(res)[1:],
          [f"zeta({cfg['n']}) = {res.series}",
           f"[{res.mode}, degrees <= {res.degrees_used}, {res.places_count} places]"])


def cmd_lvalue(cfg, out, machine):
    M = parse_motive(cfg["q"], cfg["motive"])
    res = l_value_of_module(M, _policy(cfg), excluded=_excluded(cfg),
                            shards=cfg["shards"], checkpoint=cfg["checkpoint"])
    _emit(out, machine, _lvalue_pairs(res),
          [f"L(E,0) = {res.series}",
           f"[{res.mode}, degrees <= {res.degrees_used}, {res.places_count} places]"])


def _series_cmd(cfg, out, machine, use_log):
    M = parse_motive(cfg["q"], cfg["motive"])
    E = motive_to_module(M).module
    exp = exp_coefficients(E, cfg["order"])
    series = log_coefficients(exp) if use_log else exp
    name = "log" if use_log else "exp"
    pairs = []
    lines = []
    for i, mat in enumerate(series.coeffs):
        body = "; ".join(", ".join(str(e) for e in row) for row in mat)
        pairs.append((f"{name}_coeff_{i}", body))
        lines.append(f"{name} tau^{i}: [{body}]")
    if cfg["point"]:
        x = KInfPoint.from_rationals(cfg["q"], cfg["point"], cfg["precision"])
        res = evaluate(series, x, cfg["precision"])
        pairs.append((f"{name}_value", str(res.point)))
        pairs.append(("terms", str(res.terms_used)))
        lines.append(f"{name}_E({', '.join(cfg['point'])}) = {res.point}")
        lines.append(f"[{res.terms_used} terms]")
    _emit(out, machine, pairs, lines)


def cmd_exp(cfg, out, machine):
    _series_cmd(cfg, out, machine, use_log=False)


def cmd_log(cfg, out, machine):
    _series_cmd(cfg, out, machine, use_log=True)


def cmd_bridge(cfg, out, machine):
    M = parse_motive(cfg["q"], cfg["motive"])
    br = motive_to_module(M)
    pairs = [("dimension", str(br.module.d)), ("dim_w", str(br.dim_w)),
             ("integral", str(br.integral).lower())]
    lines = [f"t-module of dimension {br.module.d}"]
    for i, mat in enumerate(br.module.matrices):
        body = "; ".join(", ".join(str(e) for e in row) for row in mat)
        pairs.append((f"A_{i}", body))
        lines.append(f"A_{i} = [{body}]")
    wbody = "; ".join(", ".join(str(e) for e in row) for row in br.w_matrix)
    pairs.append(("w", wbody))
    lines.append(f"w = [{wbody}]")
    lines.append(f"dim W_E = {br.dim_w}, integral model: {br.integral}")
    if br.integral:
        det = lattice_det(br.w_matrix)
        pairs.append(("lattice_det", str(det)))
        lines.append(f"det W_E(O_K) = {det}")
    _emit(out, machine, pairs, lines)


def cmd_verify(cfg, out, machine):
    M = parse_motive(cfg["q"], cfg["motive"])
    rep = verify_conjecture(M, points=cfg["points"], policy=_policy(cfg))
    pairs = _lvalue_pairs(rep.l_value)
    pairs += [("dim_w", str(rep.dim_w)), ("deviation", str(rep.deviation)),
              ("verdict", rep.verdict)]
    if rep.ratio is not None:
        pairs.append(("ratio", str(rep.ratio)))
    if rep.integral_part is not None:
        pairs.append(("integral_part",
                      ", ".join(str(p) for p in rep.integral_part)))
    _emit(out, machine, pairs, rep.lines())


_COMMANDS = {
    "zeta": cmd_zeta,
    "lvalue": cmd_lvalue,
    "exp": cmd_exp,
    "log": cmd_log,
    "bridge": cmd_bridge,
    "verify": cmd_verify,
}


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="tmotive",
        description="special L-values of t-motives over F_q(theta)",
    )
    ap.add_argument("config", help="run config file")
    ap.add_argument("--precision", type=int)
    ap.add_argument("--mode", choices=["rigorous", "empirical"])
    ap.add_argument("--max-degree", type=int, dest="max_degree")
    ap.add_argument("--exclude", help="comma-separated place polynomials")
    ap.add_argument("--checkpoint")
    ap.add_argument("--shards", type=int)
    ap.add_argument("--machine", action="store_true",
                    help="emit key=value lines for scripting")
    args = ap.parse_args(argv)

    overrides = {
        "precision": args.precision,
        "mode": args.mode,
        "max_degree": args.max_degree,
        "exclude": args.exclude,
        "checkpoint": args.checkpoint,
        "shards": args.shards,
    }
    try:
        cfg = load_config(args.config, overrides)
        _COMMANDS[cfg["command"]](cfg, sys.stdout, args.machine)
    except TMotiveError as e:
        print(f"error {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as e:
        print(f"error ConfigError: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
