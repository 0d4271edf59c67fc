"""Command-line front end: norms, converge, cubature, identities.

Exit codes: 0 success, 2 usage error, 3 certification or identity failure,
4 I/O error.  Flag values override the optional key=value config file, which
overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import experiments
from .cubature import RuleFileError, load_rule, product_rule_s2, save_rule, validate_exactness
from .filters import filter_from_name

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHECK_FAILED = 3
EXIT_IO = 4


def parse_l_list(text: str) -> list[int]:
    """Comma list of degrees; 'a,b,...,z' expands geometrically or arithmetically."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if "..." not in parts:
        return [int(p) for p in parts]
    idx = parts.index("...")
    if idx < 2 or idx != len(parts) - 2:
        raise ValueError("ellipsis form must be 'first,second,...,last'")
    first, second = int(parts[idx - 2]), int(parts[idx - 1])
    last = int(parts[idx + 1])
    head = [int(p) for p in parts[: idx - 2]]
    seq = [first, second]
    if second > first and second % first == 0 and second // first > 1:
        ratio = second // first
        while seq[-1] * ratio <= last:
            seq.append(seq[-1] * ratio)
    else:
        step = second - first
        if step <= 0:
            raise ValueError("cannot infer progression from ellipsis")
        while seq[-1] + step <= last:
            seq.append(seq[-1] + step)
    if seq[-1] != last:
        raise ValueError(f"ellipsis progression does not reach {last}")
    return head + seq


def parse_p(text) -> float:
    if isinstance(text, str) and text.lower() in ("inf", "oo"):
        return math.inf
    return float(text)


def _parse_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    if str(text).lower() in ("1", "true", "yes", "on"):
        return True
    if str(text).lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# config values arrive as strings; coerce anything argparse would have typed
_COERCERS = {
    "d": int,
    "seed": int,
    "s": float,
    "p": parse_p,
    "eps": float,
    "Lambda": int,
    "probes": int,
    "panels": int,
    "degree": int,
    "trials": int,
    "r": int,
    "discrete": _parse_bool,
    "semi_only": _parse_bool,
}


def load_config(path) -> dict[str, str]:
    cfg = {}
    for ln in Path(path).read_text().splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise ValueError(f"config line without '=': {ln!r}")
        key, val = ln.split("=", 1)
        cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sphapprox", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument(
            "--plot",
            nargs="?",
            const="",
            default=None,
            help="render a figure (optional path; default: next to --out)",
        )

    p_norms = sub.add_parser("norms", help="operator norm sweep over L")
    p_norms.add_argument("--filter", default=None)
    p_norms.add_argument("--d", type=int, default=2)
    p_norms.add_argument("--L", default=None, help="comma list, e.g. 8,16,...,256")
    p_norms.add_argument("--panels", type=int, default=None, help="quadrature panels (default 8L)")
    p_norms.add_argument("--discrete", action="store_true", help="add fully discrete lower bounds")
    p_norms.add_argument("--rule-dir", default=None)
    p_norms.add_argument("--probes", type=int, default=2000)
    common(p_norms)

    p_conv = sub.add_parser("converge", help="approximation error sweep over L")
    p_conv.add_argument("--filter", default=None)
    p_conv.add_argument("--d", type=int, default=2)
    p_conv.add_argument("--s", type=float, default=2.0)
    p_conv.add_argument("--p", type=parse_p, default=2.0)
    p_conv.add_argument("--L", default=None)
    p_conv.add_argument("--eps", type=float, default=0.5)
    p_conv.add_argument("--Lambda", type=int, default=1024)
    p_conv.add_argument("--semi-only", action="store_true", help="skip the fully discrete path")
    p_conv.add_argument("--rule-dir", default=None)
    common(p_conv)

    p_cub = sub.add_parser("cubature", help="generate or check rule files")
    cub_sub = p_cub.add_subparsers(dest="action", required=True)
    p_gen = cub_sub.add_parser("gen")
    p_gen.add_argument("--degree", type=int, default=None)
    p_gen.add_argument("--out", default=None)
    p_gen.add_argument("--config", default=None)
    p_chk = cub_sub.add_parser("check")
    p_chk.add_argument("--file", default=None)
    p_chk.add_argument("--degree", type=int, default=None)
    p_chk.add_argument("--trials", type=int, default=20)
    p_chk.add_argument("--seed", type=int, default=0)
    p_chk.add_argument("--config", default=None)

    p_id = sub.add_parser("identities", help="algebraic identity checks")
    p_id.add_argument("--filter", default="vp")
    p_id.add_argument("--d", type=int, default=2)
    p_id.add_argument("--L", type=int, default=8)
    p_id.add_argument("--r", type=int, default=1)
    p_id.add_argument("--seed", type=int, default=0)
    p_id.add_argument("--config", default=None)

    return ap


def _merge_config(args) -> None:
    """Fill config values into every attribute the command line left at default.

    Works on the parsed namespace: a flag present in argv always wins because
    set attributes are only replaced when they still hold the parser default.
    """
    if not getattr(args, "config", None):
        return
    cfg = load_config(args.config)
    parser = build_parser()
    defaults = parser.parse_args(_default_argv(args))
    for key, raw in cfg.items():
        if not hasattr(args, key):
            raise ValueError(f"config key {key!r} is not a {args.command} option")
        if getattr(args, key) != getattr(defaults, key, None):
            continue  # explicitly set on the command line
        value = _COERCERS.get(key, str)(raw)
        setattr(args, key, value)


def _default_argv(args) -> list[str]:
    if args.command == "cubature":
        return ["cubature", args.action]
    return [args.command]


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"--{name.replace('_', '-')} is required (flag or config)")


def _emit(records, args) -> None:
    text = experiments.records_to_csv(records)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.plot is not None:
        from . import plots

        if args.plot:
            target = args.plot
        elif args.out:
            target = str(Path(args.out).with_suffix(".png"))
        else:
            raise ValueError("--plot without a path needs --out to anchor the figure file")
        plots.render_records(records, target)
        print(f"figure written to {target}", file=sys.stderr)


def _rule_provider(args, d):
    if getattr(args, "rule_dir", None):
        return experiments.directory_rule_provider(args.rule_dir, d)
    if d != 2:
        raise ValueError("built-in rule generation covers d = 2 only; use --rule-dir")
    return experiments.product_rule_provider


def cmd_norms(args) -> int:
    _require(args, "filter", "L")
    L_values = parse_l_list(args.L)
    filter_from_name(args.filter, args.d)  # fail fast on bad names
    provider = _rule_provider(args, args.d) if args.discrete else None
    records = experiments.norms_sweep(
        args.filter,
        args.d,
        L_values,
        panels=args.panels,
        discrete=args.discrete,
        rule_provider=provider,
        probes=args.probes,
        seed=args.seed,
    )
    _emit(records, args)
    return EXIT_OK


def cmd_converge(args) -> int:
    _require(args, "filter", "L")
    L_values = parse_l_list(args.L)
    filter_from_name(args.filter, args.d)
    discrete = not args.semi_only
    provider = _rule_provider(args, args.d) if discrete else None
    records = experiments.converge_sweep(
        args.filter,
        args.d,
        args.s,
        args.p,
        L_values,
        epsilon=args.eps,
        Lambda=args.Lambda,
        discrete=discrete,
        rule_provider=provider,
        seed=args.seed,
    )
    _emit(records, args)
    return EXIT_OK


def cmd_cubature(args) -> int:
    if args.action == "gen":
        _require(args, "degree", "out")
        rule = product_rule_s2(args.degree)
        save_rule(rule, args.out)
        print(f"wrote {rule.n_nodes}-node rule of degree {rule.declared_degree} to {args.out}")
        return EXIT_OK
    _require(args, "file", "degree")
    rule = load_rule(args.file)
    report = validate_exactness(rule, args.degree, trials=args.trials, seed=args.seed)
    status = "pass" if report.passed else "FAIL"
    print(f"degree {args.degree}: max_defect {report.max_defect:.3e} ({report.trials} probes) -> {status}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def cmd_identities(args) -> int:
    report = experiments.identity_suite(
        L=args.L, r=args.r, seed=args.seed, filter_name=args.filter, d=args.d
    )
    for line in report.lines():
        print(line)
    print("identities: pass" if report.passed else "identities: FAIL")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _merge_config(args)
        if args.command == "norms":
            return cmd_norms(args)
        if args.command == "converge":
            return cmd_converge(args)
        if args.command == "cubature":
            return cmd_cubature(args)
        if args.command == "identities":
            return cmd_identities(args)
        raise ValueError(f"unknown command {args.command!r}")
    except RuleFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
