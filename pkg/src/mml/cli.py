"""``mml`` command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import COMMANDS, load_config
from .errors import MMLError
from .lab import run, write_result


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mml", description="Mollified-moment numerical lab.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", metavar="FILE", help="key = value config file")
    p.add_argument("--theta", type=_floats, metavar="L", help="comma-separated theta values")
    p.add_argument("--tmax", type=_floats, metavar="N", help="comma-separated T values")
    p.add_argument("--window", choices=("from_zero", "dyadic"))
    p.add_argument("--x", dest="x_list", type=_floats, metavar="L", help="mollifier lengths (chain, jt-check)")
    p.add_argument("--t", dest="t_list", type=_floats, metavar="L", help="heights (jt-check, gsupport)")
    p.add_argument("--u", dest="u_list", type=_floats, metavar="L", help="sample points (gsupport)")
    p.add_argument("--count", type=int, help="number of zeros (zeros)")
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--cache-dir", metavar="DIR")
    p.add_argument("--override-guardrail", action="store_true", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(
            args.config,
            command=args.command,
            theta_list=args.theta,
            T_list=args.tmax,
            window=args.window,
            x_list=args.x_list,
            t_list=args.t_list,
            u_list=args.u_list,
            count=args.count,
            output=args.out,
            format=args.format,
            cache_dir=args.cache_dir,
            override_guardrail=args.override_guardrail,
        )
        text = write_result(run(cfg), cfg)
    except MMLError as exc:
        print(f"mml: error: {exc}", file=sys.stderr)
        return 2
    if not cfg.output:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
