"""Command-line entry point: borglev <kind> --config <path> [options]."""

from __future__ import annotations

import argparse
import sys

from .errors import (
    EigensolverError,
    NearEigenvalueError,
    QuadratureError,
    TruncationError,
    ValidationError,
)
from .runner import KINDS, load_config, run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="borglev",
        description="Run an inverse-spectral-stability experiment from a "
                    "JSON config and write CSV/JSON artifacts.",
    )
    parser.add_argument("kind", choices=KINDS,
                        help="experiment kind (must match the config)")
    parser.add_argument("--config", required=True, help="JSON config path")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker cap for parallel sweeps")
    parser.add_argument("--seed", type=int, default=None,
                        help="overrides the config rng seed")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config, seed_override=args.seed)
        if cfg["kind"] != args.kind:
            raise ValidationError(
                f"config kind {cfg['kind']!r} does not match "
                f"command {args.kind!r}"
            )
        run(args.config, args.out, threads=args.threads, seed=args.seed)
    except ValidationError as exc:
        print(f"borglev: invalid input: {exc}", file=sys.stderr)
        return 2
    except (NearEigenvalueError, EigensolverError, TruncationError,
            QuadratureError) as exc:
        print(f"borglev: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
