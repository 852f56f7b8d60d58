from __future__ import annotations

import logging
import sys

from . import config as settings
from .cli import EXIT_INPUT, EXIT_LIMIT, EXIT_OK, build_parser, load_job, run
from .errors import FfctlError, ResourceLimitError


def _configure_logging(verbose: bool = False) -> None:
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(level=logging.INFO, format="%(message)s")
    if verbose:
        root.setLevel(logging.DEBUG)


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    _configure_logging("--verbose" in argv)

    config = settings.load_config()
    try:
        opts = build_parser().parse_args(argv)
        if opts.init_config:
            created = settings.ensure_config()
            print(f"{'wrote' if created else 'kept'} {settings.CONFIG_PATH}")
            return EXIT_OK
        spec = load_job(opts, config)
    except ResourceLimitError as exc:
        print(f"ffctl: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except FfctlError as exc:
        print(f"ffctl: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(spec, config)


if __name__ == "__main__":
    raise SystemExit(main())
