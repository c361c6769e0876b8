"""Entry point - configures logging and hands argv to the CLI."""

from __future__ import annotations

import logging
import sys

from scalaropt.cli import run


def main() -> None:
    logging.basicConfig(
        level=logging.WARNING,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
