"""Allow running with `python -m scalaropt`."""

from scalaropt.main import main

main()
