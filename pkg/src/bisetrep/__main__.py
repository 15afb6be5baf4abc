"""Module entry point so python -m bisetrep works like the console script."""

from .cli import main

raise SystemExit(main())
