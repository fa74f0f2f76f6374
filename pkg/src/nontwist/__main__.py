"""Allow `python -m nontwist ...` without an installed entry point."""
import sys

from .cli import main

sys.exit(main())
