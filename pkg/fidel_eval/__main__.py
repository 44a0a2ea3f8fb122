"""Allow ``python -m fidel_eval``."""
import sys

from .cli import main

sys.exit(main())
