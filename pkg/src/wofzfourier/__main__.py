"""
Main entry point for the wofzfourier package.

This allows the package to be run as a module (python -m wofzfourier).
"""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
