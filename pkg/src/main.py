#!/usr/bin/env python3
"""
homocalc - Exact homology and cohomology of finite groups from the command line
"""

import sys
import os
import logging

# Add src directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli.commands import run


def main():
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run())


if __name__ == '__main__':
    main()
