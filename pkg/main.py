#!/usr/bin/env python3
"""twistor-forge - command-line entry point"""

import sys

from src.cli import run


def main():
    """Main entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
