"""
Entry point for running BitAssist as a module.
Usage: python -m bitassist succ prevedel.json
"""
import sys

from bitassist.main import main

if __name__ == "__main__":
    sys.exit(main())
