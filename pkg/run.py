import sys

from mixed_moore.cli import run

if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
