import sys

from cli.app import run


def main():
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":   # only runs when invoked directly
    main()
