import sys

from cli.main_cli import main


if __name__ == "__main__":
    sys.exit(main())
