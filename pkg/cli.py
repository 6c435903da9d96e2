"""Console-script entry point."""

import sys

from main import main


def cli() -> None:
    """Run the command-line front end and exit with its status code."""
    sys.exit(main())


if __name__ == "__main__":
    cli()
