"""Allow ``python -m madap`` to invoke the command-line interface."""

from madap.cli import main

if __name__ == "__main__":
    main()
