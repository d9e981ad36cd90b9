"""Entry point for running ``py-regraph`` as a module."""

from py_regraph.cli import main

if __name__ == "__main__":
    main()
