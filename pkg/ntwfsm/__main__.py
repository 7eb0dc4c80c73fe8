"""Run the command-line driver with ``python -m ntwfsm``."""

from .cli import main

main()
