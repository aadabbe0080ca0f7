"""Module entry point for python -m ncf_reliability."""

from .cli import cli

if __name__ == "__main__":
    cli()
