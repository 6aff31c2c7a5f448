import sys

from cli.commands import run

# --- Main Execution ---

def main():
    """
    Command-line entry point: oriented spanner construction and oriented dilation.
    Run `python main.py --help` for the subcommands.
    """
    sys.exit(run())


if __name__ == "__main__":
    main()
