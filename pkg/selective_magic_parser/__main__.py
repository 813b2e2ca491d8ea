"""Allow running as python -m selective_magic_parser."""

from selective_magic_parser.cli import main

if __name__ == "__main__":
    main()
