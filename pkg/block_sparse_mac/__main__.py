"""Entry point for block_sparse_mac."""

from block_sparse_mac.cli import main  # pragma: no cover

if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
