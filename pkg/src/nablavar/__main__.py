"""Entry point for `python -m nablavar`."""

from __future__ import annotations

import sys

from nablavar.cli import run

if __name__ == "__main__":
    raise SystemExit(run(sys.argv[1:]))
