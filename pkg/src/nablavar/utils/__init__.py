"""Utility modules for the command line."""

from nablavar.utils.config import Settings, configure_logging, get_settings
from nablavar.utils.io import (
    dump_model,
    format_grid,
    format_scale_table,
    format_solution,
    load_model,
    parse_grid,
    read_grid,
    write_text,
)

__all__ = [
    "Settings",
    "configure_logging",
    "dump_model",
    "format_grid",
    "format_scale_table",
    "format_solution",
    "get_settings",
    "load_model",
    "parse_grid",
    "read_grid",
    "write_text",
]
