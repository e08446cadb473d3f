"""
Subcommands of the scatter-lens driver.

Each module provides a ``register_*_command(subparsers, common)`` function that
adds its subparser and binds a ``run_*`` handler returning a result dictionary.
"""

from .direct import register_direct_command, run_direct
from .inverse import register_inverse_command, run_inverse
from .roundtrip import register_roundtrip_command, run_roundtrip
from .selftest import register_selftest_command, run_selftest
from .stargraph import register_stargraph_command, run_stargraph

__all__ = [
    "register_direct_command",
    "register_inverse_command",
    "register_roundtrip_command",
    "register_stargraph_command",
    "register_selftest_command",
    "run_direct",
    "run_inverse",
    "run_roundtrip",
    "run_stargraph",
    "run_selftest",
]
