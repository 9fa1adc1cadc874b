"""Laboratory for eventually linearizable shared objects.

Histories cross this interface as trace text: one event per line,
``inv <proc> <obj> <op> [args]`` or ``res <proc> <obj> <op> <value>``.
Everything the module returns parses back in, so verdicts can be
round-tripped through files or the command-line binary.
"""

try:
    from ._evsync import *  # noqa: F401,F403
    from ._evsync import __doc__ as _core_doc  # noqa: F401
except ImportError:
    # In-tree builds leave the compiled module next to the build products
    # rather than inside the package; fall back to a top-level import.
    from _evsync import *  # noqa: F401,F403
