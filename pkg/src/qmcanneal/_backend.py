"""Pick the compiled core if it was built, else the pure-Python one.

Set ``QMCANNEAL_BACKEND=python`` to force the fallback.
"""
import os

from . import _pycore

if os.environ.get("QMCANNEAL_BACKEND", "").lower() == "python":
    core = _pycore
else:
    try:
        from . import _core as core
    except ImportError:  # extension not built
        core = _pycore

NAME = "cython" if core is not _pycore else "python"


def get(name=None):
    """Return the kernel module for ``name`` ('cython', 'python' or None)."""
    if name is None:
        return core
    if name == "python":
        return _pycore
    if name == "cython":
        from . import _core
        return _core
    raise ValueError("unknown backend %r" % name)
