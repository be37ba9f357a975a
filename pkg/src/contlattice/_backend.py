"""Pick the compiled kernels when present, the pure-Python ones otherwise.

Set ``CONTLATTICE_PURE_PYTHON=1`` to force the fallback (used by the test
suite to exercise both paths and by the benchmark).
"""
import os

from . import _kernels_py as python_kernels

try:
    from . import _kernels as compiled_kernels
except ImportError:
    compiled_kernels = None

if compiled_kernels is not None and not os.environ.get("CONTLATTICE_PURE_PYTHON"):
    kernels = compiled_kernels
else:
    kernels = python_kernels

BACKEND = kernels.BACKEND
