"""Backend selection for the bitmask kernels.

The compiled extension is used when it was built; setting
``FRMAGIC_PURE_PYTHON=1`` forces the pure-Python implementation.
"""
import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("FRMAGIC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend or python_backend
BACKEND = "cython" if compiled_backend is not None else "python"

brute_force_stable_masks = _active.brute_force_stable_masks
is_minimal_model_of_reduct = _active.is_minimal_model_of_reduct
