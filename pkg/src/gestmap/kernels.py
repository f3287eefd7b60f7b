"""Backend selection for the scoring and search kernels.

The compiled extension is used when it imported successfully, unless the
``GESTMAP_PURE`` environment variable is set to a non-empty value or the
instance carries a Python callback (custom non-separable criteria), which
only the pure backend can evaluate.  Both backends implement the same
functions with the same orderings and tie rules.
"""

import os

from . import _kernels_py as pure

try:
    from . import _fastkernels as compiled
except ImportError:
    compiled = None


def compiled_available() -> bool:
    return compiled is not None


def pure_forced() -> bool:
    return bool(os.environ.get("GESTMAP_PURE"))


def backend_for(inst, override: str | None = None):
    """Kernel module to run ``inst`` on; ``override`` forces a backend by
    name ("pure" or "compiled")."""
    if override is not None:
        if override == "pure":
            return pure
        if override == "compiled":
            if compiled is None:
                raise RuntimeError("compiled kernels are not available")
            if inst is not None and inst.extra is not None:
                raise RuntimeError(
                    "custom non-separable criteria require the pure backend"
                )
            return compiled
        raise ValueError(f"unknown backend '{override}'")
    if compiled is None or pure_forced():
        return pure
    if inst is not None and inst.extra is not None:
        return pure
    return compiled


def backend_name(module) -> str:
    return "compiled" if module is compiled else "pure"
