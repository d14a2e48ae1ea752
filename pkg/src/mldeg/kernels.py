"""Hot matroid kernels: compiled extension when built, pure Python otherwise.

Set ``MLDEG_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py as py_backend

compiled_backend = None
if not os.environ.get("MLDEG_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_impl = compiled_backend or py_backend
BACKEND = "cython" if compiled_backend is not None else "python"

rank_table = _impl.rank_table
beta_crapo = _impl.beta_crapo
special_basis = _impl.special_basis
beta_many = _impl.beta_many
