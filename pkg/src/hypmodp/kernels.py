"""Selects the compiled kernels when built, else the numpy fallback.

Set ``HYPMODP_PURE=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("HYPMODP_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

hyp_series = _impl.hyp_series
poly_mul = _impl.poly_mul
poly_divmod = _impl.poly_divmod
poly_gcd = _impl.poly_gcd
frob_mul_acc = _impl.frob_mul_acc

__all__ = ["BACKEND", "hyp_series", "poly_mul", "poly_divmod", "poly_gcd", "frob_mul_acc"]
