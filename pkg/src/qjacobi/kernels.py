"""Backend selection for the sparse-polynomial kernels.

A form is stored as ``dict[int, rational]``. Each key packs the exponents of
(P, Pz, E4, E1, E2, c) into 10-bit slots, lowest slot first; the c slot is
biased by 512 so negative powers of c are representable. Multiplying two
monomials is then ``k1 + k2 - CBIAS``.

The compiled kernel (``_ckernels``) is used when it was built and gmpy2 is
importable. Set ``QJACOBI_KERNEL=python`` to force the fallback.
"""

import os

from . import _pykernels
from ._pykernels import CBIAS, MASK, NGENS, SHIFT, UNITS

__all__ = ["BACKEND", "CBIAS", "MASK", "NGENS", "SHIFT", "UNITS", "mul", "derive", "load"]


def load(name=None):
    """Return ``(backend_name, module)`` for ``name`` in {'compiled', 'python', None}."""
    if name is None:
        name = os.environ.get("QJACOBI_KERNEL", "auto").lower()
    if name in ("auto", "compiled", "c", "cython"):
        try:
            from . import _ckernels
        except ImportError:
            if name != "auto":
                raise
        else:
            return "compiled", _ckernels
    return "python", _pykernels


BACKEND, _impl = load()
mul = _impl.mul
derive = _impl.derive
