"""Kernel backend selection.

The hot loops (irreducible enumeration and Euler-factor work over residue
fields) exist twice: a compiled extension (``tmotive._kernels``, bit-packed
GF(2) arithmetic) and a pure-Python reference (``tmotive._kernels_py``).
The compiled path covers q = 2 with place degree <= 32 and small theta
degrees; anything else uses the reference implementation.  Set
``TMOTIVE_PURE_PYTHON=1`` to force pure Python everywhere.
"""

from __future__ import annotations

import os

from . import _kernels_py as _py

_c = None
if os.environ.get("TMOTIVE_PURE_PYTHON") != "1":
    try:
        from . import _kernels as _c  # type: ignore[no-redef]
    except ImportError:
        _c = None

BACKEND = "python" if _c is None else _c.BACKEND

decode = _py.decode
encode = _py.encode


def _theta_fits(num, den):
    if len(den) > 63:
        return False
    return all(len(tc) <= 63 for row in num for ent in row for tc in ent)


def irreducibles(q, d):
    if _c is not None and q == 2:
        return _c.irreducibles2(d)
    return _py.irreducibles(q, d)


def charpolys(q, d, encodings, num, den, r, st):
    if _c is not None and q == 2 and d <= 32 and _theta_fits(num, den):
        return _c.charpolys2(d, encodings, num, den, r, st)
    return _py.charpolys(q, d, encodings, num, den, r, st)


def partial_product(q, d, encodings, num, den, r, st, n, W):
    if _c is not None and q == 2 and d <= 32 and W <= 62 and _theta_fits(num, den):
        return _c.partial_product2(d, encodings, num, den, r, st, n, W)
    return _py.partial_product(q, d, encodings, num, den, r, st, n, W)
