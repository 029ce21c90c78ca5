"""Scalar backends shared by symbols, trigonometric polynomials and elements.

Two kinds of coefficient arrays are used throughout the package:

* exact: numpy ``object`` arrays holding Gaussian rationals (``QQ_I`` elements),
* float: numpy ``complex128`` arrays.

Mixing the two promotes to float.  Exact arrays are never produced from floats.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import gmpy2
import numpy as np
from sympy.polys.domains import QQ_I

# absolute tolerance used when canonicalising float-mode data
FLOAT_ATOL = 1e-13

GaussianRational = type(QQ_I(0, 0))
EXACT_ZERO = QQ_I(0, 0)
EXACT_ONE = QQ_I(1, 0)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational)) and not isinstance(x, bool)


def exact(x) -> GaussianRational:
    """Convert an int, Fraction, ``(re, im)`` pair or Gaussian rational to ``QQ_I``."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, tuple):
        re, im = x
        return QQ_I(_frac(re), _frac(im))
    if isinstance(x, (int, Fraction)):
        return QQ_I(_frac(x), 0)
    raise TypeError(f"cannot convert {x!r} to an exact scalar")


def _frac(x):
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return x
    raise TypeError(f"cannot convert {x!r} to a rational")


def to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(float(x.x), float(x.y))
    return complex(x)


def conj_scalar(x):
    if isinstance(x, GaussianRational):
        return QQ_I(x.x, -x.y)
    if isinstance(x, (int, Fraction)):
        return x
    return complex(x).conjugate()


def coerce_scalar(x, exact_mode: bool):
    """Bring ``x`` into the requested backend (exact requires an exact input)."""
    if exact_mode:
        return exact(x)
    return to_complex(x)


def is_array_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def exact_array(values, shape=None) -> np.ndarray:
    out = np.empty(len(values) if shape is None else shape, dtype=object)
    flat = out.reshape(-1)
    for i, v in enumerate(np.asarray(values, dtype=object).reshape(-1)):
        flat[i] = exact(v)
    return out


def exact_zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(EXACT_ZERO)
    return out


def as_complex(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.array([to_complex(v) for v in arr.reshape(-1)], dtype=complex).reshape(arr.shape)
    return arr.astype(complex, copy=False)


def conj_array(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        out = np.empty(arr.shape, dtype=object)
        flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
        for i, v in enumerate(flat_in):
            flat_out[i] = QQ_I(v.x, -v.y)
        return out
    return np.conj(arr)


def unify_arrays(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Promote a pair of coefficient arrays to a common backend."""
    if a.dtype == object and b.dtype == object:
        return a, b
    return as_complex(a), as_complex(b)


def scale_array(arr: np.ndarray, c) -> np.ndarray:
    if arr.dtype == object and is_exact_scalar(c):
        c = exact(c)
        return arr * c
    return as_complex(arr) * to_complex(c)


def arrays_equal(a: np.ndarray, b: np.ndarray, atol: float = 0.0) -> bool:
    if a.shape != b.shape:
        return False
    if a.dtype == object and b.dtype == object:
        return all(x == y for x, y in zip(a.reshape(-1), b.reshape(-1)))
    a, b = as_complex(a), as_complex(b)
    return bool(np.all(np.abs(a - b) <= atol))


def array_is_zero(arr: np.ndarray, atol: float = 0.0) -> bool:
    if arr.dtype == object:
        return not any(arr.reshape(-1))
    return bool(np.all(np.abs(arr) <= atol))


def abs_array(arr: np.ndarray) -> np.ndarray:
    return np.abs(as_complex(arr))


def scalar_to_json(x):
    """``[re, im]`` with exact parts as ints or ``"p/q"`` strings."""
    if isinstance(x, GaussianRational):
        return [_rational_to_json(x.x), _rational_to_json(x.y)]
    if isinstance(x, (int, Fraction)):
        return [_rational_to_json(x), 0]
    z = complex(x)
    return [z.real, z.imag]


def _rational_to_json(q):
    q = Fraction(int(q.numerator), int(q.denominator))
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def scalar_from_json(v):
    """Inverse of :func:`scalar_to_json`; ints and rational strings stay exact."""
    if isinstance(v, list):
        if len(v) != 2:
            raise ValueError(f"scalar must be [re, im], got {v!r}")
        re, im = v
    else:
        re, im = v, 0
    if _json_exact(re) and _json_exact(im):
        return QQ_I(_frac(_json_rational(re)), _frac(_json_rational(im)))
    return complex(float(Fraction(re)) if isinstance(re, str) else float(re),
                   float(Fraction(im)) if isinstance(im, str) else float(im))


def _json_exact(x) -> bool:
    return isinstance(x, str) or (isinstance(x, numbers.Integral) and not isinstance(x, bool))


def _json_rational(x):
    return Fraction(x) if isinstance(x, str) else int(x)
