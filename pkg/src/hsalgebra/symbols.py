"""Diagonal symbols: locally constant functions G(m, x) on Z_{>=0} x Z_s^x.

A symbol is stored as a ``core`` table G(m, u) for ``0 <= m < d`` and every
unit residue u mod s**e, plus a ``tail`` row giving G(m, u) for all m >= d.
Every constructor returns the canonical form (minimal d, then minimal e), so
structural equality is equality of functions.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence

import numpy as np

from . import scalars as sc
from .sadic import unit_index, unit_residues


class SymbolError(ValueError):
    pass


def n_units(s: int, e: int) -> int:
    return (s - 1) * s ** (e - 1)


def _equal_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise equality mask respecting the backend tolerance."""
    if a.dtype == object and b.dtype == object:
        return np.array([x == y for x, y in zip(a.reshape(-1), b.reshape(-1))], dtype=bool).reshape(a.shape)
    return np.abs(sc.as_complex(a) - sc.as_complex(b)) <= sc.FLOAT_ATOL


class DiagonalSymbol:
    __slots__ = ("s", "e", "core", "tail")

    def __init__(self, s: int, e: int, core, tail):
        core = np.asarray(core)
        tail = np.asarray(tail)
        U = n_units(s, e)
        if core.ndim != 2:
            core = core.reshape(-1, U)
        if core.shape[1] != U or tail.shape != (U,):
            raise SymbolError(f"shape mismatch: core {core.shape}, tail {tail.shape}, expected width {U}")
        if core.dtype != tail.dtype:
            core, tail = sc.unify_arrays(core, tail)
        self.s = s
        self.e = e
        self.core = core
        self.tail = tail
        self._canonicalize()

    # construction -------------------------------------------------------

    @classmethod
    def _raw(cls, s, e, core, tail) -> DiagonalSymbol:
        obj = cls.__new__(cls)
        obj.s, obj.e, obj.core, obj.tail = s, e, core, tail
        obj._canonicalize()
        return obj

    @classmethod
    def constant(cls, s: int, c=1) -> DiagonalSymbol:
        tail = sc.exact_array([c] * (s - 1)) if sc.is_exact_scalar(c) else np.full(s - 1, complex(c))
        return cls._raw(s, 1, tail[:0].reshape(0, s - 1), tail)

    @classmethod
    def zero(cls, s: int, exact: bool = True) -> DiagonalSymbol:
        return cls.constant(s, 0 if exact else 0.0)

    @classmethod
    def from_rows(cls, s: int, e: int, rows: Sequence[Sequence], tail: Sequence) -> DiagonalSymbol:
        """Core rows and tail given as sequences ordered by :func:`unit_residues`."""
        U = n_units(s, e)
        flat = [v for row in rows for v in row] + list(tail)
        if all(sc.is_exact_scalar(v) for v in flat):
            core = sc.exact_array([v for row in rows for v in row], shape=(len(rows), U))
            tl = sc.exact_array(list(tail))
        else:
            core = np.array([[complex(v) for v in row] for row in rows], dtype=complex).reshape(len(rows), U)
            tl = np.array([complex(v) for v in tail], dtype=complex)
        return cls(s, e, core, tl)

    @classmethod
    def from_table(cls, s: int, e: int, d: int, fn: Callable[[int, int], object], tail_fn: Callable[[int], object]):
        """Build from callables G(m, u) (m < d) and tail(u) on unit residues u mod s**e."""
        units = unit_residues(s, e)
        rows = [[fn(m, u) for u in units] for m in range(d)]
        return cls.from_rows(s, e, rows, [tail_fn(u) for u in units])

    @classmethod
    def indicator(cls, s: int, m: int, value=1) -> DiagonalSymbol:
        """chi_m: value on row m, zero elsewhere."""
        return cls.from_table(s, 1, m + 1, lambda k, u: value if k == m else 0, lambda u: 0)

    @classmethod
    def proj_below(cls, s: int, k: int) -> DiagonalSymbol:
        """Symbol of P_{<k}: 1 for m < k, tail 0."""
        return cls.from_table(s, 1, k, lambda m, u: 1, lambda u: 0)

    @classmethod
    def x_only(cls, s: int, e: int, values: Sequence) -> DiagonalSymbol:
        """m-independent symbol lambda(x) with the given value per unit residue."""
        return cls.from_rows(s, e, [], values)

    @classmethod
    def from_continuous_function(cls, s: int, k: int, f) -> DiagonalSymbol:
        """Symbol of M_f for a depth-k cylinder function f on Z_s.

        ``f`` is a callable or a mapping/sequence indexed by residues mod s**k.
        G(m, u) = f(s**m u mod s**k) for m < k and the tail is f(0).
        """
        get = f if callable(f) else (lambda r: f[r])
        if k == 0:
            return cls.constant(s, get(0))
        mod = s**k
        return cls.from_table(s, k, k, lambda m, u: get((s**m * u) % mod), lambda u: get(0))

    # canonical form -----------------------------------------------------

    def _canonicalize(self):
        s = self.s
        if self.tail.dtype != object:
            # round-off residue in a tail would otherwise masquerade as a non-ideal coefficient
            small = np.abs(self.tail) <= sc.FLOAT_ATOL
            if small.any():
                self.tail = np.where(small, 0j, self.tail)
        while self.e > 1:
            both = np.vstack([self.core, self.tail[None, :]])
            U = both.shape[1]
            blocks = both.reshape(both.shape[0], s, U // s)
            first = np.repeat(blocks[:, :1, :], s, axis=1)
            if not _equal_rows(blocks, first).all():
                break
            self.core = np.ascontiguousarray(blocks[:-1, 0, :])
            self.tail = np.ascontiguousarray(blocks[-1, 0, :])
            self.e -= 1
        d = self.core.shape[0]
        while d > 0 and _equal_rows(self.core[d - 1], self.tail).all():
            d -= 1
        if d != self.core.shape[0]:
            self.core = self.core[:d]

    # basic properties ---------------------------------------------------

    @property
    def d(self) -> int:
        return self.core.shape[0]

    @property
    def n_units(self) -> int:
        return self.tail.shape[0]

    @property
    def is_exact(self) -> bool:
        return self.tail.dtype == object

    def to_float(self) -> DiagonalSymbol:
        if not self.is_exact:
            return self
        return DiagonalSymbol._raw(self.s, self.e, sc.as_complex(self.core), sc.as_complex(self.tail))

    def is_zero(self) -> bool:
        return self.d == 0 and sc.array_is_zero(self.tail, sc.FLOAT_ATOL)

    def tail_is_zero(self) -> bool:
        return sc.array_is_zero(self.tail, sc.FLOAT_ATOL)

    def tail_is_constant(self) -> bool:
        return bool(_equal_rows(self.tail, np.repeat(self.tail[:1], self.n_units)).all())

    def tail_constant(self):
        """The constant tail value; raises if the tail depends on x."""
        if not self.tail_is_constant():
            raise SymbolError("tail depends on the unit part")
        return self.tail[0]

    def tail_symbol(self) -> DiagonalSymbol:
        """The m-independent symbol carrying this symbol's tail."""
        return DiagonalSymbol._raw(self.s, self.e, self.tail[:0].reshape(0, self.n_units), self.tail)

    def value(self, m: int, u: int):
        i = unit_index(self.s, self.e, u)
        return self.core[m, i] if m < self.d else self.tail[i]

    def rows(self, count: int) -> np.ndarray:
        """G(m, u) for 0 <= m < count as a (count, n_units) array."""
        if count <= self.d:
            return self.core[:count]
        pad = np.repeat(self.tail[None, :], count - self.d, axis=0)
        return np.vstack([self.core, pad]) if self.d else pad

    # refinement ---------------------------------------------------------

    def refined(self, e: int, d: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Core and tail re-expressed at residue depth ``e`` and m-depth ``d`` (non-canonical)."""
        if e < self.e:
            raise SymbolError("cannot coarsen below canonical depth")
        reps = self.s ** (e - self.e)
        core = np.tile(self.core, (1, reps)) if reps > 1 else self.core
        tail = np.tile(self.tail, reps) if reps > 1 else self.tail
        if d is not None and d > self.d:
            pad = np.repeat(tail[None, :], d - self.d, axis=0)
            core = np.vstack([core, pad]) if self.d else pad
        return core, tail

    def _aligned(self, other: DiagonalSymbol):
        if other.s != self.s:
            raise SymbolError(f"base mismatch: {self.s} vs {other.s}")
        e, d = max(self.e, other.e), max(self.d, other.d)
        c1, t1 = self.refined(e, d)
        c2, t2 = other.refined(e, d)
        if c1.dtype != c2.dtype:
            c1, c2 = sc.unify_arrays(c1, c2)
            t1, t2 = sc.unify_arrays(t1, t2)
        return e, d, c1, t1, c2, t2

    # algebra ------------------------------------------------------------

    def __add__(self, other: DiagonalSymbol) -> DiagonalSymbol:
        e, d, c1, t1, c2, t2 = self._aligned(other)
        return DiagonalSymbol._raw(self.s, e, c1 + c2, t1 + t2)

    def __sub__(self, other: DiagonalSymbol) -> DiagonalSymbol:
        e, d, c1, t1, c2, t2 = self._aligned(other)
        return DiagonalSymbol._raw(self.s, e, c1 - c2, t1 - t2)

    def __neg__(self) -> DiagonalSymbol:
        return DiagonalSymbol._raw(self.s, self.e, -self.core, -self.tail)

    def __mul__(self, other) -> DiagonalSymbol:
        if isinstance(other, DiagonalSymbol):
            e, d, c1, t1, c2, t2 = self._aligned(other)
            return DiagonalSymbol._raw(self.s, e, c1 * c2, t1 * t2)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> DiagonalSymbol:
        return DiagonalSymbol._raw(self.s, self.e, sc.scale_array(self.core, c), sc.scale_array(self.tail, c))

    def conj(self) -> DiagonalSymbol:
        return DiagonalSymbol._raw(self.s, self.e, sc.conj_array(self.core), sc.conj_array(self.tail))

    def alpha(self, k: int = 1) -> DiagonalSymbol:
        """(alpha G)(m) = G(m-1) for m >= 1 and 0 at m = 0, applied k times."""
        if k == 0:
            return self
        zero_rows = sc.exact_zeros((k, self.n_units)) if self.is_exact else np.zeros((k, self.n_units), complex)
        full = self.rows(self.d)
        return DiagonalSymbol._raw(self.s, self.e, np.vstack([zero_rows, full]), self.tail)

    def beta(self, k: int = 1) -> DiagonalSymbol:
        """(beta G)(m) = G(m+1), applied k times."""
        if k == 0 or self.d == 0:
            return self
        return DiagonalSymbol._raw(self.s, self.e, self.core[k:], self.tail)

    def weighted(self, weight: Callable[[np.ndarray], np.ndarray]) -> DiagonalSymbol:
        """Multiply row m by ``weight(m)``; only defined for zero-tail symbols."""
        if not self.tail_is_zero():
            raise SymbolError("row weighting needs a zero tail")
        if self.d == 0:
            return self
        w = np.asarray(weight(np.arange(self.d)))
        if self.is_exact and np.issubdtype(w.dtype, np.integer):
            wcol = np.array([sc.exact(int(x)) for x in w], dtype=object)[:, None]
            core = self.core * wcol
        else:
            core = sc.as_complex(self.core) * w.astype(float)[:, None]
            return DiagonalSymbol._raw(self.s, self.e, core, sc.as_complex(self.tail))
        return DiagonalSymbol._raw(self.s, self.e, core, self.tail)

    # norms and averages ---------------------------------------------------

    def sup_norm(self) -> float:
        vals = sc.abs_array(self.tail)
        m = float(vals.max()) if vals.size else 0.0
        if self.d:
            m = max(m, float(sc.abs_array(self.core).max()))
        return m

    def weighted_sup(self, N: int) -> float:
        """sup_{m,u} (1+m)**N |G(m, u)|; infinite when N >= 1 and the tail is nonzero."""
        if N == 0:
            return self.sup_norm()
        if not self.tail_is_zero():
            return math.inf
        if self.d == 0:
            return 0.0
        w = (1.0 + np.arange(self.d)) ** N
        return float((sc.abs_array(self.core) * w[:, None]).max())

    def e1_average(self):
        """Haar average of an m-independent symbol over Z_s^x."""
        if self.d:
            raise SymbolError("E1 average needs an m-independent symbol")
        total = self.tail.sum()
        if self.is_exact:
            return total / self.n_units
        return complex(total) / self.n_units

    # cylinder-function view ---------------------------------------------

    def zs_depth(self) -> int:
        """Smallest k such that the symbol comes from a depth-k function on Z_s."""
        if not self.tail_is_constant():
            raise SymbolError("symbol with x-dependent tail is not a function on Z_s")
        return max((m + self._row_depth(m) for m in range(self.d)), default=0)

    def _row_depth(self, m: int) -> int:
        # minimal residue depth (>= 1) on which row m depends
        row, e, s = self.core[m], self.e, self.s
        while e > 1:
            blocks = row.reshape(s, -1)
            if not _equal_rows(blocks, np.repeat(blocks[:1], s, axis=0)).all():
                break
            row, e = blocks[0], e - 1
        return e

    def cylinder_values(self, k: int) -> list:
        """Values f(r) for r = 0 .. s**k - 1 of the underlying function on Z_s."""
        if self.zs_depth() > k:
            raise SymbolError(f"symbol needs cylinder depth {self.zs_depth()}, table has {k}")
        s = self.s
        out = []
        for r in range(s**k):
            if r == 0:
                out.append(self.tail[0])
                continue
            m = 0
            rr = r
            while rr % s == 0:
                rr //= s
                m += 1
            out.append(self.tail[0] if m >= self.d else self.core[m, unit_index(s, self.e, rr)])
        return out

    # comparison and serialization -----------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiagonalSymbol):
            return NotImplemented
        if (self.s, self.e, self.d) != (other.s, other.e, other.d):
            return False
        return sc.arrays_equal(self.core, other.core) and sc.arrays_equal(self.tail, other.tail)

    __hash__ = None

    def close(self, other: DiagonalSymbol, tol: float = 1e-9) -> bool:
        e, d, c1, t1, c2, t2 = self._aligned(other)
        return sc.arrays_equal(c1, c2, tol) and sc.arrays_equal(t1, t2, tol)

    def __repr__(self) -> str:
        return f"DiagonalSymbol(s={self.s}, e={self.e}, d={self.d}, core={self.core.tolist()}, tail={self.tail.tolist()})"

    def to_json(self) -> dict:
        return {
            "s": self.s,
            "e": self.e,
            "d": self.d,
            "core": [[sc.scalar_to_json(v) for v in row] for row in self.core],
            "tail": [sc.scalar_to_json(v) for v in self.tail],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> DiagonalSymbol:
        s, e = int(data["s"]), int(data["e"])
        rows = [[sc.scalar_from_json(v) for v in row] for row in data.get("core", [])]
        tail = [sc.scalar_from_json(v) for v in data["tail"]]
        if "d" in data and int(data["d"]) != len(rows):
            raise SymbolError(f"d={data['d']} but {len(rows)} core rows given")
        return cls.from_rows(s, e, rows, tail)
