"""Norms of the smooth subalgebra and the dense block-matrix oracle.

Every element acts fiberwise: one copy of l^2(Z_{>=0}) per unit residue u mod
s**e, with basis E_{s^m u}.  On zero-tail modes the action is confined to a
finite window of m, so operator norms there are largest singular values of
finite matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from . import scalars as sc
from .algebra import Element, gen_toeplitz
from .intervals import NormValue, nv_sum
from .sadic import unit_residues
from .symbols import DiagonalSymbol
from .trig import LambdaSymbol, TrigPoly, sup_interval_from_coeffs


class NormError(ValueError):
    pass


@dataclass(frozen=True)
class BlockMatrixRep:
    s: int
    e: int
    m_cut: int
    blocks: np.ndarray  # shape (units, m_cut, m_cut), complex

    @property
    def residues(self) -> tuple[int, ...]:
        return unit_residues(self.s, self.e)

    def block(self, u: int) -> np.ndarray:
        return self.blocks[self.residues.index(u % self.s**self.e)]

    def __matmul__(self, other: BlockMatrixRep) -> BlockMatrixRep:
        if (self.s, self.e, self.m_cut) != (other.s, other.e, other.m_cut):
            raise NormError("block representations are not aligned")
        return BlockMatrixRep(self.s, self.e, self.m_cut, self.blocks @ other.blocks)

    def norms(self) -> np.ndarray:
        """Largest singular value of every fiber block."""
        return _spectral_norms(self.blocks)

    def norm(self) -> float:
        return float(self.norms().max()) if self.blocks.size else 0.0


def _spectral_norms(blocks: np.ndarray) -> np.ndarray:
    if blocks.shape[-1] == 0:
        return np.zeros(blocks.shape[0])
    return np.linalg.norm(blocks, ord=2, axis=(-2, -1))


def _symbol_rows(sym: DiagonalSymbol, e: int, count: int) -> np.ndarray:
    """Complex values G(m, u) for m < count at residue depth e, shape (count, units)."""
    core, tail = sym.refined(e)
    core, tail = sc.as_complex(core), sc.as_complex(tail)
    if count <= core.shape[0]:
        return core[:count]
    pad = np.repeat(tail[None, :], count - core.shape[0], axis=0)
    return np.vstack([core, pad]) if core.shape[0] else pad


def to_blocks(a: Element, e: int | None = None, m_cut: int = 64, col_weight=None) -> BlockMatrixRep:
    """Dense truncation of ``a`` to the window m < m_cut in every fiber.

    ``col_weight(m)`` optionally multiplies column m (right multiplication by a
    diagonal operator such as (1+P)^N).
    """
    e = a.max_e if e is None else e
    if e < a.max_e:
        raise NormError(f"residue depth {e} is below the coefficient depth {a.max_e}")
    U = (a.s - 1) * a.s ** (e - 1)
    B = np.zeros((U, m_cut, m_cut), dtype=complex)
    for n, sym in a.terms.items():
        k = abs(n)
        if k >= m_cut:
            continue
        cols = np.arange(k, m_cut) if n < 0 else np.arange(m_cut - k)
        vals = _symbol_rows(sym, e, m_cut - k)  # F(m) for m < m_cut - k
        if n >= 0:
            B[:, cols + n, cols] = vals.T
        else:
            B[:, cols - k, cols] = vals.T
    if col_weight is not None:
        B = B * np.asarray(col_weight(np.arange(m_cut)), dtype=float)[None, None, :]
    return BlockMatrixRep(a.s, e, m_cut, B)


def window_size(a: Element) -> int:
    """Smallest w such that all nonzero-mode entries live in the w x w corner."""
    w = 0
    for n, sym in a.terms.items():
        w = max(w, sym.d + abs(n))
    return w


def _single_term_norm(n: int, sym: DiagonalSymbol, N: int) -> NormValue:
    if N == 0:
        return NormValue.exact(sym.sup_norm())
    if not sym.tail_is_zero():
        return NormValue.infinite()
    shift = max(0, -n)
    w = (1.0 + shift + np.arange(sym.d)) ** N
    return NormValue.exact(float((sc.abs_array(sym.core) * w[:, None]).max()) if sym.d else 0.0)


def _ideal_like(a: Element) -> bool:
    return all(sym.tail_is_zero() for n, sym in a.terms.items() if n != 0)


def fiber_norms(a: Element, N: int = 0, e: int | None = None) -> np.ndarray:
    """Exact per-fiber norms of a (1+P)^N for zero-tail elements (plus a mode-0 tail when N = 0)."""
    if not _ideal_like(a):
        raise NormError("fiber norms need zero tails on every nonzero mode")
    e = a.max_e if e is None else e
    U = (a.s - 1) * a.s ** (e - 1)
    w = window_size(a)
    out = np.zeros(U)
    if w:
        out = to_blocks(a, e, w, col_weight=lambda m: (1.0 + m) ** N).norms()
    if 0 in a.terms:
        tail = np.abs(sc.as_complex(a.terms[0].refined(e)[1]))
        if (tail > sc.FLOAT_ATOL).any() and N >= 1:
            return np.full(U, math.inf)
        out = np.maximum(out, tail)
    return out


def compression_norm(a: Element, m_cut: int, e: int | None = None) -> float:
    """Norm of the m_cut x m_cut compression; a lower bound for the operator norm."""
    return to_blocks(a, e, m_cut).norm()


def n_norm(a: Element, N: int = 0, m_cut: int = 64) -> NormValue:
    """||a (1+P)^N||, exact on zero-tail input, certified interval otherwise."""
    if N < 0:
        raise NormError("N must be nonnegative")
    if a.is_zero():
        return NormValue.exact(0.0)
    if len(a.terms) == 1:
        (n, sym), = a.terms.items()
        return _single_term_norm(n, sym, N)
    if _ideal_like(a):
        norms = fiber_norms(a, N)
        top = float(norms.max())
        return NormValue.infinite() if math.isinf(top) else NormValue.exact(top)
    if N >= 1:
        return NormValue.infinite()
    return _general_norm(a, m_cut)


def _general_norm(a: Element, m_cut: int) -> NormValue:
    # a = GT(sigma) + K per fiber, with K zero-tail and GT(sigma) a Toeplitz
    # operator whose norm is the sup of its symbol.
    lam = a.sigma()
    freqs, table = lam.coefficient_table(max(lam.e, 1))
    sig_lo, sig_hi = sup_interval_from_coeffs(freqs, table)
    K = a - gen_toeplitz(lam)
    k_norm = float(fiber_norms(K).max()) if not K.is_zero() else 0.0
    lower = max(compression_norm(a, m_cut), sig_lo)
    l1 = sum(sym.sup_norm() for sym in a.terms.values())
    upper = min(l1, sig_hi + k_norm)
    return NormValue.interval(lower, max(lower, upper))


def mn_norm(a: Element, M: int, N: int, m_cut: int = 64) -> NormValue:
    """sum_j binom(M, j) ||delta_P^j(a)||_N."""
    return nv_sum(comb(M, j) * n_norm(a.delta_P(j), N, m_cut) for j in range(M + 1))


def ck_norm(phi: TrigPoly | LambdaSymbol, k: int) -> NormValue:
    return phi.ck_norm(k)


def hs_norm(a: Element, M: int, N: int, S: float = 4.0, m_cut: int = 64) -> NormValue:
    """S ||q(a)||_{C^{M+N+2}} + ||a - T(q(a))||_{M,N}."""
    phi = a.quotient_q()
    return S * ck_norm(phi, M + N + 2) + mn_norm(a.ideal_part(), M, N, m_cut)


def dense_oracle_norm(a: Element, N: int = 0, m_cut: int | None = None) -> float:
    """Largest singular value of the dense truncation of a (1+P)^N (zero-tail input)."""
    m_cut = window_size(a) + 1 if m_cut is None else m_cut
    return to_blocks(a, a.max_e, m_cut, col_weight=lambda m: (1.0 + m) ** N).norm()


__all__ = [
    "BlockMatrixRep",
    "NormError",
    "NormValue",
    "ck_norm",
    "compression_norm",
    "dense_oracle_norm",
    "fiber_norms",
    "hs_norm",
    "mn_norm",
    "n_norm",
    "to_blocks",
    "window_size",
]
