"""K0 classes of ideal projections, winding numbers and the index pairing.

K0 of the algebra is C(Z_s^x, Z); a class is stored as its values on the unit
residues mod s**e.  K1 vanishes and is not computed.  The group splits via
evaluation at the residue 1, f -> -f(1); see :func:`evaluation_splitting`.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .algebra import Element
from .norms import n_norm, to_blocks, window_size
from .sadic import unit_residues
from .trig import TrigPoly

RANK_THRESHOLD = 0.5
WINDING_ROUND_TOL = 0.1


class KTheoryError(ValueError):
    pass


class NotProjectionError(KTheoryError):
    pass


class NotInvertibleError(KTheoryError):
    pass


@dataclass(frozen=True)
class K0Class:
    """Integer-valued locally constant function on Z_s^x, sampled at depth e."""

    s: int
    e: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(unit_residues(self.s, self.e)):
            raise KTheoryError(f"expected {len(unit_residues(self.s, self.e))} values, got {len(self.values)}")

    @classmethod
    def constant(cls, s: int, c: int, e: int = 1) -> K0Class:
        return cls(s, e, (int(c),) * len(unit_residues(s, e)))

    def value(self, u: int) -> int:
        return self.values[unit_residues(self.s, self.e).index(u % self.s**self.e)]

    def refine(self, e: int) -> K0Class:
        if e < self.e:
            raise KTheoryError("cannot coarsen a class")
        return K0Class(self.s, e, tuple(self.value(u) for u in unit_residues(self.s, e)))

    def _pair(self, other: K0Class) -> tuple[K0Class, K0Class]:
        if self.s != other.s:
            raise KTheoryError(f"base mismatch: {self.s} vs {other.s}")
        e = max(self.e, other.e)
        return self.refine(e), other.refine(e)

    def __add__(self, other: K0Class) -> K0Class:
        a, b = self._pair(other)
        return K0Class(a.s, a.e, tuple(x + y for x, y in zip(a.values, b.values)))

    def __neg__(self) -> K0Class:
        return K0Class(self.s, self.e, tuple(-v for v in self.values))

    def scale(self, k: int) -> K0Class:
        return K0Class(self.s, self.e, tuple(k * v for v in self.values))

    def __eq__(self, other) -> bool:
        if not isinstance(other, K0Class):
            return NotImplemented
        if self.s != other.s:
            return False
        a, b = self._pair(other)
        return a.values == b.values

    def __hash__(self):
        return hash((self.s, self.coarsest().values))

    def coarsest(self) -> K0Class:
        for e in range(1, self.e + 1):
            cand = K0Class(self.s, e, tuple(self.value(u) for u in unit_residues(self.s, e)))
            if cand.refine(self.e).values == self.values:
                return cand
        return self

    def is_constant(self) -> bool:
        return len(set(self.values)) <= 1

    def to_json(self) -> dict:
        return {"e": self.e, "values": list(self.values)}

    @classmethod
    def from_json(cls, data: Mapping, s: int) -> K0Class:
        return cls(s, int(data["e"]), tuple(int(v) for v in data["values"]))


def projection_defects(p: Element) -> dict[str, float]:
    """Certified upper bounds on ||p^2 - p|| and ||p* - p||."""
    return {
        "idempotent": n_norm(p * p - p, 0).upper,
        "selfadjoint": n_norm(p.adjoint() - p, 0).upper,
    }


def fiber_ranks(p: Element, e: int) -> list[int]:
    w = window_size(p)
    if w == 0:
        return [0] * len(unit_residues(p.s, e))
    blocks = to_blocks(p, e, w).blocks
    herm = 0.5 * (blocks + np.conj(np.swapaxes(blocks, -1, -2)))
    eig = np.linalg.eigvalsh(herm)
    return [int(k) for k in (eig > RANK_THRESHOLD).sum(axis=-1)]


def k0_class(p: Element, tol: float = 1e-9, e: int | None = None) -> K0Class:
    """Class of an ideal projection: the rank of each residue fiber."""
    if not p.in_Is():
        raise KTheoryError("k0_class needs an element of the ideal (zero tails)")
    defects = projection_defects(p)
    if max(defects.values()) > tol:
        raise NotProjectionError(f"not a projection within tol={tol}: {defects}")
    e = max(p.max_e, e or 1)
    return K0Class(p.s, e, tuple(fiber_ranks(p, e)))


def winding_number(phi: TrigPoly, tol: float = 1e-9) -> int:
    """Winding number of an invertible trigonometric polynomial around 0."""
    if phi.is_zero():
        raise NotInvertibleError("zero symbol")
    sampled, certified = phi.min_abs()
    if certified <= tol:
        raise NotInvertibleError(f"|phi| is not certified away from 0 (lower bound {certified:.3e})")
    lip = 2 * math.pi * phi.derivative(1).l1_norm()
    # consecutive samples then differ by less than half the modulus, so no phase jump exceeds pi/6
    M = max(64 * (phi.degree + 1), int(math.ceil(2 * lip / certified)) + 1)
    vals = np.asarray(phi(np.arange(M + 1) / M), dtype=complex)
    total = float(np.angle(vals[1:] / vals[:-1]).sum()) / (2 * math.pi)
    k = round(total)
    if abs(total - k) >= WINDING_ROUND_TOL:
        raise NotInvertibleError(f"phase increment {total:.4f} is not near an integer")
    return int(k)


def index_pairing(phi: TrigPoly, s: int = 2, tol: float = 1e-9) -> K0Class:
    """ind[phi] = -winding(phi) [I - VV*]_0."""
    unit_class = k0_class(Element.identity(s) - Element.V(s) * Element.Vstar(s), tol)
    return unit_class.scale(-winding_number(phi, tol))


def evaluation_splitting(cls: K0Class) -> int:
    """The splitting homomorphism f -> -f(1)."""
    return -cls.value(1)


def k0_from_values(s: int, e: int, values: Sequence[int]) -> K0Class:
    return K0Class(s, e, tuple(int(v) for v in values))


__all__ = [
    "K0Class",
    "KTheoryError",
    "NotInvertibleError",
    "NotProjectionError",
    "RANK_THRESHOLD",
    "evaluation_splitting",
    "fiber_ranks",
    "index_pairing",
    "k0_class",
    "k0_from_values",
    "projection_defects",
    "winding_number",
]
