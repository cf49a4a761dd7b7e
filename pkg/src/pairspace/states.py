"""Particle-antiparticle pair states, Born weights and proper-time evolution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .cartan import CartanVector, Sector, SectorVector, G_SMALL
from .errors import NotUnitary, ZeroVector


@dataclass(frozen=True, eq=False)
class PairState:
    """Direct sum of a normalized particle piece and antiparticle piece.

    Each piece has unit Hilbert norm, so the total Hilbert norm is 2 and the
    indefinite norm vanishes.
    """

    plus: SectorVector
    minus: SectorVector

    def __post_init__(self):
        if self.plus.sector is not Sector.PLUS or self.minus.sector is not Sector.MINUS:
            raise ValueError("PairState expects (PLUS, MINUS) sector vectors")

    def piece(self, s: Sector) -> SectorVector:
        return self.plus if Sector.parse(s) is Sector.PLUS else self.minus

    def as_cartan(self) -> CartanVector:
        return CartanVector(np.concatenate([self.plus.components, self.minus.components]))

    @property
    def hilbert_norm2(self) -> float:
        c = self.as_cartan().components
        return float(np.vdot(c, c).real)

    @property
    def indefinite_norm2(self) -> float:
        c = self.as_cartan().components
        return float((c @ G_SMALL @ np.conj(c)).real)


def _normalized(raw, s: Sector) -> SectorVector:
    v = nx.as_vector(raw, 2)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ZeroVector(f"{s.name} piece is the zero vector")
    return SectorVector(s, v / norm)


def make_pair_state(plus_raw, minus_raw) -> PairState:
    """Build a pair state, scaling each piece to unit Hilbert norm."""
    return PairState(_normalized(plus_raw, Sector.PLUS), _normalized(minus_raw, Sector.MINUS))


def sector_weights(components) -> tuple[float, float]:
    """|c^mu|^2 divided by their sum.

    Dividing by the sum keeps the pair exactly complementary in floating point;
    for a normalized piece the divisor is 1 to rounding.
    """
    w = np.abs(np.asarray(components)) ** 2
    total = float(w.sum())
    return float(w[0] / total), float(w[1] / total)


def born_probabilities(st: PairState, s: Sector) -> tuple[float, float]:
    """Born weights w_(0), w_(1) of the chosen sector piece."""
    return sector_weights(st.piece(s).components)


def born_probabilities_adjoint(st: PairState, s: Sector) -> tuple[float, float]:
    """Same weights computed from the lowered (adjoint) components and Delta*."""
    piece = st.piece(s)
    lowered = piece.components @ piece.sector.metric
    amp = lowered @ np.eye(2)
    w = np.abs(amp) ** 2
    return float(w[0]), float(w[1])


@dataclass(frozen=True, eq=False)
class EvolutionOperator:
    """Block-diagonal unitary evolution between proper times ``tau0`` and ``tau``.

    ``u_plus``/``u_minus`` are intrinsic entries acting on bras from the right.
    Proper time is metadata only; nothing generates the blocks.
    """

    u_plus: np.ndarray
    u_minus: np.ndarray
    tau0: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "u_plus", nx.as_matrix(self.u_plus, 2))
        object.__setattr__(self, "u_minus", nx.as_matrix(self.u_minus, 2))

    def block(self, s: Sector) -> np.ndarray:
        return self.u_plus if Sector.parse(s) is Sector.PLUS else self.u_minus

    @property
    def matrix(self) -> np.ndarray:
        return nx.block_diag(self.u_plus, self.u_minus)

    def check_unitary(self, tol: float | None = None) -> None:
        for s in Sector:
            r = nx.unitary_residual(self.block(s))
            if r > (nx.default_tol() if tol is None else tol):
                raise NotUnitary(f"{s.name} evolution block is not unitary (residual {r:.3e})")

    def then(self, later: "EvolutionOperator") -> "EvolutionOperator":
        """Apply ``self`` first, then ``later`` (bras act on the right)."""
        return EvolutionOperator(
            self.u_plus @ later.u_plus, self.u_minus @ later.u_minus, self.tau0, later.tau
        )

    def intersection_report(self, tol: float | None = None) -> dict:
        """Whether the 4x4 matrix happens to lie in SU(2,2) ∩ U(4).

        Reported only; evolution operators are not required to avoid it.
        """
        tol = nx.default_tol() if tol is None else tol
        m = self.matrix
        pseudo = nx.max_abs_diff(m @ G_SMALL @ nx.dagger(m), G_SMALL)
        unit = nx.unitary_residual(m)
        d = abs(nx.det(m) - 1.0)
        return {
            "unitary_residual": unit,
            "pseudo_unitary_residual": pseudo,
            "det_residual": d,
            "in_intersection": bool(unit <= tol and pseudo <= tol and d <= tol),
        }


def make_evolution(u_plus, u_minus, tau0: float = 0.0, tau: float = 0.0,
                   tol: float | None = None) -> EvolutionOperator:
    op = EvolutionOperator(u_plus, u_minus, tau0, tau)
    op.check_unitary(tol)
    return op


def evolve(st: PairState, u: EvolutionOperator, tol: float | None = None) -> PairState:
    """Phi^mu(tau) = Phi^lam(tau0) U_lam^mu, basis held fixed."""
    u.check_unitary(tol)
    return PairState(
        SectorVector(Sector.PLUS, st.plus.components @ u.u_plus),
        SectorVector(Sector.MINUS, st.minus.components @ u.u_minus),
    )
