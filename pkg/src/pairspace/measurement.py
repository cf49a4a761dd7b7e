"""Projective measurements in the canonical basis and state reduction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .cartan import Sector, SectorVector, completeness
from .density import CompositeState, DensityOperator, _check_slot
from .errors import NotNormalized, ZeroProbabilityOutcome
from .observables import Observable
from .states import PairState, sector_weights

_PI = (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """pi_(mu) on one sector; ``matrix`` holds covariant entries diag(+-1, 0) or diag(0, +-1)."""

    sector: Sector
    outcome: int

    def __post_init__(self):
        object.__setattr__(self, "sector", Sector.parse(self.sector))
        if self.outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {self.outcome!r}")

    @property
    def intrinsic(self) -> np.ndarray:
        return _PI[self.outcome]

    @property
    def matrix(self) -> np.ndarray:
        return self.intrinsic @ self.sector.metric

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix @ self.sector.metric).real)


def projectors(s) -> tuple[ProjectiveMeasurement, ProjectiveMeasurement]:
    s = Sector.parse(s)
    return ProjectiveMeasurement(s, 0), ProjectiveMeasurement(s, 1)


def _normalized_piece(st: PairState, s: Sector, tol) -> np.ndarray:
    phi = st.piece(s).components
    r = abs(float(np.vdot(phi, phi).real) - 1.0)
    if r > (nx.default_tol() if tol is None else tol):
        raise NotNormalized(f"{s.name} piece is not normalized")
    return phi


def signed_values(st: PairState, s, tol: float | None = None) -> tuple[float, float]:
    """<Phi|pi_(mu)||Phi>_{g+-} = +-w_(mu)."""
    s = Sector.parse(s)
    phi = _normalized_piece(st, s, tol)
    return tuple(float((phi @ p.matrix @ np.conj(phi)).real) for p in projectors(s))


def measure_probabilities(st: PairState, s, tol: float | None = None) -> tuple[float, float]:
    """Outcome probabilities with the sector sign stripped."""
    s = Sector.parse(s)
    vals = np.abs(signed_values(st, s, tol))
    total = vals.sum()
    return float(vals[0] / total), float(vals[1] / total)


def reduce_vector(v: SectorVector, outcome: int, tol: float | None = None) -> SectorVector:
    tol = nx.default_tol() if tol is None else tol
    projected = v.components @ _PI[outcome]
    w = sector_weights(v.components)[outcome]
    if w <= tol:
        raise ZeroProbabilityOutcome(f"outcome {outcome} has probability {w:.3e}")
    return SectorVector(v.sector, projected / np.linalg.norm(projected))


def reduce_state(st: PairState, s, outcome: int, tol: float | None = None) -> SectorVector:
    """Projected piece rescaled to unit norm; its phase is kept."""
    s = Sector.parse(s)
    return reduce_vector(st.piece(s), outcome, tol)


def orthogonality_residuals(s) -> dict:
    """pi_(mu) pi_(nu) - delta_{mu nu} pi_(nu) for the four index pairs."""
    out = {}
    for mu in (0, 1):
        for nu in (0, 1):
            lhs = _PI[mu] @ _PI[nu]
            rhs = (1.0 if mu == nu else 0.0) * _PI[nu]
            out[(mu, nu)] = nx.max_abs_diff(lhs, rhs)
    return out


def completeness_check(d: DensityOperator) -> float:
    """Tr(rho sum_{mu nu} |e_mu> g*^{mu nu} <e_nu|) = w0 + w1."""
    s = d.sector
    op = d.matrix @ completeness(s)
    return float(np.trace(op @ s.metric @ s.metric).real)


def composite_measure(cs: CompositeState, slot: int, outcome: int,
                      tol: float | None = None) -> CompositeState:
    slot = _check_slot(len(cs.factors), slot)
    return cs.replace(slot, reduce_vector(cs.factors[slot], outcome, tol))


def sample_outcome(weights, rng: np.random.Generator) -> int:
    return int(rng.random() >= weights[0])


# -- observable-driven measurements -------------------------------------------


def spectral_projectors(a: Observable, s, tol: float | None = None):
    """Distinct eigenvalues of a restriction and their intrinsic projectors.

    Equal eigenvalues are merged, so a degenerate restriction has a single
    full-rank projector.
    """
    tol = nx.default_tol() if tol is None else tol
    s = Sector.parse(s)
    vals, vecs = nx.eig_hermitian(a.check(tol).intrinsic(s), tol)
    groups: list[tuple[float, np.ndarray]] = []
    for k, lam in enumerate(vals):
        col = vecs[:, k:k + 1]
        p = col @ nx.dagger(col)
        if groups and abs(groups[-1][0] - lam) <= 1e3 * tol:
            groups[-1] = (groups[-1][0], groups[-1][1] + p)
        else:
            groups.append((float(lam), p))
    return groups


def measure_observable(v: SectorVector, a: Observable, index: int,
                       tol: float | None = None) -> dict:
    """Apply the index-th spectral projector of ``a`` to ``v``.

    Returns the outcome value, its probability, the post-measurement vector and
    whether a reduction actually happened.
    """
    tol = nx.default_tol() if tol is None else tol
    groups = spectral_projectors(a, v.sector, tol)
    lam, p = groups[index]
    projected = v.components @ p
    w = float(np.vdot(projected, projected).real)
    if w <= tol:
        raise ZeroProbabilityOutcome(f"eigenvalue {lam} has probability {w:.3e}")
    new = SectorVector(v.sector, projected / np.sqrt(w))
    return {
        "value": lam,
        "probability": w,
        "state": new,
        "reduced": len(groups) > 1,
        "change": nx.max_abs_diff(new.components, v.components),
    }
