"""Density restrictions, entropies, composite states and partial traces.

A density is stored by its intrinsic entries, which are Hermitian, positive
and of unit trace on both sectors.  Its covariant entries carry the sector
sign, so a pure antiparticle density prints as ``-conj(Phi)^T Phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import numerics as nx
from .cartan import Sector, SectorVector
from .errors import (ArityMismatch, IndexOutOfRange, InvalidDensity, LastFactor,
                     NotNormalized, OrderingViolation, ShapeMismatch)
from .observables import Observable
from .states import EvolutionOperator, PairState


@dataclass(frozen=True, eq=False)
class DensityOperator:
    sector: Sector
    matrix: np.ndarray
    pure: bool = False

    def __post_init__(self):
        object.__setattr__(self, "sector", Sector.parse(self.sector))
        object.__setattr__(self, "matrix", nx.as_matrix(self.matrix, 2))

    @property
    def covariant(self) -> np.ndarray:
        return self.matrix @ self.sector.metric

    @property
    def trace(self) -> float:
        """Tr rho, contracting the covariant entries with g*."""
        return float(np.trace(self.covariant @ self.sector.metric).real)

    def validate(self, tol: float | None = None) -> "DensityOperator":
        tol = nx.default_tol() if tol is None else tol
        if not nx.is_hermitian(self.matrix, tol):
            raise InvalidDensity("density is not pseudo-Hermitian")
        if abs(self.trace - 1.0) > tol:
            raise InvalidDensity(f"density trace is {self.trace}, expected 1")
        vals = np.linalg.eigvalsh(self.matrix)
        if vals.min() < -tol:
            raise InvalidDensity(f"density has negative eigenvalue {vals.min():.3e}")
        return self


def _require_normalized(v: SectorVector, tol):
    r = abs(v.hilbert_norm2 - 1.0)
    if r > (nx.default_tol() if tol is None else tol):
        raise NotNormalized(f"{v.sector.name} factor has Hilbert norm^2 {v.hilbert_norm2}")


def density_of(v: SectorVector, tol: float | None = None) -> DensityOperator:
    """rho = g |Phi><Phi| for a normalized sector vector."""
    _require_normalized(v, tol)
    phi = v.components
    return DensityOperator(v.sector, np.outer(np.conj(phi), phi), pure=True)


def density_from_state(st: PairState, s, tol: float | None = None) -> DensityOperator:
    return density_of(st.piece(Sector.parse(s)), tol)


def maximally_mixed(s) -> DensityOperator:
    return DensityOperator(Sector.parse(s), 0.5 * nx.I2, pure=False)


def random_density(rng: np.random.Generator, s, rank: int = 2) -> DensityOperator:
    a = rng.normal(size=(2, rank)) + 1j * rng.normal(size=(2, rank))
    m = a @ nx.dagger(a)
    return DensityOperator(Sector.parse(s), m / np.trace(m).real, pure=(rank == 1))


def _spectrum_entropy(vals, tol) -> float:
    vals = np.asarray(vals, dtype=float)
    if vals.min() < -tol:
        raise InvalidDensity(f"negative eigenvalue {vals.min():.3e}")
    p = vals[vals > tol]
    return float(-np.sum(p * np.log2(p))) + 0.0


def matrix_entropy(m, tol: float | None = None) -> float:
    """-Tr(m log2 m) of a Hermitian positive matrix, with 0 log 0 = 0."""
    tol = nx.default_tol() if tol is None else tol
    vals, _ = nx.eig_hermitian(m, tol)
    return _spectrum_entropy(vals, tol)


def entropy(d: DensityOperator, tol: float | None = None) -> float:
    """von Neumann entropy in bits of the intrinsic density matrix."""
    return matrix_entropy(d.matrix, tol)


def density_expectation(d: DensityOperator, a: Observable) -> float:
    """Tr(g rho A), the density route to <A>."""
    g = d.sector.metric
    return float(np.trace(g @ d.matrix @ a.intrinsic(d.sector)).real)


def evolve_density(d: DensityOperator, u: EvolutionOperator,
                   tol: float | None = None) -> DensityOperator:
    """g rho(tau) = U^star g rho(tau0) U."""
    u.check_unitary(tol)
    s = d.sector
    blk = u.block(s)
    ustar = s.metric @ nx.dagger(blk) @ s.metric
    grho = ustar @ (s.metric @ d.matrix) @ blk
    return DensityOperator(s, s.metric @ grho, d.pure)


# -- composites --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CompositeState:
    """Product of sector states, particles first."""

    factors: tuple

    @property
    def n_plus(self) -> int:
        return sum(1 for f in self.factors if f.sector is Sector.PLUS)

    @property
    def n_minus(self) -> int:
        return len(self.factors) - self.n_plus

    @property
    def amplitude(self) -> np.ndarray:
        """C^{mu ... sigma}: one binary index per factor."""
        vecs = [f.components for f in self.factors]
        out = reduce(np.multiply.outer, vecs)
        return np.asarray(out).reshape((2,) * len(vecs))

    @property
    def vector(self) -> np.ndarray:
        return nx.kron(*[f.components for f in self.factors])

    @property
    def gram(self) -> np.ndarray:
        return nx.kron(*[f.sector.metric for f in self.factors])

    def component(self, *indices) -> complex:
        return complex(self.amplitude[tuple(indices)])

    def replace(self, slot: int, v: SectorVector) -> "CompositeState":
        fs = list(self.factors)
        fs[slot] = v
        return CompositeState(tuple(fs))


def compose(states, tol: float | None = None) -> CompositeState:
    states = tuple(states)
    if not states:
        raise ArityMismatch("a composite needs at least one factor")
    seen_minus = False
    for k, v in enumerate(states):
        if v.sector is Sector.MINUS:
            seen_minus = True
        elif seen_minus:
            raise OrderingViolation(f"particle factor at slot {k} follows an antiparticle")
        _require_normalized(v, tol)
    return CompositeState(states)


def _check_slot(cs_len: int, j: int) -> int:
    if not isinstance(j, (int, np.integer)) or j < 0 or j >= cs_len:
        raise IndexOutOfRange(f"slot {j} out of range for {cs_len} factors")
    return int(j)


def composite_expectation(cs: CompositeState, obs, tol: float | None = None) -> float:
    """Product of per-factor expectations."""
    obs = list(obs)
    if len(obs) != len(cs.factors):
        raise ArityMismatch(f"{len(obs)} observables for {len(cs.factors)} factors")
    out = 1.0
    for v, a in zip(cs.factors, obs):
        a.check(tol)
        out *= float((v.components @ a.covariant(v.sector) @ np.conj(v.components)).real)
    return out


def dense_expectation(cs: CompositeState, ops) -> complex:
    """Psi (kron A_int) (kron g) Psi^dagger by explicit Kronecker contraction."""
    psi = cs.vector
    op = nx.kron(*[np.asarray(m) for m in ops])
    return complex(psi @ op @ cs.gram @ np.conj(psi))


def identity_observable() -> Observable:
    return Observable.from_intrinsic(nx.I2, nx.I2, "identity")


def embed_single(cs: CompositeState, j: int, a: Observable, tol: float | None = None) -> float:
    """Expectation of A at slot j with identities elsewhere.

    Each identity factor contributes its sector norm, so the result is
    (-1)^{N-} <A> on a particle slot and (-1)^{N- - 1} <A> on an
    antiparticle slot.
    """
    j = _check_slot(len(cs.factors), j)
    obs = [identity_observable()] * len(cs.factors)
    obs[j] = a
    return composite_expectation(cs, obs, tol)


def sign_law(cs: CompositeState, j: int) -> int:
    j = _check_slot(len(cs.factors), j)
    n = cs.n_minus - (1 if cs.factors[j].sector is Sector.MINUS else 0)
    return -1 if n % 2 else 1


@dataclass(frozen=True, eq=False)
class CompositeDensity:
    """Tensor product of factor densities times a scalar ``scale``.

    ``scale`` collects the inner-product factors picked up by partial traces.
    """

    factors: tuple
    scale: float = 1.0
    states: tuple | None = field(default=None)

    @property
    def sectors(self) -> tuple:
        return tuple(d.sector for d in self.factors)

    @property
    def matrix(self) -> np.ndarray:
        """Dense intrinsic matrix, scale included."""
        return self.scale * nx.kron(*[d.matrix for d in self.factors])

    @property
    def gram(self) -> np.ndarray:
        return nx.kron(*[d.sector.metric for d in self.factors])


def composite_density(cs: CompositeState, tol: float | None = None) -> CompositeDensity:
    return CompositeDensity(tuple(density_of(v, tol) for v in cs.factors), 1.0, cs.factors)


def composite_trace(cd: CompositeDensity) -> float:
    """scale * prod Tr rho_k."""
    return float(cd.scale * np.prod([d.trace for d in cd.factors]))


def composite_trace_dense(cd: CompositeDensity) -> float:
    """Trace of the dense covariant matrix contracted with kron g*."""
    g = cd.gram
    cov = cd.matrix @ g
    return float(np.trace(cov @ g).real)


def signed_value(cd: CompositeDensity) -> float:
    """<Psi|rho||Psi>_g on the generating product state; (-1)^{N-} when pure."""
    if cd.states is None:
        raise ValueError("signed value needs the generating states")
    psi = nx.kron(*[v.components for v in cd.states])
    return float((psi @ cd.matrix @ cd.gram @ np.conj(psi)).real)


def partial_trace(cd: CompositeDensity, slot: int) -> CompositeDensity:
    """Drop one factor, multiplying the scale by <Psi|g||Psi>_g of that factor.

    For a density the factor is the trace-form value Tr rho of the dropped
    slot, which is +1 for every normalized factor on either sector.
    """
    if len(cd.factors) < 2:
        raise LastFactor("cannot trace out the only factor")
    slot = _check_slot(len(cd.factors), slot)
    dropped = cd.factors[slot]
    factor = dropped.trace
    rest = cd.factors[:slot] + cd.factors[slot + 1:]
    states = None if cd.states is None else cd.states[:slot] + cd.states[slot + 1:]
    return CompositeDensity(rest, cd.scale * factor, states)


def partial_trace_report(cd: CompositeDensity, slot: int) -> dict:
    out = partial_trace(cd, slot)
    raw = composite_trace(out)
    return {"raw_trace": raw, "renormalized_trace": raw / out.scale, "scale": out.scale,
            "density": out}


def reduced_expectation(cd: CompositeDensity, j: int, a: Observable) -> float:
    """Trace out everything but slot j, then Tr(g rho A) times the scale."""
    j = _check_slot(len(cd.factors), j)
    cur, idx = cd, j
    while len(cur.factors) > 1:
        drop = 0 if idx != 0 else 1
        cur = partial_trace(cur, drop)
        if drop < idx:
            idx -= 1
    return cur.scale * density_expectation(cur.factors[0], a)


def _dense_entropy(m, tol) -> float:
    return matrix_entropy(0.5 * (m + nx.dagger(m)), tol)


def relative_entropy_matrix(a, b, tol: float | None = None) -> float:
    """S(a||b) = Tr a (log2 a - log2 b); infinite when supp a is not inside supp b."""
    tol = nx.default_tol() if tol is None else tol
    va, wa = nx.eig_hermitian(a, tol)
    vb, wb = nx.eig_hermitian(b, tol)
    # overlap |<a_i|b_j>|^2
    ov = np.abs(nx.dagger(wa) @ wb) ** 2
    total = 0.0
    for i, p in enumerate(va):
        if p <= tol:
            continue
        total += p * np.log2(p)
        for k, q in enumerate(vb):
            if ov[i, k] <= tol:
                continue
            if q <= tol:
                return float("inf")
            total -= p * ov[i, k] * np.log2(q)
    return float(total) + 0.0


def relative_mutual_entropies(a: CompositeDensity, b: CompositeDensity,
                              tol: float | None = None) -> dict:
    """Joint, conditional, mutual and relative entropies of two composites.

    The split for the conditional and mutual values is first factor versus the
    rest.  Subadditivity is checked for that split and concavity for the
    equal-weight mixture of ``a`` and ``b``.
    """
    tol = nx.default_tol() if tol is None else tol
    if a.sectors != b.sectors:
        raise ShapeMismatch(f"factor structures differ: {a.sectors} vs {b.sectors}")
    ma = a.matrix / a.scale
    mb = b.matrix / b.scale

    def split(cd):
        first = cd.factors[0].matrix
        rest = nx.kron(*[d.matrix for d in cd.factors[1:]]) if len(cd.factors) > 1 else None
        return first, rest

    out = {}
    for name, cd, m in (("a", a, ma), ("b", b, mb)):
        s_ab = _dense_entropy(m, tol)
        first, rest = split(cd)
        s_a = _dense_entropy(first, tol)
        s_b = _dense_entropy(rest, tol) if rest is not None else 0.0
        out[name] = {
            "joint": s_ab,
            "first": s_a,
            "rest": s_b,
            "conditional": s_ab - s_a,
            "mutual": s_a + s_b - s_ab,
            "subadditive": bool(s_ab <= s_a + s_b + 1e3 * tol),
        }
    mix = 0.5 * (ma + mb)
    s_mix = _dense_entropy(mix, tol)
    out["relative_ab"] = relative_entropy_matrix(ma, mb, tol)
    out["relative_ba"] = relative_entropy_matrix(mb, ma, tol)
    out["mixture"] = s_mix
    out["concave"] = bool(s_mix >= 0.5 * (out["a"]["joint"] + out["b"]["joint"]) - 1e3 * tol)
    return out
