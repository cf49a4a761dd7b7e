"""Pseudo-Hermitian observables and the standard catalogue.

Every observable is a pair of sector restrictions held by intrinsic entries.
On both sectors the reduced metric is a multiple of the identity, so
pseudo-Hermiticity ``g A^dagger g = A`` coincides with ordinary Hermiticity
of the intrinsic matrix; covariant entries carry the sector sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import numerics as nx
from .cartan import Restriction, Sector, dyad
from .errors import NonpositiveEnergy, NotPseudoHermitian, NotUnitary
from .states import PairState

X2 = nx.SIGMA_X
_HALF_Z = 0.5 * nx.SIGMA_Z


@dataclass(frozen=True, eq=False)
class Observable:
    plus: Restriction
    minus: Restriction
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.plus.sector is not Sector.PLUS or self.minus.sector is not Sector.MINUS:
            raise ValueError("Observable expects (PLUS, MINUS) restrictions")

    @classmethod
    def from_intrinsic(cls, plus, minus, kind="custom", **params) -> "Observable":
        return cls(Restriction(Sector.PLUS, plus, kind), Restriction(Sector.MINUS, minus, kind),
                   kind, dict(params))

    @classmethod
    def from_covariant(cls, plus, minus, kind="custom", **params) -> "Observable":
        """Build from covariant entries A_{mu nu}, as printed in spectra tables."""
        plus = nx.as_matrix(plus, 2) @ Sector.PLUS.metric
        minus = nx.as_matrix(minus, 2) @ Sector.MINUS.metric
        return cls.from_intrinsic(plus, minus, kind, **params)

    def restriction(self, s) -> Restriction:
        return self.plus if Sector.parse(s) is Sector.PLUS else self.minus

    def intrinsic(self, s) -> np.ndarray:
        return self.restriction(s).matrix

    def covariant(self, s) -> np.ndarray:
        return self.restriction(s).covariant

    @property
    def matrix(self) -> np.ndarray:
        """4x4 intrinsic matrix."""
        return nx.block_diag(self.plus.matrix, self.minus.matrix)

    @property
    def covariant_matrix(self) -> np.ndarray:
        return nx.block_diag(self.plus.covariant, self.minus.covariant)

    def star_residual(self) -> float:
        return max(nx.max_abs_diff(r.star, r.matrix) for r in (self.plus, self.minus))

    def is_pseudo_hermitian(self, tol: float | None = None) -> bool:
        return self.star_residual() <= (nx.default_tol() if tol is None else tol)

    def check(self, tol: float | None = None) -> "Observable":
        if not self.is_pseudo_hermitian(tol):
            raise NotPseudoHermitian(
                f"{self.kind} observable is not pseudo-Hermitian (residual {self.star_residual():.3e})"
            )
        return self

    def __add__(self, other: "Observable") -> "Observable":
        return Observable.from_intrinsic(self.plus.matrix + other.plus.matrix,
                                         self.minus.matrix + other.minus.matrix)

    def __sub__(self, other: "Observable") -> "Observable":
        return Observable.from_intrinsic(self.plus.matrix - other.plus.matrix,
                                         self.minus.matrix - other.minus.matrix)


def expectation(a: Observable, st: PairState, s, tol: float | None = None) -> float:
    """<Phi|A||Phi>_{g+-} = Phi^mu A_{mu nu} conj(Phi^nu)."""
    a.check(tol)
    s = Sector.parse(s)
    phi = st.piece(s).components
    return float((phi @ a.covariant(s) @ np.conj(phi)).real)


def spectral_decomposition(a: Observable, s, tol: float | None = None):
    """Eigenvalues and intrinsic dyads with A = sum_mu sign * a_mu |e_mu><e_mu|.

    A diagonal restriction keeps the canonical basis order, so the eigenvalues
    line up with the printed diagonal; otherwise they come out descending.
    ``sign`` is the sector sign, which the dyads carry through their metric.
    """
    a.check(tol)
    s = Sector.parse(s)
    m = a.intrinsic(s)
    if nx.max_abs_diff(m, np.diag(np.diag(m))) <= (nx.default_tol() if tol is None else tol):
        vals = np.diag(m).real.astype(float)
        vecs = np.eye(2, dtype=complex)
    else:
        vals, vecs = nx.eig_hermitian(m, tol)
    # eigen-bras are the conjugated eigencolumns; the dyad |e><e| then has
    # intrinsic entries sign * x x^dagger
    dyads = [dyad(np.conj(vecs[:, k]), np.conj(vecs[:, k]), s) for k in range(2)]
    return vals, dyads


def reconstruct(vals, dyads, s) -> np.ndarray:
    sign = Sector.parse(s).sign
    return sum(sign * v * d for v, d in zip(vals, dyads))


def commutator(a, b) -> dict:
    """Per-sector intrinsic commutators [A+-, B+-]."""
    a, b = _as_observable(a), _as_observable(b)
    return {s: a.intrinsic(s) @ b.intrinsic(s) - b.intrinsic(s) @ a.intrinsic(s) for s in Sector}


def commutes(a, b, tol: float | None = None) -> bool:
    tol = nx.default_tol() if tol is None else tol
    return all(nx.max_abs_diff(c, nx.Z2) <= tol for c in commutator(a, b).values())


# -- catalogue ---------------------------------------------------------------


def make_charge(q) -> Observable:
    """Charge +q on particles and -q on antiparticles; covariant diag(q, q) on both."""
    q = float(q)
    return Observable.from_intrinsic(q * nx.I2, -q * nx.I2, "charge", q=q)


def make_spin() -> Observable:
    return Observable.from_intrinsic(_HALF_Z, _HALF_Z, "spin")


def make_polarization() -> Observable:
    return Observable.from_intrinsic(nx.SIGMA_Z, nx.SIGMA_Z, "polarization")


def make_energy(E, branch: str | None = "I") -> Observable:
    """Energy restriction; branch "I", "II", or None for the difference H_I - H_II."""
    E = float(E)
    if not E > 0.0:
        raise NonpositiveEnergy(f"energy must be positive, got {E}")
    h1 = Observable.from_intrinsic(E * nx.SIGMA_Z, -E * nx.SIGMA_Z, "energy_I", E=E)
    h2 = Observable.from_intrinsic(-E * nx.SIGMA_Z, E * nx.SIGMA_Z, "energy_II", E=E)
    if branch in ("I", "i", 1):
        return h1
    if branch in ("II", "ii", 2):
        return h2
    if branch is None:
        d = h1 - h2
        return Observable(d.plus, d.minus, "energy", {"E": E})
    raise ValueError(f"unknown energy branch {branch!r}")


@dataclass(frozen=True, eq=False)
class ChargeConjugation:
    """Cross-sector operator; ``q_plus`` maps C+ to C- and ``q_minus`` maps back.

    Both blocks hold intrinsic entries.  Covariant entries of a block are
    taken with the metric of its target sector.
    """

    q_plus: np.ndarray
    q_minus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q_plus", nx.as_matrix(self.q_plus, 2))
        object.__setattr__(self, "q_minus", nx.as_matrix(self.q_minus, 2))

    def block(self, s) -> np.ndarray:
        return self.q_plus if Sector.parse(s) is Sector.PLUS else self.q_minus

    def covariant_block(self, s) -> np.ndarray:
        s = Sector.parse(s)
        return self.block(s) @ s.other.metric

    @property
    def matrix(self) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        out[:2, 2:] = self.q_plus
        out[2:, :2] = self.q_minus
        return out

    @property
    def covariant_matrix(self) -> np.ndarray:
        return self.matrix @ np.diag([1, 1, -1, -1])

    def star_block(self, s) -> np.ndarray:
        """Intrinsic entries of Q(p+-)^star = g_+- Q(p+-)^dagger g_-+."""
        s = Sector.parse(s)
        return s.metric @ nx.dagger(self.block(s)) @ s.other.metric

    def transport(self, piece) -> np.ndarray:
        """Components of <Phi(p+-)| Q(p+-), which live in the other sector."""
        return piece.components @ self.block(piece.sector)


def make_charge_conjugation() -> ChargeConjugation:
    return ChargeConjugation(X2, X2)


def _exact(m):
    out = np.empty((2, 2), dtype=object)
    for idx, x in np.ndenumerate(np.asarray(m, dtype=complex)):
        if x.imag != 0.0:
            raise ValueError("exact mode needs real entries")
        out[idx] = Fraction(x.real)
    return out


def _residual(a, b):
    d = np.asarray(a) - np.asarray(b)
    return max(abs(x) for x in d.ravel())


def conjugation_identities(c: ChargeConjugation, q=1, exact: bool = False,
                           tol: float | None = None) -> dict:
    """Check the algebra of a charge conjugation, sector by sector.

    With ``exact=True`` every product is carried out on ``Fraction`` entries,
    so a passing identity has residual exactly zero.
    """
    if exact:
        one, zero = Fraction(1), Fraction(0)
        q = Fraction(q)
        blk = {Sector.PLUS: _exact(c.q_plus), Sector.MINUS: _exact(c.q_minus)}
        tol = Fraction(0)
    else:
        one, zero = 1.0, 0.0
        q = float(q)
        blk = {s: c.block(s) for s in Sector}
        tol = nx.default_tol() if tol is None else tol
    ident = np.array([[one, zero], [zero, one]], dtype=object if exact else complex)
    g = {Sector.PLUS: ident, Sector.MINUS: -ident}
    charge = {Sector.PLUS: q * ident, Sector.MINUS: -q * ident}

    def dag(m):
        return np.array([[m[j, i].conjugate() for j in range(2)] for i in range(2)],
                        dtype=m.dtype)

    rows = []
    for s in Sector:
        o = s.other
        qs, qo = blk[s], blk[o]
        cov_s, cov_o = qs @ g[o], qo @ g[s]
        star = g[s] @ dag(qs) @ g[o]
        checks = [
            ("inverse", "3.35", _residual(qs @ qo, ident)),
            ("inverse_covariant", "3.35", _residual(cov_s @ g[o] @ cov_o @ g[s], ident)),
            ("composition_metric", "3.36", _residual(qs @ qo @ g[s], g[s])),
            ("charge_product", "3.41", _residual(charge[s] @ qs @ charge[o] @ qo @ g[s],
                                                 -q * q * g[s])),
            ("pseudo_anti_hermitian", "3.47", _residual(star, -qo)),
            ("covariant_antisymmetry", "3.47", _residual(cov_s, -(qo @ g[s]))),
            ("sign_computation", "3.48", _residual(qs @ star @ g[s], g[o])),
        ]
        for name, eq, r in checks:
            rows.append({"name": name, "sector": s.value, "eq": eq, "residual": r,
                         "pass": bool(r <= tol)})
    return {"pass": all(r["pass"] for r in rows), "checks": rows,
            "failed": [f"{r['name']}{r['sector']}" for r in rows if not r["pass"]]}


def transport_preserves_product(c: ChargeConjugation, plus_components) -> float:
    """Residual of <Phi|Q||Phi>_g = <Phi|Phi>_g for the pair Phi- = Phi+ Q(p+)."""
    from .states import make_pair_state

    plus = nx.as_vector(plus_components, 2)
    plus = plus / np.linalg.norm(plus)
    st = make_pair_state(plus, plus @ c.q_plus)
    phi = st.as_cartan().components
    g = np.diag([1, 1, -1, -1])
    lhs = phi @ c.matrix @ g @ np.conj(phi)
    rhs = phi @ g @ np.conj(phi)
    return float(abs(lhs - rhs))


@dataclass(frozen=True, eq=False)
class VirtualParticleOp:
    """Sector-local involution swapping the two basis bras."""

    sector: Sector
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sector", Sector.parse(self.sector))
        object.__setattr__(self, "matrix", nx.as_matrix(self.matrix, 2))

    @property
    def covariant(self) -> np.ndarray:
        return self.matrix @ self.sector.metric

    def embed(self) -> np.ndarray:
        """Zero-padded 4x4 covariant matrix."""
        out = np.zeros((4, 4), dtype=complex)
        out[self.sector.slice, self.sector.slice] = self.covariant
        return out

    def as_observable(self) -> Observable:
        mats = {self.sector: self.matrix, self.sector.other: nx.Z2}
        return Observable.from_intrinsic(mats[Sector.PLUS], mats[Sector.MINUS], "virtual",
                                         sector=self.sector.value)

    def conjugate(self, m) -> np.ndarray:
        return self.matrix @ np.asarray(m) @ self.matrix


def make_virtual(s) -> VirtualParticleOp:
    return VirtualParticleOp(Sector.parse(s), X2)


def _as_observable(a) -> Observable:
    return a.as_observable() if isinstance(a, VirtualParticleOp) else a


def virtual_swap_residuals(v: VirtualParticleOp) -> dict:
    """<e0|v Omega v||e0> against <e1|Omega||e1> for spin and polarization."""
    s = v.sector
    out = {}
    for name, obs in (("spin", make_spin()), ("polarization", make_polarization())):
        omega = obs.intrinsic(s)
        lhs = (v.conjugate(omega) @ s.metric)[0, 0]
        rhs = (omega @ s.metric)[1, 1]
        out[name] = float(abs(lhs - rhs))
    return out


def scheme_report(E=1.0, tol: float | None = None) -> dict:
    """Arrow-diagram consistency of conjugation and virtual-particle maps.

    Conjugation carries (+-E, up/down) on one sector to (-+E, down/up) on the
    other; a virtual operator does the same within its own sector.
    """
    tol = nx.default_tol() if tol is None else tol
    c = make_charge_conjugation()
    h1, h2 = make_energy(E, "I"), make_energy(E, "II")
    rows = []
    for s in Sector:
        o = s.other
        qs, qo = c.block(s), c.block(o)
        v = make_virtual(s)
        for name, obs in (("spin", make_spin()), ("polarization", make_polarization())):
            rows.append((f"conjugation_{name}{s.value}",
                         nx.max_abs_diff(qs @ obs.intrinsic(o) @ qo, -obs.intrinsic(s))))
            rows.append((f"virtual_{name}{s.value}",
                         nx.max_abs_diff(v.conjugate(obs.intrinsic(s)), -obs.intrinsic(s))))
        rows.append((f"conjugation_energy{s.value}",
                     nx.max_abs_diff(qs @ h2.intrinsic(o) @ qo, -h1.intrinsic(s))))
        rows.append((f"virtual_energy{s.value}",
                     nx.max_abs_diff(v.conjugate(h1.intrinsic(s)), -h1.intrinsic(s))))
    checks = [{"name": n, "residual": r, "pass": bool(r <= tol)} for n, r in rows]
    return {"pass": all(x["pass"] for x in checks), "checks": checks}


# -- local basis changes -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class BasisChange:
    """New basis bras <e'_mu| = <e_mu| u on each sector, with their Gram blocks."""

    u_plus: np.ndarray
    u_minus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u_plus", nx.as_matrix(self.u_plus, 2))
        object.__setattr__(self, "u_minus", nx.as_matrix(self.u_minus, 2))

    def block(self, s) -> np.ndarray:
        return self.u_plus if Sector.parse(s) is Sector.PLUS else self.u_minus

    def gram(self, s) -> np.ndarray:
        s = Sector.parse(s)
        u = self.block(s)
        return nx.dagger(u) @ s.metric @ u

    @property
    def gram_plus(self) -> np.ndarray:
        return self.gram(Sector.PLUS)

    @property
    def gram_minus(self) -> np.ndarray:
        return self.gram(Sector.MINUS)

    def check_unitary(self, tol: float | None = None) -> None:
        for s in Sector:
            r = nx.unitary_residual(self.block(s))
            if r > (nx.default_tol() if tol is None else tol):
                raise NotUnitary(f"{s.name} basis change is not unitary (residual {r:.3e})")

    @classmethod
    def uniform(cls, u) -> "BasisChange":
        return cls(u, u)


def apply_basis_change(a: Observable, bc: BasisChange, tol: float | None = None):
    """New-basis operator a = u^dagger A u and the Gram blocks u^dagger g u."""
    bc.check_unitary(tol)
    mats = {s: nx.dagger(bc.block(s)) @ a.intrinsic(s) @ bc.block(s) for s in Sector}
    out = Observable.from_intrinsic(mats[Sector.PLUS], mats[Sector.MINUS], a.kind, **a.params)
    return out, {s: bc.gram(s) for s in Sector}


def primed_entries(a_new: Observable, bc: BasisChange, s) -> np.ndarray:
    """<e'_mu|a||e'_nu> taken with the new Gram block."""
    s = Sector.parse(s)
    u = bc.block(s)
    return u @ a_new.intrinsic(s) @ bc.gram(s) @ nx.dagger(u)


def primed_expectation(a_new: Observable, bc: BasisChange, st: PairState, s) -> float:
    """<phi|a||phi> with phi = Phi u, contracted against the new Gram block."""
    s = Sector.parse(s)
    phi = st.piece(s).components @ bc.block(s)
    return float((phi @ a_new.intrinsic(s) @ bc.gram(s) @ np.conj(phi)).real)


def make_helicity(bc: BasisChange, base: str = "spin", tol: float | None = None) -> Observable:
    """h = H^dagger Omega H with Omega the spin (fermions) or polarization (bosons).

    Row 0 of the new basis is the left state and row 1 the right state.
    """
    ref = _base_observable(base)
    h, _ = apply_basis_change(ref, bc, tol)
    return Observable(h.plus, h.minus, "helicity", {"base": ref.kind})


def interchange_spin_polarization(bc: BasisChange, direction: str,
                                  tol: float | None = None) -> Observable:
    """Carry polarization into a fermionic description, or spin into a bosonic one.

    ``"FermionGetsPi"`` returns P^dagger Pi P, whose entries in the p-basis are
    the polarization spectrum and which satisfies P (result) P^dagger = Pi.
    ``"BosonGetsSigma"`` does the same for spin with Z.
    """
    key = direction.replace("Π", "Pi").replace("Σ", "Sigma").lower()
    if key in ("fermiongetspi", "fermion"):
        ref = make_polarization()
    elif key in ("bosongetssigma", "boson"):
        ref = make_spin()
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out, _ = apply_basis_change(ref, bc, tol)
    return Observable(out.plus, out.minus, f"interchanged_{ref.kind}", {"direction": direction})


def _base_observable(base: str) -> Observable:
    key = base.lower()
    if key in ("spin", "sigma", "fermion"):
        return make_spin()
    if key in ("polarization", "pi", "boson"):
        return make_polarization()
    raise ValueError(f"unknown helicity base {base!r}")
