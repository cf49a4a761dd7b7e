"""SU(2,2) in the g- and G-realizations and its Poincare subgroup.

Matrices of group elements are held by covariant entries, the form in which
they are usually displayed.  The intrinsic (operator) matrix is recovered by
contracting on the right with the inverse metric, which for both realizations
is the metric itself.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .cartan import G_BIG, G_SMALL, Sector, block_decompose
from .errors import (BadNormalization, InvalidMember, NotHermitian, NotSpecialUnitary,
                     NotUnitary, NullTranslation, SingularA)

M_MATRIX = nx.INV_SQRT2 * np.block([[np.eye(2), -np.eye(2)], [np.eye(2), np.eye(2)]]).astype(complex)
M_MATRIX.setflags(write=False)

PAULI = (nx.I2, nx.SIGMA_X, nx.SIGMA_Y, nx.SIGMA_Z)


class Realization(enum.Enum):
    G_SMALL = "gReal"
    G_BIG = "GReal"

    @property
    def metric(self) -> np.ndarray:
        return G_SMALL if self is Realization.G_SMALL else G_BIG

    @property
    def other(self) -> "Realization":
        return Realization.G_BIG if self is Realization.G_SMALL else Realization.G_SMALL

    @classmethod
    def parse(cls, value) -> "Realization":
        if isinstance(value, Realization):
            return value
        key = str(value)
        for r in cls:
            if key in (r.value, r.name, r.value[0]):
                return r
        raise ValueError(f"unknown realization {value!r}")


def m_matrix() -> np.ndarray:
    return M_MATRIX


@dataclass(frozen=True, eq=False)
class GroupElement:
    realization: Realization
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "realization", Realization.parse(self.realization))
        object.__setattr__(self, "matrix", nx.as_matrix(self.matrix, 4))

    @property
    def intrinsic(self) -> np.ndarray:
        return self.matrix @ self.realization.metric

    @property
    def det(self) -> complex:
        return nx.det(self.matrix)


def _row(name, eq, residual, tol):
    return {"name": name, "eq": eq, "residual": float(residual), "pass": bool(residual <= tol)}


def verify_membership(e: GroupElement, tol: float | None = None) -> dict:
    """Metric preservation, unimodularity and the block-entry constraints."""
    tol = nx.default_tol() if tol is None else tol
    m = e.matrix
    metric = e.realization.metric
    rows = [
        _row("metric", "6.1" if e.realization is Realization.G_SMALL else "6.9a",
             nx.max_abs_diff(m @ metric @ nx.dagger(m), metric), tol),
        _row("unimodular", "SU(2,2)", abs(nx.det(m) - 1.0), tol),
    ]
    b = block_decompose(m)
    d = nx.dagger
    if e.realization is Realization.G_SMALL:
        rows += [
            _row("block_pp", "6.3a", nx.max_abs_diff(b.pp @ d(b.pp) - b.pm @ d(b.pm), nx.I2), tol),
            _row("block_mm", "6.3b", nx.max_abs_diff(b.mp @ d(b.mp) - b.mm @ d(b.mm), -nx.I2), tol),
            _row("block_cross", "6.3c", nx.max_abs_diff(b.pp @ d(b.mp) - b.pm @ d(b.mm), nx.Z2), tol),
        ]
    else:
        def skew(x):
            return nx.max_abs_diff(x, -d(x))
        rows += [
            _row("skew_upper", "6.10", skew(b.pp @ d(b.pm)), tol),
            _row("skew_lower", "6.10", skew(b.mm @ d(b.mp)), tol),
            _row("cross", "6.10", nx.max_abs_diff(b.pm @ d(b.mp) + b.pp @ d(b.mm), nx.I2), tol),
        ]
    return {"pass": all(r["pass"] for r in rows), "checks": rows,
            "failed": [r["name"] for r in rows if not r["pass"]]}


def convert(e: GroupElement, tol: float | None = None, check: bool = True) -> GroupElement:
    """Switch realization: U = M u M^dagger and back."""
    if check and not verify_membership(e, tol)["pass"]:
        raise InvalidMember(f"not a member of the {e.realization.value} realization")
    m = M_MATRIX
    if e.realization is Realization.G_SMALL:
        out = m @ e.matrix @ nx.dagger(m)
    else:
        out = nx.dagger(m) @ e.matrix @ m
    return GroupElement(e.realization.other, out)


# -- parameters ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LorentzParam:
    """An SL(2,C) matrix."""

    a: np.ndarray

    def __post_init__(self):
        a = nx.as_matrix(self.a, 2)
        if abs(nx.det(a) - 1.0) > 1e-10:
            raise SingularA(f"det a = {nx.det(a)}, expected 1")
        if np.linalg.cond(a) > 1e8:
            raise SingularA("a is too close to singular")
        object.__setattr__(self, "a", a)

    @property
    def inv_dagger(self) -> np.ndarray:
        return nx.dagger(np.linalg.inv(self.a))


def translation_to_w(t) -> np.ndarray:
    """W = (T^0 I + T^1 s1 + T^2 s2 + T^3 s3) / sqrt 2."""
    t = np.asarray(t, dtype=float)
    if t.shape != (4,):
        raise ValueError("a translation has four components")
    return nx.INV_SQRT2 * sum(c * p for c, p in zip(t, PAULI))


def w_to_translation(w, tol: float | None = None) -> np.ndarray:
    w = nx.as_matrix(w, 2)
    if not nx.is_hermitian(w, tol):
        raise NotHermitian("W must be Hermitian")
    return np.array([nx.SQRT2 * 0.5 * np.trace(p @ w).real for p in PAULI])


def minkowski_square(t) -> float:
    t = np.asarray(t, dtype=float)
    return float(t[0] ** 2 - t[1] ** 2 - t[2] ** 2 - t[3] ** 2)


@dataclass(frozen=True, eq=False)
class Translation:
    components: np.ndarray
    w: np.ndarray

    @classmethod
    def from_components(cls, t) -> "Translation":
        t = np.asarray(t, dtype=float)
        w = translation_to_w(t)
        if abs(nx.det(w)) < 1e-12:
            raise NullTranslation("null translations have det W = 0")
        return cls(t, w)

    @classmethod
    def from_w(cls, w, tol: float | None = None) -> "Translation":
        w = nx.as_matrix(w, 2)
        t = w_to_translation(w, tol)
        if abs(nx.det(w)) < 1e-12:
            raise NullTranslation("null translations have det W = 0")
        return cls(t, w)


def _as_w(t) -> np.ndarray:
    if isinstance(t, Translation):
        return t.w
    arr = np.asarray(t)
    if arr.shape == (4,):
        return Translation.from_components(arr).w
    return Translation.from_w(arr).w


def poincare(a, t, realization="GReal") -> GroupElement:
    """Ten-parameter Poincare element from a Lorentz part and a translation."""
    a = a if isinstance(a, LorentzParam) else LorentzParam(a)
    w = _as_w(t)
    ai = a.inv_dagger
    z = nx.Z2
    if Realization.parse(realization) is Realization.G_BIG:
        m = np.block([[1j * w @ ai, a.a], [ai, z]])
        return GroupElement(Realization.G_BIG, m)
    ip, im = nx.I2 + 1j * w, nx.I2 - 1j * w
    m = 0.5 * np.block([[a.a + ip @ ai, a.a - ip @ ai], [-a.a + im @ ai, -a.a - im @ ai]])
    return GroupElement(Realization.G_SMALL, m)


def lorentz(a, realization="GReal") -> GroupElement:
    a = a if isinstance(a, LorentzParam) else LorentzParam(a)
    ai = a.inv_dagger
    if Realization.parse(realization) is Realization.G_BIG:
        return GroupElement(Realization.G_BIG, np.block([[nx.Z2, a.a], [ai, nx.Z2]]))
    m = 0.5 * np.block([[a.a + ai, a.a - ai], [-a.a + ai, -a.a - ai]])
    return GroupElement(Realization.G_SMALL, m)


def check_w_normalized(w, tol: float | None = None) -> np.ndarray:
    w = nx.as_matrix(w, 2)
    tol = nx.default_tol() if tol is None else tol
    if not nx.is_hermitian(w, tol):
        raise NotHermitian("W must be Hermitian")
    if nx.max_abs_diff(w @ w, nx.I2) > tol:
        raise BadNormalization("W must square to the identity")
    return w


def _plus_block(beta, w):
    return nx.INV_SQRT2 * (nx.I2 + 1j * w) @ beta


def _minus_block(beta, w):
    return nx.INV_SQRT2 * nx.dagger(beta) @ (nx.I2 - 1j * w)


def unitary_poincare(beta, w, tol: float | None = None) -> GroupElement:
    """Block-diagonal Poincare element lying in both U(4) and the g-realization."""
    beta = nx.as_matrix(beta, 2)
    if not nx.is_unitary(beta, tol):
        raise NotUnitary("beta must be unitary")
    w = check_w_normalized(w, tol)
    return GroupElement(Realization.G_SMALL, nx.block_diag(_plus_block(beta, w),
                                                           _minus_block(beta, w)))


def intersection_residuals(e: GroupElement) -> dict:
    m = e.matrix
    b = block_decompose(m)
    return {
        "unitary": nx.unitary_residual(m),
        "pseudo_unitary": nx.max_abs_diff(m @ G_SMALL @ nx.dagger(m), G_SMALL),
        "block_det_product": abs(nx.det(b.pp) * nx.det(b.mm) - 1.0),
    }


def random_admissible_w(rng: np.random.Generator) -> np.ndarray:
    """W with W^2 = I: either +-I or a unit spatial direction n.sigma."""
    if rng.random() < 0.25:
        return (1 if rng.random() < 0.5 else -1) * nx.I2.copy()
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    return n[0] * nx.SIGMA_X + n[1] * nx.SIGMA_Y + n[2] * nx.SIGMA_Z


def random_w(rng: np.random.Generator) -> np.ndarray:
    """A Hermitian W away from the null cone."""
    while True:
        w = nx.random_hermitian(rng, 2)
        if abs(nx.det(w)) > 1e-2:
            return w


# -- dynamical subgroup ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DynElement:
    """Block-diagonal dynamical element; blocks hold covariant entries u_{mu nu}."""

    u_plus: np.ndarray
    u_minus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u_plus", nx.as_matrix(self.u_plus, 2))
        object.__setattr__(self, "u_minus", nx.as_matrix(self.u_minus, 2))

    def block(self, s) -> np.ndarray:
        return self.u_plus if Sector.parse(s) is Sector.PLUS else self.u_minus

    def operator(self, s) -> np.ndarray:
        """Intrinsic entries u_mu^nu = u_{mu lam} g*^{lam nu}."""
        s = Sector.parse(s)
        return self.block(s) @ s.metric

    def star(self, s) -> np.ndarray:
        """Intrinsic entries of u^star = g u^dagger g."""
        s = Sector.parse(s)
        return s.metric @ nx.dagger(self.operator(s)) @ s.metric

    @property
    def matrix(self) -> np.ndarray:
        return nx.block_diag(self.u_plus, self.u_minus)

    def element(self) -> GroupElement:
        return GroupElement(Realization.G_SMALL, self.matrix)

    def then(self, later: "DynElement") -> "DynElement":
        """Operator product self * later, expressed again by covariant blocks."""
        blocks = [self.operator(s) @ later.operator(s) @ s.metric for s in Sector]
        return DynElement(*blocks)

    def unitary_residual(self) -> float:
        return max(nx.unitary_residual(self.u_plus), nx.unitary_residual(self.u_minus))

    def star_dagger_residual(self) -> float:
        m = self.matrix
        return nx.max_abs_diff(G_SMALL @ nx.dagger(m) @ G_SMALL, nx.dagger(m))


def dyn_element(beta, w=None, tol: float | None = None) -> DynElement:
    tol_ = nx.default_tol() if tol is None else tol
    beta = nx.as_matrix(beta, 2)
    if not nx.is_unitary(beta, tol_) or abs(nx.det(beta) - 1.0) > tol_:
        raise NotSpecialUnitary("beta must be unitary with unit determinant")
    if w is None:
        return DynElement(beta, nx.dagger(beta))
    w = check_w_normalized(w, tol)
    return DynElement(_plus_block(beta, w), _minus_block(beta, w))


def single_particle_blocks(e: DynElement, s) -> np.ndarray:
    s = Sector.parse(s)
    out = np.zeros((4, 4), dtype=complex)
    out[s.slice, s.slice] = e.block(s)
    return out


def random_dyn_element(rng: np.random.Generator, with_w: bool = True) -> DynElement:
    beta = nx.random_su2(rng)
    return dyn_element(beta, random_admissible_w(rng) if with_w else None)
