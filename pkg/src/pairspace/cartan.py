"""Cartan's space: C^4 with the indefinite product of signature (2, 2).

Conventions
-----------
Bras are row vectors and operators act on them from the right, so the
bra ``<L|A`` has components ``L @ A``.  A 2x2 restriction is stored by its
*intrinsic* mixed-index entries ``A_mu^nu`` (``<e_mu|A = A_mu^nu <e_nu|``);
its *covariant* entries are ``A_{mu nu} = A_mu^lam g_{lam nu}`` and are what
the printed tables of spectra show.  Lowering an index of a sector vector
multiplies by the sector metric on the right.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import numerics as nx
from .errors import NotBlockDiagonal, SectorMismatch


class Sector(enum.Enum):
    """Particle (``PLUS``) or antiparticle (``MINUS``) half of C^4."""

    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Sector.PLUS else -1

    @property
    def metric(self) -> np.ndarray:
        """Reduced Gram block g^{+-} = +-I2."""
        return _G_PLUS if self is Sector.PLUS else _G_MINUS

    @property
    def slice(self) -> slice:
        return slice(0, 2) if self is Sector.PLUS else slice(2, 4)

    @property
    def other(self) -> "Sector":
        return Sector.MINUS if self is Sector.PLUS else Sector.PLUS

    @classmethod
    def parse(cls, value) -> "Sector":
        if isinstance(value, Sector):
            return value
        key = str(value).strip().lower()
        if key in ("+", "plus", "p", "particle"):
            return cls.PLUS
        if key in ("-", "minus", "m", "antiparticle"):
            return cls.MINUS
        raise ValueError(f"unknown sector {value!r}")


def _frozen(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


_G_PLUS = _frozen(np.eye(2))
_G_MINUS = _frozen(-np.eye(2))

G_SMALL = _frozen(np.diag([1, 1, -1, -1]))
G_BIG = _frozen(np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]]))
DELTA = _frozen(np.eye(4))
DELTA2 = _frozen(np.eye(2))

P_PLUS = _frozen(np.diag([1, 1, 0, 0]))
P_MINUS = _frozen(np.diag([0, 0, 1, 1]))


def projector(s: Sector) -> np.ndarray:
    """4x4 g-orthogonal projector onto a sector."""
    return P_PLUS if s is Sector.PLUS else P_MINUS


GRAM_KINDS = ("g", "G", "gPlus", "gMinus", "gStarPlus", "gStarMinus", "DeltaI")


@dataclass(frozen=True, eq=False)
class GramOperator:
    kind: str
    matrix: np.ndarray

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.matrix)


def gram(kind: str) -> GramOperator:
    table = {
        "g": G_SMALL,
        "G": G_BIG,
        "gPlus": _G_PLUS,
        "gMinus": _G_MINUS,
        # the adjoint-space metrics coincide entrywise with the unstarred ones
        "gStarPlus": _G_PLUS,
        "gStarMinus": _G_MINUS,
        "DeltaI": DELTA,
    }
    if kind not in table:
        raise KeyError(f"unknown Gram operator {kind!r}; expected one of {GRAM_KINDS}")
    return GramOperator(kind, table[kind])


@dataclass(frozen=True, eq=False)
class CartanVector:
    """Contravariant components of a bra in C^4."""

    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "components", nx.as_vector(self.components, 4))


@dataclass(frozen=True, eq=False)
class SectorVector:
    """Reduced components (index 0, 1) of a bra living in one sector."""

    sector: Sector
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sector", Sector.parse(self.sector))
        object.__setattr__(self, "components", nx.as_vector(self.components, 2))

    @property
    def hilbert_norm2(self) -> float:
        return float(np.vdot(self.components, self.components).real)


@dataclass(frozen=True, eq=False)
class Restriction:
    """A 2x2 operator confined to one sector, held by intrinsic entries."""

    sector: Sector
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sector", Sector.parse(self.sector))
        object.__setattr__(self, "matrix", nx.as_matrix(self.matrix, 2))

    @property
    def covariant(self) -> np.ndarray:
        """Entries A_{mu nu} = <e_mu|A||e_nu>_{g}."""
        return self.matrix @ self.sector.metric

    @property
    def adjoint_entries(self) -> np.ndarray:
        """Entries A*^{mu nu} = g*^{mu lam} A_{lam sig} g*^{sig nu}."""
        gs = self.sector.metric
        return gs @ self.covariant @ gs

    @property
    def star(self) -> np.ndarray:
        """Pseudo-Hermitian conjugate g A^dagger g (intrinsic entries)."""
        gs = self.sector.metric
        return gs @ nx.dagger(self.matrix) @ gs

    def embed(self) -> np.ndarray:
        """Zero-padded 4x4 intrinsic matrix."""
        out = np.zeros((4, 4), dtype=complex)
        sl = self.sector.slice
        out[sl, sl] = self.matrix
        return out


# -- inner products ---------------------------------------------------------


def _comp(v):
    return v.components if isinstance(v, (CartanVector, SectorVector)) else nx.as_vector(v)


def hilbert_inner(a, b) -> complex:
    """Positive-definite product sum_{mu nu} a^mu Delta_{mu nu} conj(b^nu)."""
    x, y = _comp(a), _comp(b)
    return complex(x @ np.eye(len(x)) @ np.conj(y))


def indefinite_inner(a, b) -> complex:
    """Indefinite product sum_{mu nu} a^mu g_{mu nu} conj(b^nu)."""
    return complex(_comp(a) @ G_SMALL @ np.conj(_comp(b)))


def project(v, s: Sector) -> SectorVector:
    """Reduced components of ``<v|P^{+-}`` relabelled to indices 0, 1."""
    s = Sector.parse(s)
    return SectorVector(s, _comp(v)[s.slice])


def embed(sv: SectorVector) -> CartanVector:
    out = np.zeros(4, dtype=complex)
    out[sv.sector.slice] = sv.components
    return CartanVector(out)


def sector_inner(a: SectorVector, b: SectorVector) -> complex:
    """Definite product on one sector, positive on PLUS and negative on MINUS."""
    if a.sector is not b.sector:
        raise SectorMismatch(f"cannot pair {a.sector.name} with {b.sector.name}")
    return complex(a.components @ a.sector.metric @ np.conj(b.components))


def lower_index(v: SectorVector) -> np.ndarray:
    return v.components @ v.sector.metric


def raise_index(c, s: Sector) -> SectorVector:
    s = Sector.parse(s)
    # g* coincides with g for both sectors
    return SectorVector(s, nx.as_vector(c, 2) @ s.metric)


# -- block structure and restrictions --------------------------------------


class Blocks(NamedTuple):
    pp: np.ndarray
    pm: np.ndarray
    mp: np.ndarray
    mm: np.ndarray


def block_decompose(m) -> Blocks:
    m = nx.as_matrix(m, 4)
    return Blocks(m[:2, :2], m[:2, 2:], m[2:, :2], m[2:, 2:])


def reassemble(blocks: Blocks) -> np.ndarray:
    return np.block([[blocks.pp, blocks.pm], [blocks.mp, blocks.mm]])


def restrict(m, s: Sector, tol: float | None = None, label: str = "") -> Restriction:
    """Sector restriction of a block-diagonal 4x4 operator (intrinsic entries)."""
    s = Sector.parse(s)
    b = block_decompose(m)
    off = max(nx.max_abs_diff(b.pm, nx.Z2), nx.max_abs_diff(b.mp, nx.Z2))
    if off > (nx.default_tol() if tol is None else tol):
        raise NotBlockDiagonal(f"off-diagonal blocks do not vanish (max {off:.3e})")
    return Restriction(s, b.pp if s is Sector.PLUS else b.mm, label)


def dyad(x, y, s: Sector) -> np.ndarray:
    """Intrinsic matrix of |x><y| on sector ``s``; covariant entries conj(x_mu) y_nu."""
    s = Sector.parse(s)
    cov = np.outer(np.conj(nx.as_vector(x, 2)), nx.as_vector(y, 2))
    return cov @ s.metric


def completeness(s: Sector) -> np.ndarray:
    """Intrinsic matrix of sum |e_mu> g*^{mu nu} <e_nu|; equals I2 on both sectors."""
    s = Sector.parse(s)
    gstar = s.metric
    basis = np.eye(2)
    out = np.zeros((2, 2), dtype=complex)
    for mu in range(2):
        for nu in range(2):
            out += gstar[mu, nu] * dyad(basis[mu], basis[nu], s)
    return out


def outer_projector(v: SectorVector) -> Restriction:
    """|v><v| as a restriction; covariant entries conj(v^mu) v^nu."""
    return Restriction(v.sector, dyad(v.components, v.components, v.sector), "projector")


def restriction_trace(r: Restriction) -> complex:
    """Tr A = <e_mu|A||e_nu>_g g*^{nu mu}."""
    return complex(np.trace(r.covariant @ r.sector.metric))
