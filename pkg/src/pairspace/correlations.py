"""Frame changes under the dynamical subgroup and their invariants.

A frame change moves the computational basis, <e'_mu| = <e_mu| u, while
states keep their amplitudes.  Observables follow one of two laws: either
the operator is kept and its entries move (``OPERATOR_INVARIANT``), or the
entries are kept and the operator is conjugated (``MATRIX_INVARIANT``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import numerics as nx
from .cartan import P_MINUS, P_PLUS, Sector, SectorVector
from .density import CompositeState
from .errors import ModeConflict, NotDiagonalizable
from .group import DynElement
from .measurement import _PI
from .observables import (ChargeConjugation, Observable, commutator, make_charge,
                          make_energy, make_spin)
from .states import PairState, sector_weights


class Mode(enum.Enum):
    OPERATOR_INVARIANT = "OperatorInvariant"
    MATRIX_INVARIANT = "MatrixInvariant"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        for m in cls:
            if value in (m.value, m.name):
                return m
        raise ValueError(f"unknown mode {value!r}")


@dataclass(frozen=True, eq=False)
class FrameTransform:
    element: DynElement
    mode: Mode = Mode.OPERATOR_INVARIANT

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode.parse(self.mode))

    def u(self, s) -> np.ndarray:
        return self.element.operator(s)

    def ustar(self, s) -> np.ndarray:
        return self.element.star(s)


def transform_basis(ft: FrameTransform) -> dict:
    """Primed basis rows and their Gram and Delta matrices, per sector."""
    out = {}
    for s in Sector:
        u = ft.u(s)
        basis = np.eye(2) @ u
        out[s] = {
            "basis": basis,
            "gram": basis @ s.metric @ nx.dagger(basis),
            "delta": basis @ nx.dagger(basis),
        }
    return out


def transform_state(st: PairState, ft: FrameTransform) -> PairState:
    """Amplitudes transported by u^star then u, which leaves them unchanged."""
    pieces = []
    for s in Sector:
        phi = st.piece(s).components @ ft.ustar(s) @ ft.u(s)
        pieces.append(SectorVector(s, phi))
    return PairState(*pieces)


def primed_components(st: PairState, ft: FrameTransform, s) -> np.ndarray:
    """Coordinates of the (unchanged) state bra in the primed basis."""
    s = Sector.parse(s)
    return st.piece(s).components @ np.linalg.inv(ft.u(s))


def primed_probabilities(st: PairState, ft: FrameTransform, s) -> tuple[float, float]:
    return sector_weights(primed_components(st, ft, s))


def transform_amplitude_tensor(cs: CompositeState, ft: FrameTransform) -> np.ndarray:
    """Contract every index of the amplitude with u^star of its sector."""
    c = cs.amplitude
    for k, f in enumerate(cs.factors):
        c = np.moveaxis(np.tensordot(c, ft.ustar(f.sector), axes=([k], [0])), -1, k)
    return c


def transform_observable(a: Observable, ft: FrameTransform, both: bool = False,
                         tol: float | None = None):
    """Apply the frame change to an observable.

    Returns the operator in the new frame and its covariant entries there,
    per sector.  ``both=True`` demands both laws at once, which needs u and A
    to commute.
    """
    tol = nx.default_tol() if tol is None else tol
    if both:
        for s in Sector:
            u, m = ft.u(s), a.intrinsic(s)
            r = nx.max_abs_diff(u @ m, m @ u)
            if r > tol:
                raise ModeConflict(f"{s.name}: u and A do not commute (residual {r:.3e})")
    ops, entries = {}, {}
    for s in Sector:
        u, us = ft.u(s), ft.ustar(s)
        if ft.mode is Mode.OPERATOR_INVARIANT:
            ops[s] = a.intrinsic(s)
            entries[s] = u @ a.covariant(s) @ nx.dagger(u)
        else:
            ops[s] = us @ a.intrinsic(s) @ u
            entries[s] = a.covariant(s)
    op = Observable.from_intrinsic(ops[Sector.PLUS], ops[Sector.MINUS], a.kind, **a.params)
    return op, entries


def entries_in_frame(a: Observable, ft: FrameTransform, s) -> np.ndarray:
    """<e'_mu|A||e'_nu>_{g'} of any operator in the primed basis."""
    s = Sector.parse(s)
    u = ft.u(s)
    return u @ a.intrinsic(s) @ s.metric @ nx.dagger(u)


def diagonalize_primed(a_primed, s, tol: float | None = None):
    """Diagonal entries and local unitary s with s A' s^dagger diagonal.

    The covariant matrix is turned into its Hermitian intrinsic form, handed
    to ``eig_hermitian`` and mapped back.  Eigenvalues come out descending.
    """
    s = Sector.parse(s)
    a_primed = nx.as_matrix(a_primed, 2)
    intrinsic = a_primed @ s.metric
    if not nx.is_hermitian(intrinsic, tol):
        raise NotDiagonalizable("primed matrix is not pseudo-Hermitian")
    vals, vecs = nx.eig_hermitian(intrinsic, tol)
    sm = nx.dagger(vecs)
    diag = sm @ a_primed @ nx.dagger(sm)
    off = nx.max_abs_diff(diag, np.diag(np.diag(diag)))
    if off > 1e3 * (nx.default_tol() if tol is None else tol):
        raise NotDiagonalizable(f"residual off-diagonal {off:.3e}")
    return np.diag(diag).copy(), sm


def transform_conjugation(c: ChargeConjugation, ft: FrameTransform) -> ChargeConjugation:
    """Q'(p+-) = u+-^star Q(p+-) u-+."""
    blocks = [ft.ustar(s) @ c.block(s) @ ft.u(s.other) for s in Sector]
    return ChargeConjugation(*blocks)


def conjugation_entries_in_frame(c: ChargeConjugation, ft: FrameTransform, s) -> np.ndarray:
    """<e'_mu(+-)|Q'||e'_nu(-+)> with the target-sector metric."""
    s = Sector.parse(s)
    o = s.other
    return ft.u(s) @ c.block(s) @ o.metric @ nx.dagger(ft.u(o))


# -- invariance report -------------------------------------------------------------


def _row(name, eq, residual, tol):
    return {"name": name, "eq": eq, "residual": float(residual), "pass": bool(residual <= tol)}


def invariance_report(ft: FrameTransform, a: Observable | None = None,
                      b: Observable | None = None, tol: float | None = None) -> dict:
    """Residuals of every frame invariant for one element.

    ``a`` and ``b`` default to the spin and a unit energy restriction.
    """
    tol = nx.default_tol() if tol is None else tol
    a = make_spin() if a is None else a
    b = make_energy(1.0, "I") if b is None else b
    basis = transform_basis(ft)
    rows = []
    for s in Sector:
        sg = s.value
        u, us = ft.u(s), ft.ustar(s)
        rows.append(_row(f"metric{sg}", "7.4", nx.max_abs_diff(basis[s]["gram"], s.metric), tol))
        rows.append(_row(f"delta{sg}", "7.5", nx.max_abs_diff(basis[s]["delta"], nx.I2), tol))
        # operator-invariant entries keep the trace and the determinant
        _, ent = transform_observable(a, FrameTransform(ft.element, Mode.OPERATOR_INVARIANT))
        tr_new = np.trace(ent[s] @ basis[s]["gram"])
        rows.append(_row(f"trace_entries{sg}", "7.26a",
                         abs(tr_new - np.trace(a.covariant(s) @ s.metric)), tol))
        op, _ = transform_observable(a, FrameTransform(ft.element, Mode.MATRIX_INVARIANT))
        rows.append(_row(f"trace_operator{sg}", "7.26a",
                         abs(np.trace(op.intrinsic(s)) - np.trace(a.intrinsic(s))), tol))
        d, sm = diagonalize_primed(ent[s], s)
        rows.append(_row(f"diag_det{sg}", "7.24a", abs(np.prod(d) - nx.det(a.covariant(s))), tol))
        gs = sm @ s.metric @ nx.dagger(sm)
        rows.append(_row(f"diag_trace{sg}", "7.26a",
                         abs(np.sum(d * np.diag(gs)) - np.trace(a.intrinsic(s))), tol))
        # commutators: entries law and operator law
        comm = commutator(a, b)[s]
        ap = ent[s] @ s.metric
        _, ent_b = transform_observable(b, FrameTransform(ft.element, Mode.OPERATOR_INVARIANT))
        bp = ent_b[s] @ s.metric
        rows.append(_row(f"commutator_entries{sg}", "7.30a",
                         nx.max_abs_diff(ap @ bp - bp @ ap, u @ comm @ nx.dagger(u)), tol))
        opb, _ = transform_observable(b, FrameTransform(ft.element, Mode.MATRIX_INVARIANT))
        ao, bo = op.intrinsic(s), opb.intrinsic(s)
        rows.append(_row(f"commutator_operator{sg}", "7.30b",
                         nx.max_abs_diff(ao @ bo - bo @ ao, us @ comm @ u), tol))
        # projectors and measurement matrices keep their primed entries
        for mu in (0, 1):
            pm = Observable.from_intrinsic(_PI[mu], _PI[mu])
            opm, _ = transform_observable(pm, FrameTransform(ft.element, Mode.MATRIX_INVARIANT))
            primed = u @ opm.intrinsic(s) @ s.metric @ nx.dagger(u)
            rows.append(_row(f"measurement{mu}{sg}", "5.3",
                             nx.max_abs_diff(primed, pm.covariant(s)), tol))
        # degenerate spectra commute with every element
        q = make_charge(1.0).intrinsic(s)
        rows.append(_row(f"degenerate{sg}", "7.17", nx.max_abs_diff(u @ q, q @ u), tol))
        # energy entries regain their diagonal shape
        _, ent_h = transform_observable(make_energy(1.0, "I"),
                                        FrameTransform(ft.element, Mode.OPERATOR_INVARIANT))
        dh, _ = diagonalize_primed(ent_h[s], s)
        rows.append(_row(f"energy_diag{sg}", "7.29",
                         abs(abs(dh[0]) - 1.0) + abs(dh[0] + dh[1]), tol))
    m = ft.element.matrix
    for name, p in (("projector+", P_PLUS), ("projector-", P_MINUS)):
        rows.append(_row(name, "7.12", nx.max_abs_diff(m @ p - p @ m, np.zeros((4, 4))), tol))
    return {"pass": all(r["pass"] for r in rows), "checks": rows,
            "failed": [r["name"] for r in rows if not r["pass"]]}


def reduction_differs(st: PairState, ft: FrameTransform, s, outcome: int = 0,
                      tol: float | None = None) -> bool:
    """Whether the canonical and primed reductions give different bras."""
    tol = nx.default_tol() if tol is None else tol
    s = Sector.parse(s)
    phi = st.piece(s).components
    red = phi @ _PI[outcome]
    c = primed_components(st, ft, s)
    red_primed = (c @ _PI[outcome]) @ ft.u(s)
    def unit(v):
        n = np.linalg.norm(v)
        return v / n if n > tol else v
    return nx.max_abs_diff(unit(red), unit(red_primed)) > 1e3 * tol
