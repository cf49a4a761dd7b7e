"""Registry of numerical identity checks driven by ``pairspace verify``.

Every check draws its random inputs from a generator seeded by the global
seed and the check's fixed position in the registry, so filtering never
changes the numbers a check sees.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import cartan as ct
from . import correlations as cr
from . import density as dn
from . import group as gp
from . import measurement as ms
from . import numerics as nx
from . import observables as ob
from . import states as stt
from .cartan import Sector

DEFAULT_SAMPLES = 50
DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class Check:
    id: str
    paper_eq: str
    fn: Callable[[np.random.Generator, int], float]
    exact: bool = False

    @property
    def module(self) -> str:
        return self.id.split(".", 1)[0]


REGISTRY: list[Check] = []


def check(cid: str, paper_eq: str, exact: bool = False):
    def deco(fn):
        REGISTRY.append(Check(cid, paper_eq, fn, exact))
        return fn
    return deco


def _vec(rng, n):
    return nx.random_complex_vector(rng, n)


def _pair(rng) -> stt.PairState:
    return stt.make_pair_state(_vec(rng, 2), _vec(rng, 2))


def _unit(rng, s) -> ct.SectorVector:
    return ct.SectorVector(s, nx.random_unit_vector(rng, 2))


def _random_observable(rng) -> ob.Observable:
    return ob.Observable.from_intrinsic(nx.random_hermitian(rng, 2), nx.random_hermitian(rng, 2))


# -- numerics ------------------------------------------------------------------


@check("numerics.eig_reconstruct", "3.25")
def _eig(rng, n):
    worst = 0.0
    for _ in range(n):
        m = nx.random_hermitian(rng, 2)
        vals, vecs = nx.eig_hermitian(m)
        worst = max(worst, nx.max_abs_diff(vecs @ np.diag(vals) @ nx.dagger(vecs), m))
    return worst


# -- cartan --------------------------------------------------------------------


@check("cartan.metric_involution", "2.6", exact=True)
def _g(rng, n):
    g = ct.G_SMALL
    return max(nx.max_abs_diff(g @ g, nx.I4), nx.max_abs_diff(nx.dagger(g), g),
               nx.max_abs_diff(g, np.diag([1, 1, -1, -1])))


@check("cartan.big_metric_involution", "6.8", exact=True)
def _gg(rng, n):
    g = ct.G_BIG
    return max(nx.max_abs_diff(g @ g, nx.I4), nx.max_abs_diff(nx.dagger(g), g))


@check("cartan.correlation", "2.7")
def _corr(rng, n):
    worst = 0.0
    for _ in range(n):
        a, b = _vec(rng, 4), _vec(rng, 4)
        worst = max(worst, abs(ct.hilbert_inner(a, b) - ct.indefinite_inner(a @ ct.G_SMALL, b)))
    return worst


@check("cartan.projector_pseudo_hermitian", "2.11")
def _proj(rng, n):
    worst = 0.0
    g = ct.G_SMALL
    for _ in range(n):
        lam = _vec(rng, 4)
        for p in (ct.P_PLUS, ct.P_MINUS):
            lhs = lam @ p @ g @ np.conj(lam)
            rhs = lam @ g @ nx.dagger(p) @ np.conj(lam)
            worst = max(worst, abs(lhs - rhs), nx.max_abs_diff(p @ p, p))
        worst = max(worst, nx.max_abs_diff(ct.P_PLUS + ct.P_MINUS, nx.I4))
    return worst


@check("cartan.split", "2.13a")
def _split(rng, n):
    worst = 0.0
    for _ in range(n):
        a, b = _vec(rng, 4), _vec(rng, 4)
        split = sum(ct.sector_inner(ct.project(a, s), ct.project(b, s)) for s in Sector)
        worst = max(worst, abs(split - ct.indefinite_inner(a, b)))
    return worst


@check("cartan.metric_correlation", "2.39", exact=True)
def _mc(rng, n):
    return max(nx.max_abs_diff(ct.DELTA2 @ s.metric @ ct.DELTA2, s.metric) for s in Sector)


@check("cartan.entry_relation", "2.41b")
def _entries(rng, n):
    worst = 0.0
    for _ in range(n):
        for s in Sector:
            r = ct.Restriction(s, nx.random_complex_matrix(rng, 2))
            worst = max(worst, nx.max_abs_diff(r.covariant, s.metric @ r.adjoint_entries @ s.metric))
    return worst


@check("cartan.completeness", "2.40")
def _complete(rng, n):
    worst = 0.0
    for s in Sector:
        c = ct.completeness(s)
        worst = max(worst, nx.max_abs_diff(c, nx.I2))
        for _ in range(n):
            v = _vec(rng, 2)
            worst = max(worst, nx.max_abs_diff(v @ c, v))
    return worst


@check("cartan.restriction_product", "2.24")
def _resprod(rng, n):
    worst = 0.0
    for _ in range(n):
        a = nx.block_diag(nx.random_complex_matrix(rng, 2), nx.random_complex_matrix(rng, 2))
        b = nx.block_diag(nx.random_complex_matrix(rng, 2), nx.random_complex_matrix(rng, 2))
        for s in Sector:
            lhs = ct.restrict(a @ b, s).matrix
            rhs = ct.restrict(a, s).matrix @ ct.restrict(b, s).matrix
            worst = max(worst, nx.max_abs_diff(lhs, rhs))
    return worst


@check("cartan.projector_trace", "2.44")
def _ptrace(rng, n):
    worst = 0.0
    for _ in range(n):
        for s in Sector:
            v = ct.SectorVector(s, _vec(rng, 2))
            lhs = ct.restriction_trace(ct.outer_projector(v))
            worst = max(worst, abs(lhs - ct.sector_inner(v, v)))
    return worst


# -- states --------------------------------------------------------------------


@check("states.born_sum", "3.11")
def _born(rng, n):
    worst = 0.0
    for _ in range(n):
        st = _pair(rng)
        for s in Sector:
            w0, w1 = stt.born_probabilities(st, s)
            worst = max(worst, abs(w0 + w1 - 1.0))
    return worst


@check("states.pair_norms", "3.4")
def _norms(rng, n):
    worst = 0.0
    for _ in range(n):
        st = _pair(rng)
        worst = max(worst, abs(st.indefinite_norm2), abs(st.hilbert_norm2 - 2.0))
    return worst


@check("states.evolution_norm", "3.3")
def _evo(rng, n):
    worst = 0.0
    for _ in range(n):
        st = _pair(rng)
        u = stt.make_evolution(nx.random_unitary(rng), nx.random_unitary(rng))
        out = stt.evolve(st, u)
        worst = max(worst, abs(out.indefinite_norm2), abs(out.hilbert_norm2 - 2.0))
    return worst


# -- observables -----------------------------------------------------------------


@check("observables.catalogue_pseudo_hermitian", "3.17")
def _cat(rng, n):
    items = [ob.make_charge(1.0), ob.make_spin(), ob.make_polarization(),
             ob.make_energy(1.0, "I"), ob.make_energy(1.0, "II"), ob.make_energy(1.0, None)]
    items += [ob.make_virtual(s).as_observable() for s in Sector]
    return max(a.star_residual() for a in items)


@check("observables.spectral_reconstruct", "3.25")
def _spec(rng, n):
    worst = 0.0
    for _ in range(n):
        a = _random_observable(rng)
        for s in Sector:
            vals, dyads = ob.spectral_decomposition(a, s)
            worst = max(worst, nx.max_abs_diff(ob.reconstruct(vals, dyads, s), a.intrinsic(s)))
    return worst


@check("observables.expectation_routes", "3.21")
def _exp(rng, n):
    worst = 0.0
    for _ in range(n):
        a, st = _random_observable(rng), _pair(rng)
        for s in Sector:
            phi = st.piece(s).components
            direct = float((phi @ a.intrinsic(s) @ s.metric @ np.conj(phi)).real)
            worst = max(worst, abs(ob.expectation(a, st, s) - direct))
    return worst


@check("observables.conjugation_ledger", "3.35-3.48", exact=True)
def _conj(rng, n):
    c = ob.make_charge_conjugation()
    worst = Fraction(0)
    for q in (Fraction(1, 3), Fraction(2, 3), Fraction(1)):
        rep = ob.conjugation_identities(c, q, exact=True)
        worst = max([worst] + [r["residual"] for r in rep["checks"]])
    return float(worst)


@check("observables.conjugation_schemes", "3.56-3.57")
def _scheme(rng, n):
    rep = ob.scheme_report(1.0)
    vs = [max(ob.virtual_swap_residuals(ob.make_virtual(s)).values()) for s in Sector]
    return max([c["residual"] for c in rep["checks"]] + vs)


@check("observables.helicity_spectrum", "3.74")
def _heli(rng, n):
    worst = 0.0
    for _ in range(n):
        bc = ob.BasisChange.uniform(nx.random_unitary(rng))
        h = ob.make_helicity(bc, "spin")
        for s in Sector:
            vals = np.sort(np.linalg.eigvalsh(h.intrinsic(s)))
            worst = max(worst, nx.max_abs_diff(vals, [-0.5, 0.5]))
            worst = max(worst, nx.max_abs_diff(ob.primed_entries(h, bc, s),
                                               ob.make_spin().covariant(s)))
    return worst


# -- density -----------------------------------------------------------------------


@check("density.pure_entropy", "4.18")
def _pure(rng, n):
    return max(abs(dn.entropy(dn.density_of(_unit(rng, s)))) for _ in range(n) for s in Sector)


@check("density.mixed_entropy", "4.18")
def _mixed(rng, n):
    return max(abs(dn.entropy(dn.maximally_mixed(s)) - 1.0) for s in Sector)


@check("density.expectation_routes", "4.8")
def _dexp(rng, n):
    worst = 0.0
    for _ in range(n):
        a, st = _random_observable(rng), _pair(rng)
        for s in Sector:
            d = dn.density_from_state(st, s)
            worst = max(worst, abs(dn.density_expectation(d, a) - ob.expectation(a, st, s)))
    return worst


@check("density.composite_trace", "4.48")
def _ctrace(rng, n):
    worst = 0.0
    for total in range(1, 7):
        for npl in range(total + 1):
            secs = [Sector.PLUS] * npl + [Sector.MINUS] * (total - npl)
            cd = dn.composite_density(dn.compose([_unit(rng, s) for s in secs]))
            worst = max(worst, abs(dn.composite_trace(cd) - 1.0),
                        abs(dn.composite_trace_dense(cd) - 1.0))
    return worst


@check("density.sign_law", "4.36")
def _sign(rng, n):
    worst = 0.0
    a = ob.make_spin()
    for npl in range(4):
        for nmi in range(4):
            if npl + nmi == 0:
                continue
            secs = [Sector.PLUS] * npl + [Sector.MINUS] * nmi
            cs = dn.compose([_unit(rng, s) for s in secs])
            for j, s in enumerate(secs):
                ops = [nx.I2] * len(secs)
                ops[j] = a.intrinsic(s)
                phi = cs.factors[j].components
                single = float((phi @ a.covariant(s) @ np.conj(phi)).real)
                dense = dn.dense_expectation(cs, ops)
                worst = max(worst, abs(dense - dn.sign_law(cs, j) * single),
                            abs(dn.embed_single(cs, j, a) - dn.sign_law(cs, j) * single))
    return worst


@check("density.partial_trace", "4.49")
def _ptr(rng, n):
    worst = 0.0
    secs = [Sector.PLUS, Sector.PLUS, Sector.MINUS, Sector.MINUS]
    for _ in range(n):
        cd = dn.composite_density(dn.compose([_unit(rng, s) for s in secs]))
        for slot in range(len(secs)):
            rep = dn.partial_trace_report(cd, slot)
            worst = max(worst, abs(rep["raw_trace"] - 1.0))
    return worst


# -- measurement ---------------------------------------------------------------------


@check("measurement.orthogonality", "5.5", exact=True)
def _orth(rng, n):
    return max(max(ms.orthogonality_residuals(s).values()) for s in Sector)


@check("measurement.completeness", "5.8")
def _mcomp(rng, n):
    worst = 0.0
    for _ in range(n):
        for s in Sector:
            d = dn.density_of(_unit(rng, s))
            worst = max(worst, abs(ms.completeness_check(d) - 1.0))
    return worst


@check("measurement.repeat", "5.10", exact=True)
def _repeat(rng, n):
    worst = 0.0
    for _ in range(n):
        st = _pair(rng)
        for s in Sector:
            for k in (0, 1):
                red = ms.reduce_state(st, s, k)
                again = stt.PairState(red, st.minus) if s is Sector.PLUS else stt.PairState(st.plus, red)
                worst = max(worst, abs(ms.measure_probabilities(again, s)[k] - 1.0))
    return worst


@check("measurement.degenerate_no_reduction", "3.31")
def _degen(rng, n):
    worst = 0.0
    q = ob.make_charge(1.0)
    for _ in range(n):
        for s in Sector:
            v = _unit(rng, s)
            out = ms.measure_observable(v, q, 0)
            worst = max(worst, out["change"], abs(out["probability"] - 1.0),
                        1.0 if out["reduced"] else 0.0)
    return worst


# -- group -----------------------------------------------------------------------


def _membership(e) -> float:
    return max(r["residual"] for r in gp.verify_membership(e, tol=np.inf)["checks"])


@check("group.poincare_big", "6.15a")
def _pg(rng, n):
    return max(_membership(gp.poincare(nx.random_sl2c(rng), gp.random_w(rng), "GReal"))
               for _ in range(n))


@check("group.poincare_small", "6.16")
def _ps(rng, n):
    return max(_membership(gp.poincare(nx.random_sl2c(rng), gp.random_w(rng), "gReal"))
               for _ in range(n))


@check("group.conversion", "6.12b")
def _conv(rng, n):
    worst = 0.0
    for _ in range(n):
        a, w = nx.random_sl2c(rng), gp.random_w(rng)
        big, small = gp.poincare(a, w, "GReal"), gp.poincare(a, w, "gReal")
        worst = max(worst, nx.max_abs_diff(gp.convert(small, tol=1e-8).matrix, big.matrix),
                    nx.max_abs_diff(gp.convert(big, tol=1e-8).matrix, small.matrix))
    return worst


@check("group.lorentz", "6.17-6.18")
def _lor(rng, n):
    return max(max(_membership(gp.lorentz(nx.random_sl2c(rng), r)) for r in ("gReal", "GReal"))
               for _ in range(n))


@check("group.unitary_intersection", "6.19")
def _ui(rng, n):
    worst = 0.0
    for _ in range(n):
        e = gp.unitary_poincare(nx.random_su2(rng), gp.random_admissible_w(rng))
        worst = max([worst, _membership(e)] + list(gp.intersection_residuals(e).values()))
    return worst


@check("group.block_determinants", "6.21b-c")
def _bd(rng, n):
    w1 = gp.translation_to_w([nx.SQRT2, 0, 0, 0])
    w2 = gp.translation_to_w([0, 0, 0, nx.SQRT2])
    return max(
        abs(nx.det(nx.INV_SQRT2 * (nx.I2 + 1j * w1)) - 1j),
        nx.max_abs_diff(w1, nx.I2),
        abs(nx.det(nx.INV_SQRT2 * (nx.I2 + 1j * w2)) - 1.0),
        abs(nx.det(nx.INV_SQRT2 * (nx.I2 - 1j * w2)) - 1.0),
        nx.max_abs_diff(w2, np.diag([1, -1])),
    )


@check("group.translation_square", "6.21a")
def _ts(rng, n):
    worst = 0.0
    for _ in range(n):
        t = rng.normal(size=4)
        w = gp.translation_to_w(t)
        worst = max(worst, abs(gp.minkowski_square(t) - 2 * nx.det(w).real),
                    nx.max_abs_diff(gp.w_to_translation(w), t))
    return worst


@check("group.dynamical_star", "7.1")
def _dstar(rng, n):
    worst = 0.0
    for _ in range(n):
        e = gp.random_dyn_element(rng)
        worst = max(worst, e.unitary_residual(), e.star_dagger_residual(),
                    _membership(e.element()))
    return worst


# -- correlations --------------------------------------------------------------


@check("correlations.invariance_report", "7.4-7.30")
def _inv(rng, n):
    worst = 0.0
    for _ in range(n):
        rep = cr.invariance_report(cr.FrameTransform(gp.random_dyn_element(rng)), tol=np.inf)
        worst = max([worst] + [r["residual"] for r in rep["checks"]])
    return worst


@check("correlations.amplitude_invariance", "7.12")
def _amp(rng, n):
    worst = 0.0
    for _ in range(n):
        st, ft = _pair(rng), cr.FrameTransform(gp.random_dyn_element(rng))
        out = cr.transform_state(st, ft)
        worst = max(worst, nx.max_abs_diff(out.as_cartan().components, st.as_cartan().components))
    return worst


@check("correlations.expectation_transport", "7.27")
def _et(rng, n):
    worst = 0.0
    for _ in range(n):
        a, st = _random_observable(rng), _pair(rng)
        ft = cr.FrameTransform(gp.random_dyn_element(rng), cr.Mode.MATRIX_INVARIANT)
        op, _ = cr.transform_observable(a, ft)
        for s in Sector:
            u = ft.u(s)
            phi = st.piece(s).components
            lhs = phi @ nx.dagger(u) @ a.covariant(s) @ u @ np.conj(phi)
            worst = max(worst, abs(lhs - ob.expectation(op, st, s)))
    return worst


@check("correlations.conjugation", "7.28")
def _ct(rng, n):
    worst = 0.0
    c = ob.make_charge_conjugation()
    for _ in range(n):
        ft = cr.FrameTransform(gp.random_dyn_element(rng))
        c2 = cr.transform_conjugation(c, ft)
        for s in Sector:
            worst = max(worst, nx.max_abs_diff(cr.conjugation_entries_in_frame(c2, ft, s),
                                               c.covariant_block(s)),
                        nx.max_abs_diff(c2.star_block(s), -c2.block(s.other)))
    return worst


@check("correlations.reduction_not_invariant", "5.10")
def _red(rng, n):
    # passes (residual 0) once some random case shows the reduction moving
    for _ in range(max(n, 1)):
        st, ft = _pair(rng), cr.FrameTransform(gp.random_dyn_element(rng))
        if cr.reduction_differs(st, ft, Sector.PLUS):
            return 0.0
    return 1.0


# -- driver ----------------------------------------------------------------------------


def select(filter_name: str | None = None) -> list[tuple[int, Check]]:
    out = []
    for idx, c in enumerate(REGISTRY):
        if filter_name and not (c.module == filter_name or c.id == filter_name
                                or c.id.startswith(filter_name + ".")):
            continue
        out.append((idx, c))
    return out


def run_checks(filter_name: str | None = None, tol: float | None = None,
               samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
               corrupt: str | None = None) -> list[dict]:
    """Run the selected checks in registry order.

    ``corrupt`` names a check whose tolerance is replaced by a negative value,
    forcing it to fail; it exists to exercise the failure path.
    """
    tol = nx.default_tol() if tol is None else float(tol)
    if not np.isfinite(tol) or tol <= 0:
        raise ValueError(f"tolerance must be positive and finite, got {tol}")
    rows = []
    for idx, c in select(filter_name):
        rng = np.random.default_rng([seed, idx])
        residual = float(c.fn(rng, samples))
        limit = (0.0 if c.exact else tol)
        if corrupt is not None and corrupt == c.id:
            limit = -1.0
        rows.append({"id": c.id, "paper_eq": c.paper_eq, "residual": residual,
                     "pass": bool(residual <= limit)})
    return rows
