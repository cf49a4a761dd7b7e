import math

import numpy as np
import pytest

from pairspace import density as dn
from pairspace import numerics as nx
from pairspace import observables as ob
from pairspace.cartan import Sector, SectorVector
from pairspace.errors import (ArityMismatch, IndexOutOfRange, InvalidDensity, LastFactor,
                              NotNormalized, NotUnitary, OrderingViolation, ShapeMismatch)
from pairspace.states import EvolutionOperator, evolve, make_evolution, make_pair_state

P, M = Sector.PLUS, Sector.MINUS


def sv(s, comps):
    return SectorVector(s, np.asarray(comps, dtype=complex))


def rand_sv(rng, s):
    return SectorVector(s, nx.random_unit_vector(rng, 2))


def test_pure_density_patterns():
    d = dn.density_from_state(make_pair_state([1, 0], [1, 0]), P)
    assert np.array_equal(d.covariant, np.diag([1, 0]))
    assert d.trace == 1.0
    d = dn.density_from_state(make_pair_state([1, 0], [1, 0]), M)
    assert np.array_equal(d.covariant, np.diag([-1, 0]))
    assert d.trace == 1.0
    with pytest.raises(NotNormalized):
        dn.density_of(sv(P, [1, 1]))


def test_pure_density_properties(rng):
    for _ in range(100):
        for s in Sector:
            v = rand_sv(rng, s)
            d = dn.density_of(v)
            assert nx.max_abs_diff(d.matrix @ d.matrix, d.matrix) < 1e-12
            assert nx.max_abs_diff(s.metric @ d.matrix, d.matrix @ s.metric) < 1e-12
            # <Phi|rho||Phi>_g carries the sector sign
            val = v.components @ d.covariant @ np.conj(v.components)
            assert abs(val - s.sign) < 1e-12
            d.validate()


def test_maximally_mixed():
    assert np.array_equal(dn.maximally_mixed(P).covariant, 0.5 * np.eye(2))
    assert np.array_equal(dn.maximally_mixed(M).covariant, -0.5 * np.eye(2))
    for s in Sector:
        assert dn.maximally_mixed(s).trace == 1.0
        assert dn.entropy(dn.maximally_mixed(s)) == pytest.approx(1.0, abs=1e-12)


def test_entropy_values(rng):
    assert dn.entropy(dn.density_of(rand_sv(rng, P))) == pytest.approx(0.0, abs=1e-12)
    d = dn.DensityOperator(P, np.diag([0.25, 0.75]))
    oracle = -(0.25 * math.log2(0.25) + 0.75 * math.log2(0.75))
    assert dn.entropy(d) == pytest.approx(oracle, abs=1e-12)
    assert dn.entropy(d) == pytest.approx(0.811278, abs=1e-6)
    with pytest.raises(InvalidDensity):
        dn.entropy(dn.DensityOperator(P, np.diag([1.5, -0.5])))
    with pytest.raises(InvalidDensity):
        dn.DensityOperator(P, np.diag([0.5, 0.6])).validate()


def test_expectation_routes_agree(rng):
    for _ in range(100):
        st = make_pair_state(nx.random_complex_vector(rng, 2), nx.random_complex_vector(rng, 2))
        a = ob.Observable.from_intrinsic(nx.random_hermitian(rng, 2), nx.random_hermitian(rng, 2))
        for s in Sector:
            d = dn.density_from_state(st, s)
            assert abs(dn.density_expectation(d, a) - ob.expectation(a, st, s)) < 1e-12


def test_evolve_density(rng):
    d = dn.random_density(rng, P)
    same = dn.evolve_density(d, make_evolution(nx.I2, nx.I2))
    assert nx.max_abs_diff(same.matrix, d.matrix) < 1e-15
    with pytest.raises(NotUnitary):
        dn.evolve_density(d, EvolutionOperator(np.diag([1, 2]), nx.I2))
    for _ in range(100):
        u = make_evolution(nx.random_unitary(rng), nx.random_unitary(rng))
        st = make_pair_state(nx.random_complex_vector(rng, 2), nx.random_complex_vector(rng, 2))
        for s in Sector:
            two_path = dn.density_from_state(evolve(st, u), s)
            one_path = dn.evolve_density(dn.density_from_state(st, s), u)
            assert nx.max_abs_diff(one_path.matrix, two_path.matrix) < 1e-12
            mixed = dn.random_density(rng, s)
            after = dn.evolve_density(mixed, u)
            assert abs(dn.entropy(after) - dn.entropy(mixed)) < 1e-10
            assert abs(after.trace - 1.0) < 1e-12


def test_compose_shapes(rng):
    cs = dn.compose([sv(P, [1, 0]), sv(M, [1, 0])])
    assert cs.amplitude.shape == (2, 2) and cs.amplitude.size == 4
    assert cs.component(0, 0) == 1 and np.count_nonzero(cs.amplitude) == 1
    cs = dn.compose([rand_sv(rng, P), rand_sv(rng, P), rand_sv(rng, M)])
    assert cs.amplitude.ndim == 3 and cs.amplitude.size == 8
    assert (cs.n_plus, cs.n_minus) == (2, 1)
    # Born weights factorize
    w = np.abs(cs.amplitude) ** 2
    outer = np.multiply.outer(np.multiply.outer(*[np.abs(f.components) ** 2 for f in cs.factors[:2]]),
                              np.abs(cs.factors[2].components) ** 2)
    assert nx.max_abs_diff(w, outer) < 1e-15
    with pytest.raises(OrderingViolation):
        dn.compose([sv(M, [1, 0]), sv(P, [1, 0])])
    with pytest.raises(NotNormalized):
        dn.compose([sv(P, [1, 1])])
    with pytest.raises(ArityMismatch):
        dn.compose([])


def test_composite_expectation(rng):
    spin = ob.make_spin()
    cs = dn.compose([sv(P, [1, 0]), sv(P, [1, 0])])
    assert dn.composite_expectation(cs, [spin, spin]) == pytest.approx(0.25)
    ident = dn.identity_observable()
    for n_p, n_m in [(1, 0), (1, 1), (0, 2), (2, 3)]:
        cs = dn.compose([rand_sv(rng, P) for _ in range(n_p)] + [rand_sv(rng, M) for _ in range(n_m)])
        assert dn.composite_expectation(cs, [ident] * (n_p + n_m)) == pytest.approx((-1) ** n_m)
    with pytest.raises(ArityMismatch):
        dn.composite_expectation(cs, [ident])
    for _ in range(50):
        cs = dn.compose([rand_sv(rng, P), rand_sv(rng, M)])
        obs = [ob.Observable.from_intrinsic(nx.random_hermitian(rng, 2), nx.random_hermitian(rng, 2))
               for _ in range(2)]
        dense = dn.dense_expectation(cs, [a.intrinsic(f.sector) for a, f in zip(obs, cs.factors)])
        assert abs(dn.composite_expectation(cs, obs) - dense) < 1e-12


def test_embed_single():
    spin = ob.make_spin()
    cs = dn.compose([sv(P, [1, 0])])
    assert dn.embed_single(cs, 0, spin) == 0.5
    cs = dn.compose([sv(P, [1, 0]), sv(M, [1, 0])])
    assert dn.embed_single(cs, 0, spin) == pytest.approx(-0.5)
    assert dn.embed_single(cs, 1, spin) == pytest.approx(-0.5)
    ident = nx.I2
    dense = dn.dense_expectation(cs, [ident, spin.intrinsic(M)])
    assert dense == pytest.approx(-0.5)
    with pytest.raises(IndexOutOfRange):
        dn.embed_single(cs, 2, spin)


def test_sign_law(rng):
    a = ob.Observable.from_intrinsic(nx.random_hermitian(rng, 2), nx.random_hermitian(rng, 2))
    for n_p, n_m in [(1, 1), (2, 2), (1, 3), (0, 3)]:
        facs = [rand_sv(rng, P) for _ in range(n_p)] + [rand_sv(rng, M) for _ in range(n_m)]
        cs = dn.compose(facs)
        for j, f in enumerate(facs):
            single = float((f.components @ a.covariant(f.sector) @ np.conj(f.components)).real)
            expected = (-1) ** (n_m - (1 if f.sector is M else 0)) * single
            assert dn.embed_single(cs, j, a) == pytest.approx(expected, abs=1e-12)
            assert dn.sign_law(cs, j) * single == pytest.approx(expected, abs=1e-12)


def test_composite_trace_and_signed_value(rng):
    for n_p, n_m in [(1, 0), (1, 1), (0, 2), (2, 1), (3, 3)]:
        cs = dn.compose([rand_sv(rng, P) for _ in range(n_p)] + [rand_sv(rng, M) for _ in range(n_m)])
        cd = dn.composite_density(cs)
        assert dn.composite_trace(cd) == pytest.approx(1.0, abs=1e-12)
        assert dn.composite_trace_dense(cd) == pytest.approx(1.0, abs=1e-12)
        assert dn.signed_value(cd) == pytest.approx((-1) ** n_m, abs=1e-12)
        # eigenvalue +1 on the generating product state
        psi = cs.vector
        assert nx.max_abs_diff(psi @ cd.matrix, psi) < 1e-12
    cd = dn.composite_density(dn.compose([rand_sv(rng, M)]))
    assert dn.signed_value(cd) == pytest.approx(-1)
    cd = dn.composite_density(dn.compose([rand_sv(rng, M), rand_sv(rng, M)]))
    assert dn.signed_value(cd) == pytest.approx(1)


def test_partial_trace(rng):
    a_fac, b_fac = rand_sv(rng, P), rand_sv(rng, M)
    cd = dn.composite_density(dn.compose([a_fac, b_fac]))
    out = dn.partial_trace(cd, 1)
    assert len(out.factors) == 1
    assert nx.max_abs_diff(out.factors[0].matrix, cd.factors[0].matrix) == 0
    # the dropped-slot factor is Tr rho = +1 on both sectors
    assert out.scale == pytest.approx(1.0)
    assert dn.partial_trace(cd, 0).scale == pytest.approx(1.0)
    rep = dn.partial_trace_report(cd, 0)
    assert rep["raw_trace"] == pytest.approx(1.0) and rep["renormalized_trace"] == pytest.approx(1.0)
    with pytest.raises(LastFactor):
        dn.partial_trace(out, 0)
    with pytest.raises(IndexOutOfRange):
        dn.partial_trace(cd, 5)


def test_reduced_expectation_matches_single_slot(rng):
    for _ in range(50):
        facs = [rand_sv(rng, P), rand_sv(rng, P), rand_sv(rng, M)]
        cd = dn.composite_density(dn.compose(facs))
        a = ob.Observable.from_intrinsic(nx.random_hermitian(rng, 2), nx.random_hermitian(rng, 2))
        for j, f in enumerate(facs):
            direct = float((f.components @ a.covariant(f.sector) @ np.conj(f.components)).real)
            assert dn.reduced_expectation(cd, j, a) == pytest.approx(direct, abs=1e-12)


def test_relative_mutual_entropies(rng):
    facs = [rand_sv(rng, P), rand_sv(rng, M)]
    cd = dn.composite_density(dn.compose(facs))
    rep = dn.relative_mutual_entropies(cd, cd)
    assert rep["relative_ab"] == pytest.approx(0.0, abs=1e-9)
    assert rep["a"]["mutual"] == pytest.approx(0.0, abs=1e-9)
    for _ in range(30):
        x = dn.CompositeDensity(tuple(dn.random_density(rng, s) for s in (P, M, M)))
        y = dn.CompositeDensity(tuple(dn.random_density(rng, s) for s in (P, M, M)))
        rep = dn.relative_mutual_entropies(x, y)
        assert rep["a"]["subadditive"] and rep["b"]["subadditive"] and rep["concave"]
        assert rep["relative_ab"] >= -1e-10
    with pytest.raises(ShapeMismatch):
        dn.relative_mutual_entropies(cd, dn.composite_density(dn.compose([rand_sv(rng, P)] * 2)))
