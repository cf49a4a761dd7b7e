from fractions import Fraction

import numpy as np
import pytest

from pairspace import density as dn
from pairspace import numerics as nx
from pairspace import observables as ob
from pairspace.cartan import Sector
from pairspace.errors import NonpositiveEnergy, NotPseudoHermitian, NotUnitary
from pairspace.states import make_pair_state

H = nx.INV_SQRT2 * np.array([[1, 1], [1, -1]], dtype=complex)


def _random_obs(rng):
    return ob.Observable.from_intrinsic(nx.random_hermitian(rng, 2), nx.random_hermitian(rng, 2))


def _random_state(rng):
    return make_pair_state(nx.random_complex_vector(rng, 2), nx.random_complex_vector(rng, 2))


def test_spin_expectations():
    st = make_pair_state([1, 0], [1, 0])
    assert ob.expectation(ob.make_spin(), st, Sector.PLUS) == 0.5
    assert ob.expectation(ob.make_spin(), st, Sector.MINUS) == -0.5


def test_expectation_matches_density_route(rng):
    for _ in range(100):
        a, st = _random_obs(rng), _random_state(rng)
        for s in Sector:
            d = dn.density_from_state(st, s)
            assert abs(ob.expectation(a, st, s) - dn.density_expectation(d, a)) < 1e-12


def test_expectation_rejects_non_pseudo_hermitian():
    bad = ob.Observable.from_intrinsic([[0, 1], [0, 0]], np.eye(2))
    with pytest.raises(NotPseudoHermitian):
        ob.expectation(bad, make_pair_state([1, 0], [1, 0]), Sector.PLUS)


def test_diagonal_expectation_reduced_formula(rng):
    a = ob.make_energy(3.0, "I")
    st = _random_state(rng)
    for s in Sector:
        w = np.abs(st.piece(s).components) ** 2
        vals, _ = ob.spectral_decomposition(a, s)
        # reduced form: sign * sum a_mu w_mu, with the sector sign
        assert ob.expectation(a, st, s) == pytest.approx(s.sign * float(vals @ w), abs=1e-12)


def test_spectral_examples(rng):
    vals, _ = ob.spectral_decomposition(ob.make_charge(1), Sector.PLUS)
    assert list(vals) == [1, 1]
    vals, _ = ob.spectral_decomposition(ob.make_energy(1, "I"), Sector.PLUS)
    assert list(vals) == [1, -1]
    for _ in range(50):
        d = np.diag(rng.normal(size=2))
        a = ob.Observable.from_intrinsic(d, d)
        for s in Sector:
            vals, dyads = ob.spectral_decomposition(a, s)
            assert nx.max_abs_diff(ob.reconstruct(vals, dyads, s), a.intrinsic(s)) < 1e-10


def test_catalogue_matrices():
    assert np.array_equal(ob.make_charge(1).covariant(Sector.PLUS), np.eye(2))
    assert np.array_equal(ob.make_charge(1).covariant(Sector.MINUS), np.eye(2))
    assert np.array_equal(ob.make_spin().covariant_matrix, np.diag([0.5, -0.5, -0.5, 0.5]))
    assert np.array_equal(ob.make_polarization().covariant(Sector.PLUS), np.diag([1, -1]))
    assert np.array_equal(ob.make_polarization().covariant(Sector.MINUS), np.diag([-1, 1]))
    E = 2.5
    for s in Sector:
        assert np.array_equal(ob.make_energy(E, "I").covariant(s), np.diag([E, -E]))
        assert np.array_equal(ob.make_energy(E, "II").covariant(s), np.diag([-E, E]))
        assert np.array_equal(ob.make_energy(E, None).covariant(s), np.diag([2 * E, -2 * E]))
    with pytest.raises(NonpositiveEnergy):
        ob.make_energy(0.0)


def test_catalogue_is_pseudo_hermitian_with_traces():
    items = [ob.make_charge(0.3), ob.make_spin(), ob.make_polarization(),
             ob.make_energy(1.0, "I"), ob.make_energy(1.0, "II")]
    for a in items:
        for s in Sector:
            m = a.intrinsic(s)
            assert np.array_equal(m, nx.dagger(m))
            assert np.array_equal(s.metric @ nx.dagger(m) @ s.metric, m)
            vals, _ = ob.spectral_decomposition(a, s)
            cov = a.covariant(s)
            assert s.sign * (cov[0, 0] + cov[1, 1]) == pytest.approx(vals.sum())


def test_conjugation_matrix():
    c = ob.make_charge_conjugation()
    expected = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    assert np.array_equal(c.covariant_matrix, expected)
    assert np.array_equal(c.covariant_block(Sector.PLUS), [[0, -1], [-1, 0]])
    assert np.array_equal(c.covariant_block(Sector.MINUS), [[0, 1], [1, 0]])
    assert np.array_equal(c.covariant_block(Sector.PLUS), -c.covariant_block(Sector.MINUS))


@pytest.mark.parametrize("q", [Fraction(1, 3), Fraction(2, 3), Fraction(1)])
def test_conjugation_identities_exact(q):
    rep = ob.conjugation_identities(ob.make_charge_conjugation(), q, exact=True)
    assert rep["pass"], rep["failed"]
    assert all(r["residual"] == 0 for r in rep["checks"])


def test_charge_product_identity():
    q = 0.7
    c = ob.make_charge_conjugation()
    ch = ob.make_charge(q)
    for s in Sector:
        o = s.other
        prod = ch.intrinsic(s) @ c.block(s) @ ch.intrinsic(o) @ c.block(o) @ s.metric
        assert nx.max_abs_diff(prod, -q * q * s.metric) < 1e-15


def test_perturbed_conjugation_breaks_inverse():
    eps = 1e-3
    bad = ob.ChargeConjugation(nx.SIGMA_X + np.array([[eps, 0], [0, 0]]), nx.SIGMA_X)
    rep = ob.conjugation_identities(bad)
    assert not rep["pass"]
    assert "inverse+" in rep["failed"]
    assert any(r["eq"] == "3.35" and not r["pass"] for r in rep["checks"])


def test_conjugation_transport(rng):
    c = ob.make_charge_conjugation()
    for _ in range(100):
        assert ob.transport_preserves_product(c, nx.random_complex_vector(rng, 2)) < 1e-12


def test_virtual_operators():
    vp, vm = ob.make_virtual("+"), ob.make_virtual("-")
    assert np.array_equal(vp.embed(), [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    assert np.array_equal(vm.embed(), [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]])
    for v in (vp, vm):
        assert np.array_equal(v.matrix @ v.matrix, np.eye(2))
        assert np.array_equal(np.eye(2)[0] @ v.matrix, np.eye(2)[1])
        assert all(r == 0 for r in ob.virtual_swap_residuals(v).values())
    assert ob.scheme_report(2.0)["pass"]


def test_commutators():
    for c in ob.commutator(ob.make_spin(), ob.make_charge(1)).values():
        assert not c.any()
    comm = ob.commutator(ob.make_spin(), ob.make_virtual("+"))
    assert np.abs(comm[Sector.PLUS]).max() > 0.5
    assert not comm[Sector.MINUS].any()
    assert not ob.commutes(ob.make_spin(), ob.make_virtual("+"))


def test_commutator_basis_covariance(rng):
    for _ in range(50):
        a, b = _random_obs(rng), _random_obs(rng)
        bc = ob.BasisChange(nx.random_unitary(rng), nx.random_unitary(rng))
        a2, _ = ob.apply_basis_change(a, bc)
        b2, _ = ob.apply_basis_change(b, bc)
        c, c2 = ob.commutator(a, b), ob.commutator(a2, b2)
        for s in Sector:
            u = bc.block(s)
            assert nx.max_abs_diff(c2[s], nx.dagger(u) @ c[s] @ u) < 1e-12


def test_basis_change_identity():
    a = ob.make_spin()
    out, gram = ob.apply_basis_change(a, ob.BasisChange.uniform(np.eye(2)))
    for s in Sector:
        assert np.array_equal(out.intrinsic(s), a.intrinsic(s))
        assert np.array_equal(gram[s], s.metric)
    with pytest.raises(NotUnitary):
        ob.apply_basis_change(a, ob.BasisChange.uniform(np.diag([1, 2])))


def test_hadamard_keeps_spin_entries():
    bc = ob.BasisChange.uniform(H)
    out, _ = ob.apply_basis_change(ob.make_spin(), bc)
    for s in Sector:
        assert nx.max_abs_diff(ob.primed_entries(out, bc, s), ob.make_spin().covariant(s)) < 1e-12


def test_basis_change_preserves_expectations_and_norms(rng):
    for _ in range(50):
        a, st = _random_obs(rng), _random_state(rng)
        bc = ob.BasisChange(nx.random_unitary(rng), nx.random_unitary(rng))
        out, gram = ob.apply_basis_change(a, bc)
        ident, _ = ob.apply_basis_change(ob.Observable.from_intrinsic(nx.I2, nx.I2), bc)
        for s in Sector:
            assert abs(ob.primed_expectation(out, bc, st, s) - ob.expectation(a, st, s)) < 1e-12
            assert abs(ob.primed_expectation(ident, bc, st, s) - s.sign) < 1e-12
            m = out.intrinsic(s)
            g = gram[s]
            assert nx.max_abs_diff(g @ nx.dagger(m) @ np.linalg.inv(g), m) < 1e-12


def test_helicity(rng):
    h = ob.make_helicity(ob.BasisChange.uniform(np.eye(2)), "spin")
    assert np.array_equal(h.matrix, ob.make_spin().matrix)
    for _ in range(20):
        bc = ob.BasisChange(nx.random_unitary(rng), nx.random_unitary(rng))
        for base, ref in (("spin", ob.make_spin()), ("polarization", ob.make_polarization())):
            h = ob.make_helicity(bc, base)
            for s in Sector:
                assert nx.max_abs_diff(ob.primed_entries(h, bc, s), ref.covariant(s)) < 1e-12


def test_interchange(rng):
    ident = ob.BasisChange.uniform(np.eye(2))
    pi_side = ob.interchange_spin_polarization(ident, "FermionGetsΠ")
    sigma_side = ob.interchange_spin_polarization(ident, "BosonGetsΣ")
    for s in Sector:
        assert np.array_equal(ob.primed_entries(pi_side, ident, s), ob.make_polarization().covariant(s))
        assert np.array_equal(ob.primed_entries(sigma_side, ident, s), ob.make_spin().covariant(s))
    # the two operators differ, not just by a scalar 1/2
    assert not np.allclose(pi_side.matrix, ob.make_spin().matrix)
    for _ in range(50):
        p = nx.random_unitary(rng)
        out = ob.interchange_spin_polarization(ob.BasisChange.uniform(p), "FermionGetsPi")
        for s in Sector:
            back = p @ out.intrinsic(s) @ nx.dagger(p)
            assert nx.max_abs_diff(back, ob.make_polarization().intrinsic(s)) < 1e-10
    with pytest.raises(ValueError):
        ob.interchange_spin_polarization(ident, "sideways")
