import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvrealism import grid, realism, states
from cvrealism.errors import DimensionError, ValidityError
from cvrealism.numerics import von_neumann_entropy
from cvrealism.realism import BipartiteState, ObservableBasis

# ln N + eta^2/2 from mpmath theta sums at 30 digits
GAUSS_IRR = {0.3: 0.050327210831258996, 1.0: 1.4189384329391128, 2.0: 2.1120857137646181}

seeds = st.integers(0, 2**32 - 1)


def rand_basis(d, rng):
    return ObservableBasis(realism.random_unitary(d, rng))


def test_basis_validation():
    with pytest.raises(ValueError):
        ObservableBasis(np.array([[1, 1], [0, 1]]))
    with pytest.raises(DimensionError):
        ObservableBasis(np.ones((2, 3)))
    with pytest.raises(DimensionError):
        realism.dephase(np.eye(3) / 3, ObservableBasis.computational(2))


def test_dephase_examples():
    rho = np.diag([0.2, 0.3, 0.5])
    np.testing.assert_allclose(realism.dephase(rho, ObservableBasis.computational(3)), rho)
    v = np.ones(3) / np.sqrt(3)
    out = realism.dephase(np.outer(v, v), ObservableBasis.computational(3))
    np.testing.assert_allclose(out, np.eye(3) / 3, atol=1e-15)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_dephase_is_trace_preserving_positive_idempotent(seed):
    rng = np.random.default_rng(seed)
    rho = realism.random_density_matrix(6, rng)
    b = rand_basis(6, rng)
    once = realism.dephase(rho, b)
    np.testing.assert_allclose(realism.dephase(once, b), once, atol=1e-12)
    assert np.trace(once).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(once)[0] >= -1e-12


def test_dephase_local_product():
    rng = np.random.default_rng(5)
    a, b = realism.random_density_matrix(2, rng), realism.random_density_matrix(3, rng)
    basis = rand_basis(2, rng)
    out = realism.dephase_local(BipartiteState.product(a, b), basis)
    np.testing.assert_allclose(out.matrix, np.kron(realism.dephase(a, basis), b), atol=1e-12)


def test_dephase_local_bell():
    out = realism.dephase_local(realism.maximally_entangled_state(2), ObservableBasis.computational(2))
    np.testing.assert_allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_dephase_local_trace(seed):
    rng = np.random.default_rng(seed)
    rho = realism.random_bipartite_state(3, 3, rng)
    out = realism.dephase_local(rho, rand_basis(3, rng))
    assert np.trace(out.matrix).real == pytest.approx(1.0, abs=1e-12)


def test_bipartite_validation():
    with pytest.raises(DimensionError):
        BipartiteState(np.eye(6) / 6, (2, 2))
    rho = realism.random_bipartite_state(2, 3, np.random.default_rng(0))
    assert np.trace(rho.reduced_a()).real == pytest.approx(1)
    assert rho.reduced_b().shape == (3, 3)


@pytest.mark.parametrize("width", [1, 3, 5, 7, 11])
def test_uniform_irreality(width):
    g = grid.make_grid(1.0, 51)
    val = realism.irreality(states.uniform_state(g, width), realism.position_basis(g))
    assert val == pytest.approx(np.log(width), abs=1e-10)


def test_gaussian_irreality_numeric():
    g = grid.make_grid(1.0, 201)
    val = realism.irreality(states.gaussian_state(g, states.GaussianSpec(4)), realism.position_basis(g))
    assert val == pytest.approx(np.log(np.sqrt(2 * np.pi * np.e) * 4), abs=1e-3)


def test_gaussian_irreality_closed_form():
    for d, want in GAUSS_IRR.items():
        assert realism.gaussian_irreality(d) == pytest.approx(want, abs=1e-13)
    assert realism.gaussian_irreality(0.0) == 0.0
    assert realism.gaussian_irreality(0.1) < 1e-18
    g = grid.make_grid(1.0, 101)
    for d in (0.3, 0.8, 2.5):
        numeric = realism.irreality(states.gaussian_state(g, states.GaussianSpec(d)),
                                    realism.position_basis(g))
        assert numeric == pytest.approx(realism.gaussian_irreality(d), abs=1e-10)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_irreality_nonnegative_and_zero_on_fixed_points(seed):
    rng = np.random.default_rng(seed)
    rho = realism.random_density_matrix(4, rng)
    b = rand_basis(4, rng)
    assert realism.irreality(rho, b) >= -1e-12
    phi = realism.dephase(rho, b)
    assert realism.irreality(phi, b) == pytest.approx(0, abs=1e-9)
    assert realism.is_fixed_point(phi, b)


def test_positive_irreality_off_fixed_point():
    v = np.array([1, 1]) / np.sqrt(2)
    rho = np.outer(v, v)
    b = ObservableBasis.computational(2)
    assert not realism.is_fixed_point(rho, b)
    assert realism.irreality(rho, b) == pytest.approx(np.log(2))
    assert realism.irreality(rho, realism.basis_of(rho)) == pytest.approx(0, abs=1e-12)


def test_decomposition_product_has_no_discord():
    rng = np.random.default_rng(8)
    rho = BipartiteState.product(realism.random_density_matrix(2, rng), realism.random_density_matrix(3, rng))
    dec = realism.irreality_decomposition(rho, rand_basis(2, rng))
    assert dec.discord == pytest.approx(0, abs=1e-10)


def test_decomposition_bell_pair():
    rho = realism.maximally_entangled_state(2)
    b = ObservableBasis.computational(2)
    dec = realism.irreality_decomposition(rho, b)
    assert dec.local_coherence == pytest.approx(0, abs=1e-12)
    assert dec.discord == pytest.approx(realism.irreality(rho, b), abs=1e-12)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_decomposition_sums_to_total(seed):
    rng = np.random.default_rng(seed)
    rho = realism.random_bipartite_state(2, 3, rng)
    b = rand_basis(2, rng)
    assert realism.irreality_decomposition(rho, b).total == pytest.approx(realism.irreality(rho, b), abs=1e-9)


def test_info_lower_bound_examples():
    rng = np.random.default_rng(9)
    flat = BipartiteState.product(np.eye(3) / 3, realism.random_density_matrix(2, rng))
    assert realism.info_lower_bound(flat) == pytest.approx(0, abs=1e-12)
    for d in (2, 3, 4):
        assert realism.info_lower_bound(realism.maximally_entangled_state(d)) == pytest.approx(2 * np.log(d), abs=1e-9)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_info_lower_bound_identities(seed):
    rho = realism.random_bipartite_state(3, 2, np.random.default_rng(seed))
    bound = realism.info_lower_bound(rho)
    local = np.log(3) - von_neumann_entropy(rho.reduced_a())
    assert bound == pytest.approx(local + realism.mutual_information(rho), abs=1e-9)
    assert bound == pytest.approx(realism.info_lower_bound_relative(rho), abs=1e-9)


def test_slack_equality_case():
    rng = np.random.default_rng(10)
    rho = BipartiteState.product(np.eye(2) / 2, realism.random_density_matrix(3, rng))
    s = realism.uncertainty_slack(rho, rand_basis(2, rng), rand_basis(2, rng))
    assert s == pytest.approx(0, abs=1e-9)


def test_slack_bell_pair_unbiased():
    rho = realism.maximally_entangled_state(2)
    b = ObservableBasis.computational(2)
    assert realism.uncertainty_slack(rho, b, ObservableBasis.fourier(2)) >= -1e-9
    assert realism.info_lower_bound(rho) == pytest.approx(2 * np.log(2))


@given(seeds, st.sampled_from([(2, 2), (3, 2), (2, 3), (3, 3)]))
@settings(max_examples=60, deadline=None)
def test_slack_nonnegative_for_unbiased_bases(seed, dims):
    rng = np.random.default_rng(seed)
    rho = realism.random_bipartite_state(*dims, rng)
    b = rand_basis(dims[0], rng)
    partner = realism.unbiased_partner(b)
    assert realism.max_overlap(b, partner) == pytest.approx(1 / dims[0], abs=1e-12)
    assert realism.uncertainty_slack(rho, b, partner) >= -1e-9


@given(seeds, st.sampled_from([(2, 2), (3, 2), (3, 3)]))
@settings(max_examples=60, deadline=None)
def test_slack_overlap_bound_for_arbitrary_bases(seed, dims):
    rng = np.random.default_rng(seed)
    rho = realism.random_bipartite_state(*dims, rng)
    b1, b2 = rand_basis(dims[0], rng), rand_basis(dims[0], rng)
    c = realism.max_overlap(b1, b2)
    assert realism.uncertainty_slack(rho, b1, b2) >= -np.log(dims[0] * c) - 1e-9


def test_slack_can_be_negative_for_compatible_bases():
    # a shared eigenbasis: both irrealities vanish while the bound is ln d
    rho = BipartiteState.product(np.diag([1.0, 0.0]), np.eye(2) / 2)
    b = ObservableBasis.computational(2)
    assert realism.uncertainty_slack(rho, b, b) == pytest.approx(-np.log(2), abs=1e-12)


def test_qp_irreality_sum():
    v, ok = realism.qp_irreality_sum(1, 1)
    assert v == pytest.approx(2.837877, abs=1e-6) and ok
    assert realism.qp_irreality_sum(2, 1)[0] == pytest.approx(np.log(4 * np.pi * np.e))
    with pytest.raises(ValidityError):
        realism.qp_irreality_sum(0.5, 3)


@pytest.mark.parametrize("width", [np.sqrt(301 / (4 * np.pi)), np.sqrt(301 / (2 * np.pi))])
def test_qp_sum_numeric(width):
    g = grid.make_grid(1.0, 301)
    psi = states.gaussian_state(g, states.GaussianSpec(width))
    total = (realism.irreality(psi, realism.position_basis(g))
             + realism.irreality(psi, realism.momentum_basis(g)))
    dp = g.xi / (4 * np.pi * width)
    closed, _ = realism.qp_irreality_sum(width, dp)
    assert closed == pytest.approx(np.log(np.e * g.xi / 2), abs=1e-12)
    assert total == pytest.approx(closed, abs=5e-3)
