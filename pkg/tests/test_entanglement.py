import numpy as np
import pytest
from conftest import random_multimode

from gaussmanifold import fock_oracle as fo
from gaussmanifold.entanglement import (
    BipartiteEffectiveState,
    TwoBranchBellSpec,
    bipartite_from_overlaps,
    build_bipartite_effective,
    dephasing_bound,
    negativity_closed_form,
    negativity_from_overlaps,
    negativity_numeric,
    partial_transpose_B,
    schmidt_from_negativity,
    schmidt_spectrum,
)
from gaussmanifold.errors import (
    DegenerateStateError,
    DimensionError,
    InvalidParameterError,
    InvalidStateError,
    NearDependenceError,
)
from gaussmanifold.gaussian_core import coherent, displaced_squeezed, vacuum
from gaussmanifold.sweeps import cat_pair
from gaussmanifold.verify import fock_bell_density


def coherent_pair_with_overlap(a):
    """Coherent branches D(+-beta)|0> whose overlap is ``a``."""
    beta = np.sqrt(-np.log(a) / 2)
    return coherent(beta), coherent(-beta)


class TestClosedForm:
    @pytest.mark.parametrize("phi", [0, 1.0, np.pi])
    def test_orthogonal_branches(self, phi):
        assert negativity_from_overlaps(0, 0, phi) == pytest.approx(0.5, abs=1e-12)

    def test_coincident_side(self):
        assert negativity_from_overlaps(1, 0.3, 0.4) == 0.0
        assert negativity_from_overlaps(0.2, 1, 2.0) == 0.0

    def test_substitution(self):
        assert negativity_from_overlaps(0.5, 0.5, 0) == pytest.approx(0.3, abs=1e-15)

    def test_bounded_by_half(self, rng):
        for a, b, phi in zip(rng.uniform(0, 1, 500), rng.uniform(0, 1, 500), rng.uniform(0, 2 * np.pi, 500)):
            assert 0 <= negativity_from_overlaps(a, b, phi) <= 0.5 + 1e-15

    def test_degenerate_normalization(self):
        with pytest.raises(DegenerateStateError):
            negativity_from_overlaps(1, 1, np.pi)

    def test_invalid_overlaps(self):
        with pytest.raises(InvalidParameterError):
            negativity_from_overlaps(1.2, 0.1, 0)

    def test_spec_gauge_fixes_overlaps(self):
        gA1, gA2 = displaced_squeezed(0.5, 0.2, 0.1), displaced_squeezed(-0.3 + 0.4j, -0.1, 0.8)
        spec = TwoBranchBellSpec(gA1, gA2, coherent(0.2), coherent(-0.7j), phi=0.3)
        assert 0 <= spec.a < 1 and 0 <= spec.b < 1
        assert negativity_closed_form(spec) == pytest.approx(negativity_from_overlaps(spec.a, spec.b, 0.3))


class TestSchmidt:
    def test_limits(self):
        assert schmidt_from_negativity(0.5) == pytest.approx((0.5, 0.5))
        assert schmidt_from_negativity(0.0) == pytest.approx((1.0, 0.0))

    def test_identities_and_reduced_state(self, rng):
        for _ in range(50):
            a, b, phi = rng.uniform(0, 0.95), rng.uniform(0, 0.95), rng.uniform(0, 2 * np.pi)
            n = negativity_from_overlaps(a, b, phi)
            l1, l2 = schmidt_from_negativity(n)
            assert abs(l1 + l2 - 1) < 1e-12 and abs(l1 * l2 - n * n) < 1e-12 and l1 >= l2 >= 0
            reduced = np.linalg.eigvalsh(bipartite_from_overlaps(a, b, phi).reduced_a())[::-1]
            assert np.allclose(reduced, [l1, l2], atol=1e-10)

    def test_from_spec(self):
        g1, g2 = coherent_pair_with_overlap(0.5)
        l1, l2 = schmidt_spectrum(TwoBranchBellSpec(g1, g2, g1, g2))
        assert l1 * l2 == pytest.approx(0.09, abs=1e-12)
        assert l1 + l2 == pytest.approx(1.0, abs=1e-12)


class TestEffectiveState:
    def test_incoherent_orthogonal(self):
        rho = bipartite_from_overlaps(0, 0, 0, p=1).matrix
        assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]))

    def test_pure_is_rank_one(self, rng):
        for _ in range(10):
            rho = bipartite_from_overlaps(rng.uniform(0, 0.9), rng.uniform(0, 0.9), rng.uniform(0, 6)).matrix
            assert np.allclose(np.linalg.eigvalsh(rho), [0, 0, 0, 1], atol=1e-10)

    def test_dephased_is_valid(self):
        rho = bipartite_from_overlaps(0.3, 0.3, np.pi / 3, p=0.4).matrix
        assert abs(np.trace(rho) - 1) < 1e-12
        assert np.linalg.eigvalsh(rho).min() > -1e-12

    def test_matches_oracle_partial_transpose(self):
        g1, g2 = cat_pair(0.6, 0.2)
        spec = TwoBranchBellSpec(g1, g2, g1, g2, np.pi / 3, 0.4)
        rho, dims = fock_bell_density(spec, 30)
        oracle = np.linalg.eigvalsh(fo.fock_partial_transpose(rho, dims))
        ours = np.linalg.eigvalsh(partial_transpose_B(build_bipartite_effective(spec)))
        # The oracle carries the same four nonzero eigenvalues plus zeros.
        nonzero = oracle[np.abs(oracle) > 1e-9]
        assert nonzero.size == 4
        assert np.allclose(np.sort(ours), nonzero, atol=1e-7)

    def test_near_dependent_side(self):
        g = coherent(0.3)
        with pytest.raises(NearDependenceError):
            build_bipartite_effective(TwoBranchBellSpec(g, g, *cat_pair(1.0)))

    def test_mode_mismatch(self):
        with pytest.raises(DimensionError):
            TwoBranchBellSpec(vacuum(1), vacuum(2), vacuum(1), coherent(1))

    def test_bad_weight(self):
        with pytest.raises(InvalidParameterError):
            bipartite_from_overlaps(0.1, 0.1, 0, p=1.2)

    def test_wrong_shape(self):
        with pytest.raises(DimensionError):
            BipartiteEffectiveState(np.eye(3) / 3)


class TestPartialTranspose:
    def test_involution_and_trace(self, rng):
        rho = bipartite_from_overlaps(0.4, 0.2, 1.1, p=0.3).matrix
        pt = partial_transpose_B(rho)
        assert np.array_equal(partial_transpose_B(pt), rho)
        assert np.trace(pt) == pytest.approx(np.trace(rho))
        assert np.allclose(pt, pt.conj().T)

    def test_diagonal_unchanged(self):
        rho = np.diag([0.1, 0.2, 0.3, 0.4])
        assert np.array_equal(partial_transpose_B(rho), rho)

    def test_maximally_entangled(self):
        pt = partial_transpose_B(bipartite_from_overlaps(0, 0, 0))
        assert np.allclose(np.linalg.eigvalsh(pt), [-0.5, 0.5, 0.5, 0.5])

    def test_min_eigenvalue_is_minus_negativity(self, rng):
        for _ in range(20):
            a, b, phi = rng.uniform(0, 0.95, 2).tolist() + [rng.uniform(0, 2 * np.pi)]
            eigs = np.linalg.eigvalsh(partial_transpose_B(bipartite_from_overlaps(a, b, phi)))
            assert abs(eigs[0] + negativity_from_overlaps(a, b, phi)) < 1e-10


class TestNegativity:
    def test_closed_form_equals_numeric(self, rng):
        worst = 0.0
        for _ in range(1000):
            a, b, phi = rng.uniform(0, 0.999), rng.uniform(0, 0.999), rng.uniform(0, 2 * np.pi)
            num = negativity_numeric(bipartite_from_overlaps(a, b, phi))
            worst = max(worst, abs(num - negativity_from_overlaps(a, b, phi)))
        assert worst < 1e-10

    def test_incoherent_is_separable(self, rng):
        for a, b in rng.uniform(0, 0.9, (10, 2)):
            state = bipartite_from_overlaps(a, b, 0.7, p=1)
            assert negativity_numeric(state, require_separable=True) < 1e-14

    def test_require_separable_raises_on_entangled(self):
        with pytest.raises(InvalidStateError):
            negativity_numeric(bipartite_from_overlaps(0.2, 0.2, 0), require_separable=True)

    def test_dephasing_bound_and_monotonicity(self, rng):
        for _ in range(20):
            g1, g2 = coherent_pair_with_overlap(rng.uniform(0.01, 0.95))
            h1, h2 = coherent_pair_with_overlap(rng.uniform(0.01, 0.95))
            phi = rng.uniform(0, 2 * np.pi)
            values = []
            for p in np.linspace(0, 1, 11):
                spec = TwoBranchBellSpec(g1, g2, h1, h2, phi, p)
                n = negativity_numeric(build_bipartite_effective(spec))
                assert n <= dephasing_bound(spec) + 1e-10
                values.append(n)
            assert values[0] == pytest.approx(negativity_closed_form(spec), abs=1e-10)
            assert values[-1] < 1e-12
            assert np.all(np.diff(values) <= 1e-12)

    def test_multimode_reduction(self, rng):
        for _ in range(5):
            gA1, gA2 = random_multimode(rng, 2), random_multimode(rng, 2)
            gB1, gB2 = random_multimode(rng, 2), random_multimode(rng, 2)
            phi, p = rng.uniform(0, 2 * np.pi), rng.uniform(0, 0.5)
            multi = TwoBranchBellSpec(gA1, gA2, gB1, gB2, phi, p)
            single = TwoBranchBellSpec(*coherent_pair_with_overlap(multi.a), *coherent_pair_with_overlap(multi.b), phi, p)
            assert abs(single.a - multi.a) < 1e-12 and abs(single.b - multi.b) < 1e-12
            n_multi = negativity_numeric(build_bipartite_effective(multi))
            n_single = negativity_numeric(build_bipartite_effective(single))
            assert abs(n_multi - n_single) < 1e-10

    @pytest.mark.parametrize(
        "alpha,r,theta2,phi,p",
        [(0.8, 0.3, 0.0, 0.0, 0.0), (1.2, -0.4, 0.7, 2.0, 0.3), (0.5, 0.5, np.pi / 2, np.pi / 3, 0.6)],
    )
    def test_matches_oracle(self, alpha, r, theta2, phi, p):
        g1, g2 = cat_pair(alpha, r, 0.0, theta2)
        h1, h2 = cat_pair(0.7 * alpha, -r)
        spec = TwoBranchBellSpec(g1, g2, h1, h2, phi, p)
        rho, dims = fock_bell_density(spec, 40)
        assert abs(negativity_numeric(build_bipartite_effective(spec)) - fo.fock_negativity(rho, dims)) < 1e-6
