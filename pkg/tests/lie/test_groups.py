"""Tests for group descriptors, generators, exp and log."""
import numpy as np
import pytest

from groups.factory import GroupFactory
from groups.so2 import SO2Group
from interfaces.errors import BranchCutError, InvalidArgumentError
from interfaces.lie_group import GroupElement, GroupId
from lie.algebra import (
    algebra_element,
    commutator,
    generators,
    group_element,
    log_closed_form,
    project_onto_algebra,
)
from lie.expm import exp_matrix

J = np.array([[0.0, -1.0], [1.0, 0.0]])


def rotation(theta):
    return np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])


class TestGroupFactory:
    """Test group resolution and descriptors."""

    def test_descriptors(self):
        """Test matrix and algebra dimensions of every group."""
        assert GroupFactory.describe(GroupId.SO2).matrix_dim == 2
        assert GroupFactory.describe(GroupId.SO2).algebra_dim == 1
        assert GroupFactory.describe(GroupId.SO2).compact is True
        assert GroupFactory.describe(GroupId.SE2).algebra_dim == 3
        assert GroupFactory.describe(GroupId.T2).algebra_dim == 2
        assert GroupFactory.describe(GroupId.T2).compact is False

    def test_resolve_by_name(self):
        """Test string names resolve case-insensitively."""
        assert GroupFactory.resolve_id("se2") is GroupId.SE2
        assert set(GroupFactory.get_available_groups()) == {"SO2", "SE2", "T2"}

    def test_unknown_group(self):
        """Test unknown names raise an invalid-argument error."""
        with pytest.raises(InvalidArgumentError):
            GroupFactory.create("SO3")

    def test_register_group_overrides(self, monkeypatch):
        """Test a registered implementation is what create and describe return."""
        monkeypatch.setattr(GroupFactory, "_groups", dict(GroupFactory._groups))

        class CountingSO2(SO2Group):
            created = 0

            def __init__(self):
                super().__init__()
                CountingSO2.created += 1

        GroupFactory.register_group(GroupId.SO2, CountingSO2)
        assert isinstance(GroupFactory.create("so2"), CountingSO2)
        assert GroupFactory.describe(GroupId.SO2).algebra_dim == 1
        assert CountingSO2.created == 2

    def test_unregistered_id(self, monkeypatch):
        """Test an id with no registered implementation raises."""
        monkeypatch.setattr(GroupFactory, "_groups", {GroupId.SO2: SO2Group})
        with pytest.raises(InvalidArgumentError):
            GroupFactory.create(GroupId.T2)
        assert GroupFactory.get_available_groups() == ["SO2"]


class TestGenerators:
    """Test generator bases."""

    def test_so2_generator(self):
        """Test SO2 has the single antisymmetric generator J."""
        (gen,) = generators(GroupId.SO2)
        assert np.array_equal(gen, J)

    def test_t2_generators(self):
        """Test T2 generators have one unit entry in the translation column."""
        tx, ty = generators(GroupId.T2)
        assert tx[0, 2] == 1.0 and np.count_nonzero(tx) == 1
        assert ty[1, 2] == 1.0 and np.count_nonzero(ty) == 1

    @pytest.mark.parametrize("group", list(GroupId))
    def test_count_matches_algebra_dim(self, group):
        """Test generator count equals algebra_dim and the basis is independent."""
        gens = generators(group)
        assert len(gens) == GroupFactory.describe(group).algebra_dim
        flat = np.stack([g.ravel() for g in gens])
        assert np.linalg.matrix_rank(flat) == len(gens)

    def test_se2_commutators_close(self):
        """Test pairwise SE2 brackets lie in the generator span."""
        descriptor = GroupFactory.describe(GroupId.SE2)
        gens = generators(GroupId.SE2)
        for a in gens:
            for b in gens:
                _, residual = project_onto_algebra(descriptor, commutator(a, b))
                assert residual < 1e-12


class TestExpMatrix:
    """Test the scaling-and-squaring exponential."""

    def test_zero_is_identity(self):
        """Test exp(0) = I."""
        assert np.array_equal(exp_matrix(np.zeros((3, 3))), np.eye(3))

    def test_quarter_turn(self):
        """Test exp(π/2 J) is the quarter-turn matrix."""
        assert np.max(np.abs(exp_matrix(0.5 * np.pi * J) - J)) < 1e-12

    def test_small_rotation(self):
        """Test exp(0.3 J) matches the closed form."""
        assert np.max(np.abs(exp_matrix(0.3 * J) - rotation(0.3))) < 1e-12

    def test_thousand_rotations(self):
        """Test 1000 seeded angles in [-π, π] against the closed form."""
        rng = np.random.default_rng(0)
        for theta in rng.uniform(-np.pi, np.pi, 1000):
            assert np.max(np.abs(exp_matrix(theta * J) - rotation(theta))) < 1e-12

    def test_matches_power_series(self):
        """Test a general 3x3 matrix against a long power series."""
        A = np.random.default_rng(3).uniform(-1.0, 1.0, (3, 3))
        series = np.eye(3)
        term = np.eye(3)
        for k in range(1, 40):
            term = term @ A / k
            series = series + term
        assert np.max(np.abs(exp_matrix(A) - series)) < 1e-12 * np.max(np.abs(series))

    def test_homomorphism_on_abelian_directions(self):
        """Test exp((a+b)J) = exp(aJ)exp(bJ)."""
        rng = np.random.default_rng(1)
        for a, b in rng.uniform(-np.pi, np.pi, (50, 2)):
            lhs = exp_matrix((a + b) * J)
            rhs = exp_matrix(a * J) @ exp_matrix(b * J)
            assert np.max(np.abs(lhs - rhs)) < 1e-11

    def test_so2_outputs_orthogonal(self):
        """Test exp of so(2) elements is orthogonal with unit determinant."""
        for theta in np.linspace(-np.pi, np.pi, 37):
            g = exp_matrix(theta * J)
            assert np.max(np.abs(g.T @ g - np.eye(2))) < 1e-11
            assert abs(np.linalg.det(g) - 1.0) < 1e-11

    def test_non_finite_input(self):
        """Test NaN input raises an invalid-argument error."""
        with pytest.raises(InvalidArgumentError):
            exp_matrix(np.array([[np.nan, 0.0], [0.0, 0.0]]))

    def test_non_square_input(self):
        """Test non-square input is rejected."""
        with pytest.raises(InvalidArgumentError):
            exp_matrix(np.zeros((2, 3)))


class TestLogClosedForm:
    """Test the closed-form logarithm."""

    def test_identity(self):
        """Test log(I) is zero."""
        descriptor = GroupFactory.describe(GroupId.SE2)
        assert np.array_equal(log_closed_form(GroupElement.identity(descriptor)).coeffs, np.zeros(3))

    def test_rotation(self):
        """Test a 0.7 rad rotation logs to [0.7]."""
        g = GroupElement(GroupFactory.describe(GroupId.SO2), rotation(0.7))
        assert log_closed_form(g).coeffs[0] == pytest.approx(0.7, abs=1e-12)

    def test_se2_pure_translation(self):
        """Test a pure SE2 translation logs to [0, tx, ty]."""
        matrix = np.eye(3)
        matrix[:2, 2] = [1.0, 2.0]
        g = GroupElement(GroupFactory.describe(GroupId.SE2), matrix)
        assert np.allclose(log_closed_form(g).coeffs, [0.0, 1.0, 2.0], atol=1e-12)

    def test_roundtrip_so2(self):
        """Test log ∘ exp is the identity on coefficients in (-π, π)."""
        for theta in np.random.default_rng(2).uniform(-3.1, 3.1, 100):
            x = log_closed_form(group_element(GroupId.SO2, [theta]))
            assert abs(x.coeffs[0] - theta) < 1e-9

    def test_exp_reproduces_se2(self):
        """Test exp(log g) = g for random SE2 elements."""
        rng = np.random.default_rng(4)
        for _ in range(50):
            coeffs = [rng.uniform(-3.0, 3.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)]
            g = group_element(GroupId.SE2, coeffs)
            x = log_closed_form(g)
            assert np.max(np.abs(exp_matrix(x.matrix) - g.matrix)) < 1e-10

    def test_branch_cut(self):
        """Test a rotation by π raises a branch-cut error."""
        g = GroupElement(GroupFactory.describe(GroupId.SO2), np.array([[-1.0, 0.0], [0.0, -1.0]]))
        with pytest.raises(BranchCutError):
            log_closed_form(g)


class TestElements:
    """Test element construction and invariants."""

    def test_algebra_matrix_is_combination(self):
        """Test the realized matrix is Σ cᵢ xᵢ."""
        x = algebra_element(GroupId.SE2, [0.5, -1.0, 2.0])
        gens = generators(GroupId.SE2)
        assert np.array_equal(x.matrix, 0.5 * gens[0] - 1.0 * gens[1] + 2.0 * gens[2])

    def test_wrong_coefficient_count(self):
        """Test wrong coefficient counts are rejected."""
        with pytest.raises(InvalidArgumentError):
            algebra_element(GroupId.T2, [1.0])

    def test_non_rotation_rejected(self):
        """Test SO2 elements must be rotations."""
        with pytest.raises(InvalidArgumentError):
            GroupElement(GroupFactory.describe(GroupId.SO2), np.array([[2.0, 0.0], [0.0, 0.5]]))

    def test_bottom_row_enforced(self):
        """Test homogeneous elements need bottom row (0, 0, 1)."""
        matrix = np.eye(3)
        matrix[2, 0] = 0.1
        with pytest.raises(InvalidArgumentError):
            GroupElement(GroupFactory.describe(GroupId.T2), matrix)

    def test_inverse_and_compose(self):
        """Test g · g⁻¹ = I for SE2."""
        g = group_element(GroupId.SE2, [1.2, 0.3, -0.7])
        product = g.compose(g.inverse())
        assert np.max(np.abs(product.matrix - np.eye(3))) < 1e-12
