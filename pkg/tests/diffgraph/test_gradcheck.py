"""Finite-difference checks of every differentiable op and the Lie conv layer."""
import numpy as np
import pytest

from diffgraph import ops
from diffgraph.gradcheck import check_gradients, relative_error
from diffgraph.node import parameter
from gconv.layer import LieConvLayer, lie_conv_forward
from gconv.mapping import load_linear_exp
from interfaces.errors import InvalidArgumentError, ShapeError
from interfaces.lie_group import GroupId
from interfaces.models import Activation
from lie.sampling import sample_algebra


def weighted_sum(node, seed=0):
    """Scalar Σ w ⊙ node with fixed random weights, so every entry matters."""
    weights = np.random.default_rng(seed).normal(size=node.shape)
    return ops.sum(ops.mul(node, weights))


def away_from_zero(rng, shape, margin=0.1):
    values = rng.uniform(margin, 1.0, shape)
    return values * rng.choice([-1.0, 1.0], shape)


class TestOpGradients:
    """Test analytic gradients of each op against central differences."""

    def test_add_sub_mul(self):
        """Test elementwise arithmetic on equal shapes."""
        rng = np.random.default_rng(0)
        a = parameter(rng.normal(size=(3, 4)))
        b = parameter(rng.normal(size=(3, 4)))
        result = check_gradients(lambda: weighted_sum(ops.mul(ops.sub(a, b), ops.add(a, b))), [a, b])
        assert result.passed()

    def test_scalar_broadcast(self):
        """Test a (1,) operand spreads over a tensor and sums back."""
        rng = np.random.default_rng(1)
        a = parameter(rng.normal(size=(5,)))
        s = parameter([0.7])
        result = check_gradients(lambda: weighted_sum(ops.mul(ops.add(a, s), s)), [a, s])
        assert result.passed()

    def test_scale_and_exp(self):
        """Test scale and exp."""
        a = parameter(np.random.default_rng(2).normal(size=(4,)))
        result = check_gradients(lambda: weighted_sum(ops.exp(ops.scale(a, 0.5))), [a])
        assert result.passed()

    def test_matmul(self):
        """Test 2-D matrix products."""
        rng = np.random.default_rng(3)
        a = parameter(rng.normal(size=(3, 4)))
        b = parameter(rng.normal(size=(4, 2)))
        assert check_gradients(lambda: weighted_sum(ops.matmul(a, b)), [a, b]).passed()

    @pytest.mark.parametrize("batch", [False, True])
    def test_affine(self, batch):
        """Test x Wᵀ + b for single and batched inputs."""
        rng = np.random.default_rng(4)
        x = parameter(rng.normal(size=(5, 3) if batch else (3,)))
        w = parameter(rng.normal(size=(2, 3)))
        b = parameter(rng.normal(size=(2,)))
        assert check_gradients(lambda: weighted_sum(ops.affine(x, w, b)), [x, w, b]).passed()

    def test_relu(self):
        """Test relu away from its kink."""
        x = parameter(away_from_zero(np.random.default_rng(5), (6,)))
        assert check_gradients(lambda: weighted_sum(ops.relu(x)), [x]).passed()

    def test_sigmoid_and_identity(self):
        """Test sigmoid and identity."""
        x = parameter(np.random.default_rng(6).normal(size=(6,)))
        assert check_gradients(lambda: weighted_sum(ops.sigmoid(ops.identity(x))), [x]).passed()

    @pytest.mark.parametrize("axis", [None, 0, 1])
    def test_sum_and_mean(self, axis):
        """Test reductions over all entries and single axes."""
        x = parameter(np.random.default_rng(7).normal(size=(3, 4)))

        def fn():
            return ops.add(weighted_sum(ops.sum(x, axis)), weighted_sum(ops.mean(x, axis), 1))

        assert check_gradients(fn, [x]).passed()

    def test_max_reduce(self):
        """Test max along an axis with distinct entries."""
        x = parameter(np.random.default_rng(8).permutation(12).reshape(3, 4) * 0.1)
        assert check_gradients(lambda: weighted_sum(ops.max_reduce(x, axis=1)), [x]).passed()

    def test_concat_reshape_transpose(self):
        """Test the layout ops."""
        rng = np.random.default_rng(9)
        a = parameter(rng.normal(size=(2, 3)))
        b = parameter(rng.normal(size=(1, 3)))

        def fn():
            joined = ops.concat([a, b], axis=0)
            return weighted_sum(ops.transpose(ops.reshape(joined, (3, 3, 1)), (2, 1, 0)))

        assert check_gradients(fn, [a, b]).passed()

    @pytest.mark.parametrize("shape", [(3, 3), (4, 2, 2)])
    def test_matrix_inverse(self, shape):
        """Test A⁻¹ for single matrices and stacks."""
        rng = np.random.default_rng(10)
        a = parameter(2.0 * np.eye(shape[-1]) + rng.uniform(-0.4, 0.4, shape))
        assert check_gradients(lambda: weighted_sum(ops.matrix_inverse(a)), [a]).passed()

    def test_mse_loss(self):
        """Test mean squared error in both arguments."""
        rng = np.random.default_rng(11)
        p = parameter(rng.normal(size=(4, 2)))
        t = parameter(rng.normal(size=(4, 2)))
        assert check_gradients(lambda: ops.mse_loss(p, t), [p, t]).passed()

    def test_softmax_cross_entropy(self):
        """Test mean cross-entropy of logits."""
        logits = parameter(np.random.default_rng(12).normal(size=(5, 3)))
        labels = [0, 2, 1, 1, 0]
        assert check_gradients(lambda: ops.softmax_cross_entropy(logits, labels), [logits]).passed()


class TestOpValidation:
    """Test shape and argument checks."""

    def test_mismatched_elementwise(self):
        """Test elementwise ops reject non-scalar shape mismatches."""
        with pytest.raises(ShapeError):
            ops.add(np.zeros((2, 3)), np.zeros((3, 2)))

    def test_matmul_shapes(self):
        """Test matmul rejects inner dimension mismatch."""
        with pytest.raises(ShapeError):
            ops.matmul(np.zeros((2, 3)), np.zeros((2, 3)))

    def test_reshape_size(self):
        """Test reshape rejects a different element count."""
        with pytest.raises(ShapeError):
            ops.reshape(np.zeros(6), (4, 2))

    def test_label_range(self):
        """Test out-of-range labels raise."""
        with pytest.raises(InvalidArgumentError):
            ops.softmax_cross_entropy(np.zeros((2, 3)), [0, 3])

    def test_softmax_rows_sum_to_one(self):
        """Test the evaluation softmax normalizes rows."""
        probs = ops.softmax(np.random.default_rng(0).normal(size=(4, 5)))
        assert np.allclose(probs.sum(axis=1), 1.0)

    def test_relative_error_floor(self):
        """Test tiny gradients are compared against the 1e-3 floor."""
        assert relative_error(np.array([1e-9]), np.array([0.0]))[0] == pytest.approx(1e-6)


def conv_layer(group, seed, strict=False):
    samples = sample_algebra(group, count=6, seed=seed)
    layer = LieConvLayer(
        group, 2, 3, samples,
        strict_mode=strict,
        kernel_hidden=6,
        kernel_activation=Activation.SIGMOID,
        mapping_activation=Activation.IDENTITY,
        rng=np.random.default_rng(seed),
    )
    load_linear_exp(layer.mapping)
    return layer


class TestLieConvGradients:
    """Test gradients through the full layer."""

    @pytest.mark.parametrize("seed", range(20))
    def test_so2_layer(self, seed):
        """Test every layer parameter on 20 seeded layers."""
        layer = conv_layer(GroupId.SO2, seed)
        f = np.random.default_rng(100 + seed).normal(size=(6, 2))
        result = check_gradients(lambda: weighted_sum(lie_conv_forward(layer, f), seed), layer.parameters())
        assert result.max_rel_error < 1e-4

    @pytest.mark.parametrize("strict", [False, True])
    def test_se2_batched(self, strict):
        """Test a batched SE2 layer in both modes."""
        layer = conv_layer(GroupId.SE2, 3, strict)
        f = np.random.default_rng(7).normal(size=(2, 6, 2))
        result = check_gradients(lambda: weighted_sum(lie_conv_forward(layer, f)), layer.parameters())
        assert result.passed()

    def test_strict_mode_leaves_mapping_untouched(self):
        """Test strict mode sends no gradient to the mapping parameters."""
        layer = conv_layer(GroupId.SO2, 0, strict=True)
        f = np.random.default_rng(1).normal(size=(6, 2))
        weighted_sum(lie_conv_forward(layer, f)).backward()
        assert not any(p.grad.any() for p in layer.mapping.parameters())
        assert any(p.grad.any() for p in layer.kernel.parameters())
