"""Deviation bound between normal-mode and strict-mode Lie conv outputs.

Two bounds are reported. The literal one is K̂·N·|δ̂ₓ|·maxⱼ‖exp(uⱼ)‖ with

    δ̂ₓ = maxᵢ (‖gᵢ⁻¹‖ - ‖M(xᵢ)⁻¹‖),   K̂ = max ‖k(A)‖ / ‖A‖ over sampled arguments,

and δ̂ₓ kept with its sign in `delta_x_raw`. It compares norms rather than
differences, so it does not dominate the deviation in general. The certified
one,

    vol · N · Lip(k) · maxᵢ‖gᵢ⁻¹ - M(xᵢ)⁻¹‖_F · maxⱼ‖exp(uⱼ)‖₂ · maxᵢ‖fᵢ‖₂,

bounds maxⱼ‖out_normal[j] - out_strict[j]‖₂ for every input.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog
from dataclasses_json import dataclass_json

from gconv.layer import LieConvLayer, lie_conv_forward
from interfaces.errors import PreconditionError, ShapeError
from metrics.norms import MatrixNorm, matrix_norm
from metrics.reports import REPORT_VERSION

logger = structlog.get_logger(__name__)

DEFAULT_KERNEL_ARGS = 64


@dataclass_json
@dataclass
class BoundReport:
    group: str
    n_samples: int
    norm: str
    vol_scale: float
    delta_x_raw: float
    delta_x: float
    kernel_gain: float
    kernel_lipschitz: float
    max_exp_norm: float
    max_inverse_gap: float
    max_input_norm: float
    literal_bound: float
    certified_bound: float
    measured_deviation: float
    literal_ratio: Optional[float]
    certified_ratio: Optional[float]
    literal_holds: bool
    certified_holds: bool
    report_version: int = REPORT_VERSION


def mode_deviation(layer: LieConvLayer, f_values: np.ndarray,
                   strict_a: bool = False, strict_b: bool = True) -> float:
    """maxⱼ ‖out_a[j] - out_b[j]‖₂ between two evaluation modes on the same input."""
    a = lie_conv_forward(layer, f_values, strict=strict_a).value
    b = lie_conv_forward(layer, f_values, strict=strict_b).value
    return float(np.max(np.linalg.norm(a - b, axis=-1)))


def _kernel_gain(layer: LieConvLayer, kernel_args: np.ndarray, kind: MatrixNorm) -> float:
    outputs = layer.kernel.evaluate(kernel_args)
    gains = [
        matrix_norm(out, kind) / matrix_norm(A, kind)
        for A, out in zip(kernel_args, outputs)
        if matrix_norm(A, kind) > 0.0
    ]
    return float(max(gains)) if gains else 0.0


def _ratio(measured: float, bound: float) -> Optional[float]:
    return measured / bound if bound > 0.0 else None


def lie_conv_bound_report(
    layer: LieConvLayer,
    probe_f: np.ndarray,
    seed: int = 0,
    n_kernel_args: int = DEFAULT_KERNEL_ARGS,
    norm: MatrixNorm = MatrixNorm.SPECTRAL,
) -> BoundReport:
    """Measure the strict-vs-normal deviation on probe_f and both bounds."""
    if layer.strict_mode:
        raise PreconditionError("bound report needs a layer in normal mode")
    probe_f = np.asarray(probe_f, dtype=np.float64)
    if probe_f.shape != (layer.n_in, layer.c_in):
        raise ShapeError(f"probe_f must be [{layer.n_in} x {layer.c_in}], got {probe_f.shape}")
    kind = MatrixNorm(norm)
    n = layer.group.matrix_dim

    exact = layer.exact_inverses
    learned = layer.mapping_inverses().value
    exps = layer.out_exponentials
    delta_raw = max(matrix_norm(g, kind) - matrix_norm(m, kind) for g, m in zip(exact, learned))
    max_exp = max(matrix_norm(e, MatrixNorm.SPECTRAL) for e in exps)

    # random arguments plus every kernel argument used in either mode
    rng = np.random.default_rng(seed)
    used = np.concatenate([
        np.einsum("iab,jbc->jiac", inverses, exps).reshape(-1, n, n) for inverses in (exact, learned)
    ])
    kernel_args = np.concatenate([rng.standard_normal((n_kernel_args, n, n)), used])
    gain = _kernel_gain(layer, kernel_args, kind)

    lipschitz = layer.kernel.lipschitz_constant()
    inverse_gap = float(np.max(np.linalg.norm((exact - learned).reshape(layer.n_in, -1), axis=1)))
    input_norm = float(np.max(np.linalg.norm(probe_f, axis=1)))
    max_exp_2 = max(float(np.linalg.norm(e, 2)) for e in exps)

    literal = gain * layer.n_in * abs(delta_raw) * max_exp
    certified = layer.vol_scale * layer.n_in * lipschitz * inverse_gap * max_exp_2 * input_norm
    measured = mode_deviation(layer, probe_f)

    report = BoundReport(
        group=layer.group.id.value,
        n_samples=layer.n_in,
        norm=kind.value,
        vol_scale=layer.vol_scale,
        delta_x_raw=float(delta_raw),
        delta_x=float(abs(delta_raw)),
        kernel_gain=gain,
        kernel_lipschitz=lipschitz,
        max_exp_norm=float(max_exp),
        max_inverse_gap=inverse_gap,
        max_input_norm=input_norm,
        literal_bound=float(literal),
        certified_bound=float(certified),
        measured_deviation=measured,
        literal_ratio=_ratio(measured, literal),
        certified_ratio=_ratio(measured, certified),
        literal_holds=measured <= literal,
        certified_holds=measured <= certified,
    )
    logger.debug("bound_report", measured=measured, literal=literal, certified=certified)
    return report
