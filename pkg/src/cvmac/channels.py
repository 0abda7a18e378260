"""Covariance-matrix simulation of the two multiple-access protocols.

Both protocols are simulated exactly: the encoder, the channel unitary,
the discarded modes and a Bell (dual-homodyne) decoder are propagated as
Gaussian states, and the mutual information is read off the resulting
linear-Gaussian channel from the message quadratures to the two homodyne
outcomes.

Mode labels used below:

scheme A
    0 = A1 (coherent carrier), 1 = A2, 2 = A' (two-mode squeezed pair).
    A beam splitter on (A1, A2) feeds the receiver through A2; A1 is lost.
scheme B
    0 = A1 (x-squeezed, x-displaced), 1 = A2 (p-squeezed, p-displaced),
    2 = A3, 3 = A' (two-mode squeezed pair). The triple QND gate acts on
    (A1, A2, A3); the receiver gets A3 and A'.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import (
    GaussianState,
    SymplecticOp,
    apply,
    beam_splitter,
    coherent,
    embed,
    gaussian_mutual_information,
    mean_photons,
    one_mode_squeezer,
    partial_trace,
    phase_rotation,
    qnd_triple_gate,
    tensor,
    two_mode_squeezed,
    vacuum,
)

# measured quadratures after the Bell combiner: x of the first port, p of the second
_BELL_READOUT = (0, 3)


@dataclass(frozen=True)
class SchemeAConfig:
    theta: float
    r: float
    sigma2: float

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi / 2:
            raise ValueError(f"theta={self.theta} must lie in (0, pi/2)")
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")


@dataclass(frozen=True)
class SchemeBConfig:
    r: float
    R: float
    sigma2: float

    def __post_init__(self):
        if self.r < 0 or self.R < 0:
            raise ValueError("squeezing parameters must be nonnegative")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")


def bell_decode(state: GaussianState) -> tuple[np.ndarray, np.ndarray]:
    """Dual-homodyne measurement on a two-mode state.

    A balanced beam splitter produces ports ``(b - b')/sqrt(2)`` and
    ``(b + b')/sqrt(2)``; x is measured on the first and p on the second.

    Returns:
        tuple: mean vector (2,) and covariance (2, 2) of the two outcomes.
    """
    if state.num_modes != 2:
        raise ValueError("Bell decoder acts on exactly two modes")
    out = apply(beam_splitter(math.pi / 4, (0, 1)), state)
    idx = list(_BELL_READOUT)
    return out.mean[idx], out.cov[np.ix_(idx, idx)]


def _linear_readout(run, unit_inputs) -> tuple[np.ndarray, np.ndarray]:
    """Transfer matrix and noise of a circuit linear in its message quadratures.

    ``run(v)`` propagates the circuit with message quadrature vector ``v``
    and returns the decoder outcome (mean, cov).
    """
    base_mean, noise = run(np.zeros(len(unit_inputs)))
    columns = []
    for k in range(len(unit_inputs)):
        v = np.zeros(len(unit_inputs))
        v[k] = 1.0
        mean, _ = run(v)
        columns.append(mean - base_mean)
    return np.column_stack(columns), noise


def scheme_a_transfer(
    config: SchemeAConfig, *, mirror_kept_port: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Linear map from ``(sqrt2 Re alpha, sqrt2 Im alpha)`` to the decoder outputs.

    Args:
        config: beam-splitter angle and squeezing (``sigma2`` is not used).
        mirror_kept_port: flip the sign of the A2 contribution to the kept
            port. Deliberately breaks the convention; used to check that the
            self-test detects a wrong beam-splitter phase.

    Returns:
        tuple: (2, 2) transfer matrix and (2, 2) conditional noise covariance.
    """
    channel = beam_splitter(config.theta, (0, 1), 3)
    if mirror_kept_port:
        channel = channel @ phase_rotation(math.pi, 1, 3)

    def run(v):
        carrier = coherent(complex(v[0], v[1]) / math.sqrt(2.0))
        state = tensor(carrier, two_mode_squeezed(config.r))
        out = partial_trace(apply(channel, state), keep=[1, 2])
        return bell_decode(out)

    return _linear_readout(run, (0, 1))


def simulate_scheme_a(config: SchemeAConfig, *, mirror_kept_port: bool = False) -> float:
    """Mutual information between A1 and the receiver for scheme A, in bits."""
    T, noise = scheme_a_transfer(config, mirror_kept_port=mirror_kept_port)
    return gaussian_mutual_information(config.sigma2 * np.eye(2), T, noise)


def scheme_b_transfer(config: SchemeBConfig) -> tuple[np.ndarray, np.ndarray]:
    """Transfer matrix and decoder noise for scheme B (see :func:`scheme_a_transfer`)."""
    prep = embed(one_mode_squeezer(config.R), [0], 4) @ embed(
        one_mode_squeezer(-config.R), [1], 4
    )
    gate = qnd_triple_gate((0, 1, 2), 4)

    def run(v):
        # alpha_R rides on x of A1, alpha_I on p of A2
        mean = np.zeros(8)
        mean[0], mean[3] = v
        shift = SymplecticOp(np.eye(8), mean)
        state = apply(shift @ prep, tensor(vacuum(2), two_mode_squeezed(config.r)))
        out = partial_trace(apply(gate, state), keep=[2, 3])
        return bell_decode(out)

    return _linear_readout(run, (0, 1))


def simulate_scheme_b(config: SchemeBConfig) -> float:
    """Mutual information between (A1, A2) and the receiver for scheme B, in bits."""
    T, noise = scheme_b_transfer(config)
    return gaussian_mutual_information(config.sigma2 * np.eye(2), T, noise)


def output_mean_photons_a(theta: float, n1_amp: complex, n2_state: GaussianState) -> float:
    """Mean photon number reaching the receiver through the scheme-A beam splitter.

    Args:
        theta: beam-splitter angle.
        n1_amp: coherent amplitude sent on A1.
        n2_state: single-mode Gaussian state sent on A2.
    """
    if n2_state.num_modes != 1:
        raise ValueError("A2 input must be a single-mode state")
    state = tensor(coherent(n1_amp), n2_state)
    out = apply(beam_splitter(theta, (0, 1)), state)
    return mean_photons(out, 1)
