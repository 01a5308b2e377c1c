"""Decision variables and the secrecy objective they are scored by."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator

from .channel import NormalizedChannels

UNIT_MODULUS_TOL = 1e-12
POWER_BUDGET_TOL = 1e-10


@dataclass
class PhaseVector:
    """Unit-modulus reflection coefficients, one per surface element."""

    theta: np.ndarray

    def __post_init__(self) -> None:
        self.theta = np.asarray(self.theta, dtype=np.complex128)
        if self.theta.ndim != 1:
            raise ValueError("phase vector must be one-dimensional")
        if self.theta.size and np.max(np.abs(np.abs(self.theta) - 1.0)) > UNIT_MODULUS_TOL:
            raise ValueError("reflection coefficients must lie on the unit circle")

    @classmethod
    def ones(cls, n_ris: int) -> "PhaseVector":
        return cls(np.ones(n_ris, dtype=np.complex128))

    @classmethod
    def random(cls, n_ris: int, rng: Generator) -> "PhaseVector":
        return cls(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n_ris)))

    def __len__(self) -> int:
        return self.theta.size


@dataclass
class Beamformer:
    """Transmit weights constrained to the power budget ||w||^2 <= p_budget."""

    w: np.ndarray
    p_budget: float

    def __post_init__(self) -> None:
        self.w = np.asarray(self.w, dtype=np.complex128)
        if self.w.ndim != 1:
            raise ValueError("beamformer must be one-dimensional")
        if self.p_budget <= 0:
            raise ValueError("power budget must be positive")
        power = float(np.vdot(self.w, self.w).real)
        if power > self.p_budget * (1.0 + POWER_BUDGET_TOL):
            raise ValueError(
                f"beamformer power {power:.6g} exceeds the budget {self.p_budget:.6g}"
            )


@dataclass
class EffectivePair:
    """Noise-normalized end-to-end row channels seen by the two receivers."""

    z_b: np.ndarray
    z_e: np.ndarray


def effective_channels(nc: NormalizedChannels, theta: PhaseVector) -> EffectivePair:
    """Combine direct and surface-reflected paths for the current phases."""
    if len(theta) != nc.n_ris:
        raise ValueError(
            f"phase vector has {len(theta)} entries but the surface has {nc.n_ris} elements"
        )
    if nc.n_ris == 0:
        return EffectivePair(nc.hat_h_ab.copy(), nc.hat_h_ae.copy())
    z_b = (nc.hat_h_ib * theta.theta) @ nc.H_ai + nc.hat_h_ab
    z_e = (nc.hat_h_ie * theta.theta) @ nc.H_ai + nc.hat_h_ae
    return EffectivePair(z_b, z_e)


def objective_f(pair: EffectivePair, w: Beamformer) -> float:
    """SNR-ratio objective (1 + |z_b w|^2) / (1 + |z_e w|^2); always positive."""
    num = 1.0 + abs(np.dot(pair.z_b, w.w)) ** 2
    den = 1.0 + abs(np.dot(pair.z_e, w.w)) ** 2
    return num / den


def secrecy_rate(pair: EffectivePair, w: Beamformer) -> float:
    """Achievable secrecy rate in bits/s/Hz; negative when the eavesdropper wins."""
    return math.log2(objective_f(pair, w))
