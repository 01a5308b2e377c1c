"""Geometry, path loss, and Rayleigh fading synthesis for the four-node layout.

The transmitter sits at the origin of a vertical plane, the reflecting surface
at ``(d_ai, 0)`` on the same horizontal line, and the two receivers on a line
``d_v`` meters below it: the legitimate receiver at ``(d_ab_h, -d_v)`` and the
eavesdropper at ``(d_ae_h, -d_v)``.  Every link uses log-distance path loss
with a per-link exponent and i.i.d. unit-variance complex-normal small-scale
fading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator


def _crandn(rng: Generator, *shape: int) -> np.ndarray:
    z = rng.standard_normal((2, *shape))
    return (z[0] + 1j * z[1]) / math.sqrt(2.0)


@dataclass
class SystemGeometry:
    """Node placement (meters) and per-link path-loss configuration (dB)."""

    d_ab_h: float
    d_ae_h: float = 44.0
    d_ai: float = 50.0
    d_v: float = 2.0
    xi_ai: float = 2.2
    xi_ib: float = 2.5
    xi_ie: float = 2.5
    xi_ab: float = 3.5
    xi_ae: float = 3.5
    pl_ref_db: float = -30.0
    d_ref: float = 1.0

    def __post_init__(self) -> None:
        if self.d_ai <= 0:
            raise ValueError(f"transmitter-surface distance must be positive, got {self.d_ai}")
        if self.d_ref <= 0:
            raise ValueError(f"reference distance must be positive, got {self.d_ref}")
        for name in ("xi_ai", "xi_ib", "xi_ie", "xi_ab", "xi_ae"):
            if getattr(self, name) <= 0:
                raise ValueError(f"path-loss exponent {name} must be positive")
        d = derive_distances(self)
        for name in ("d_ai", "d_ab", "d_ae", "d_ib", "d_ie"):
            val = getattr(d, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"derived link distance {name}={val} is not positive and finite")


@dataclass
class LinkDistances:
    d_ai: float
    d_ab: float
    d_ae: float
    d_ib: float
    d_ie: float


@dataclass
class ChannelSet:
    """One fading realization of all five links, plus the receiver noise powers.

    ``H_ai`` has one row per reflecting element; the remaining links are kept
    as 1-D arrays standing for row vectors.
    """

    H_ai: np.ndarray
    h_ab: np.ndarray
    h_ae: np.ndarray
    h_ib: np.ndarray
    h_ie: np.ndarray
    sigma2_b: float
    sigma2_e: float

    def __post_init__(self) -> None:
        n_ris, n = self.H_ai.shape
        if self.h_ab.shape != (n,) or self.h_ae.shape != (n,):
            raise ValueError("direct links disagree with the transmitter array size")
        if self.h_ib.shape != (n_ris,) or self.h_ie.shape != (n_ris,):
            raise ValueError("reflected links disagree with the surface size")
        if not (self.sigma2_b > 0 and self.sigma2_e > 0):
            raise ValueError("noise powers must be positive")

    @property
    def n(self) -> int:
        return self.H_ai.shape[1]

    @property
    def n_ris(self) -> int:
        return self.H_ai.shape[0]


@dataclass
class NormalizedChannels:
    """Channels with each receiver's links divided by its noise standard deviation."""

    H_ai: np.ndarray
    hat_h_ab: np.ndarray
    hat_h_ae: np.ndarray
    hat_h_ib: np.ndarray
    hat_h_ie: np.ndarray

    @property
    def n(self) -> int:
        return self.H_ai.shape[1]

    @property
    def n_ris(self) -> int:
        return self.H_ai.shape[0]


def path_loss_linear(d: float, xi: float, pl_ref_db: float, d_ref: float = 1.0) -> float:
    """Linear power gain of a link of length ``d`` under log-distance path loss."""
    if d <= 0:
        raise ValueError(f"link distance must be positive, got {d}")
    if d_ref <= 0:
        raise ValueError(f"reference distance must be positive, got {d_ref}")
    pl_db = pl_ref_db - 10.0 * xi * math.log10(d / d_ref)
    return 10.0 ** (pl_db / 10.0)


def derive_distances(geom: SystemGeometry) -> LinkDistances:
    """Euclidean link lengths implied by the planar layout."""
    return LinkDistances(
        d_ai=geom.d_ai,
        d_ab=math.hypot(geom.d_ab_h, geom.d_v),
        d_ae=math.hypot(geom.d_ae_h, geom.d_v),
        d_ib=math.hypot(geom.d_ai - geom.d_ab_h, geom.d_v),
        d_ie=math.hypot(geom.d_ai - geom.d_ae_h, geom.d_v),
    )


def channel_stream(master_seed: int, realization: int, attempt: int = 0) -> Generator:
    """Independent per-realization random stream derived from one master seed.

    Streams are keyed by ``(realization, attempt)`` so workers can draw any
    subset in any order and still reproduce the exact same channels.
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(realization, attempt))
    )


def sample_channels(
    geom: SystemGeometry,
    n: int,
    n_ris: int,
    sigma2_b: float,
    sigma2_e: float,
    rng: Generator,
) -> ChannelSet:
    """Draw one Rayleigh-faded realization of every link.

    Entries are sqrt(path loss) times unit-variance complex normal draws.  The
    draw order is fixed (direct links first, then the reflected ones) so a
    surface-free system (``n_ris == 0``) consumes the same direct-link draws
    as a surface-assisted one seeded identically.
    """
    if n <= 0:
        raise ValueError(f"transmit array size must be positive, got {n}")
    if n_ris < 0:
        raise ValueError(f"surface size must be non-negative, got {n_ris}")
    d = derive_distances(geom)
    pl_ab = path_loss_linear(d.d_ab, geom.xi_ab, geom.pl_ref_db, geom.d_ref)
    pl_ae = path_loss_linear(d.d_ae, geom.xi_ae, geom.pl_ref_db, geom.d_ref)
    pl_ai = path_loss_linear(d.d_ai, geom.xi_ai, geom.pl_ref_db, geom.d_ref)
    pl_ib = path_loss_linear(d.d_ib, geom.xi_ib, geom.pl_ref_db, geom.d_ref)
    pl_ie = path_loss_linear(d.d_ie, geom.xi_ie, geom.pl_ref_db, geom.d_ref)
    h_ab = math.sqrt(pl_ab) * _crandn(rng, n)
    h_ae = math.sqrt(pl_ae) * _crandn(rng, n)
    H_ai = math.sqrt(pl_ai) * _crandn(rng, n_ris, n)
    h_ib = math.sqrt(pl_ib) * _crandn(rng, n_ris)
    h_ie = math.sqrt(pl_ie) * _crandn(rng, n_ris)
    return ChannelSet(H_ai, h_ab, h_ae, h_ib, h_ie, sigma2_b, sigma2_e)


def normalize(ch: ChannelSet) -> NormalizedChannels:
    """Fold each receiver's noise power into its channels (divide by the std)."""
    sb = math.sqrt(ch.sigma2_b)
    se = math.sqrt(ch.sigma2_e)
    return NormalizedChannels(
        H_ai=ch.H_ai.copy(),
        hat_h_ab=ch.h_ab / sb,
        hat_h_ae=ch.h_ae / se,
        hat_h_ib=ch.h_ib / sb,
        hat_h_ie=ch.h_ie / se,
    )
