"""Shared builders for randomized test instances."""

import numpy as np

import ris_secrecy as rs

TABLE_P = 10.0**1.5
TABLE_SIGMA2 = 10.0**-7.5


def crandn(rng, *shape):
    z = rng.standard_normal((2, *shape))
    return (z[0] + 1j * z[1]) / np.sqrt(2.0)


def unit_pair(rng, n, scale=1.0):
    return rs.EffectivePair(scale * crandn(rng, n), scale * crandn(rng, n))


def unit_channels(rng, n, n_ris):
    """Normalized channels with unit-variance entries on every link."""
    return rs.NormalizedChannels(
        H_ai=crandn(rng, n_ris, n),
        hat_h_ab=crandn(rng, n),
        hat_h_ae=crandn(rng, n),
        hat_h_ib=crandn(rng, n_ris),
        hat_h_ie=crandn(rng, n_ris),
    )


def table1_channels(seed, realization, n=4, n_ris=32, d_ab_h=40.0):
    geom = rs.SystemGeometry(d_ab_h=d_ab_h)
    rng = rs.channel_stream(seed, realization)
    ch = rs.sample_channels(geom, n, n_ris, TABLE_SIGMA2, TABLE_SIGMA2, rng)
    return rs.normalize(ch)


def random_coefficients(rng, n=4, n_ris=8):
    """Valid single-element coefficients taken from a genuine random instance."""
    nc = unit_channels(rng, n, n_ris)
    theta = rs.PhaseVector.random(n_ris, rng)
    w_dir = crandn(rng, n)
    w_dir *= np.sqrt(TABLE_P) / np.linalg.norm(w_dir)
    w = rs.Beamformer(w_dir, TABLE_P)
    pre = rs.SweepPrecomp.from_channels(nc, w)
    l = int(rng.integers(n_ris))
    return rs.phase_coefficients(l, theta, pre)
