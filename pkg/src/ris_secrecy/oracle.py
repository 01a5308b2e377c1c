"""Brute-force and dense-algebra verifiers.

Everything here exists to cross-check the fast solver paths through
deliberately different computations: exhaustive grids for the phase updates
and a whitened Hermitian eigendecomposition for the beamformer.  Nothing in
this module is used by the solver itself.
"""

from __future__ import annotations

import math

import numpy as np

from .channel import NormalizedChannels
from .core import EffectivePair, PhaseVector, effective_channels
from .solver import PhaseCoefficients

JOINT_GRID_MAX_ELEMENTS = 3
JOINT_GRID_MAX_POINTS = 720
_CHUNK = 1 << 16


def _ratio_on_grid(coeff: PhaseCoefficients, phis: np.ndarray) -> np.ndarray:
    cos_phi = np.cos(phis)
    sin_phi = np.sin(phis)
    num = coeff.beta_b + coeff.alpha_b.real * cos_phi + coeff.alpha_b.imag * sin_phi
    den = coeff.beta_e + coeff.alpha_e.real * cos_phi + coeff.alpha_e.imag * sin_phi
    return num / den


def phase_objective_grad(coeff: PhaseCoefficients, phi: float) -> float:
    """Quotient-rule derivative of the single-element ratio at ``phi``."""
    r_b, phi_b = abs(coeff.alpha_b), np.angle(coeff.alpha_b)
    r_e, phi_e = abs(coeff.alpha_e), np.angle(coeff.alpha_e)
    num = r_b * math.cos(phi - phi_b) + coeff.beta_b
    den = r_e * math.cos(phi - phi_e) + coeff.beta_e
    d_num = -r_b * math.sin(phi - phi_b)
    d_den = -r_e * math.sin(phi - phi_e)
    return (d_num * den - num * d_den) / den**2


def grid_phase_oracle(
    coeff: PhaseCoefficients, grid_points: int, refine: bool = False
) -> tuple[float, float]:
    """Best (phi, ratio) over a uniform phase grid, optionally bisection-refined.

    Refinement bisects the derivative sign change inside the one-step
    neighborhood of the grid argmax and keeps the better of the two.
    """
    if grid_points < 2:
        raise ValueError("grid needs at least two points")
    phis = np.linspace(0.0, 2.0 * math.pi, grid_points, endpoint=False)
    values = _ratio_on_grid(coeff, phis)
    k = int(np.argmax(values))
    phi_best, val_best = float(phis[k]), float(values[k])
    if refine:
        step = 2.0 * math.pi / grid_points
        lo, hi = phi_best - step, phi_best + step
        g_lo, g_hi = phase_objective_grad(coeff, lo), phase_objective_grad(coeff, hi)
        if g_lo > 0 > g_hi:
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if phase_objective_grad(coeff, mid) > 0:
                    lo = mid
                else:
                    hi = mid
            phi_ref = 0.5 * (lo + hi)
            val_ref = float(_ratio_on_grid(coeff, np.array([phi_ref]))[0])
            if val_ref > val_best:
                phi_best, val_best = phi_ref % (2.0 * math.pi), val_ref
    return phi_best, val_best


def rayleigh_quotient_oracle(pair: EffectivePair, p_budget: float) -> float:
    """Best objective by whitening the denominator and solving densely.

    Cholesky-whitens P Ze + I, symmetrizes, and takes the largest eigenvalue
    of the resulting Hermitian matrix: a different linear-algebra route than
    the solver's power iteration on the unsymmetric product.
    """
    n = pair.z_b.size
    a = p_budget * np.outer(pair.z_b.conj(), pair.z_b) + np.eye(n)
    b = p_budget * np.outer(pair.z_e.conj(), pair.z_e) + np.eye(n)
    chol = np.linalg.cholesky(b)
    half = np.linalg.solve(chol, a)
    white = np.linalg.solve(chol, half.conj().T).conj().T
    white = 0.5 * (white + white.conj().T)
    return float(np.linalg.eigvalsh(white)[-1])


def _pencil_max_eig(gbb: np.ndarray, gee: np.ndarray, gbe: np.ndarray, p: float) -> np.ndarray:
    """Largest generalized eigenvalue of (P zb^H zb + I, P ze^H ze + I).

    Works from the three Gram scalars only: both rank-one updates live in a
    two-dimensional subspace, so the nontrivial eigenvalues solve a quadratic.
    """
    tiny = np.finfo(float).tiny
    safe_gbb = np.maximum(gbb, tiny)
    e1_sq = np.abs(gbe) ** 2 / safe_gbb
    e2_sq = np.maximum(gee - e1_sq, 0.0)
    det_a = 1.0 + p * gbb
    det_b = 1.0 + p * gee
    mid = (1.0 + p * gbb) * (1.0 + p * e2_sq) + 1.0 + p * e1_sq
    disc = np.maximum(mid**2 - 4.0 * det_a * det_b, 0.0)
    lam = (mid + np.sqrt(disc)) / (2.0 * det_b)
    return np.where(gbb <= tiny, 1.0, lam)


def joint_grid_oracle(nc: NormalizedChannels, p_budget: float, phase_grid: int) -> float:
    """Best objective over an exhaustive per-element phase grid.

    Each grid combination gets its exact optimal beamformer through the
    two-dimensional pencil reduction.  Refuses problem sizes beyond
    3 elements or 720 grid points; the grid grows as points**elements.
    """
    n_ris = nc.n_ris
    if n_ris > JOINT_GRID_MAX_ELEMENTS:
        raise ValueError(
            f"joint grid supports at most {JOINT_GRID_MAX_ELEMENTS} elements, got {n_ris}"
        )
    if phase_grid > JOINT_GRID_MAX_POINTS:
        raise ValueError(
            f"joint grid supports at most {JOINT_GRID_MAX_POINTS} points, got {phase_grid}"
        )
    if phase_grid < 1:
        raise ValueError("phase grid needs at least one point")
    if nc.n == 1:
        return _joint_grid_n1(nc, p_budget, phase_grid)
    if n_ris == 0:
        pair = effective_channels(nc, PhaseVector.ones(0))
        return rayleigh_quotient_oracle(pair, p_budget)

    rays_b = nc.hat_h_ib[:, None] * nc.H_ai
    rays_e = nc.hat_h_ie[:, None] * nc.H_ai
    phis = np.exp(2j * math.pi * np.arange(phase_grid) / phase_grid)
    total = phase_grid**n_ris
    best = -math.inf
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, total))
        digits = np.empty((idx.size, n_ris), dtype=np.int64)
        rem = idx
        for pos in range(n_ris - 1, -1, -1):
            digits[:, pos] = rem % phase_grid
            rem = rem // phase_grid
        theta = phis[digits]
        z_b = theta @ rays_b + nc.hat_h_ab
        z_e = theta @ rays_e + nc.hat_h_ae
        gbb = np.einsum("ij,ij->i", z_b, z_b.conj()).real
        gee = np.einsum("ij,ij->i", z_e, z_e.conj()).real
        gbe = np.einsum("ij,ij->i", z_b, z_e.conj())
        lam = _pencil_max_eig(gbb, gee, gbe, p_budget)
        best = max(best, float(np.max(lam)))
    return best


def _joint_grid_n1(nc: NormalizedChannels, p_budget: float, phase_grid: int) -> float:
    """Single-antenna case: the beamformer is a pure power scaling."""
    n_ris = nc.n_ris
    rays_b = nc.hat_h_ib * nc.H_ai[:, 0] if n_ris else np.zeros(0, dtype=np.complex128)
    rays_e = nc.hat_h_ie * nc.H_ai[:, 0] if n_ris else np.zeros(0, dtype=np.complex128)
    phis = np.exp(2j * math.pi * np.arange(phase_grid) / phase_grid)
    total = phase_grid**n_ris if n_ris else 1
    best = -math.inf
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, total))
        digits = np.empty((idx.size, n_ris), dtype=np.int64)
        rem = idx
        for pos in range(n_ris - 1, -1, -1):
            digits[:, pos] = rem % phase_grid
            rem = rem // phase_grid
        theta = phis[digits]
        z_b = theta @ rays_b + nc.hat_h_ab[0]
        z_e = theta @ rays_e + nc.hat_h_ae[0]
        val = (1.0 + p_budget * np.abs(z_b) ** 2) / (1.0 + p_budget * np.abs(z_e) ** 2)
        best = max(best, float(np.max(val)))
    return best
