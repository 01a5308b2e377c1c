"""Monte-Carlo estimation of the effective secrecy rate.

The per-realization service rate is the clamped optimized secrecy rate; the
effective rate aggregates it through an exponential moment whose exponent is
the delay-QoS knob.  As the knob goes to zero the effective rate tends to the
plain average secrecy rate, which is exposed directly as ``asr_mode``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import SystemGeometry, channel_stream, normalize, sample_channels
from .solver import PowerIterationError, SolverConfig, bcam_solve

# attempts per realization before giving up on it entirely
_MAX_ATTEMPTS = 4


@dataclass
class QosParams:
    """Delay-QoS configuration: exponent knob, or the vanishing-knob limit."""

    qos_exponent_a: float
    asr_mode: bool = False

    def __post_init__(self) -> None:
        if not self.asr_mode and self.qos_exponent_a <= 0:
            raise ValueError("qos exponent must be positive unless asr_mode is set")


@dataclass
class EsrEstimate:
    esr: float
    asr: float
    n_realizations: int
    std_error_asr: float
    n_resampled: int = 0
    per_realization_rates: np.ndarray | None = None


def esr_from_rates(rates, a: float, base: str = "two") -> float:
    """Exponential-moment aggregate of service rates at QoS exponent ``a``.

    Base "two" evaluates -(1/a) log2(mean 2^(-a r)); base "natural" uses e in
    both places.  The mean is max-shifted and compensated (exact summation) so
    the result does not depend on aggregation order and survives large ``a``.
    """
    rates = np.asarray(rates, dtype=float)
    if rates.size == 0:
        raise ValueError("at least one rate is required")
    if a <= 0:
        raise ValueError("qos exponent must be positive")
    if base not in ("two", "natural"):
        raise ValueError(f"unknown base {base!r}")
    x = -a * rates
    shift = float(np.max(x))
    if base == "two":
        mean = math.fsum(2.0 ** (x - shift)) / rates.size
        return -(shift + math.log2(mean)) / a
    mean = math.fsum(np.exp(x - shift)) / rates.size
    return -(shift + math.log(mean)) / a


def _realization_rate(
    geom: SystemGeometry,
    n: int,
    n_ris: int,
    sigma2: float,
    p_budget: float,
    cfg: SolverConfig,
    seed: int,
    index: int,
) -> tuple[float, int]:
    """Optimized service rate for one realization; resamples on solver failure."""
    for attempt in range(_MAX_ATTEMPTS):
        rng = channel_stream(seed, index, attempt)
        nc = normalize(sample_channels(geom, n, n_ris, sigma2, sigma2, rng))
        try:
            result = bcam_solve(nc, p_budget, cfg)
        except PowerIterationError:
            continue
        return max(result.secrecy_rate, 0.0), attempt
    raise RuntimeError(
        f"realization {index} failed {_MAX_ATTEMPTS} consecutive solve attempts"
    )


def _rate_batch(args) -> tuple[int, list[tuple[float, int]]]:
    geom, n, n_ris, sigma2, p_budget, cfg, seed, lo, hi = args
    out = [
        _realization_rate(geom, n, n_ris, sigma2, p_budget, cfg, seed, i)
        for i in range(lo, hi)
    ]
    return lo, out


def realization_rates(
    geom: SystemGeometry,
    n: int,
    n_ris: int,
    sigma2: float,
    p_budget: float,
    cfg: SolverConfig,
    n_realizations: int,
    seed: int,
    workers: int = 1,
) -> tuple[np.ndarray, int]:
    """Clamped optimized secrecy rates for ``n_realizations`` channel draws.

    Realizations are solved on independent derived streams, so any worker
    count produces identical rates; results are always reduced in index
    order.  Resampled realizations beyond 1% of the total raise.
    """
    if n_realizations < 1:
        raise ValueError("n_realizations must be at least 1")
    pairs: list[tuple[float, int]]
    if workers <= 1:
        pairs = [
            _realization_rate(geom, n, n_ris, sigma2, p_budget, cfg, seed, i)
            for i in range(n_realizations)
        ]
    else:
        chunk = max(1, math.ceil(n_realizations / (workers * 8)))
        batches = [
            (geom, n, n_ris, sigma2, p_budget, cfg, seed, lo, min(lo + chunk, n_realizations))
            for lo in range(0, n_realizations, chunk)
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = sorted(pool.map(_rate_batch, batches), key=lambda item: item[0])
        pairs = [pair for _, batch in chunks for pair in batch]
    rates = np.array([rate for rate, _ in pairs])
    n_resampled = sum(attempt for _, attempt in pairs)
    budget = int(0.01 * n_realizations)
    if n_resampled > budget:
        raise RuntimeError(
            f"{n_resampled} resampled realizations exceed the budget of {budget}"
        )
    return rates, n_resampled


def estimate_esr(
    geom: SystemGeometry,
    n: int,
    n_ris: int,
    sigma2: float,
    p_budget: float,
    qos: QosParams,
    cfg: SolverConfig,
    n_realizations: int,
    seed: int,
    workers: int = 1,
    esr_base: str = "two",
    keep_rates: bool = False,
) -> EsrEstimate:
    """Monte-Carlo effective secrecy rate over independent channel draws."""
    rates, n_resampled = realization_rates(
        geom, n, n_ris, sigma2, p_budget, cfg, n_realizations, seed, workers
    )
    asr = math.fsum(rates) / rates.size
    if rates.size > 1:
        std_error = float(np.std(rates, ddof=1)) / math.sqrt(rates.size)
    else:
        std_error = 0.0
    esr = asr if qos.asr_mode else esr_from_rates(rates, qos.qos_exponent_a, esr_base)
    return EsrEstimate(
        esr=esr,
        asr=asr,
        n_realizations=rates.size,
        std_error_asr=std_error,
        n_resampled=n_resampled,
        per_realization_rates=rates if keep_rates else None,
    )
