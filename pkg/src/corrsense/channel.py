"""Channel and power parameters, amplify-and-forward gains."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ChannelParams:
    """Signal, noise and power parameters (variances in units of sigma_s2).

    sigma_s2   source variance
    sigma_n2   per-sensor observation-noise variance
    sigma_nu2  receiver (communication) noise variance
    sigma_g2   fading variance
    p_tot      total transmit power across all sensors
    """

    sigma_s2: float
    sigma_n2: float
    sigma_nu2: float
    sigma_g2: float
    p_tot: float

    def __post_init__(self):
        for name in ("sigma_s2", "sigma_n2", "sigma_nu2", "sigma_g2", "p_tot"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @classmethod
    def from_db(
        cls,
        observation_snr_db: float = 20.0,
        communication_snr_db: float = 20.0,
        p_tot_db: float = 10.0,
        sigma_s2: float = 1.0,
        sigma_g2: float = 1.0,
    ) -> "ChannelParams":
        """Construct from decibel ratios.

        observation_snr_db is sigma_s2/sigma_n2; communication_snr_db is
        (sigma_s2 + sigma_n2)/sigma_nu2; p_tot_db is relative to sigma_s2.
        """
        sigma_n2 = sigma_s2 / db_to_linear(observation_snr_db)
        sigma_nu2 = (sigma_s2 + sigma_n2) / db_to_linear(communication_snr_db)
        p_tot = sigma_s2 * db_to_linear(p_tot_db)
        return cls(sigma_s2, sigma_n2, sigma_nu2, sigma_g2, p_tot)


def epa_gain(params: ChannelParams, n_nodes: int) -> np.ndarray:
    """Equal power allocation: every sensor amplifies by the same factor.

    The common gain is sqrt(p_tot / (N * (sigma_s2 + sigma_n2))), which
    spends the total budget evenly on the N unit-mean-power observations.
    """
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    a = np.sqrt(params.p_tot / (n_nodes * (params.sigma_s2 + params.sigma_n2)))
    return np.full(n_nodes, a)


def validate_gains(a: np.ndarray) -> np.ndarray:
    """Check an amplification vector: nonnegative with at least one positive entry."""
    a = np.asarray(a, dtype=float).reshape(-1)
    if a.size < 1:
        raise ValueError("gain vector must be nonempty")
    if np.any(a < 0) or not np.any(a > 0):
        raise ValueError("gains must be nonnegative with at least one positive entry")
    if not np.isfinite(a).all():
        raise ValueError("gains must be finite")
    return a
