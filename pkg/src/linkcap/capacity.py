"""Closed-form spectral-efficiency limits of a phase-insensitive Gaussian channel.

The channel is summarised by two numbers: the power transmittance ``tau``
(output/input signal power) and the excess-noise power spectral density
``nu`` in photons/(s*Hz), i.e. noise beyond the intrinsic shot noise of a
quadrature measurement. The input signal power spectral density ``n_bar``
is in the same photon-number units.

Two limits are provided:

* ``shannon_se``: the Shannon-Hartley rate assuming shot-noise-limited
  coherent detection of both quadratures, log2(1 + tau*n_bar/(1 + nu)).
* ``holevo_se``: the ultimate rate over all physically allowed receivers,
  g(tau*n_bar + nu) - g(nu), with g the thermal-state entropy function.

For a noiseless channel the two differ by log2(e) ~ 1.44 bits/(s*Hz) in the
high-photon-number limit; ``asymptotic_gap`` returns that constant.
"""

import math
from dataclasses import dataclass

from linkcap import kernels

LOG2_E = 1.4426950408889634  # log2(e), single rounding of 1/ln(2)


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class NoisyChannel:
    """End-to-end channel state: transmittance and excess-noise PSD.

    Intermediate (pre-amplifier) states may carry tau > 1 or arbitrarily
    large nu; only nonnegativity and finiteness are enforced here.
    """

    tau: float
    nu: float

    def __post_init__(self):
        _require_finite("tau", self.tau)
        _require_finite("nu", self.nu)
        if self.tau < 0.0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")
        if self.nu < 0.0:
            raise ValueError(f"nu must be nonnegative, got {self.nu}")


@dataclass(frozen=True)
class InputPower:
    """Input signal power spectral density in photons/(s*Hz)."""

    n_bar: float

    def __post_init__(self):
        _require_finite("n_bar", self.n_bar)
        if self.n_bar <= 0.0:
            raise ValueError(f"n_bar must be positive, got {self.n_bar}")


def g_function(x):
    """Entropy in bits of a thermal bosonic mode with mean photon number x.

    g(x) = log2(1+x) + x*log2(1+1/x), continuously extended with g(0) = 0.
    Evaluated through guarded log1p forms so the relative error stays near
    machine precision over many orders of magnitude of x.
    """
    return kernels.g_entropy(x)


def shannon_se(ch, p):
    """Shannon spectral efficiency in bits/(s*Hz) for coherent detection."""
    return kernels.shannon_raw(ch.tau, ch.nu, p.n_bar)


def holevo_se(ch, p):
    """Holevo spectral efficiency in bits/(s*Hz), the ultimate receiver limit."""
    return kernels.holevo_raw(ch.tau, ch.nu, p.n_bar)


def asymptotic_gap():
    """Limit of holevo_se - shannon_se for a noiseless channel as tau*n_bar grows."""
    return LOG2_E


def criterion_is_holevo(criterion):
    """Map a criterion name ('shannon' or 'holevo', any case) to a flag."""
    c = criterion.lower()
    if c == "holevo":
        return True
    if c == "shannon":
        return False
    raise ValueError(f"criterion must be 'shannon' or 'holevo', got {criterion!r}")
