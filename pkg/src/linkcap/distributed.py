"""Continuum (distributed-amplification) model of signal regeneration.

Gain is spread along the fiber with density gamma(l) in 1/km, so an
infinitesimal section dl amplifies by 1 + gamma(l)*dl. The channel state
then obeys

    dtau/dl = (gamma(l) - alpha) * tau
    dnu/dl  = (gamma(l) - alpha) * nu + gamma(l)

from (tau, nu) = (1, 0). When the gain exactly replaces the lost power,
gamma = alpha*n_bar/(1 + n_bar), the solution is closed form:
tau(l) = exp(-alpha*l/(1 + n_bar)) and nu(l) = n_bar*(1 - tau(l)), which
keeps tau*n_bar + nu pinned at n_bar everywhere.

``optimal_termination`` finds how much of the far end of a link is best
left unamplified (pure loss) when the rest runs at the constant-power
gain density.
"""

import math
from dataclasses import dataclass

from linkcap import kernels
from linkcap.capacity import criterion_is_holevo

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


class IntegrationError(ValueError):
    """Raised when the gain profile returns invalid values."""


@dataclass(frozen=True)
class DistributedState:
    """Channel state (tau, nu) at a position along the link."""

    tau: float
    nu: float
    position: float


def _profile_value(gamma, l):
    v = float(gamma(l))
    if not math.isfinite(v):
        raise IntegrationError(f"gain density at l={l} is not finite: {v!r}")
    if v < 0.0:
        raise IntegrationError(f"gain density at l={l} is negative: {v}")
    return v


def ode_propagate(gamma, alpha, length, step=0.01):
    """Integrate the (tau, nu) pair with the classical 4th-order scheme.

    Fixed step keeps results bit-reproducible; a shorter final step covers
    any remainder when length is not a multiple of step.
    """
    if length < 0.0:
        raise ValueError(f"length must be nonnegative, got {length}")
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    tau = 1.0
    nu = 0.0
    l = 0.0
    nfull = int(math.floor(length / step + 1e-12))
    for i in range(nfull):
        tau, nu = _rk4_step(gamma, alpha, l, step, tau, nu)
        l = (i + 1) * step
    rem = length - l
    if rem > 1e-12 * max(1.0, length):
        tau, nu = _rk4_step(gamma, alpha, l, rem, tau, nu)
    return DistributedState(tau, nu, length)


def _rk4_step(gamma, alpha, l, h, tau, nu):
    ga = _profile_value(gamma, l)
    gm = _profile_value(gamma, l + 0.5 * h)
    gb = _profile_value(gamma, l + h)
    k1t = (ga - alpha) * tau
    k1n = (ga - alpha) * nu + ga
    k2t = (gm - alpha) * (tau + 0.5 * h * k1t)
    k2n = (gm - alpha) * (nu + 0.5 * h * k1n) + gm
    k3t = (gm - alpha) * (tau + 0.5 * h * k2t)
    k3n = (gm - alpha) * (nu + 0.5 * h * k2n) + gm
    k4t = (gb - alpha) * (tau + h * k3t)
    k4n = (gb - alpha) * (nu + h * k3n) + gb
    tau = tau + h * (k1t + 2.0 * k2t + 2.0 * k3t + k4t) / 6.0
    nu = nu + h * (k1n + 2.0 * k2n + 2.0 * k3n + k4n) / 6.0
    return tau, nu


def constant_power_gamma(alpha, p):
    """Gain density that restores the total power continuously."""
    return alpha * p.n_bar / (1.0 + p.n_bar)


def constant_power_solution(alpha, p, length):
    """Closed-form state under the constant-power gain density."""
    if length < 0.0:
        raise ValueError(f"length must be nonnegative, got {length}")
    tau = math.exp(-alpha * length / (1.0 + p.n_bar))
    nu = p.n_bar * (1.0 - tau)
    return DistributedState(tau, nu, length)


def terminated_se(alpha, p, total_length, l_prime, criterion="holevo"):
    """SE of distributed amplification over total_length - l_prime followed
    by a pure-loss section of l_prime."""
    return _terminated_se(alpha, p, total_length, l_prime, criterion_is_holevo(criterion))


def _terminated_se(alpha, p, total_length, l_prime, holevo):
    state = constant_power_solution(alpha, p, total_length - l_prime)
    d = math.exp(-alpha * l_prime)
    tau = d * state.tau
    nu = d * state.nu
    if holevo:
        return kernels.holevo_raw(tau, nu, p.n_bar)
    return kernels.shannon_raw(tau, nu, p.n_bar)


def golden_section_max(f, a, b, tol):
    """Maximise a unimodal f on [a, b]; returns (x, f(x), evaluations).

    The original endpoints are kept as candidates so boundary optima are
    returned exactly rather than to within tol.
    """
    fa = f(a)
    fb = f(b)
    evals = 2
    x1 = b - (b - a) / GOLDEN_RATIO
    x2 = a + (b - a) / GOLDEN_RATIO
    f1 = f(x1)
    f2 = f(x2)
    evals += 2
    lo, hi = a, b
    while hi - lo > tol:
        if f1 >= f2:
            hi = x2
            x2, f2 = x1, f1
            x1 = hi - (hi - lo) / GOLDEN_RATIO
            f1 = f(x1)
        else:
            lo = x1
            x1, f1 = x2, f2
            x2 = lo + (hi - lo) / GOLDEN_RATIO
            f2 = f(x2)
        evals += 1
    xm = 0.5 * (lo + hi)
    fm = f(xm)
    evals += 1
    # prefer the larger coordinate on ties so boundary solutions are exact
    best_x, best_f = xm, fm
    for cand_x, cand_f in ((a, fa), (b, fb)):
        if cand_f > best_f or (cand_f == best_f and cand_x > best_x):
            best_x, best_f = cand_x, cand_f
    return best_x, best_f, evals


def optimal_termination(alpha, p, total_length, criterion="holevo", tol=1e-4):
    """Best length of the final unamplified section and the SE it achieves.

    The composite channel is constant-power distributed amplification over
    total_length - l_prime followed by pure loss over l_prime; the search
    is golden-section over l_prime in [0, total_length].
    """
    if total_length < 0.0:
        raise ValueError(f"total_length must be nonnegative, got {total_length}")
    holevo = criterion_is_holevo(criterion)
    if total_length == 0.0:
        return 0.0, _terminated_se(alpha, p, 0.0, 0.0, holevo)
    l_prime, se, _ = golden_section_max(
        lambda t: _terminated_se(alpha, p, total_length, t, holevo),
        0.0,
        total_length,
        tol,
    )
    return l_prime, se
