"""Pure-Python reference implementation of the hot numeric kernels.

Same formulas and the same operation order as the compiled extension in
``_chainkernels.pyx``, so either backend can stand in for the other.
The chain walkers keep per-node state as plain scalars; inputs are
float64 sequences (numpy arrays or lists).
"""

import math

LOG2_E = 1.4426950408889634  # 1/ln(2)


def _g(x):
    # Guarded evaluation of log2(1+x) + x*log2(1+1/x).
    # For x < 1 the second term is rewritten as x*(log1p(x) - log(x))
    # to avoid log1p(1/x) blowing up in relative accuracy near 0.
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return (math.log1p(x) + x * math.log1p(1.0 / x)) * LOG2_E
    return ((1.0 + x) * math.log1p(x) - x * math.log(x)) * LOG2_E


def g_entropy(x):
    """Entropy (bits) of a thermal bosonic mode with mean photon number x."""
    if not math.isfinite(x) or x < 0.0:
        raise ValueError("g_entropy: argument must be finite and nonnegative")
    return _g(x)


def shannon_raw(tau, nu, nbar):
    return math.log1p(tau * nbar / (1.0 + nu)) * LOG2_E


def holevo_raw(tau, nu, nbar):
    return _g(tau * nbar + nu) - _g(nu)


def chain_explicit(spans, gains, tail, alpha):
    """Propagate (tau, nu) through spans/amps with given gains, then the tail."""
    tau = 1.0
    nu = 0.0
    for i in range(len(gains)):
        d = math.exp(-alpha * spans[i])
        tau = d * tau
        nu = d * nu
        gn = gains[i]
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = math.exp(-alpha * tail)
    return d * tau, d * nu


def chain_saturating(lengths, alpha, nbar):
    """Propagate with every amplifier gain saturating the power cap.

    lengths has N+1 entries: N spans each followed by an amplifier, then
    the final unamplified span. Gains are chosen on the fly so that the
    total power right after each node equals nbar exactly.
    """
    tau = 1.0
    nu = 0.0
    n = len(lengths) - 1
    for i in range(n):
        d = math.exp(-alpha * lengths[i])
        tau = d * tau
        nu = d * nu
        gn = (1.0 + nbar) / (1.0 + tau * nbar + nu)
        if gn < 1.0:  # rounding can leave the pre-amp power a hair above cap
            gn = 1.0
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = math.exp(-alpha * lengths[n])
    return d * tau, d * nu


def chain_capped(lengths, fracs, alpha, nbar):
    """Like chain_saturating but gain i is 1 + clip(fracs[i], 0, 1)*(Gsat - 1)."""
    tau = 1.0
    nu = 0.0
    n = len(lengths) - 1
    for i in range(n):
        d = math.exp(-alpha * lengths[i])
        tau = d * tau
        nu = d * nu
        gsat = (1.0 + nbar) / (1.0 + tau * nbar + nu)
        if gsat < 1.0:
            gsat = 1.0
        f = fracs[i]
        if f < 0.0:
            f = 0.0
        elif f > 1.0:
            f = 1.0
        gn = 1.0 + f * (gsat - 1.0)
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = math.exp(-alpha * lengths[n])
    return d * tau, d * nu


def saturating_se(lengths, alpha, nbar, holevo):
    tau, nu = chain_saturating(lengths, alpha, nbar)
    if holevo:
        return holevo_raw(tau, nu, nbar)
    return shannon_raw(tau, nu, nbar)


def capped_se(lengths, fracs, alpha, nbar, holevo):
    tau, nu = chain_capped(lengths, fracs, alpha, nbar)
    if holevo:
        return holevo_raw(tau, nu, nbar)
    return shannon_raw(tau, nu, nbar)


def saturating_se_logits(logits, total_length, alpha, nbar, holevo):
    """Objective for the placement search: softmax(logits, 0) scaled to the
    total length gives N spans plus the tail, all amps saturating."""
    n = len(logits)
    m = 0.0
    for i in range(n):
        if logits[i] > m:
            m = logits[i]
    zt = math.exp(-m)
    total = zt
    for i in range(n):
        total += math.exp(logits[i] - m)
    scale = total_length / total
    tau = 1.0
    nu = 0.0
    for i in range(n):
        span = math.exp(logits[i] - m) * scale
        d = math.exp(-alpha * span)
        tau = d * tau
        nu = d * nu
        gn = (1.0 + nbar) / (1.0 + tau * nbar + nu)
        if gn < 1.0:
            gn = 1.0
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = math.exp(-alpha * (zt * scale))
    tau = d * tau
    nu = d * nu
    if holevo:
        return holevo_raw(tau, nu, nbar)
    return shannon_raw(tau, nu, nbar)


def capped_se_logits(x, n, total_length, alpha, nbar, holevo):
    """Free-gain objective: x holds N span logits then N gain fractions."""
    m = 0.0
    for i in range(n):
        if x[i] > m:
            m = x[i]
    zt = math.exp(-m)
    total = zt
    for i in range(n):
        total += math.exp(x[i] - m)
    scale = total_length / total
    tau = 1.0
    nu = 0.0
    for i in range(n):
        span = math.exp(x[i] - m) * scale
        d = math.exp(-alpha * span)
        tau = d * tau
        nu = d * nu
        gsat = (1.0 + nbar) / (1.0 + tau * nbar + nu)
        if gsat < 1.0:
            gsat = 1.0
        f = x[n + i]
        if f < 0.0:
            f = 0.0
        elif f > 1.0:
            f = 1.0
        gn = 1.0 + f * (gsat - 1.0)
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = math.exp(-alpha * (zt * scale))
    tau = d * tau
    nu = d * nu
    if holevo:
        return holevo_raw(tau, nu, nbar)
    return shannon_raw(tau, nu, nbar)
