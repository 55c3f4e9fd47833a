# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: bosonic entropy, spectral efficiencies and the
per-node (tau, nu) chain recursions. Mirrors _chainkernels_py exactly."""

from libc.math cimport exp, log, log1p, isfinite

cdef double LOG2_E = 1.4426950408889634


cdef inline double _g(double x) noexcept nogil:
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return (log1p(x) + x * log1p(1.0 / x)) * LOG2_E
    return ((1.0 + x) * log1p(x) - x * log(x)) * LOG2_E


def g_entropy(double x):
    """Entropy (bits) of a thermal bosonic mode with mean photon number x."""
    if not isfinite(x) or x < 0.0:
        raise ValueError("g_entropy: argument must be finite and nonnegative")
    return _g(x)


def shannon_raw(double tau, double nu, double nbar):
    return log1p(tau * nbar / (1.0 + nu)) * LOG2_E


def holevo_raw(double tau, double nu, double nbar):
    return _g(tau * nbar + nu) - _g(nu)


cdef inline void _walk_explicit(const double[::1] spans, const double[::1] gains,
                                double tail, double alpha,
                                double* tau_out, double* nu_out) noexcept nogil:
    cdef double tau = 1.0
    cdef double nu = 0.0
    cdef double d, gn
    cdef Py_ssize_t i
    for i in range(gains.shape[0]):
        d = exp(-alpha * spans[i])
        tau = d * tau
        nu = d * nu
        gn = gains[i]
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = exp(-alpha * tail)
    tau_out[0] = d * tau
    nu_out[0] = d * nu


cdef inline void _walk_saturating(const double[::1] lengths, double alpha, double nbar,
                                  double* tau_out, double* nu_out) noexcept nogil:
    cdef double tau = 1.0
    cdef double nu = 0.0
    cdef double d, gn
    cdef Py_ssize_t i, n = lengths.shape[0] - 1
    for i in range(n):
        d = exp(-alpha * lengths[i])
        tau = d * tau
        nu = d * nu
        gn = (1.0 + nbar) / (1.0 + tau * nbar + nu)
        if gn < 1.0:
            gn = 1.0
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = exp(-alpha * lengths[n])
    tau_out[0] = d * tau
    nu_out[0] = d * nu


cdef inline void _walk_capped(const double[::1] lengths, const double[::1] fracs,
                              double alpha, double nbar,
                              double* tau_out, double* nu_out) noexcept nogil:
    cdef double tau = 1.0
    cdef double nu = 0.0
    cdef double d, gsat, gn, f
    cdef Py_ssize_t i, n = lengths.shape[0] - 1
    for i in range(n):
        d = exp(-alpha * lengths[i])
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
    d = exp(-alpha * lengths[n])
    tau_out[0] = d * tau
    nu_out[0] = d * nu


def chain_explicit(const double[::1] spans, const double[::1] gains, double tail, double alpha):
    """Propagate (tau, nu) through spans/amps with given gains, then the tail."""
    cdef double tau, nu
    _walk_explicit(spans, gains, tail, alpha, &tau, &nu)
    return tau, nu


def chain_saturating(const double[::1] lengths, double alpha, double nbar):
    """Propagate with every amplifier gain saturating the power cap."""
    cdef double tau, nu
    _walk_saturating(lengths, alpha, nbar, &tau, &nu)
    return tau, nu


def chain_capped(const double[::1] lengths, const double[::1] fracs, double alpha, double nbar):
    """Like chain_saturating but gain i is 1 + clip(fracs[i], 0, 1)*(Gsat - 1)."""
    cdef double tau, nu
    _walk_capped(lengths, fracs, alpha, nbar, &tau, &nu)
    return tau, nu


def saturating_se(const double[::1] lengths, double alpha, double nbar, bint holevo):
    cdef double tau, nu
    _walk_saturating(lengths, alpha, nbar, &tau, &nu)
    if holevo:
        return _g(tau * nbar + nu) - _g(nu)
    return log1p(tau * nbar / (1.0 + nu)) * LOG2_E


def capped_se(const double[::1] lengths, const double[::1] fracs,
              double alpha, double nbar, bint holevo):
    cdef double tau, nu
    _walk_capped(lengths, fracs, alpha, nbar, &tau, &nu)
    if holevo:
        return _g(tau * nbar + nu) - _g(nu)
    return log1p(tau * nbar / (1.0 + nu)) * LOG2_E


def saturating_se_logits(const double[::1] logits, double total_length,
                         double alpha, double nbar, bint holevo):
    """Objective for the placement search: softmax(logits, 0) scaled to the
    total length gives N spans plus the tail, all amps saturating."""
    cdef Py_ssize_t i, n = logits.shape[0]
    cdef double m = 0.0
    for i in range(n):
        if logits[i] > m:
            m = logits[i]
    cdef double zt = exp(-m)
    cdef double total = zt
    for i in range(n):
        total += exp(logits[i] - m)
    cdef double scale = total_length / total
    cdef double tau = 1.0
    cdef double nu = 0.0
    cdef double d, gn, span
    for i in range(n):
        span = exp(logits[i] - m) * scale
        d = exp(-alpha * span)
        tau = d * tau
        nu = d * nu
        gn = (1.0 + nbar) / (1.0 + tau * nbar + nu)
        if gn < 1.0:
            gn = 1.0
        tau = gn * tau
        nu = gn * nu + (gn - 1.0)
    d = exp(-alpha * (zt * scale))
    tau = d * tau
    nu = d * nu
    if holevo:
        return _g(tau * nbar + nu) - _g(nu)
    return log1p(tau * nbar / (1.0 + nu)) * LOG2_E


def capped_se_logits(const double[::1] x, Py_ssize_t n, double total_length,
                     double alpha, double nbar, bint holevo):
    """Free-gain objective: x holds N span logits then N gain fractions."""
    cdef Py_ssize_t i
    cdef double m = 0.0
    for i in range(n):
        if x[i] > m:
            m = x[i]
    cdef double zt = exp(-m)
    cdef double total = zt
    for i in range(n):
        total += exp(x[i] - m)
    cdef double scale = total_length / total
    cdef double tau = 1.0
    cdef double nu = 0.0
    cdef double d, gsat, gn, f, span
    for i in range(n):
        span = exp(x[i] - m) * scale
        d = exp(-alpha * span)
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
    d = exp(-alpha * (zt * scale))
    tau = d * tau
    nu = d * nu
    if holevo:
        return _g(tau * nbar + nu) - _g(nu)
    return log1p(tau * nbar / (1.0 + nu)) * LOG2_E
