"""Discrete amplifier-chain model of a multi-span fiber link.

A link is uniform fiber with attenuation coefficient alpha (natural-log
units, 1/km; 0.05/km is standard single-mode fiber at 1550 nm, about
0.217 dB/km) broken by N amplification nodes. Node i sits a span of
``span_km`` after the previous node and applies a quantum-limited
phase-insensitive gain G, which multiplies (tau, nu) by G*exp(-alpha*L)
and adds G - 1 to nu. After the last node an unamplified tail span runs
to the receiver.

The operating constraint is a cap on total optical power: at every node
output, tau*n_bar + nu <= n_bar. Between nodes power only decays, so
checking node outputs covers the whole link. ``saturating_gain`` returns
the largest gain that keeps a node exactly at the cap.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from linkcap import kernels
from linkcap.capacity import NoisyChannel, _require_finite

# Feasibility slack for the power cap, in photon-number units. Well above
# double-precision noise on n_bar ~ 100, far below anything physical.
FEASIBILITY_TOL = 1e-9

DB_PER_NEPER = 4.3429448190325175  # 10/ln(10)


class ConstraintViolationError(ValueError):
    """Raised when a configuration breaks the total-power cap."""


@dataclass(frozen=True)
class AmplifierStage:
    """One regeneration node: the fiber span preceding it and its gain."""

    span_km: float
    gain: float

    def __post_init__(self):
        _require_finite("span_km", self.span_km)
        _require_finite("gain", self.gain)
        if self.span_km < 0.0:
            raise ValueError(f"span_km must be nonnegative, got {self.span_km}")
        if self.gain < 1.0:
            raise ValueError(f"gain must be >= 1, got {self.gain}")


@dataclass(frozen=True)
class LinkConfig:
    """Full link: attenuation, input PSD, ordered stages, unamplified tail."""

    alpha_per_km: float
    n_bar: float
    stages: tuple
    tail_span_km: float

    def __post_init__(self):
        _require_finite("alpha_per_km", self.alpha_per_km)
        _require_finite("n_bar", self.n_bar)
        _require_finite("tail_span_km", self.tail_span_km)
        if self.alpha_per_km <= 0.0:
            raise ValueError(f"alpha_per_km must be positive, got {self.alpha_per_km}")
        if self.n_bar <= 0.0:
            raise ValueError(f"n_bar must be positive, got {self.n_bar}")
        if self.tail_span_km < 0.0:
            raise ValueError(f"tail_span_km must be nonnegative, got {self.tail_span_km}")
        object.__setattr__(self, "stages", tuple(self.stages))

    @property
    def total_length_km(self):
        return sum(s.span_km for s in self.stages) + self.tail_span_km

    def to_dict(self):
        return {
            "alpha_per_km": self.alpha_per_km,
            "n_bar": self.n_bar,
            "stages": [{"span_km": s.span_km, "gain": s.gain} for s in self.stages],
            "tail_span_km": self.tail_span_km,
        }

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise ValueError("link config document must be a mapping")
        required = {"alpha_per_km", "n_bar", "stages", "tail_span_km"}
        missing = required - set(doc)
        if missing:
            raise ValueError(f"link config missing fields: {sorted(missing)}")
        extra = set(doc) - required
        if extra:
            raise ValueError(f"link config has unknown fields: {sorted(extra)}")
        stages_doc = doc["stages"]
        if not isinstance(stages_doc, list):
            raise ValueError("field 'stages' must be an array")
        stages = []
        for i, sd in enumerate(stages_doc):
            if not isinstance(sd, dict) or set(sd) != {"span_km", "gain"}:
                raise ValueError(
                    f"stages[{i}] must be an object with fields span_km and gain"
                )
            try:
                stages.append(AmplifierStage(float(sd["span_km"]), float(sd["gain"])))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"stages[{i}]: {exc}") from exc
        try:
            return cls(
                alpha_per_km=float(doc["alpha_per_km"]),
                n_bar=float(doc["n_bar"]),
                stages=tuple(stages),
                tail_span_km=float(doc["tail_span_km"]),
            )
        except (TypeError, ValueError) as exc:
            raise ValueError(str(exc)) from exc

    @classmethod
    def from_json_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
        try:
            return cls.from_dict(doc)
        except ValueError as exc:
            raise ValueError(f"{path}: {exc}") from exc


def propagate_stage(ch, stage, alpha):
    """Push a channel through one span plus its amplifier.

    tau' = G*exp(-alpha*L)*tau, nu' = G*exp(-alpha*L)*nu + (G - 1); the
    additive G - 1 is the quantum-limited noise of a phase-insensitive amp.
    """
    d = math.exp(-alpha * stage.span_km)
    tau = d * ch.tau
    nu = d * ch.nu
    gn = stage.gain
    return NoisyChannel(gn * tau, gn * nu + (gn - 1.0))


def end_to_end(cfg):
    """Fold the stage recursion from (tau, nu) = (1, 0), then the tail loss."""
    spans = np.array([s.span_km for s in cfg.stages], dtype=np.float64)
    gains = np.array([s.gain for s in cfg.stages], dtype=np.float64)
    tau, nu = kernels.chain_explicit(spans, gains, cfg.tail_span_km, cfg.alpha_per_km)
    return NoisyChannel(tau, nu)


def saturating_gain(pre_amp, p):
    """Largest gain keeping the node output at the power cap.

    Solves G*(tau'*n_bar + nu') + G - 1 = n_bar for the channel (tau', nu')
    seen just before the amplifier, i.e. G = (1 + n_bar)/(1 + tau'*n_bar + nu').
    """
    power = pre_amp.tau * p.n_bar + pre_amp.nu
    if power > p.n_bar * (1.0 + 1e-15) + FEASIBILITY_TOL:
        raise ConstraintViolationError(
            f"pre-amplifier power {power} already above cap {p.n_bar}"
        )
    gn = (1.0 + p.n_bar) / (1.0 + power)
    return gn if gn > 1.0 else 1.0


def check_power_constraint(cfg):
    """Margins n_bar - (tau_i*n_bar + nu_i) at each node output.

    Feasible iff all margins >= -FEASIBILITY_TOL. Loss-only links return
    an empty list (trivially feasible).
    """
    ch = NoisyChannel(1.0, 0.0)
    margins = []
    for stage in cfg.stages:
        ch = propagate_stage(ch, stage, cfg.alpha_per_km)
        margins.append(cfg.n_bar - (ch.tau * cfg.n_bar + ch.nu))
    return margins


def attenuation_db(length_km, alpha_per_km):
    """Fiber attenuation over a length, reported in dB."""
    if length_km < 0.0:
        raise ValueError(f"length_km must be nonnegative, got {length_km}")
    return DB_PER_NEPER * alpha_per_km * length_km


def saturated_link(alpha_per_km, n_bar, spans, tail_span_km):
    """Build a LinkConfig whose gains all saturate the power cap."""
    from linkcap.capacity import InputPower

    p = InputPower(n_bar)
    ch = NoisyChannel(1.0, 0.0)
    stages = []
    for span in spans:
        d = math.exp(-alpha_per_km * span)
        pre = NoisyChannel(d * ch.tau, d * ch.nu)
        gn = saturating_gain(pre, p)
        stage = AmplifierStage(span, gn)
        stages.append(stage)
        ch = NoisyChannel(gn * pre.tau, gn * pre.nu + (gn - 1.0))
    return LinkConfig(alpha_per_km, n_bar, tuple(stages), tail_span_km)
