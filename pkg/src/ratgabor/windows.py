"""Window functions with parity metadata and decay envelopes.

Every window carries an envelope ``|g(t)| <= C * exp(-a t^2)`` (Gaussian decay)
or ``|g(t)| <= C * exp(-a |t|)`` (exponential decay).  The envelopes are what
the Zak module uses to certify series truncation, so they must hold for all t.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError


class WindowKind(enum.Enum):
    GAUSSIAN = "gauss"
    HERMITE1 = "hermite1"
    TWO_SIDED_EXPONENTIAL = "exp2"
    HYPERBOLIC_SECANT = "sech"
    CUSTOM = "custom"


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"
    NONE = "none"


class DecayForm(enum.Enum):
    GAUSSIAN = "gaussian"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class Envelope:
    form: DecayForm
    amplitude: float
    rate: float

    def __post_init__(self):
        if not (self.amplitude > 0 and self.rate > 0):
            raise DomainError("envelope amplitude and rate must be positive")

    def __call__(self, t):
        t = np.abs(np.asarray(t, dtype=float))
        if self.form is DecayForm.GAUSSIAN:
            return self.amplitude * np.exp(-self.rate * t**2)
        return self.amplitude * np.exp(-self.rate * t)


@dataclass(frozen=True)
class WindowSpec:
    """A window g together with its declared symmetry and decay envelope.

    ``evaluator`` must accept numpy arrays and work elementwise.
    """

    kind: WindowKind
    evaluator: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    parity: Parity
    envelope: Envelope
    name: str = ""

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=float))


def eval_window(spec: WindowSpec, t):
    """Return g(t); scalar in, float out, array in, array out."""
    value = spec(t)
    return float(value) if np.ndim(value) == 0 else value


def envelope_bound(spec: WindowSpec, t):
    value = spec.envelope(t)
    return float(value) if np.ndim(value) == 0 else value


def hermite1_envelope_amplitude(rate: float) -> float:
    """Smallest C with |t| exp(-pi t^2) <= C exp(-rate t^2) for all t.

    The supremum of |t| exp(-b t^2) with b = pi - rate is attained at
    t = 1/sqrt(2b), giving 1/sqrt(2 e b).
    """
    b = math.pi - rate
    if b <= 0:
        raise DomainError("Hermite envelope rate must be below pi")
    return 1.0 / math.sqrt(2.0 * math.e * b)


# Relative inflation that absorbs rounding in exp() for the stored constants.
_ROUNDING_SLACK = 1.0 + 1e-12

HERMITE1_RATE = math.pi / 2
HERMITE1_AMPLITUDE = hermite1_envelope_amplitude(HERMITE1_RATE) * _ROUNDING_SLACK


def _gauss(t):
    return np.exp(-np.pi * t**2)


def _hermite1(t):
    return t * np.exp(-np.pi * t**2)


def _exp2(t):
    return np.exp(-np.abs(t))


def _sech(t):
    # 1 / (e^t + e^-t), written to avoid overflow for large |t|
    u = np.exp(-np.abs(t))
    return u / (1.0 + u * u)


def gaussian() -> WindowSpec:
    return WindowSpec(WindowKind.GAUSSIAN, _gauss, Parity.EVEN,
                      Envelope(DecayForm.GAUSSIAN, 1.0, math.pi), "gauss")


def hermite1() -> WindowSpec:
    return WindowSpec(WindowKind.HERMITE1, _hermite1, Parity.ODD,
                      Envelope(DecayForm.GAUSSIAN, HERMITE1_AMPLITUDE, HERMITE1_RATE),
                      "hermite1")


def two_sided_exponential() -> WindowSpec:
    return WindowSpec(WindowKind.TWO_SIDED_EXPONENTIAL, _exp2, Parity.EVEN,
                      Envelope(DecayForm.EXPONENTIAL, 1.0, 1.0), "exp2")


def hyperbolic_secant() -> WindowSpec:
    return WindowSpec(WindowKind.HYPERBOLIC_SECANT, _sech, Parity.EVEN,
                      Envelope(DecayForm.EXPONENTIAL, 1.0, 1.0), "sech")


BUILTIN_WINDOWS = {
    "gauss": gaussian,
    "hermite1": hermite1,
    "exp2": two_sided_exponential,
    "sech": hyperbolic_secant,
}


class _SampledWindow:
    """Linear interpolation of samples; zero outside the sampled range."""

    def __init__(self, t, g):
        self.t = t
        self.g = g

    def __call__(self, t):
        return np.interp(t, self.t, self.g, left=0.0, right=0.0)


def custom_window(t, g, envelope: Envelope, parity: Parity = Parity.NONE,
                  name: str = "custom") -> WindowSpec:
    """Build a window from samples (t_i, g(t_i)).

    The caller vouches for the envelope; nothing is inferred from the samples
    beyond checking that the samples themselves respect it.
    """
    t = np.asarray(t, dtype=float)
    g = np.asarray(g, dtype=float)
    if t.ndim != 1 or t.shape != g.shape or t.size < 2:
        raise DomainError("custom window needs at least two (t, g) samples")
    order = np.argsort(t)
    t, g = t[order], g[order]
    if np.any(np.diff(t) <= 0):
        raise DomainError("custom window sample times must be distinct")
    if np.any(np.abs(g) > envelope(t) * _ROUNDING_SLACK):
        raise DomainError("custom window samples violate the declared envelope")
    return WindowSpec(WindowKind.CUSTOM, _SampledWindow(t, g), parity, envelope, name)


def load_custom_window(path) -> WindowSpec:
    """Read a CSV of ``t,g`` rows with an ``# envelope,<form>,<C>,<a>`` header.

    An optional ``# parity,<odd|even|none>`` line declares symmetry.
    """
    envelope = None
    parity = Parity.NONE
    ts, gs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            head = row[0].strip()
            if head.startswith("#"):
                key = head.lstrip("#").strip().lower()
                if key == "envelope":
                    if len(row) != 4:
                        raise DomainError("envelope header must be '# envelope,<form>,<C>,<a>'")
                    envelope = Envelope(DecayForm(row[1].strip().lower()),
                                        float(row[2]), float(row[3]))
                elif key == "parity":
                    parity = Parity(row[1].strip().lower())
                continue
            try:
                ts.append(float(row[0]))
                gs.append(float(row[1]))
            except (ValueError, IndexError):
                # tolerate a "t,g" column header
                if ts:
                    raise DomainError(f"bad sample row {row!r} in {path}")
    if envelope is None:
        raise DomainError(f"{path}: missing '# envelope,...' header line")
    return custom_window(ts, gs, envelope, parity, name=f"custom:{Path(path).name}")


def window_from_string(text: str) -> WindowSpec:
    """Parse a CLI window string: gauss, hermite1, exp2, sech or custom:<path>."""
    if text.startswith("custom:"):
        return load_custom_window(text[len("custom:"):])
    try:
        return BUILTIN_WINDOWS[text]()
    except KeyError:
        raise DomainError(
            f"unknown window {text!r}; expected one of "
            f"{', '.join(BUILTIN_WINDOWS)} or custom:<path>") from None
