"""Exact two-party correlation functions and the four-term CHSH combination.

Three families of measurement settings are supported:

* spin directions (``UnitVector3``) measured on the two-spin singlet,
* rotated quadratures q(alpha) = q cos(alpha) - p sin(alpha), where
  alpha = 0 is position and alpha = 3*pi/2 is momentum,
* free-evolution times, q(t) = q + p t.

The quadrature and time correlators depend on the state only through
its four cross moments (``MomentMatrix``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ValidationError
from .gaussian import MomentMatrix
from .operators import UnitVector3, expectation, pauli_observable, singlet_state, tensor

SPIN_CONSISTENCY_TOL = 1e-10

#: Quadrature angle at which q(alpha) equals the momentum operator.
PI_3_2 = 1.5 * math.pi


@dataclass(frozen=True)
class QuadratureSetting:
    """Rotation angle selecting the quadrature q(alpha), in radians.

    The angle is canonically reduced to [-pi, pi] at construction
    (IEEE remainder, exact), so settings a full period apart compare
    and evaluate identically.
    """

    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha):
            raise ValidationError(f"quadrature angle must be finite, got {self.alpha!r}")
        object.__setattr__(self, "alpha", math.remainder(self.alpha, math.tau))


#: Momentum measurement expressed as a quadrature setting.
MOMENTUM = QuadratureSetting(PI_3_2)


@dataclass(frozen=True)
class TimeSetting:
    """Free-evolution time (mass-normalized units, hbar = 1)."""

    t: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.t):
            raise ValidationError(f"time must be finite, got {self.t!r}")


_CHSH_KINDS = (UnitVector3, QuadratureSetting)


@dataclass(frozen=True)
class ChshSettings:
    """The four settings (a, a', b, b') of the CHSH combination.

    All four must be of one kind: spin directions or quadrature angles.
    """

    a: object
    a_prime: object
    b: object
    b_prime: object

    def __post_init__(self) -> None:
        kind = type(self.a)
        if kind not in _CHSH_KINDS:
            raise ValidationError(
                f"CHSH settings must be UnitVector3 or QuadratureSetting, got {kind.__name__}"
            )
        for name in ("a_prime", "b", "b_prime"):
            if type(getattr(self, name)) is not kind:
                raise ValidationError(
                    f"CHSH settings must all be of one kind; {name} is "
                    f"{type(getattr(self, name)).__name__}, expected {kind.__name__}"
                )


def quadrature_rotation(alpha: float) -> np.ndarray:
    """The 2x2 phase-space rotation sending (q, p) to (q(alpha), p(alpha)).

    Its determinant is 1, so it is symplectic and preserves the
    canonical commutators for every angle.
    """
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s], [s, c]])


def spin_correlation(a: UnitVector3, b: UnitVector3) -> float:
    """Singlet correlation of spin components along ``a`` and ``b``.

    Computed two ways and cross-checked: the explicit 4x4 expectation
    value, and the closed form -(a . b). Returns the matrix value.
    """
    matrix_value = expectation(singlet_state(), tensor(pauli_observable(a), pauli_observable(b)))
    closed_form = -a.dot(b)
    if abs(matrix_value - closed_form) > SPIN_CONSISTENCY_TOL:
        raise ConsistencyError(
            f"spin correlator mismatch: matrix {matrix_value!r} vs closed form {closed_form!r}"
        )
    return matrix_value


def quadrature_correlation(m: MomentMatrix, a1: QuadratureSetting, a2: QuadratureSetting) -> float:
    """<q1(alpha1) q2(alpha2)> expanded over the four cross moments."""
    if not isinstance(a1, QuadratureSetting) or not isinstance(a2, QuadratureSetting):
        raise ValidationError("quadrature_correlation expects QuadratureSetting arguments")
    c1, s1 = math.cos(a1.alpha), math.sin(a1.alpha)
    c2, s2 = math.cos(a2.alpha), math.sin(a2.alpha)
    return m.qq * c1 * c2 - m.pq * s1 * c2 - m.qp * c1 * s2 + m.pp * s1 * s2


def free_evolution_correlation(m: MomentMatrix, t1: TimeSetting, t2: TimeSetting) -> float:
    """<q1(t1) q2(t2)> for freely evolving particles, q(t) = q + p t."""
    if not isinstance(t1, TimeSetting) or not isinstance(t2, TimeSetting):
        raise ValidationError("free_evolution_correlation expects TimeSetting arguments")
    return m.qq + m.pq * t1.t + m.qp * t2.t + m.pp * (t1.t * t2.t)


def chsh_value(corr, settings: ChshSettings) -> float:
    """S = corr(a,b) - corr(a,b') + corr(a',b) + corr(a',b').

    ``corr`` must accept the setting kind carried by ``settings``; the
    minus sign sits on the (a, b') term.
    """
    return (corr(settings.a, settings.b)
            - corr(settings.a, settings.b_prime)
            + corr(settings.a_prime, settings.b)
            + corr(settings.a_prime, settings.b_prime))
