"""Hidden-variable models built as separated random processes.

A model is a probability space plus one real response function per
party; the modeled correlation is the expectation of the product of the
two responses, each depending only on its own party's setting:

    E[xi1(s1, .) * xi2(s2, .)]

Two sample spaces cover everything this package needs:

* ``FINITE``: atoms 1..K with nonnegative weights summing to 1. Used by
  the three-atom spin model, whose responses reproduce -(a . b) exactly
  at the price of a response bound of sqrt(3) instead of 1.
* ``GAUSSIAN_PAIR``: two independent standard normals (eta1, eta2).
  Used by the quadrature and free-evolution models, whose responses are
  linear in (eta1, eta2) with coefficients matched to the four cross
  moments. Such responses are unbounded, which is exactly what lets
  them escape the CHSH bound argument.

Expectations are computed in closed form (weighted sums over atoms, or
coefficient dot products via E[eta_u eta_v] = delta_uv); no sampling
happens here. See ``estimator`` for the Monte Carlo side.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .correlators import QuadratureSetting, TimeSetting
from .errors import DegenerateMomentError, ValidationError
from .gaussian import MomentMatrix
from .operators import UnitVector3

#: Sup-bound value reported for responses with unbounded range.
UNBOUNDED = math.inf

WEIGHT_TOL = 1e-12
CERTIFICATE_TOL = 1e-12

#: Below this, the pivot-on-qq coefficient solution is refused as degenerate.
PIVOT_EPS = 1e-9


class SpaceKind(Enum):
    FINITE = "FINITE"
    GAUSSIAN_PAIR = "GAUSSIAN_PAIR"


@dataclass(frozen=True)
class SampleSpace:
    """Probability space the hidden variable lives on."""

    kind: SpaceKind
    weights: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind is SpaceKind.FINITE:
            if not self.weights:
                raise ValidationError("FINITE sample space needs at least one atom weight")
            w = tuple(float(x) for x in self.weights)
            if any(not math.isfinite(x) or x < 0.0 for x in w):
                raise ValidationError(f"atom weights must be finite and nonnegative, got {w}")
            total = math.fsum(w)
            if abs(total - 1.0) > WEIGHT_TOL:
                raise ValidationError(f"atom weights must sum to 1, got {total!r}")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise ValidationError("GAUSSIAN_PAIR sample space carries no weights")

    @classmethod
    def finite(cls, weights: Sequence[float]) -> "SampleSpace":
        return cls(SpaceKind.FINITE, tuple(weights))

    @classmethod
    def gaussian_pair(cls) -> "SampleSpace":
        return cls(SpaceKind.GAUSSIAN_PAIR)

    @property
    def n_atoms(self) -> int:
        if self.kind is not SpaceKind.FINITE:
            raise ValidationError("n_atoms is only defined for FINITE sample spaces")
        return len(self.weights)


class ResponseMode(Enum):
    #: xi(alpha) = f cos(alpha) - g sin(alpha), mimicking a rotated quadrature.
    TRIG = "TRIG"
    #: xi(t) = f + g t, mimicking free evolution.
    LINEAR_TIME = "LINEAR_TIME"


@dataclass(frozen=True)
class ComponentResponse:
    """Response on a FINITE space, linear in the measurement direction.

    The value at direction ``a`` and atom ``k`` is ``scale * a_k`` (the
    k-th direction cosine), so the sup over unit directions per atom is
    exactly ``abs(scale)``.
    """

    scale: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.scale):
            raise ValidationError(f"response scale must be finite, got {self.scale!r}")

    def value(self, setting: UnitVector3, atom: int) -> float:
        if not isinstance(setting, UnitVector3):
            raise ValidationError(
                f"direction-component response expects a UnitVector3 setting, "
                f"got {type(setting).__name__}"
            )
        return self.scale * setting.component(atom)

    def atom_sup(self, atom: int) -> float:
        return abs(self.scale)


@dataclass(frozen=True)
class TabulatedResponse:
    """Response on a FINITE space tabulated over an explicit set of settings.

    ``values[i][k]`` is the response at ``settings[i]`` and atom ``k``.
    Evaluating at a setting not in the table is an error.
    """

    settings: tuple
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        settings = tuple(self.settings)
        values = tuple(tuple(float(v) for v in row) for row in self.values)
        if len(settings) != len(values) or not settings:
            raise ValidationError("tabulated response needs one value row per setting")
        n_atoms = len(values[0])
        if any(len(row) != n_atoms or not row for row in values):
            raise ValidationError("tabulated response rows must share one atom count")
        if any(not math.isfinite(v) for row in values for v in row):
            raise ValidationError("tabulated response values must be finite")
        object.__setattr__(self, "settings", settings)
        object.__setattr__(self, "values", values)

    @property
    def n_atoms(self) -> int:
        return len(self.values[0])

    def value(self, setting, atom: int) -> float:
        for i, known in enumerate(self.settings):
            if known == setting:
                return self.values[i][atom]
        raise ValidationError(f"setting {setting!r} is not tabulated in this response")

    def atom_sup(self, atom: int) -> float:
        return max(abs(row[atom]) for row in self.values)


@dataclass(frozen=True)
class LinearResponse:
    """Response on the GAUSSIAN_PAIR space, linear in (eta1, eta2).

    ``q_coeffs`` are the latent coefficients of the position-like part f
    and ``p_coeffs`` those of the momentum-like part g. The response is
    f cos(alpha) - g sin(alpha) in TRIG mode and f + g t in LINEAR_TIME
    mode, mirroring how the measured observable depends on the setting.
    """

    q_coeffs: tuple[float, float]
    p_coeffs: tuple[float, float]
    mode: ResponseMode

    def __post_init__(self) -> None:
        q = tuple(float(v) for v in self.q_coeffs)
        p = tuple(float(v) for v in self.p_coeffs)
        if len(q) != 2 or len(p) != 2:
            raise ValidationError("latent coefficient vectors must have length 2")
        if any(not math.isfinite(v) for v in q + p):
            raise ValidationError("latent coefficients must be finite")
        object.__setattr__(self, "q_coeffs", q)
        object.__setattr__(self, "p_coeffs", p)

    def coefficients(self, setting) -> tuple[float, float]:
        """Latent coefficient vector of the response at ``setting``."""
        q, p = self.q_coeffs, self.p_coeffs
        if self.mode is ResponseMode.TRIG:
            if not isinstance(setting, QuadratureSetting):
                raise ValidationError(
                    f"TRIG response expects a QuadratureSetting, got {type(setting).__name__}"
                )
            c, s = math.cos(setting.alpha), math.sin(setting.alpha)
            return (q[0] * c - p[0] * s, q[1] * c - p[1] * s)
        if not isinstance(setting, TimeSetting):
            raise ValidationError(
                f"LINEAR_TIME response expects a TimeSetting, got {type(setting).__name__}"
            )
        t = setting.t
        return (q[0] + p[0] * t, q[1] + p[1] * t)

    @property
    def is_zero(self) -> bool:
        return self.q_coeffs == (0.0, 0.0) and self.p_coeffs == (0.0, 0.0)


_FINITE_RESPONSES = (ComponentResponse, TabulatedResponse)


@dataclass(frozen=True)
class HiddenVariableModel:
    """Sample space plus the two per-party response functions.

    ``certified_sup_bound`` is trusted metadata validated at
    construction: for FINITE spaces the exact per-atom suprema of both
    responses must not exceed it. A value of ``UNBOUNDED`` (inf) makes
    no claim; ``None`` means uncertified.
    """

    space: SampleSpace
    response1: object
    response2: object
    certified_sup_bound: float | None = None

    def __post_init__(self) -> None:
        if self.space.kind is SpaceKind.FINITE:
            self._validate_finite()
        else:
            self._validate_gaussian()
        c = self.certified_sup_bound
        if c is None:
            return
        if math.isnan(c) or c < 0.0:
            raise ValidationError(f"certified sup bound must be nonnegative, got {c!r}")
        if not math.isfinite(c):
            return
        if self.space.kind is SpaceKind.GAUSSIAN_PAIR:
            if not (self.response1.is_zero and self.response2.is_zero):
                raise ValidationError(
                    "nonzero gaussian linear responses have unbounded range and cannot "
                    "carry a finite certified sup bound"
                )
            return
        worst = sup_bound(self)
        if worst > c + CERTIFICATE_TOL:
            raise ValidationError(
                f"certified sup bound {c!r} violated: responses reach {worst!r}"
            )

    def _validate_finite(self) -> None:
        n_atoms = self.space.n_atoms
        for name, resp in (("response1", self.response1), ("response2", self.response2)):
            if not isinstance(resp, _FINITE_RESPONSES):
                raise ValidationError(
                    f"{name} must be a ComponentResponse or TabulatedResponse on a "
                    f"FINITE space, got {type(resp).__name__}"
                )
            if isinstance(resp, ComponentResponse) and n_atoms > 3:
                raise ValidationError(
                    "direction-component responses support at most 3 atoms"
                )
            if isinstance(resp, TabulatedResponse) and resp.n_atoms != n_atoms:
                raise ValidationError(
                    f"{name} tabulates {resp.n_atoms} atoms but the space has {n_atoms}"
                )

    def _validate_gaussian(self) -> None:
        for name, resp in (("response1", self.response1), ("response2", self.response2)):
            if not isinstance(resp, LinearResponse):
                raise ValidationError(
                    f"{name} must be a LinearResponse on a GAUSSIAN_PAIR space, "
                    f"got {type(resp).__name__}"
                )
        if self.response1.mode is not self.response2.mode:
            raise ValidationError("both responses must share one response mode")


class Factorization(Enum):
    """Coefficient constructions matching the four cross moments.

    GENERAL takes party-1 coefficients straight from the rows of the
    cross-moment block and gives party 2 the identity; it solves the
    moment equations for every moment matrix, including qq = 0.
    PIVOT_A is the closed-form alternative that pivots on the qq moment
    (dividing by it twice) and is refused when |qq| <= PIVOT_EPS.
    """

    GENERAL = "GENERAL"
    PIVOT_A = "PIVOT_A"


def unbounded_spin_model() -> HiddenVariableModel:
    """Three-atom model reproducing the singlet correlation -(a . b).

    Atoms are the three coordinate axes with uniform weight. Party 1
    responds with sqrt(3) times its direction cosine along the atom's
    axis, party 2 with the negative of the same. The response magnitude
    reaches sqrt(3), so the model violates the unit bound that the CHSH
    derivation needs, which is precisely what lets it match the quantum
    correlation.
    """
    root3 = math.sqrt(3.0)
    third = 1.0 / 3.0
    return HiddenVariableModel(
        space=SampleSpace.finite((third, third, third)),
        response1=ComponentResponse(root3),
        response2=ComponentResponse(-root3),
        certified_sup_bound=root3,
    )


def quadrature_model(m: MomentMatrix,
                     variant: Factorization = Factorization.GENERAL) -> HiddenVariableModel:
    """Gaussian-pair model whose rotated-quadrature correlation matches ``m``.

    Both variants satisfy the four moment equations
    E f1 f2 = qq, E g1 f2 = pq, E f1 g2 = qp, E g1 g2 = pp,
    and therefore reproduce the quadrature correlator exactly for every
    pair of angles.
    """
    if variant is Factorization.PIVOT_A:
        if abs(m.qq) <= PIVOT_EPS:
            raise DegenerateMomentError(
                f"pivot-on-qq coefficients are undefined for |qq| <= {PIVOT_EPS} "
                f"(got qq = {m.qq!r}); use Factorization.GENERAL"
            )
        response1 = LinearResponse(
            q_coeffs=(m.qq, 0.0),
            p_coeffs=(m.pq, m.pp - m.pq * m.qp / m.qq),
            mode=ResponseMode.TRIG,
        )
        response2 = LinearResponse(
            q_coeffs=(1.0, 0.0),
            p_coeffs=(m.qp / m.qq, 1.0),
            mode=ResponseMode.TRIG,
        )
    elif variant is Factorization.GENERAL:
        response1 = LinearResponse(
            q_coeffs=(m.qq, m.qp),
            p_coeffs=(m.pq, m.pp),
            mode=ResponseMode.TRIG,
        )
        response2 = LinearResponse(
            q_coeffs=(1.0, 0.0),
            p_coeffs=(0.0, 1.0),
            mode=ResponseMode.TRIG,
        )
    else:
        raise ValidationError(f"unknown factorization variant: {variant!r}")
    return HiddenVariableModel(
        space=SampleSpace.gaussian_pair(),
        response1=response1,
        response2=response2,
        certified_sup_bound=UNBOUNDED,
    )


def free_evolution_model(m: MomentMatrix) -> HiddenVariableModel:
    """Gaussian-pair model matching <q1(t1) q2(t2)> for free evolution.

    Uses the GENERAL coefficient rows, so the exact expectation equals
    qq + pq t1 + qp t2 + pp t1 t2 for all times.
    """
    return HiddenVariableModel(
        space=SampleSpace.gaussian_pair(),
        response1=LinearResponse((m.qq, m.qp), (m.pq, m.pp), ResponseMode.LINEAR_TIME),
        response2=LinearResponse((1.0, 0.0), (0.0, 1.0), ResponseMode.LINEAR_TIME),
        certified_sup_bound=UNBOUNDED,
    )


def exact_expectation(model: HiddenVariableModel, s1, s2) -> float:
    """E[xi1(s1) xi2(s2)] in closed form, no sampling.

    FINITE spaces: weighted sum over atoms. GAUSSIAN_PAIR: dot product
    of the two latent coefficient vectors, using E[eta_u eta_v] =
    delta_uv.
    """
    if model.space.kind is SpaceKind.FINITE:
        r1, r2, w = model.response1, model.response2, model.space.weights
        return math.fsum(
            w[k] * r1.value(s1, k) * r2.value(s2, k) for k in range(len(w))
        )
    u = model.response1.coefficients(s1)
    v = model.response2.coefficients(s2)
    return u[0] * v[0] + u[1] * v[1]


def expectation_grid(model: HiddenVariableModel,
                     settings1: Sequence, settings2: Sequence) -> np.ndarray:
    """``exact_expectation`` over the Cartesian product of two setting lists.

    Same contraction as the scalar form, batched; returns an array of
    shape (len(settings1), len(settings2)).
    """
    if model.space.kind is SpaceKind.FINITE:
        w = np.array(model.space.weights)
        k = len(w)
        v1 = np.array([[model.response1.value(s, atom) for atom in range(k)]
                       for s in settings1])
        v2 = np.array([[model.response2.value(s, atom) for atom in range(k)]
                       for s in settings2])
        return (v1 * w) @ v2.T
    u = np.array([model.response1.coefficients(s) for s in settings1])
    v = np.array([model.response2.coefficients(s) for s in settings2])
    return u @ v.T


def matched_moments(model: HiddenVariableModel) -> MomentMatrix:
    """The four latent moments E f1 f2, E g1 f2, E f1 g2, E g1 g2.

    For a model built by ``quadrature_model`` or ``free_evolution_model``
    this returns the input moment matrix exactly.
    """
    if model.space.kind is not SpaceKind.GAUSSIAN_PAIR:
        raise ValidationError("matched_moments is defined for GAUSSIAN_PAIR models")
    q1, p1 = model.response1.q_coeffs, model.response1.p_coeffs
    q2, p2 = model.response2.q_coeffs, model.response2.p_coeffs

    def dot(a, b):
        return a[0] * b[0] + a[1] * b[1]

    return MomentMatrix(qq=dot(q1, q2), pq=dot(p1, q2), qp=dot(q1, p2), pp=dot(p1, p2))


def sup_bound(model: HiddenVariableModel) -> float:
    """Supremum of |xi_n| over parties, settings, and sample points.

    FINITE responses have exact per-atom suprema (the tabulated maxima,
    or |scale| for direction-component responses). Gaussian linear
    responses are unbounded unless identically zero.
    """
    if model.space.kind is SpaceKind.FINITE:
        n_atoms = model.space.n_atoms
        return max(
            resp.atom_sup(atom)
            for resp in (model.response1, model.response2)
            for atom in range(n_atoms)
        )
    if model.response1.is_zero and model.response2.is_zero:
        return 0.0
    return UNBOUNDED


class Spectrum(Enum):
    """Target observable ranges for the reality condition."""

    SPIN_PM1 = "SPIN_PM1"
    QUADRATURE_REAL_LINE = "QUADRATURE_REAL_LINE"


@dataclass(frozen=True)
class SpectrumReport:
    passed: bool
    spectrum: Spectrum
    sup: float
    detail: str


def _spans_line_at_every_setting(resp: LinearResponse) -> bool:
    # The response at a fixed setting spans all of R over the latent pair
    # iff its coefficient vector there is nonzero.
    q, p = resp.q_coeffs, resp.p_coeffs
    det = q[0] * p[1] - q[1] * p[0]
    if resp.mode is ResponseMode.TRIG:
        # f cos - g sin vanishes at some angle iff f and g are dependent.
        return det != 0.0
    p_zero = p == (0.0, 0.0)
    q_zero = q == (0.0, 0.0)
    if p_zero:
        return not q_zero
    return det != 0.0


def spectrum_compatibility(model: HiddenVariableModel, spectrum: Spectrum) -> SpectrumReport:
    """Check that response ranges are compatible with the observable spectrum.

    SPIN_PM1 requires every response value to lie in [-1, 1].
    QUADRATURE_REAL_LINE requires each response to reach the whole real
    line at every setting, which only gaussian linear responses with
    independent coefficient vectors provide.
    """
    sup = sup_bound(model)
    if spectrum is Spectrum.SPIN_PM1:
        passed = sup <= 1.0 + CERTIFICATE_TOL
        detail = ("response range within [-1, 1]" if passed
                  else f"response magnitude reaches {sup!r} > 1")
        return SpectrumReport(passed, spectrum, sup, detail)
    if model.space.kind is not SpaceKind.GAUSSIAN_PAIR:
        return SpectrumReport(
            False, spectrum, sup,
            "finite sample spaces have bounded response ranges and cannot cover R",
        )
    for name, resp in (("response1", model.response1), ("response2", model.response2)):
        if not _spans_line_at_every_setting(resp):
            return SpectrumReport(
                False, spectrum, sup,
                f"{name} collapses to a degenerate range at some setting",
            )
    return SpectrumReport(True, spectrum, sup, "responses span R at every setting")


# ---------------------------------------------------------------------------
# JSON serialization of FINITE models (inspection and golden-file tests)
# ---------------------------------------------------------------------------


def _setting_to_dict(setting) -> dict:
    if isinstance(setting, UnitVector3):
        return {"kind": "spin", "x": setting.x, "y": setting.y, "z": setting.z}
    if isinstance(setting, QuadratureSetting):
        return {"kind": "quadrature", "alpha": setting.alpha}
    if isinstance(setting, TimeSetting):
        return {"kind": "time", "t": setting.t}
    raise ValidationError(f"setting {setting!r} is not serializable")


def _setting_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "spin":
        return UnitVector3(data["x"], data["y"], data["z"])
    if kind == "quadrature":
        return QuadratureSetting(data["alpha"])
    if kind == "time":
        return TimeSetting(data["t"])
    raise ValidationError(f"unknown setting kind {kind!r}")


def _response_atom_dict(resp, atom: int) -> dict:
    if isinstance(resp, ComponentResponse):
        return {"kind": "direction_component", "scale": resp.scale}
    return {
        "kind": "table",
        "settings": [_setting_to_dict(s) for s in resp.settings],
        "values": [row[atom] for row in resp.values],
    }


def finite_model_to_dict(model: HiddenVariableModel) -> dict:
    """Serialize a FINITE model as one record per atom."""
    if model.space.kind is not SpaceKind.FINITE:
        raise ValidationError("only FINITE models serialize to the atom-list schema")
    c = model.certified_sup_bound
    sup: float | str | None
    if c is None:
        sup = None
    elif math.isinf(c):
        sup = "unbounded"
    else:
        sup = c
    return {
        "atoms": [
            {
                "weight": model.space.weights[atom],
                "xi1": _response_atom_dict(model.response1, atom),
                "xi2": _response_atom_dict(model.response2, atom),
            }
            for atom in range(model.space.n_atoms)
        ],
        "supBound": sup,
    }


def _response_from_atom_dicts(dicts: list[dict]):
    kinds = {d.get("kind") for d in dicts}
    if kinds == {"direction_component"}:
        scales = {d["scale"] for d in dicts}
        if len(scales) != 1:
            raise ValidationError("direction-component atoms must share one scale")
        return ComponentResponse(scales.pop())
    if kinds == {"table"}:
        settings = tuple(_setting_from_dict(s) for s in dicts[0]["settings"])
        for d in dicts[1:]:
            if tuple(_setting_from_dict(s) for s in d["settings"]) != settings:
                raise ValidationError("tabulated atoms must share one setting list")
        values = tuple(
            tuple(float(d["values"][i]) for d in dicts) for i in range(len(settings))
        )
        return TabulatedResponse(settings=settings, values=values)
    raise ValidationError(f"inconsistent or unknown response kinds: {kinds}")


def finite_model_from_dict(data: dict) -> HiddenVariableModel:
    try:
        atoms = data["atoms"]
        weights = tuple(float(a["weight"]) for a in atoms)
        response1 = _response_from_atom_dicts([a["xi1"] for a in atoms])
        response2 = _response_from_atom_dicts([a["xi2"] for a in atoms])
        sup = data.get("supBound")
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad model payload: {exc}") from exc
    if sup == "unbounded":
        sup = UNBOUNDED
    return HiddenVariableModel(
        space=SampleSpace.finite(weights),
        response1=response1,
        response2=response2,
        certified_sup_bound=sup,
    )


def finite_model_to_json(model: HiddenVariableModel) -> str:
    return json.dumps(finite_model_to_dict(model), indent=2, sort_keys=True)


def finite_model_from_json(text: str) -> HiddenVariableModel:
    return finite_model_from_dict(json.loads(text))
