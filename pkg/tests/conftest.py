"""Shared helpers: deterministic direction samplers and an independent
covariance oracle for the two-mode squeezed vacuum."""

from __future__ import annotations

import math

import numpy as np

from eprlab import (
    HiddenVariableModel,
    QuadratureSetting,
    SampleSpace,
    TabulatedResponse,
    UnitVector3,
)


def random_unit_vectors(rng: np.random.Generator, n: int) -> list[UnitVector3]:
    """Isotropic unit vectors (normalized Gaussian triples)."""
    out = []
    while len(out) < n:
        v = rng.standard_normal(3)
        norm = np.linalg.norm(v)
        if norm < 1e-6:
            continue
        v = v / norm
        out.append(UnitVector3(float(v[0]), float(v[1]), float(v[2])))
    return out


def fibonacci_sphere(n: int) -> list[UnitVector3]:
    """Deterministic near-uniform grid of n unit vectors."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    points = []
    for i in range(n):
        z = 1.0 - 2.0 * (i + 0.5) / n
        radius = math.sqrt(max(1.0 - z * z, 0.0))
        theta = golden * i
        v = np.array([radius * math.cos(theta), radius * math.sin(theta), z])
        v = v / np.linalg.norm(v)
        points.append(UnitVector3(float(v[0]), float(v[1]), float(v[2])))
    return points


def two_mode_squeeze_cov(r: float) -> np.ndarray:
    """Vacuum covariance conjugated by the two-mode squeeze symplectic.

    Independent of the tmsv construction: builds the 4x4 symplectic
    matrix explicitly and computes S (I/2) S^T.
    """
    ch, sh = math.cosh(r), math.sinh(r)
    s_mat = np.array([
        [ch, 0.0, sh, 0.0],
        [0.0, ch, 0.0, -sh],
        [sh, 0.0, ch, 0.0],
        [0.0, -sh, 0.0, ch],
    ])
    return s_mat @ (0.5 * np.eye(4)) @ s_mat.T


def random_sign_model(rng: np.random.Generator, settings1, settings2,
                      n_atoms: int) -> HiddenVariableModel:
    """Random +-1-valued tabulated model with certified sup bound 1."""
    raw = rng.random(n_atoms) + 1e-3
    weights = tuple(float(w) for w in raw / raw.sum())
    values1 = tuple(
        tuple(float(v) for v in rng.choice([-1.0, 1.0], size=n_atoms))
        for _ in settings1
    )
    values2 = tuple(
        tuple(float(v) for v in rng.choice([-1.0, 1.0], size=n_atoms))
        for _ in settings2
    )
    return HiddenVariableModel(
        space=SampleSpace.finite(weights),
        response1=TabulatedResponse(settings=tuple(settings1), values=values1),
        response2=TabulatedResponse(settings=tuple(settings2), values=values2),
        certified_sup_bound=1.0,
    )


CHSH_PARTY1_SETTINGS = (QuadratureSetting(0.0), QuadratureSetting(1.1))
CHSH_PARTY2_SETTINGS = (QuadratureSetting(0.4), QuadratureSetting(2.3))
