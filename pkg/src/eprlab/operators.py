"""Exact finite-dimensional complex linear algebra for spin measurements.

Everything here is small and dense: 2x2 operators for a single spin-1/2,
4x4 operators for a pair, and the matching state vectors. Values are
immutable, and hermiticity / normalization are validated eagerly at
construction so numerical drift fails fast instead of propagating.

Basis ordering for the two-spin space is |00>, |01>, |10>, |11> with the
first factor belonging to particle 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ValidationError

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12
UNIT_TOL = 1e-9
IMAG_TOL = 1e-12

_SUPPORTED_DIMS = (2, 4)


def _readonly(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class UnitVector3:
    """A measurement direction: unit vector in R^3 (direction cosines)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        comps = (self.x, self.y, self.z)
        if not all(math.isfinite(c) for c in comps):
            raise ValidationError(f"direction components must be finite, got {comps}")
        norm_sq = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(norm_sq - 1.0) > UNIT_TOL:
            raise ValidationError(
                f"direction must be a unit vector: |a|^2 = {norm_sq!r} deviates from 1"
            )

    def component(self, index: int) -> float:
        """Cartesian component by 0-based index."""
        return (self.x, self.y, self.z)[index]

    def dot(self, other: "UnitVector3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True, eq=False)
class ComplexOperator:
    """Dense complex matrix acting on one spin (dim 2) or a pair (dim 4)."""

    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self) -> None:
        arr = np.array(self.matrix, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValidationError(f"operator must be a square matrix, got shape {arr.shape}")
        if arr.shape[0] not in _SUPPORTED_DIMS:
            raise ValidationError(f"operator dimension must be one of {_SUPPORTED_DIMS}")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValidationError("operator entries must be finite")
        if self.hermitian:
            drift = np.max(np.abs(arr - arr.conj().T))
            if drift > HERMITIAN_TOL:
                raise ValidationError(
                    f"operator flagged hermitian deviates from M = M^dagger by {drift:.3e}"
                )
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.amplitudes, dtype=complex)
        if arr.ndim != 1 or arr.shape[0] not in _SUPPORTED_DIMS:
            raise ValidationError(f"state must be a vector of dim 2 or 4, got shape {arr.shape}")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


SIGMA_X = ComplexOperator(_readonly([[0, 1], [1, 0]], complex), hermitian=True)
SIGMA_Y = ComplexOperator(_readonly([[0, -1j], [1j, 0]], complex), hermitian=True)
SIGMA_Z = ComplexOperator(_readonly([[1, 0], [0, -1]], complex), hermitian=True)
IDENTITY_2 = ComplexOperator(np.eye(2, dtype=complex), hermitian=True)
IDENTITY_4 = ComplexOperator(np.eye(4, dtype=complex), hermitian=True)


def pauli_observable(a: UnitVector3) -> ComplexOperator:
    """Spin component along ``a``: a.x*sigma_x + a.y*sigma_y + a.z*sigma_z.

    The result is a 2x2 Hermitian involution, so its eigenvalues are
    exactly +1 and -1 for any unit direction.
    """
    if not isinstance(a, UnitVector3):
        raise ValidationError(f"expected a UnitVector3 direction, got {type(a).__name__}")
    matrix = a.x * SIGMA_X.matrix + a.y * SIGMA_Y.matrix + a.z * SIGMA_Z.matrix
    return ComplexOperator(matrix, hermitian=True)


def singlet_state() -> StateVector:
    """The two-spin singlet (|01> - |10>) / sqrt(2)."""
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    return StateVector(np.array([0.0, inv_sqrt2, -inv_sqrt2, 0.0], dtype=complex))


def tensor(op_a: ComplexOperator, op_b: ComplexOperator) -> ComplexOperator:
    """Kronecker product of two single-spin operators (first factor = particle 1)."""
    if op_a.dim != 2 or op_b.dim != 2:
        raise ValidationError(
            f"tensor expects two 2x2 operators, got dims {op_a.dim} and {op_b.dim}"
        )
    return ComplexOperator(np.kron(op_a.matrix, op_b.matrix),
                           hermitian=op_a.hermitian and op_b.hermitian)


def expectation(state: StateVector, op: ComplexOperator) -> float:
    """<psi|Op|psi> for a Hermitian operator, returned as a real number.

    The imaginary part must sit at rounding level; anything above
    ``IMAG_TOL`` indicates a broken operator and raises.
    """
    if not op.hermitian:
        raise ValidationError("expectation requires an operator flagged hermitian")
    if state.dim != op.dim:
        raise ValidationError(f"dimension mismatch: state dim {state.dim}, operator dim {op.dim}")
    value = complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))
    if abs(value.imag) > IMAG_TOL:
        raise ConsistencyError(
            f"expectation of a hermitian operator came out complex: imag = {value.imag:.3e}"
        )
    return float(value.real)
