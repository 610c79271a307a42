"""
Hamiltonians of the two-qubit XY model and the parameter-space charts
"""
import cmath
import math
from dataclasses import dataclass, asdict
from typing import Dict, Any, Tuple

import numpy as np

from errors import InvalidParameterError, OriginUndefinedError

NORM_TOLERANCE = 1e-12
ORIGIN_TOLERANCE = 1e-15

# Computational basis order |00>, |01>, |10>, |11>
EVEN_INDICES = (0, 3)
ODD_INDICES = (1, 2)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)
_MAX_EXACT_QUARTER_TURNS = 2 ** 20


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ModelParams:
    """Cartesian control point (λ, γ, φ) of the rotated Hamiltonian"""
    lam: float
    gamma: float
    phi: float = 0.0

    def __post_init__(self):
        _require_finite(lam=self.lam, gamma=self.gamma, phi=self.phi)

    @property
    def radius(self) -> float:
        return math.hypot(self.lam, self.gamma)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return asdict(self)


@dataclass(frozen=True)
class SphericalParams:
    """(r, θ, φ) chart of parameter space; θ is measured from the +λ axis"""
    r: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        _require_finite(r=self.r, theta=self.theta, phi=self.phi)
        if self.r < 0:
            raise InvalidParameterError(f"r must be >= 0, got {self.r}")
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidParameterError(f"theta must lie in [0, pi], got {self.theta}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return asdict(self)


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Dense complex Hermitian matrix of dimension 2 or 4

    Instances are produced by the build_* functions, which fill the upper and lower
    triangles symmetrically, so entries[i, j] == conj(entries[j, i]) holds bitwise.
    """
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] not in (2, 4):
            raise InvalidParameterError(f"expected a 2x2 or 4x4 matrix, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]

    def to_array(self) -> np.ndarray:
        """Writable copy of the entries"""
        return self.entries.copy()

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_hermitian(self) -> bool:
        """Exact (bitwise) Hermiticity check"""
        return bool(np.array_equal(self.entries, self.entries.conj().T))


@dataclass(frozen=True, eq=False)
class PureState4:
    """Normalized two-qubit state a|00> + b|01> + c|10> + d|11>"""
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape != (4,):
            raise InvalidParameterError(f"expected 4 amplitudes, got {amplitudes.shape[0]}")
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidParameterError("amplitudes must be finite")
        norm_sq = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise InvalidParameterError(f"state is not normalized (|psi|^2 = {norm_sq:.15f})")
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def from_amplitudes(cls, a: complex, b: complex, c: complex, d: complex,
                        normalize: bool = False) -> 'PureState4':
        vector = np.array([a, b, c, d], dtype=complex)
        if normalize:
            vector = vector / np.linalg.norm(vector)
        return cls(vector)

    @classmethod
    def from_vector(cls, vector: np.ndarray, normalize: bool = True) -> 'PureState4':
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if normalize:
            vector = vector / np.linalg.norm(vector)
        return cls(vector)

    @property
    def a(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def b(self) -> complex:
        return complex(self.amplitudes[1])

    @property
    def c(self) -> complex:
        return complex(self.amplitudes[2])

    @property
    def d(self) -> complex:
        return complex(self.amplitudes[3])

    def to_array(self) -> np.ndarray:
        return self.amplitudes.copy()

    def inner(self, other: 'PureState4') -> complex:
        """<self|other>"""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


# sqrt(0.5) rounds up, so |<s|s>|^2 of these states clips to exactly 1
INV_SQRT2 = math.sqrt(0.5)

# Named states used throughout
PHI_PLUS = PureState4.from_amplitudes(INV_SQRT2, 0, 0, INV_SQRT2)
PHI_MINUS = PureState4.from_amplitudes(INV_SQRT2, 0, 0, -INV_SQRT2)
ODD_GROUND = PureState4.from_amplitudes(0, INV_SQRT2, INV_SQRT2, 0)    # E = -1
ODD_EXCITED = PureState4.from_amplitudes(0, INV_SQRT2, -INV_SQRT2, 0)  # E = +1


def phase_factor(angle: float) -> complex:
    """e^{i angle}; exact for floating multiples of pi/2 so that sign identities hold bitwise"""
    quarter_turns = angle / (math.pi / 2)
    if quarter_turns.is_integer() and abs(quarter_turns) <= _MAX_EXACT_QUARTER_TURNS:
        return _QUARTER_TURNS[int(quarter_turns) % 4]
    return cmath.exp(1j * angle)


def build_rotated_hamiltonian(lam: float, gamma: float, phi: float) -> HermitianMatrix:
    """
    Two-qubit XY Hamiltonian rotated about the field axis by phi

        -[[lam, 0, 0, gamma e^{-2i phi}],
          [0,   0, 1, 0               ],
          [0,   1, 0, 0               ],
          [gamma e^{2i phi}, 0, 0, -lam]]

    Only the corner carries phi, through 2*phi, so the result is pi-periodic in phi.
    """
    _require_finite(lam=lam, gamma=gamma, phi=phi)
    corner = -gamma * phase_factor(-2.0 * phi)

    entries = np.zeros((4, 4), dtype=complex)
    entries[0, 0] = -lam
    entries[3, 3] = lam
    entries[1, 2] = entries[2, 1] = -1.0
    entries[0, 3] = corner
    entries[3, 0] = corner.conjugate()
    return HermitianMatrix(entries)


def build_hamiltonian(lam: float, gamma: float) -> HermitianMatrix:
    """Unrotated Hamiltonian H(lam, gamma) in the computational basis (real symmetric)"""
    return build_rotated_hamiltonian(lam, gamma, 0.0)


def build_even_block(lam: float, gamma: float, phi: float) -> HermitianMatrix:
    """Block on span{|00>, |11>}: -[[lam, gamma e^{-2i phi}], [gamma e^{2i phi}, -lam]]"""
    _require_finite(lam=lam, gamma=gamma, phi=phi)
    corner = -gamma * phase_factor(-2.0 * phi)
    entries = np.array([[-lam, corner], [corner.conjugate(), lam]], dtype=complex)
    return HermitianMatrix(entries)


def build_odd_block() -> HermitianMatrix:
    """Block on span{|01>, |10>}; independent of every parameter"""
    return HermitianMatrix(-PAULI_X)


def build_pauli_hamiltonian(lam: float, gamma: float) -> HermitianMatrix:
    """Assemble H from Pauli products; cross-check for the block form"""
    _require_finite(lam=lam, gamma=gamma)
    xx = np.kron(PAULI_X, PAULI_X)
    yy = np.kron(PAULI_Y, PAULI_Y)
    z_total = np.kron(PAULI_Z, PAULI_I) + np.kron(PAULI_I, PAULI_Z)
    entries = -0.5 * (1 + gamma) * xx - 0.5 * (1 - gamma) * yy - 0.5 * lam * z_total
    return HermitianMatrix(_symmetrize(entries))


def build_single_spin_hamiltonian(theta: float, phi: float) -> HermitianMatrix:
    """Single spin-1/2 in a unit field of polar angle theta and azimuth phi (2pi-periodic in phi)"""
    _require_finite(theta=theta, phi=phi)
    corner = math.sin(theta) * phase_factor(-phi)
    entries = np.array([[math.cos(theta), corner],
                        [corner.conjugate(), -math.cos(theta)]], dtype=complex)
    return HermitianMatrix(entries)


def uz_operator(phi: float) -> np.ndarray:
    """U_z(phi) = exp[-i phi/2 (sz1 + sz2)], diagonal in the computational basis"""
    return np.diag([phase_factor(-phi), 1.0, 1.0, phase_factor(phi)]).astype(complex)


def ux_operator(phi: float) -> np.ndarray:
    """U_x(phi) = exp[-i phi/2 (sx1 + sx2)] = R_x(phi) (x) R_x(phi)"""
    half = 0.5 * phi
    single = np.array([[math.cos(half), -1j * math.sin(half)],
                       [-1j * math.sin(half), math.cos(half)]], dtype=complex)
    return np.kron(single, single)


def build_x_rotated_hamiltonian(lam: float, phi: float) -> HermitianMatrix:
    """U_x^dag(phi) H(lam, 1) U_x(phi), computed by explicit conjugation"""
    _require_finite(lam=lam, phi=phi)
    base = build_hamiltonian(lam, 1.0).entries
    unitary = ux_operator(phi)
    rotated = unitary.conj().T @ base @ unitary
    return HermitianMatrix(_symmetrize(rotated))


def _symmetrize(matrix: np.ndarray) -> np.ndarray:
    # (M + M^dag)/2 is Hermitian bitwise: conj and + are exact per entry pair
    return 0.5 * (matrix + matrix.conj().T)


def apply_uz(state: PureState4, phi: float) -> PureState4:
    """U_z^dag(phi)|state>: amplitudes scaled by (e^{i phi}, 1, 1, e^{-i phi})"""
    _require_finite(phi=phi)
    factors = np.array([phase_factor(phi), 1.0, 1.0, phase_factor(-phi)], dtype=complex)
    return PureState4(state.amplitudes * factors)


def effective_field(params: ModelParams) -> Tuple[float, float, float]:
    """Field seen by the even block: r (sin t cos 2phi, sin t sin 2phi, cos t)"""
    twice = 2.0 * params.phi
    return (params.gamma * math.cos(twice), params.gamma * math.sin(twice), params.lam)


def spherical_to_model(s: SphericalParams) -> ModelParams:
    """lambda = r cos(theta), gamma = r sin(theta); phi passes through"""
    return ModelParams(lam=s.r * math.cos(s.theta), gamma=s.r * math.sin(s.theta), phi=s.phi)


def model_to_spherical(p: ModelParams) -> SphericalParams:
    """
    Inverse chart with theta folded into [0, pi]

    gamma < 0 is absorbed into the azimuth: flipping the sign of gamma is the same
    Hamiltonian as shifting phi by pi/2, because the corner carries e^{-2i phi}.
    """
    r = math.hypot(p.lam, p.gamma)
    if r < ORIGIN_TOLERANCE:
        raise OriginUndefinedError(f"polar angle undefined at the origin (r = {r:.3e})")
    theta = math.atan2(abs(p.gamma), p.lam)
    phi = p.phi + (0.5 * math.pi if p.gamma < 0 else 0.0)
    return SphericalParams(r=r, theta=theta, phi=phi)
