"""
Eigensystems of the two-qubit XY Hamiltonian: closed form and a Jacobi oracle
"""
import math
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import InvalidParameterError, NoConvergenceError
from model import (
    EVEN_INDICES,
    INV_SQRT2,
    ODD_GROUND,
    HermitianMatrix,
    PureState4,
    phase_factor,
)

logger = logging.getLogger(__name__)

DEGENERACY_TOLERANCE = 1e-9
JACOBI_RELATIVE_TOLERANCE = 1e-13
JACOBI_MAX_SWEEPS = 100
JACOBI_THRESHOLD_SWEEPS = 3

SECTOR_EVEN = 'even'
SECTOR_ODD = 'odd'
SECTOR_DEGENERATE = 'degenerate'

# Odd levels come first among (near-)ties
_SECTOR_RANK = {SECTOR_ODD: 0, SECTOR_EVEN: 1}


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Ascending eigenvalues with paired orthonormal eigenvector columns"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sector_tags: Optional[Tuple[str, ...]] = None

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[0]

    def vector(self, level: int) -> np.ndarray:
        return self.eigenvectors[:, level].copy()

    def ground_vector(self) -> np.ndarray:
        return self.vector(0)

    def as_state(self, level: int = 0) -> PureState4:
        if self.dimension != 4:
            raise InvalidParameterError("only 4x4 eigensystems carry two-qubit states")
        return PureState4.from_vector(self.eigenvectors[:, level])

    def max_residual(self, matrix: Union[HermitianMatrix, np.ndarray]) -> float:
        """max_i ||H v_i - E_i v_i||_inf"""
        h = matrix.entries if isinstance(matrix, HermitianMatrix) else np.asarray(matrix)
        residual = h @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.max(np.abs(residual)))


@dataclass(frozen=True, eq=False)
class GroundStateResult:
    """Instantaneous ground state with its sector and gap to the first excited level"""
    state: PureState4
    energy: float
    sector: str
    gap: float


def _order_levels(values: Sequence[float], tags: Optional[Sequence[str]]) -> List[int]:
    """Ascending order; levels within DEGENERACY_TOLERANCE are ordered odd before even"""
    order = [int(i) for i in np.argsort(values, kind='stable')]
    if tags is None:
        return order

    result: List[int] = []
    cluster = [order[0]]
    for index in order[1:]:
        if values[index] - values[cluster[-1]] <= DEGENERACY_TOLERANCE:
            cluster.append(index)
            continue
        result.extend(sorted(cluster, key=lambda i: _SECTOR_RANK[tags[i]]))
        cluster = [index]
    result.extend(sorted(cluster, key=lambda i: _SECTOR_RANK[tags[i]]))
    return result


def _finish(values: np.ndarray, vectors: np.ndarray,
            tags: Optional[List[str]]) -> EigenSystem:
    order = _order_levels(values, tags)
    eigenvalues = np.asarray(values, dtype=float)[order]
    eigenvectors = np.asarray(vectors, dtype=complex)[:, order]
    sector_tags = tuple(tags[i] for i in order) if tags is not None else None
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    return EigenSystem(eigenvalues=eigenvalues, eigenvectors=eigenvectors, sector_tags=sector_tags)


def analytic_eigensystem(lam: float, gamma: float, phi: float) -> EigenSystem:
    """
    Closed-form spectrum of the rotated Hamiltonian

    Even sector: E = -/+ r with
        |E-> = cos(t/2) e^{-i phi}|00> + sin(t/2) e^{i phi}|11>
        |E+> = -sin(t/2) e^{-i phi}|00> + cos(t/2) e^{i phi}|11>
    where t = atan2(gamma, lam); odd sector: E = -/+ 1 with (|01> +/- |10>)/sqrt2.
    """
    if not all(math.isfinite(x) for x in (lam, gamma, phi)):
        raise InvalidParameterError(f"non-finite parameters ({lam}, {gamma}, {phi})")

    r = math.hypot(lam, gamma)
    vectors = np.zeros((4, 4), dtype=complex)
    if r == 0.0:
        # Even block vanishes: basis vectors are eigenvectors
        vectors[0, 0] = 1.0
        vectors[3, 1] = 1.0
    else:
        half = 0.5 * math.atan2(gamma, lam)
        cos_half, sin_half = math.cos(half), math.sin(half)
        down, up = phase_factor(-phi), phase_factor(phi)
        vectors[0, 0] = cos_half * down
        vectors[3, 0] = sin_half * up
        vectors[0, 1] = -sin_half * down
        vectors[3, 1] = cos_half * up

    vectors[1, 2] = vectors[2, 2] = INV_SQRT2
    vectors[1, 3] = INV_SQRT2
    vectors[2, 3] = -INV_SQRT2

    values = np.array([-r, r, -1.0, 1.0])
    tags = [SECTOR_EVEN, SECTOR_EVEN, SECTOR_ODD, SECTOR_ODD]
    return _finish(values, vectors, tags)


def _sector_of(vector: np.ndarray) -> str:
    even_weight = float(np.sum(np.abs(vector[list(EVEN_INDICES)]) ** 2))
    return SECTOR_EVEN if even_weight >= 0.5 else SECTOR_ODD


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigensystem(matrix: Union[HermitianMatrix, np.ndarray]) -> EigenSystem:
    """
    Cyclic complex Jacobi diagonalization, used as an independent oracle

    Each (p, q) rotation first removes the phase of a_pq with diag(1, e^{-i alpha}) and
    then applies the real symmetric Jacobi rotation. The first sweeps skip elements below
    0.2 * sum|a_pq| / n^2; later sweeps rotate every nonzero element.
    """
    if isinstance(matrix, HermitianMatrix):
        a = matrix.to_array()
    else:
        a = np.array(matrix, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (2, 4):
            raise InvalidParameterError(f"expected a 2x2 or 4x4 matrix, got shape {a.shape}")
        if not np.allclose(a, a.conj().T, rtol=0.0, atol=1e-12):
            raise InvalidParameterError("matrix is not Hermitian")

    n = a.shape[0]
    w = np.eye(n, dtype=complex)
    target = JACOBI_RELATIVE_TOLERANCE * float(np.linalg.norm(a))

    for sweep in range(JACOBI_MAX_SWEEPS):
        off = _off_diagonal_norm(a)
        if off < target or off == 0.0:
            break
        if sweep < JACOBI_THRESHOLD_SWEEPS:
            upper = np.abs(np.triu(a, 1))
            threshold = 0.2 * float(np.sum(upper)) / (n * n)
        else:
            threshold = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= threshold or a[p, q] == 0:
                    continue
                _rotate(a, w, p, q)
    else:
        off = _off_diagonal_norm(a)
        if not off < target:
            raise NoConvergenceError(JACOBI_MAX_SWEEPS, off, target)

    logger.debug(f"Jacobi finished after {sweep} sweeps (off-diagonal {off:.2e})")
    values = np.real(np.diag(a)).copy()
    tags = [_sector_of(w[:, i]) for i in range(n)] if n == 4 else None
    return _finish(values, w, tags)


def _rotate(a: np.ndarray, w: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    magnitude = abs(apq)
    conj_phase = (apq / magnitude).conjugate()
    tau = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    t = math.copysign(1.0 / (abs(tau) + math.hypot(1.0, tau)), tau)
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    rotation = np.array([[c, s],
                         [-s * conj_phase, c * conj_phase]], dtype=complex)
    pair = [p, q]
    a[:, pair] = a[:, pair] @ rotation
    a[pair, :] = rotation.conj().T @ a[pair, :]
    a[p, q] = a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    w[:, pair] = w[:, pair] @ rotation


def ground_state(lam: float, gamma: float, phi: float = 0.0) -> GroundStateResult:
    """
    Instantaneous ground state of the rotated Hamiltonian

    r > 1: cos(t/2) e^{-i phi}|00> + sin(t/2) e^{i phi}|11>, energy -r
    r < 1: (|01> + |10>)/sqrt2, energy -1
    |r - 1| <= DEGENERACY_TOLERANCE: sector 'degenerate', odd state returned
    """
    if not all(math.isfinite(x) for x in (lam, gamma, phi)):
        raise InvalidParameterError(f"non-finite parameters ({lam}, {gamma}, {phi})")

    r = math.hypot(lam, gamma)
    gap = abs(r - 1.0)
    if gap <= DEGENERACY_TOLERANCE:
        return GroundStateResult(state=ODD_GROUND, energy=-1.0, sector=SECTOR_DEGENERATE, gap=gap)
    if r < 1.0:
        return GroundStateResult(state=ODD_GROUND, energy=-1.0, sector=SECTOR_ODD, gap=gap)

    half = 0.5 * math.atan2(gamma, lam)
    state = PureState4.from_amplitudes(
        math.cos(half) * phase_factor(-phi), 0.0, 0.0, math.sin(half) * phase_factor(phi)
    )
    return GroundStateResult(state=state, energy=-r, sector=SECTOR_EVEN, gap=gap)


def energy_gap(lam: float, gamma: float) -> float:
    """Ground to first-excited gap |sqrt(lam^2 + gamma^2) - 1|"""
    return abs(math.hypot(lam, gamma) - 1.0)


def canonical_gauge(vector: np.ndarray) -> np.ndarray:
    """Rephase so the largest-modulus component is real and nonnegative"""
    v = np.asarray(vector, dtype=complex).copy()
    index = int(np.argmax(np.abs(v)))
    magnitude = abs(v[index])
    if magnitude == 0.0:
        return v
    v = v * (v[index].conjugate() / magnitude)
    v[index] = magnitude
    return v


def overlap_moduli(first: EigenSystem, second: EigenSystem) -> np.ndarray:
    """|<first_i|second_i>| level by level"""
    return np.abs(np.sum(first.eigenvectors.conj() * second.eigenvectors, axis=0))
