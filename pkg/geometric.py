"""
Berry connections, loop phases and the monopole picture of the degeneracy sphere

Outside the sphere r = 1 the even-sector ground state carries the connection
A = -tan(theta/2)/r along phi, twice that of a single spin-1/2, whose curl is the field
of a monopole sitting on the sphere. Inside the sphere the ground state is the
parameter-independent odd state and every geometric quantity vanishes.
"""
import math
import logging
from dataclasses import dataclass, asdict
from typing import Any, Callable, Dict, List, Sequence, Tuple, Union

import numpy as np

from eigen import DEGENERACY_TOLERANCE, analytic_eigensystem, jacobi_eigensystem
from errors import (
    DiracStringError,
    InsideSphereError,
    InsufficientResolutionError,
    InvalidParameterError,
    OnDegeneracySphereError,
    SphereCrossingError,
)
from model import (
    ODD_GROUND,
    PHI_MINUS,
    PureState4,
    SphericalParams,
    build_single_spin_hamiltonian,
    build_x_rotated_hamiltonian,
    spherical_to_model,
)

logger = logging.getLogger(__name__)

DIRAC_STRING_TOLERANCE = 1e-9
REFERENCE_OVERLAP_TOLERANCE = 1e-6
MAX_SEGMENT_PHASE = 0.5 * math.pi
MIN_OPEN_SEGMENTS = 100
MIN_LOOP_SEGMENTS = 100
MIN_FLUX_CELLS = 16
MIN_CHERN_CELLS = 8
CURL_STEP = 1e-5

TWO_PI = 2.0 * math.pi

StateLike = Union[PureState4, np.ndarray]


@dataclass(frozen=True)
class PhaseResult:
    """Unwrapped geometric phase with its discretization diagnostics"""
    phase: float
    segment_count: int
    max_segment_phase: float

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return asdict(self)


@dataclass(frozen=True)
class ParamPath:
    """
    Ordered points of the (r, theta, phi) chart

    A closed path implies the segment from the last point back to the first. Closed
    paths must stay clear of the degeneracy sphere and on one side of it.
    """
    points: Tuple[SphericalParams, ...]
    closed: bool = True

    def __post_init__(self):
        points = tuple(self.points)
        object.__setattr__(self, 'points', points)

        if self.closed and len(points) < 3:
            raise InvalidParameterError(f"closed path needs at least 3 points, got {len(points)}")
        if len(points) < 2:
            raise InvalidParameterError("path needs at least 2 points")

        pairs = list(zip(points, points[1:]))
        if self.closed:
            pairs.append((points[-1], points[0]))
        for index, (current, following) in enumerate(pairs):
            if current == following:
                raise InvalidParameterError(f"consecutive points {index} and {index + 1} coincide")

        if not self.closed:
            return

        for index, point in enumerate(points):
            if abs(point.r - 1.0) <= DEGENERACY_TOLERANCE:
                raise OnDegeneracySphereError(
                    f"point {index} at r = {point.r!r} lies on the degeneracy sphere"
                )
        outside = [point.r > 1.0 for point in points]
        if any(outside) and not all(outside):
            raise SphereCrossingError(
                f"path has {sum(outside)} points outside and {len(points) - sum(outside)} "
                f"inside the degeneracy sphere"
            )

    @property
    def outside(self) -> bool:
        return self.points[0].r > 1.0

    def __len__(self) -> int:
        return len(self.points)

    def reference_vector(self) -> np.ndarray:
        """Ground state at the theta = 0 pole of the chart on the path's side of the sphere"""
        if self.outside:
            return np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
        return ODD_GROUND.to_array()


def _check_radius(r: float) -> None:
    if not math.isfinite(r) or r <= 0.0:
        raise InvalidParameterError(f"r must be finite and positive, got {r!r}")
    if abs(r - 1.0) <= DEGENERACY_TOLERANCE:
        raise OnDegeneracySphereError(f"r = {r!r} lies on the degeneracy sphere")


def _check_theta(theta: float) -> None:
    if not math.isfinite(theta) or theta < 0.0 or theta > math.pi:
        raise InvalidParameterError(f"theta must lie in [0, pi], got {theta!r}")
    if theta >= math.pi - DIRAC_STRING_TOLERANCE:
        raise DiracStringError(f"theta = {theta!r} lies on the Dirac string of the chart")


def _check_count(name: str, value: int, minimum: int) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise InvalidParameterError(f"{name} must be an integer >= {minimum}, got {value!r}")


def _as_vector(state: StateLike) -> np.ndarray:
    if isinstance(state, PureState4):
        return state.to_array()
    return np.asarray(state, dtype=complex).reshape(-1)


def single_spin_connection(r: float, theta: float) -> float:
    """Spin-1/2 connection -sin^2(theta/2)/(r sin theta), written as -tan(theta/2)/(2r)"""
    if not math.isfinite(r) or r <= 0.0:
        raise InvalidParameterError(f"r must be finite and positive, got {r!r}")
    _check_theta(theta)
    return -0.5 * math.tan(0.5 * theta) / r


def berry_connection(r: float, theta: float) -> float:
    """
    phi-component of the ground-state Berry connection

    Args:
        r: Distance from the origin of the (lambda, gamma) plane
        theta: Polar angle measured from the +lambda axis, in [0, pi)

    Returns:
        -(2/(r sin theta)) sin^2(theta/2) = -tan(theta/2)/r outside the sphere,
        0 inside; exactly 0 at theta = 0
    """
    _check_radius(r)
    _check_theta(theta)
    if r < 1.0:
        return 0.0
    return 2.0 * single_spin_connection(r, theta)


def solid_angle(theta: float) -> float:
    """Solid angle 2 pi (1 - cos theta) enclosed by a phi-circuit at polar angle theta"""
    if not math.isfinite(theta) or theta < 0.0 or theta > math.pi:
        raise InvalidParameterError(f"theta must lie in [0, pi], got {theta!r}")
    return TWO_PI * (1.0 - math.cos(theta))


def loop_phase_analytic(r: float, theta: float) -> float:
    """Closed-circuit phase: -2 pi (1 - cos theta) outside the sphere, 0 inside"""
    _check_radius(r)
    if not math.isfinite(theta) or theta < 0.0 or theta >= math.pi:
        raise InvalidParameterError(f"theta must lie in [0, pi), got {theta!r}")
    if r < 1.0:
        return 0.0
    return -solid_angle(theta)


def circle_path(r: float, theta: float, segments: int, turns: int = 1) -> ParamPath:
    """Closed phi-circuit at fixed (r, theta) sampled at phi_k = 2 pi k / segments"""
    _check_count('segments', segments, 3)
    _check_count('turns', turns, 1)
    points = [SphericalParams(r=r, theta=theta, phi=TWO_PI * k / segments)
              for k in range(segments * turns)]
    return ParamPath(points=tuple(points), closed=True)


def wilson_loop_from_states(states: Sequence[StateLike], reference: StateLike) -> PhaseResult:
    """
    Unwrapped phase of a closed loop of states

    Every segment is anchored to the reference |rho>:

        segment_k = -arg(<rho|psi_k><psi_k|psi_k+1><psi_k+1|rho>)

    The triple product is invariant under independent rephasing of every state, so the
    total does not depend on the gauge in which the states were produced. Segments are
    summed in path order.

    Raises:
        DiracStringError: a state is (nearly) orthogonal to the reference
        InsufficientResolutionError: some |segment_k| >= pi/2
    """
    if len(states) < 3:
        raise InvalidParameterError(f"closed loop needs at least 3 states, got {len(states)}")

    vectors = np.array([_as_vector(state) for state in states])
    rho = _as_vector(reference)
    if vectors.shape[1] != rho.shape[0]:
        raise InvalidParameterError(
            f"reference dimension {rho.shape[0]} does not match states of dimension {vectors.shape[1]}"
        )

    anchors = vectors @ rho.conj()
    weakest = int(np.argmin(np.abs(anchors)))
    if abs(anchors[weakest]) < REFERENCE_OVERLAP_TOLERANCE:
        raise DiracStringError(
            f"state {weakest} is orthogonal to the chart reference "
            f"(|<rho|psi>| = {abs(anchors[weakest]):.3e})"
        )

    following = np.roll(vectors, -1, axis=0)
    links = np.sum(vectors.conj() * following, axis=1)
    triangles = anchors * links * np.roll(anchors, -1).conj()
    segment_phases = -np.angle(triangles)

    worst = int(np.argmax(np.abs(segment_phases)))
    max_segment = float(abs(segment_phases[worst]))
    if max_segment >= MAX_SEGMENT_PHASE:
        raise InsufficientResolutionError(worst, float(segment_phases[worst]))

    phase = math.fsum(float(value) for value in segment_phases)
    logger.debug(f"Wilson loop over {len(vectors)} segments: phase={phase:.12g}, "
                 f"max segment={max_segment:.3e}")
    return PhaseResult(phase=phase, segment_count=len(vectors), max_segment_phase=max_segment)


def wilson_product_phase(states: Sequence[StateLike]) -> float:
    """-arg of the product of consecutive overlaps around the loop; the phase mod 2 pi"""
    vectors = np.array([_as_vector(state) for state in states])
    links = np.sum(vectors.conj() * np.roll(vectors, -1, axis=0), axis=1)
    product = complex(1.0)
    for link in links:
        product *= complex(link)
    return float(-np.angle(product))


def _ground_vector(point: SphericalParams) -> np.ndarray:
    params = spherical_to_model(point)
    return analytic_eigensystem(params.lam, params.gamma, params.phi).ground_vector()


def path_ground_states(path: ParamPath) -> List[np.ndarray]:
    """Raw-gauge ground states of the rotated Hamiltonian at every path point"""
    return [_ground_vector(point) for point in path.points]


def wilson_loop_phase(path: ParamPath) -> PhaseResult:
    """
    Discrete Berry phase of the ground state around a closed path

    Converges to loop_phase_analytic as O(1/N^2) for uniformly sampled circuits and is
    NOT reduced modulo 2 pi: the theta = pi/2 circuit outside the sphere gives -2 pi.
    """
    if not path.closed:
        raise InvalidParameterError("wilson_loop_phase needs a closed path")
    return wilson_loop_from_states(path_ground_states(path), path.reference_vector())


def open_path_phase(r: float, theta: float, phi_start: float, phi_end: float,
                    segments: int) -> PhaseResult:
    """
    Line integral of the displayed connection along the arc phi_start -> phi_end

    At fixed (r, theta) the integrand A_phi * r sin(theta) does not depend on phi, so each
    of the segments arcs contributes the same A_phi * r sin(theta) * dphi and the total is
    -(1 - cos theta)(phi_end - phi_start). The value belongs to the gauge in which the
    connection is written and is not a gauge invariant.
    """
    for name, value in (('phi_start', phi_start), ('phi_end', phi_end)):
        if not math.isfinite(value):
            raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    _check_count('segments', segments, MIN_OPEN_SEGMENTS)
    _check_radius(r)
    if r < 1.0:
        raise InsideSphereError(f"open-path phase is defined outside the sphere only, r = {r!r}")
    if not 0.0 < theta < math.pi:
        raise InvalidParameterError(f"theta must lie in (0, pi), got {theta!r}")

    step = (phi_end - phi_start) / segments
    contributions = np.full(segments, berry_connection(r, theta) * r * math.sin(theta) * step)

    return PhaseResult(
        phase=math.fsum(float(value) for value in contributions),
        segment_count=segments,
        max_segment_phase=float(np.max(np.abs(contributions))),
    )


def single_spin_loop_phase(theta: float, segments: int) -> PhaseResult:
    """Loop phase of a spin-1/2 aligned with a unit field circling at polar angle theta

    States come from the Jacobi solver, so their gauge is arbitrary; the anchored
    estimator removes it. The result converges to -pi (1 - cos theta), half the
    two-qubit value.
    """
    _check_count('segments', segments, 3)
    if not math.isfinite(theta) or theta < 0.0 or theta > math.pi:
        raise InvalidParameterError(f"theta must lie in [0, pi], got {theta!r}")

    states = []
    for k in range(segments):
        system = jacobi_eigensystem(build_single_spin_hamiltonian(theta, TWO_PI * k / segments))
        states.append(system.vector(1))
    reference = np.array([1.0, 0.0], dtype=complex)
    return wilson_loop_from_states(states, reference)


def monopole_field(r: float) -> float:
    """Radial monopole field: -2/r^2 outside the sphere, 0 inside"""
    _check_radius(r)
    if r < 1.0:
        return 0.0
    return -2.0 / (r * r)


def berry_curvature(r: float, theta: float) -> float:
    """
    Radial curl of berry_connection, evaluated as circulation per unit area

    The circulation 2 pi r sin(t) A(r, t) of the phi-circuits bounding a thin band
    t in [theta - h, theta + h] is divided by the band's area. The band is clipped to the
    chart, so theta = 0 uses the polar cap [0, h].
    """
    _check_radius(r)
    _check_theta(theta)
    if r < 1.0:
        return 0.0

    def circulation(t: float) -> float:
        return TWO_PI * r * math.sin(t) * berry_connection(r, t)

    lower = max(theta - CURL_STEP, 0.0)
    upper = theta + CURL_STEP
    if upper >= math.pi - DIRAC_STRING_TOLERANCE:
        upper = theta
    # cos(lower) - cos(upper) without cancellation
    band = 2.0 * math.sin(0.5 * (lower + upper)) * math.sin(0.5 * (upper - lower))
    area = TWO_PI * r * r * band
    return (circulation(upper) - circulation(lower)) / area


def _spherical_integral(radial: Callable[[float], float], r: float, theta_max: float,
                        n_theta: int, n_phi: int) -> float:
    """Midpoint values times exact cell areas r^2 (cos t_i - cos t_i+1) dphi

    The integrands here are axially symmetric, so the phi columns of the grid are equal
    and the phi sum is a multiplication by n_phi.
    """
    edges = np.linspace(0.0, theta_max, n_theta + 1)
    midpoints = 0.5 * (edges[:-1] + edges[1:])
    d_phi = TWO_PI / n_phi
    band_areas = r * r * (np.cos(edges[:-1]) - np.cos(edges[1:])) * d_phi
    values = np.array([radial(float(t)) for t in midpoints])
    return float(n_phi * np.sum(values * band_areas))


def monopole_flux(r: float, n_theta: int, n_phi: int) -> float:
    """Flux of monopole_field through the sphere of radius r (tends to -8 pi)"""
    _check_count('n_theta', n_theta, MIN_FLUX_CELLS)
    _check_count('n_phi', n_phi, MIN_FLUX_CELLS)
    if not math.isfinite(r):
        raise InvalidParameterError(f"r must be finite, got {r!r}")
    if r <= 1.0:
        raise InsideSphereError(f"flux is computed on spheres outside r = 1, got r = {r!r}")
    _check_radius(r)

    flux = _spherical_integral(lambda _theta: monopole_field(r), r, math.pi, n_theta, n_phi)
    logger.debug(f"Monopole flux at r={r}: {flux:.12g} on {n_theta}x{n_phi} cells")
    return flux


def cap_flux(r: float, theta: float, n_theta: int, n_phi: int) -> float:
    """Flux of berry_curvature through the cap [0, theta]; equals the loop phase of its rim"""
    _check_count('n_theta', n_theta, 1)
    _check_count('n_phi', n_phi, 1)
    _check_radius(r)
    _check_theta(theta)
    return _spherical_integral(lambda t: berry_curvature(r, t), r, theta, n_theta, n_phi)


def chern_number(r: float, n_theta: int = 32, n_phi: int = 32) -> float:
    """
    Lattice Chern number of the ground-state bundle over the sphere of radius r

    Ground states sit on theta_i = pi i / n_theta (poles included) and periodic
    phi_j = 2 pi j / n_phi. Each plaquette contributes
    -arg(U_theta(i,j) U_phi(i+1,j) U_theta(i,j+1)^* U_phi(i,j)^*), a gauge-invariant
    phase, and the sum over the sphere is 2 pi times an integer: -2 outside, 0 inside.
    """
    _check_count('n_theta', n_theta, MIN_CHERN_CELLS)
    _check_count('n_phi', n_phi, MIN_CHERN_CELLS)
    _check_radius(r)

    thetas = np.linspace(0.0, math.pi, n_theta + 1)
    phis = TWO_PI * np.arange(n_phi) / n_phi
    states = np.empty((n_theta + 1, n_phi, 4), dtype=complex)
    for i, theta in enumerate(thetas):
        for j, phi in enumerate(phis):
            states[i, j] = _ground_vector(SphericalParams(r=r, theta=float(theta), phi=float(phi)))

    links_theta = np.sum(states[:-1].conj() * states[1:], axis=-1)
    links_phi = np.sum(states.conj() * np.roll(states, -1, axis=1), axis=-1)
    plaquettes = (links_theta
                  * links_phi[1:]
                  * np.roll(links_theta, -1, axis=1).conj()
                  * links_phi[:-1].conj())
    total = -float(np.sum(np.angle(plaquettes)))
    return total / TWO_PI


def renner_teller_energies(lam: float) -> Tuple[float, float]:
    """Lowest even and odd levels of H(lam, 1): (-sqrt(1 + lam^2), -1)"""
    if not math.isfinite(lam):
        raise InvalidParameterError(f"lambda must be finite, got {lam!r}")
    return -math.hypot(lam, 1.0), -1.0


def renner_teller_ground_state(lam: float, phi: float) -> PureState4:
    """
    Ground state of U_x^dag(phi) H(lam, 1) U_x(phi) in closed form

    With a = cos(t/2), b = sin(t/2), tan t = 1/lam:
        (a cos^2(phi/2) - b sin^2(phi/2)) |00>
        + i (a + b)/2 sin(phi) (|01> + |10>)
        + (b cos^2(phi/2) - a sin^2(phi/2)) |11>
    which is 2 pi periodic in phi without a sign change.
    """
    if not math.isfinite(lam) or lam < 0.0:
        raise InvalidParameterError(f"lambda must be finite and >= 0, got {lam!r}")
    if not math.isfinite(phi):
        raise InvalidParameterError(f"phi must be finite, got {phi!r}")

    half = 0.5 * math.atan2(1.0, lam)
    a, b = math.cos(half), math.sin(half)
    cos_sq = math.cos(0.5 * phi) ** 2
    sin_sq = math.sin(0.5 * phi) ** 2
    mixed = 0.5j * (a + b) * math.sin(phi)
    return PureState4.from_amplitudes(
        a * cos_sq - b * sin_sq, mixed, mixed, b * cos_sq - a * sin_sq, normalize=True
    )


def renner_teller_loop_phase(lam: float, segments: int) -> PhaseResult:
    """Loop phase of the x-rotated family over phi in [0, 2 pi) at fixed lam; zero"""
    if not math.isfinite(lam) or lam <= 0.0:
        raise InvalidParameterError(f"lambda must be finite and > 0, got {lam!r}")
    _check_count('segments', segments, MIN_LOOP_SEGMENTS)

    states = [
        jacobi_eigensystem(build_x_rotated_hamiltonian(lam, TWO_PI * k / segments)).ground_vector()
        for k in range(segments)
    ]
    # (|00> - |11>)/sqrt2 is invariant under U_x and overlaps every state by (a - b)/sqrt2
    return wilson_loop_from_states(states, PHI_MINUS)
