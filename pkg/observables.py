"""
Entanglement and fidelity of the ground state across the level-crossing circle
"""
import math
import logging

from eigen import DEGENERACY_TOLERANCE, ground_state
from errors import InvalidParameterError, OriginUndefinedError
from model import ODD_GROUND, PureState4

logger = logging.getLogger(__name__)

DEFAULT_JUMP_OFFSET = 1e-3


def concurrence(state: PureState4) -> float:
    """C = 2|ad - bc|, clipped to [0, 1]"""
    value = 2.0 * abs(state.a * state.d - state.b * state.c)
    return min(value, 1.0)


def fidelity(psi: PureState4, chi: PureState4) -> float:
    """F = |<psi|chi>|^2, clipped to [0, 1]"""
    return min(abs(psi.inner(chi)) ** 2, 1.0)


def ground_concurrence(lam: float, gamma: float) -> float:
    """
    Closed-form ground-state concurrence: |sin t| outside the unit circle, 1 inside

    Points on the circle follow the odd-sector convention and give 1.
    """
    if not (math.isfinite(lam) and math.isfinite(gamma)):
        raise InvalidParameterError(f"non-finite parameters ({lam}, {gamma})")
    r = math.hypot(lam, gamma)
    if r == 0.0:
        raise OriginUndefinedError("closed-form concurrence needs a polar angle; origin given")
    if r > 1.0 + DEGENERACY_TOLERANCE:
        return abs(gamma) / r
    return 1.0


def ground_fidelity_map(lam: float, gamma: float) -> float:
    """Fidelity between the ground state at (lam, gamma) and (|01> + |10>)/sqrt2"""
    return fidelity(ground_state(lam, gamma, 0.0).state, ODD_GROUND)


def _ray_points(theta: float, delta: float):
    if not 0.0 < delta < 1.0:
        raise InvalidParameterError(f"offset must lie in (0, 1), got {delta}")
    inner, outer = 1.0 - delta, 1.0 + delta
    direction = (math.cos(theta), math.sin(theta))
    return ((inner * direction[0], inner * direction[1]),
            (outer * direction[0], outer * direction[1]))


def concurrence_jump(theta: float, delta: float = DEFAULT_JUMP_OFFSET) -> float:
    """Concurrence just inside minus just outside the circle along the ray at angle theta"""
    inside, outside = _ray_points(theta, delta)
    return ground_concurrence(*inside) - ground_concurrence(*outside)


def fidelity_jump(theta: float, delta: float = DEFAULT_JUMP_OFFSET) -> float:
    """Same as concurrence_jump for the fidelity map; 1 along every ray"""
    inside, outside = _ray_points(theta, delta)
    return ground_fidelity_map(*inside) - ground_fidelity_map(*outside)
