"""
Grid sweeps over (lambda, gamma), level-crossing detection and CSV export
"""
import sys
import math
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from config import config
from eigen import energy_gap, ground_state
from errors import CsvExportError, EmptyResultError, InvalidParameterError
from geometric import renner_teller_energies
from observables import concurrence, ground_concurrence, ground_fidelity_map

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 2
MAX_RESOLUTION = 10_000

GRID_COLUMNS = ['lambda', 'gamma', 'value']
CROSSING_COLUMNS = ['lambda', 'gamma']
PROFILE_COLUMNS = ['lambda', 'even_energy', 'odd_energy', 'gap']

PathLike = Union[str, Path]


def _origin_concurrence(lam: float, gamma: float) -> float:
    # Closed form has no polar angle at the origin; use the ground state itself
    if lam == 0.0 and gamma == 0.0:
        return concurrence(ground_state(0.0, 0.0).state)
    return ground_concurrence(lam, gamma)


OBSERVABLES: Dict[str, Callable[[float, float], float]] = {
    'gap': energy_gap,
    'concurrence': _origin_concurrence,
    'fidelity': ground_fidelity_map,
    'energy': lambda lam, gamma: ground_state(lam, gamma).energy,
}


@dataclass(frozen=True)
class GridAxis:
    """Closed uniform axis: count nodes from minimum to maximum, both included"""
    minimum: float
    maximum: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.minimum) and math.isfinite(self.maximum)):
            raise InvalidParameterError(f"axis bounds must be finite, got [{self.minimum}, {self.maximum}]")
        if not self.minimum < self.maximum:
            raise InvalidParameterError(f"axis minimum {self.minimum} must be below maximum {self.maximum}")
        if isinstance(self.count, bool) or not isinstance(self.count, (int, np.integer)) \
                or self.count < MIN_RESOLUTION:
            raise InvalidParameterError(f"axis needs an integer count >= {MIN_RESOLUTION}, got {self.count!r}")

    def nodes(self) -> np.ndarray:
        """min + (max - min) * i / (count - 1)"""
        steps = np.arange(self.count, dtype=float)
        return self.minimum + (self.maximum - self.minimum) * steps / (self.count - 1)


@dataclass(frozen=True, eq=False)
class SweepGrid:
    """Observable values on a (lambda, gamma) grid; values[i, j] sits at (lambda_i, gamma_j)"""
    lambda_axis: GridAxis
    gamma_axis: GridAxis
    values: np.ndarray
    observable_name: str

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        expected = (self.lambda_axis.count, self.gamma_axis.count)
        if values.shape != expected:
            raise InvalidParameterError(f"values have shape {values.shape}, expected {expected}")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("grid values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class CrossingSet:
    """Grid nodes whose gap is at most threshold"""
    points: Tuple[Tuple[float, float], ...]
    threshold: float

    def __len__(self) -> int:
        return len(self.points)

    def max_radial_deviation(self) -> float:
        """max |sqrt(lambda^2 + gamma^2) - 1| over the points"""
        return max(abs(math.hypot(lam, gamma) - 1.0) for lam, gamma in self.points)


def _check_resolution(resolution: int) -> None:
    if isinstance(resolution, bool) or not isinstance(resolution, (int, np.integer)):
        raise InvalidParameterError(f"resolution must be an integer, got {resolution!r}")
    if not MIN_RESOLUTION <= resolution <= MAX_RESOLUTION:
        raise InvalidParameterError(
            f"resolution must lie in [{MIN_RESOLUTION}, {MAX_RESOLUTION}], got {resolution}"
        )


def _show_progress(rows: int) -> bool:
    return config.show_progress and rows >= config.progress_min_rows and sys.stderr.isatty()


def sweep(observable: str, lambda_range: Tuple[float, float], gamma_range: Tuple[float, float],
          resolution: int) -> SweepGrid:
    """
    Evaluate an observable at every node of a resolution x resolution grid

    Args:
        observable: One of 'gap', 'concurrence', 'fidelity', 'energy'
        lambda_range: (min, max) of the field axis, both included
        gamma_range: (min, max) of the anisotropy axis, both included
        resolution: Nodes per axis, in [2, 10^4]

    Returns:
        SweepGrid with values in lambda-major order
    """
    if observable not in OBSERVABLES:
        raise InvalidParameterError(
            f"unknown observable {observable!r}; choose from {', '.join(OBSERVABLES)}"
        )
    _check_resolution(resolution)
    lambda_axis = GridAxis(float(lambda_range[0]), float(lambda_range[1]), resolution)
    gamma_axis = GridAxis(float(gamma_range[0]), float(gamma_range[1]), resolution)

    evaluate = OBSERVABLES[observable]
    lambdas, gammas = lambda_axis.nodes(), gamma_axis.nodes()
    values = np.empty((lambda_axis.count, gamma_axis.count), dtype=float)

    logger.info(f"Sweeping {observable} over {lambda_axis.count}x{gamma_axis.count} nodes")
    with tqdm(total=lambda_axis.count, desc=f"sweep {observable}", unit='row', file=sys.stderr,
              mininterval=config.progress_mininterval,
              disable=not _show_progress(lambda_axis.count)) as progress:
        for i, lam in enumerate(lambdas):
            for j, gamma in enumerate(gammas):
                values[i, j] = evaluate(float(lam), float(gamma))
            progress.update(1)

    return SweepGrid(lambda_axis=lambda_axis, gamma_axis=gamma_axis, values=values,
                     observable_name=observable)


def detect_crossings(grid: SweepGrid, threshold: float) -> CrossingSet:
    """Nodes of a gap sweep with value <= threshold; they lie within threshold of r = 1"""
    if grid.observable_name != 'gap':
        raise InvalidParameterError(f"crossings need a gap sweep, got {grid.observable_name!r}")
    if not math.isfinite(threshold) or threshold <= 0.0:
        raise InvalidParameterError(f"threshold must be finite and positive, got {threshold!r}")

    lambdas, gammas = grid.lambda_axis.nodes(), grid.gamma_axis.nodes()
    rows, columns = np.nonzero(grid.values <= threshold)
    if rows.size == 0:
        raise EmptyResultError(
            f"no grid node has gap <= {threshold:g}; the threshold is below the grid resolution"
        )
    points = tuple((float(lambdas[i]), float(gammas[j])) for i, j in zip(rows, columns))
    logger.info(f"Detected {len(points)} crossing nodes at threshold {threshold:g}")
    return CrossingSet(points=points, threshold=threshold)


def format_real(value: float) -> str:
    """%.12e with a bare exponent: 0.5 -> 5.000000000000e-1, 1 -> 1.000000000000e0"""
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(f"cannot serialize non-finite value {value!r}")
    mantissa, exponent = f'{value:.12e}'.split('e')
    return f'{mantissa}e{int(exponent)}'


def _write_frame(frame: pd.DataFrame, destination: PathLike, what: str) -> None:
    try:
        frame.to_csv(destination, index=False, lineterminator='\n', encoding='utf-8')
    except OSError as e:
        raise CsvExportError(f"cannot write {what} CSV", path=str(destination), cause=e) from e
    logger.info(f"Saved {len(frame)} {what} rows to {destination}")


def export_csv(grid: SweepGrid, destination: PathLike) -> None:
    """Write lambda,gamma,value rows, lambda outer and gamma inner"""
    lambdas = [format_real(x) for x in grid.lambda_axis.nodes()]
    gammas = [format_real(x) for x in grid.gamma_axis.nodes()]
    frame = pd.DataFrame({
        'lambda': np.repeat(lambdas, len(gammas)),
        'gamma': np.tile(gammas, len(lambdas)),
        'value': [format_real(x) for x in grid.values.ravel()],
    }, columns=GRID_COLUMNS)
    _write_frame(frame, destination, f'{grid.observable_name} grid')


def _read_frame(source: PathLike, columns: List[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, encoding='utf-8')
    except OSError as e:
        raise CsvExportError("cannot read CSV", path=str(source), cause=e) from e
    if list(frame.columns) != columns:
        raise InvalidParameterError(
            f"{source}: expected header {','.join(columns)}, got {','.join(frame.columns)}"
        )
    return frame


def read_csv_grid(source: PathLike, observable_name: str = 'value') -> SweepGrid:
    """Re-import a grid written by export_csv"""
    frame = _read_frame(source, GRID_COLUMNS)
    if frame.empty:
        raise InvalidParameterError(f"{source}: no data rows")

    lambdas = [float(x) for x in pd.unique(frame['lambda'])]
    gammas = [float(x) for x in pd.unique(frame['gamma'])]
    if len(lambdas) * len(gammas) != len(frame):
        raise InvalidParameterError(
            f"{source}: {len(frame)} rows do not form a {len(lambdas)}x{len(gammas)} grid"
        )

    values = np.array([float(x) for x in frame['value']]).reshape(len(lambdas), len(gammas))
    return SweepGrid(
        lambda_axis=GridAxis(lambdas[0], lambdas[-1], len(lambdas)),
        gamma_axis=GridAxis(gammas[0], gammas[-1], len(gammas)),
        values=values,
        observable_name=observable_name,
    )


def export_crossings_csv(crossings: CrossingSet, destination: PathLike) -> None:
    """Write crossing points under a lambda,gamma header"""
    frame = pd.DataFrame(
        [(format_real(lam), format_real(gamma)) for lam, gamma in crossings.points],
        columns=CROSSING_COLUMNS,
    )
    _write_frame(frame, destination, 'crossing')


def renner_teller_profile(lambda_min: float = -2.0, lambda_max: float = 2.0,
                          count: int = 401) -> pd.DataFrame:
    """Lowest even and odd levels of H(lambda, 1) along a lambda grid

    The two curves touch tangentially at lambda = 0, where the gap column is 0.
    """
    _check_resolution(count)
    axis = GridAxis(float(lambda_min), float(lambda_max), count)
    rows = []
    for lam in axis.nodes():
        even, odd = renner_teller_energies(float(lam))
        rows.append({'lambda': float(lam), 'even_energy': even, 'odd_energy': odd,
                     'gap': odd - even})
    return pd.DataFrame(rows, columns=PROFILE_COLUMNS)


def export_profile_csv(profile: pd.DataFrame, destination: PathLike) -> None:
    """Write a renner_teller_profile table in the grid number format"""
    frame = profile[PROFILE_COLUMNS].apply(lambda column: column.map(format_real))
    _write_frame(frame, destination, 'profile')
