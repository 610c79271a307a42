"""
Main entry point for the two-qubit XY toolkit
"""
import sys
import math
import logging
import argparse
from datetime import datetime
from typing import List, Optional

import colorlog

from config import config, VALID_LOG_LEVELS
from errors import (
    CsvExportError,
    DomainError,
    EmptyResultError,
    InsideSphereError,
    InvalidParameterError,
    OriginUndefinedError,
    XYQubitError,
)
from geometric import (
    chern_number,
    circle_path,
    loop_phase_analytic,
    monopole_flux,
    renner_teller_ground_state,
    renner_teller_loop_phase,
    single_spin_loop_phase,
    wilson_loop_phase,
)
from sweep import (
    MAX_RESOLUTION,
    MIN_RESOLUTION,
    OBSERVABLES,
    detect_crossings,
    export_crossings_csv,
    export_csv,
    export_profile_csv,
    renner_teller_profile,
    sweep,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_DOMAIN = 3

EXPECTED_FLUX = -8.0 * math.pi

# Marks the handlers installed by setup_logging so re-invocation can replace them
_HANDLER_TAG = '_xyqubit_handler'


def setup_logging(log_level: str = 'INFO'):
    """Setup colored logging on stderr, plus a daily log file when LOG_TO_FILE is on"""
    root = logging.getLogger()
    reset_logging()

    handler = colorlog.StreamHandler(sys.stderr)
    handler.setFormatter(
        colorlog.ColoredFormatter(
            '%(log_color)s' + config.log_format,
            log_colors={
                'DEBUG': 'cyan',
                'INFO': 'green',
                'WARNING': 'yellow',
                'ERROR': 'red',
                'CRITICAL': 'red,bg_white',
            }
        )
    )
    setattr(handler, _HANDLER_TAG, True)
    root.setLevel(getattr(logging, log_level.upper(), logging.INFO))
    root.addHandler(handler)

    if config.log_to_file:
        config.logs_dir.mkdir(parents=True, exist_ok=True)
        log_file = config.get_log_path(datetime.now().strftime('%Y%m%d'))
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(config.log_format))
        setattr(file_handler, _HANDLER_TAG, True)
        root.addHandler(file_handler)


def reset_logging():
    """Remove and close the handlers installed by setup_logging"""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_TAG, False):
            root.removeHandler(handler)
            handler.close()


def format_number(value: float) -> str:
    """12 significant digits; negative zero prints as 0"""
    return f'{value + 0.0:.12g}'


def emit(**tokens) -> None:
    """Print one line of key=value tokens to stdout"""
    parts = []
    for key, value in tokens.items():
        text = format_number(value) if isinstance(value, float) else str(value)
        parts.append(f'{key}={text}')
    print(' '.join(parts))


def _finite_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"value must be finite, got {text!r}")
    return value


def _positive_float(text: str) -> float:
    value = _finite_float(text)
    if value <= 0.0:
        raise argparse.ArgumentTypeError(f"value must be > 0, got {text!r}")
    return value


def _bounded_int(minimum: int, maximum: Optional[int] = None):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer: {text!r}")
        if value < minimum or (maximum is not None and value > maximum):
            upper = f", <= {maximum}" if maximum is not None else ''
            raise argparse.ArgumentTypeError(f"value must be >= {minimum}{upper}, got {value}")
        return value
    return parse


def cmd_sweep(args: argparse.Namespace) -> int:
    """Evaluate an observable over the (lambda, gamma) grid and write it as CSV"""
    grid = sweep(args.observable, (args.lmin, args.lmax), (args.gmin, args.gmax), args.res)
    export_csv(grid, args.out)
    emit(observable=grid.observable_name, rows=len(grid),
         min=float(grid.values.min()), max=float(grid.values.max()))
    return EXIT_OK


def cmd_berry(args: argparse.Namespace) -> int:
    """Compare the discrete loop phase of a phi-circuit with its closed form"""
    if args.outside_only and args.r < 1.0:
        raise InsideSphereError(f"r = {args.r} is inside the degeneracy sphere")

    numeric = wilson_loop_phase(circle_path(args.r, args.theta, args.segments))
    analytic = loop_phase_analytic(args.r, args.theta)
    tokens = {
        'beta_numeric': numeric.phase,
        'beta_analytic': analytic,
        'abs_err': abs(numeric.phase - analytic),
    }
    if args.single_spin:
        tokens['beta_single_spin'] = single_spin_loop_phase(args.theta, args.segments).phase
    logger.debug(f"Largest segment phase {numeric.max_segment_phase:.3e} rad")
    emit(**tokens)
    return EXIT_OK


def cmd_flux(args: argparse.Namespace) -> int:
    """Integrate the monopole field over a sphere outside r = 1"""
    n_theta = args.n_theta or args.n
    n_phi = args.n_phi or args.n
    flux = monopole_flux(args.r, n_theta, n_phi)
    emit(flux=flux, expected=EXPECTED_FLUX, rel_err=abs(flux - EXPECTED_FLUX) / abs(EXPECTED_FLUX))
    return EXIT_OK


def cmd_chern(args: argparse.Namespace) -> int:
    """Lattice Chern number of the ground-state bundle on the sphere of radius r"""
    emit(chern=chern_number(args.r, args.n, args.n))
    return EXIT_OK


def cmd_renner_teller(args: argparse.Namespace) -> int:
    """Loop phase and 2 pi periodicity of the x-rotated family at fixed lambda"""
    result = renner_teller_loop_phase(args.lam, args.segments)
    start = renner_teller_ground_state(args.lam, 0.0)
    end = renner_teller_ground_state(args.lam, 2.0 * math.pi)
    distance = float(max(abs(x - y) for x, y in zip(start.amplitudes, end.amplitudes)))

    tokens = {'phase': result.phase, 'state_distance': distance}
    if args.profile_out:
        profile = renner_teller_profile(args.profile_min, args.profile_max, args.profile_res)
        export_profile_csv(profile, args.profile_out)
        closest = profile.loc[profile['gap'].idxmin()]
        tokens['min_gap'] = float(closest['gap'])
        tokens['min_gap_lambda'] = float(closest['lambda'])
    emit(**tokens)
    return EXIT_OK


def cmd_crossings(args: argparse.Namespace) -> int:
    """Recover the level-crossing circle from a gap sweep over [-2, 2]^2"""
    grid = sweep('gap', (-2.0, 2.0), (-2.0, 2.0), args.res)
    try:
        crossings = detect_crossings(grid, args.threshold)
    except EmptyResultError as e:
        logger.warning(f"no crossings found: {e}")
        emit(count=0)
        return EXIT_OK

    if args.out:
        export_crossings_csv(crossings, args.out)
    emit(count=len(crossings), max_deviation=crossings.max_radial_deviation())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per computation"""
    parser = argparse.ArgumentParser(
        prog='xyqubit',
        description='Exact diagonalization, entanglement and Berry phases of the two-qubit XY model'
    )
    parser.add_argument(
        '--log-level',
        choices=list(VALID_LOG_LEVELS),
        default=config.log_level,
        help=f'Logging level (default: {config.log_level})'
    )
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    sweep_parser = subparsers.add_parser('sweep', help='Grid sweep of an observable, written as CSV')
    sweep_parser.add_argument('--observable', choices=list(OBSERVABLES), default='gap',
                              help='Observable to evaluate (default: gap)')
    sweep_parser.add_argument('--lmin', type=_finite_float, default=-2.0, help='Lowest lambda (default: -2)')
    sweep_parser.add_argument('--lmax', type=_finite_float, default=2.0, help='Highest lambda (default: 2)')
    sweep_parser.add_argument('--gmin', type=_finite_float, default=-2.0, help='Lowest gamma (default: -2)')
    sweep_parser.add_argument('--gmax', type=_finite_float, default=2.0, help='Highest gamma (default: 2)')
    sweep_parser.add_argument('--res', type=_bounded_int(MIN_RESOLUTION, MAX_RESOLUTION), default=101,
                              help='Nodes per axis, endpoints included (default: 101)')
    sweep_parser.add_argument('--out', required=True, help='Destination CSV file')
    sweep_parser.set_defaults(handler=cmd_sweep)

    berry_parser = subparsers.add_parser('berry', help='Loop phase of a phi-circuit at (r, theta)')
    berry_parser.add_argument('--r', type=_positive_float, required=True, help='Circuit radius')
    berry_parser.add_argument('--theta', type=_finite_float, required=True,
                              help='Polar angle from the +lambda axis, radians')
    berry_parser.add_argument('--segments', type=_bounded_int(3), default=2000,
                              help='Points on the circuit (default: 2000)')
    berry_parser.add_argument('--single-spin', action='store_true',
                              help='Also print the spin-1/2 loop phase for the same circuit')
    berry_parser.add_argument('--outside-only', action='store_true',
                              help='Reject circuits inside the degeneracy sphere')
    berry_parser.set_defaults(handler=cmd_berry)

    flux_parser = subparsers.add_parser('flux', help='Monopole flux through a sphere of radius r')
    flux_parser.add_argument('--r', type=_positive_float, required=True, help='Sphere radius')
    flux_parser.add_argument('--n', type=_bounded_int(16), default=256,
                             help='Cells along theta and phi (default: 256)')
    flux_parser.add_argument('--n-theta', type=_bounded_int(16), help='Override cells along theta')
    flux_parser.add_argument('--n-phi', type=_bounded_int(16), help='Override cells along phi')
    flux_parser.set_defaults(handler=cmd_flux)

    chern_parser = subparsers.add_parser('chern', help='Lattice Chern number on a sphere of radius r')
    chern_parser.add_argument('--r', type=_positive_float, required=True, help='Sphere radius')
    chern_parser.add_argument('--n', type=_bounded_int(8), default=32,
                              help='Cells along theta and phi (default: 32)')
    chern_parser.set_defaults(handler=cmd_chern)

    rt_parser = subparsers.add_parser('renner-teller', help='Zero loop phase around the glancing intersection')
    rt_parser.add_argument('--lambda', dest='lam', type=_positive_float, required=True,
                           help='Field strength, > 0')
    rt_parser.add_argument('--segments', type=_bounded_int(100), default=2000,
                           help='Points on the phi loop (default: 2000)')
    rt_parser.add_argument('--profile-out', help='Write the even/odd energy profile to this CSV')
    rt_parser.add_argument('--profile-min', type=_finite_float, default=-2.0,
                           help='Lowest lambda of the profile (default: -2)')
    rt_parser.add_argument('--profile-max', type=_finite_float, default=2.0,
                           help='Highest lambda of the profile (default: 2)')
    rt_parser.add_argument('--profile-res', type=_bounded_int(MIN_RESOLUTION, MAX_RESOLUTION),
                           default=401, help='Profile nodes (default: 401)')
    rt_parser.set_defaults(handler=cmd_renner_teller)

    crossings_parser = subparsers.add_parser('crossings', help='Grid nodes on the level-crossing circle')
    crossings_parser.add_argument('--res', type=_bounded_int(MIN_RESOLUTION, MAX_RESOLUTION), default=401,
                                  help='Nodes per axis over [-2, 2] (default: 401)')
    crossings_parser.add_argument('--threshold', type=_positive_float, default=0.02,
                                  help='Largest gap counted as a crossing (default: 0.02)')
    crossings_parser.add_argument('--out', help='Destination CSV file for the points')
    crossings_parser.set_defaults(handler=cmd_crossings)

    return parser


def _fail(error: Exception, code: int) -> int:
    logger.error(f"{type(error).__name__}: {error}")
    print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION

    if args.command == 'sweep' and not args.lmin < args.lmax:
        return _argument_error(parser, f"--lmin {args.lmin} must be below --lmax {args.lmax}")
    if args.command == 'sweep' and not args.gmin < args.gmax:
        return _argument_error(parser, f"--gmin {args.gmin} must be below --gmax {args.gmax}")
    if args.command == 'renner-teller' and args.profile_out and not args.profile_min < args.profile_max:
        return _argument_error(parser, "--profile-min must be below --profile-max")

    setup_logging(args.log_level)
    if not config.validate():
        logger.error("Configuration validation failed")
        return EXIT_VALIDATION

    started = datetime.now()
    logger.debug(f"Running {args.command} with {vars(args)}")
    try:
        code = args.handler(args)
    except DomainError as e:
        return _fail(e, EXIT_DOMAIN)
    except (InvalidParameterError, OriginUndefinedError) as e:
        return _fail(e, EXIT_VALIDATION)
    except (CsvExportError, OSError) as e:
        return _fail(e, EXIT_IO)
    except XYQubitError as e:
        return _fail(e, EXIT_DOMAIN)

    logger.info(f"{args.command} finished in {datetime.now() - started}")
    return code


def _argument_error(parser: argparse.ArgumentParser, message: str) -> int:
    try:
        parser.error(message)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION
    return EXIT_VALIDATION


if __name__ == '__main__':
    sys.exit(main())
