"""
Command line entry point: `erpic run | preset | converge | validate`

Exit codes: 0 success, 2 configuration error, 3 numerical error.
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

try:
    # When used as a package
    from ..utils.errors import ConfigError, ConfigViolation, NumericalError
    from ..utils.helpers import setup_logging
    from .config import load_config, parse_config
    from .convergence import ConvergenceSpec, run_convergence
    from .presets import PRESETS, SCALES, SCALE_ALIASES, render_preset
    from .simulation import Simulation
except ImportError:
    # When used as standalone
    from erpic.utils.errors import ConfigError, ConfigViolation, NumericalError
    from erpic.utils.helpers import setup_logging
    from erpic.runner.config import load_config, parse_config
    from erpic.runner.convergence import ConvergenceSpec, run_convergence
    from erpic.runner.presets import PRESETS, SCALES, SCALE_ALIASES, render_preset
    from erpic.runner.simulation import Simulation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _float_list(text):
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers, got {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(prog="erpic", description="Energy-relaxed particle-in-cell solver "
                                                               "for the strongly magnetized Vlasov-Poisson system")
    parser.add_argument("--log-level", default=None,
                        help="DEBUG, INFO, WARNING or ERROR (default: ERPIC_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a simulation from a configuration file")
    run.add_argument("--config", required=True, help="configuration file")
    run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                     help="override one configuration key (repeatable)")
    run.add_argument("--output", default=None, help="output directory (overrides output.directory)")

    preset = sub.add_parser("preset", help="print or run a named experiment")
    preset.add_argument("name", choices=list(PRESETS))
    preset.add_argument("--scale", choices=SCALES + list(SCALE_ALIASES), default="paper")
    preset.add_argument("--emit", default=None, metavar="FILE",
                        help="write the preset configuration to FILE instead of printing it")
    preset.add_argument("--run", action="store_true", help="run the preset after emitting it")

    converge = sub.add_parser("converge", help="error table against an RK4 reference")
    converge.add_argument("--config", required=True, help="base configuration file")
    converge.add_argument("--eps-list", required=True, type=_float_list)
    converge.add_argument("--dt-list", required=True, type=_float_list)
    converge.add_argument("--scheme", choices=["RS1", "RS2"], default=None)
    converge.add_argument("--t-final", type=float, default=None)
    converge.add_argument("--dt-ref", type=float, default=None)
    converge.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    converge.add_argument("--output", default=None, help="output directory for errors.csv")

    validate = sub.add_parser("validate", help="check a configuration file without running it")
    validate.add_argument("--config", required=True)
    validate.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    return parser


def _cmd_run(args):
    config, text = load_config(args.config, args.override)
    Simulation(config, text, args.output).run()


def _cmd_preset(args):
    text = render_preset(args.name, args.scale)
    if args.emit is None and not args.run:
        sys.stdout.write(text)
        return
    if args.emit is not None:
        Path(args.emit).write_text(text)
        logger.info(f"Preset '{args.name}' ({args.scale}) written to {args.emit}")
    if args.run:
        Simulation(parse_config(text), text).run()


def _cmd_converge(args):
    config, _ = load_config(args.config, args.override)
    if args.t_final is not None:
        config = replace(config, t_final=args.t_final)
    spec = ConvergenceSpec(config, args.eps_list, args.dt_list, args.dt_ref, args.scheme)
    run_convergence(spec, args.output)


def _cmd_validate(args):
    config, _ = load_config(args.config, args.override)
    sys.stdout.write(f"OK: {config.scheme} {config.regime} eps={config.eps}, {config.n_steps} steps of "
                     f"d{config.coeffs.time_variable}={config.dt}, {config.init.particles} particles on "
                     f"{config.grid.nx}x{config.grid.ny}\n")


COMMANDS = {
    "run": _cmd_run,
    "preset": _cmd_preset,
    "converge": _cmd_converge,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    """
    Parse arguments, dispatch the subcommand and map errors to exit codes.

    Parameters:
    - argv: list of str, arguments without the program name (sys.argv[1:] if None)
    """
    args = build_parser().parse_args(argv)
    try:
        setup_logging(args.log_level)
    except ValueError as exc:
        sys.stderr.write(f"erpic: invalid log level: {exc}\n")
        return EXIT_CONFIG
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        logger.error(str(exc))
        return EXIT_CONFIG
    except NumericalError as exc:
        logger.error(str(exc))
        return EXIT_NUMERICAL
    except (OSError, ValueError) as exc:
        logger.error(str(ConfigViolation(None, None, str(exc))))
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
