"""
Experiment presets

Paper scale reproduces the published experiment sizes (`full` is accepted as an
alias). Desk scale halves the grid along each axis and divides the particle count
by 10, leaving all physics parameters unchanged.
"""

import math
from dataclasses import replace

try:
    # When used as a package
    from .config import (SimulationConfig, GridConfig, InitConfig, MagneticConfig, OutputConfig,
                         render_config)
except ImportError:
    # When used as standalone
    from erpic.runner.config import (SimulationConfig, GridConfig, InitConfig, MagneticConfig, OutputConfig,
                                     render_config)

SCALES = ["paper", "desk"]
SCALE_ALIASES = {"full": "paper"}
DESK_GRID_DIVISOR = 2
DESK_PARTICLE_DIVISOR = 10


def _example1():
    return SimulationConfig(
        regime="fluid", eps=0.01, dt=0.1, t_final=100.0, scheme="RS2",
        grid=GridConfig(64, 32, 0.0, 4.0 * math.pi, 0.0, 2.0 * math.pi),
        init=InitConfig("two-bump", 102400, seed=1, eta=0.05, k=0.5),
        magnetic=MagneticConfig("example1"),
        output=OutputConfig(directory="output/example1", snapshot_times=(0.0, 4.0, 100.0), marginal=True),
    )


def _example2_diocotron():
    return SimulationConfig(
        regime="fluid", eps=0.01, dt=0.01, t_final=100.0, scheme="RS2",
        grid=GridConfig(128, 128, -12.0, 12.0, -12.0, 12.0),
        init=InitConfig("diocotron", 50 * 128 * 128, seed=1, alpha=0.2, l=5, r_minus=5.0, r_plus=8.0,
                        r_center=6.5),
        magnetic=MagneticConfig("uniform", b0=1.0),
        output=OutputConfig(directory="output/example2-diocotron", snapshot_times=(0.0, 50.0, 100.0),
                            log_every=1000),
    )


def _example3_larmor():
    return SimulationConfig(
        regime="larmor", eps=0.1, dt=0.1, t_final=30.0, scheme="RS2",
        grid=GridConfig(64, 32, 0.0, 4.0 * math.pi, 0.0, 2.0 * math.pi),
        init=InitConfig("two-bump", 102400, seed=1, eta=0.05, k=0.5),
        magnetic=MagneticConfig("example1"),
        output=OutputConfig(directory="output/example3-larmor", snapshot_times=(0.0, 150.0, 300.0), marginal=True),
    )


def _diffusion_rect():
    return SimulationConfig(
        regime="diffusion", eps=0.05, dt=0.1, t_final=1.0, scheme="RS2",
        grid=GridConfig(64, 32, 0.0, 4.0 * math.pi, 0.0, 2.0 * math.pi),
        init=InitConfig("two-bump", 102400, seed=1, eta=0.05, k=0.5),
        magnetic=MagneticConfig("example1"),
        output=OutputConfig(directory="output/diffusion-rect", snapshot_times=(0.0, 20.0)),
    )


def _diffusion_gaussian():
    return SimulationConfig(
        regime="diffusion", eps=0.05, dt=0.1, t_final=5.0, scheme="RS2",
        grid=GridConfig(64, 64, -6.0, 6.0, -6.0, 6.0),
        init=InitConfig("two-gaussian", 50 * 64 * 64, seed=1, x0_1=1.5, x0_2=-1.5),
        magnetic=MagneticConfig("uniform", b0=1.0),
        output=OutputConfig(directory="output/diffusion-gaussian",
                            snapshot_times=(0.0, 10.0, 20.0, 30.0, 50.0, 70.0, 100.0)),
    )


def resolve_scale(scale):
    """Canonical scale name, mapping aliases onto SCALES."""
    scale = SCALE_ALIASES.get(scale, scale)
    if scale not in SCALES:
        raise ValueError(f"Invalid scale: {scale}. Available: {SCALES + list(SCALE_ALIASES)}")
    return scale


PRESETS = {
    "example1": _example1,
    "example2-diocotron": _example2_diocotron,
    "example3-larmor": _example3_larmor,
    "diffusion-rect": _diffusion_rect,
    "diffusion-gaussian": _diffusion_gaussian,
}


def preset(name, scale="paper") -> SimulationConfig:
    """
    Configuration of a named experiment.

    Parameters:
    - name: str, one of PRESETS
    - scale: str, "paper" or "desk"; "full" is an alias of "paper"
    """
    if name not in PRESETS:
        raise ValueError(f"Invalid preset: {name}. Available: {list(PRESETS)}")
    scale = resolve_scale(scale)
    config = PRESETS[name]()
    if scale == "desk":
        g = config.grid
        config = replace(
            config,
            grid=replace(g, nx=g.nx // DESK_GRID_DIVISOR, ny=g.ny // DESK_GRID_DIVISOR),
            init=replace(config.init, particles=config.init.particles // DESK_PARTICLE_DIVISOR),
            output=replace(config.output, directory=f"{config.output.directory}-desk"),
        )
    return config


def preset_header(name, scale="paper"):
    scale = resolve_scale(scale)
    lines = [f"erpic preset '{name}' at {scale} scale"]
    if scale == "desk":
        lines.append(f"desk scale: grid divided by {DESK_GRID_DIVISOR} per axis, "
                     f"particles divided by {DESK_PARTICLE_DIVISOR}, physics parameters unchanged")
    lines.append("dt and output.snapshot_times are in the integration time variable "
                 "(t for fluid, tau = t/eps for larmor and diffusion)")
    return "\n".join(lines)


def render_preset(name, scale="paper") -> str:
    """Preset configuration text with its documenting header."""
    return render_config(preset(name, scale), header=preset_header(name, scale))
