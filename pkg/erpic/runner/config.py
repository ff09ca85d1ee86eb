"""
Line-oriented run configuration

One `key = value` pair per line with dotted section keys (`grid.nx = 32`),
`#` comments and blank lines ignored. Values are TOML scalars or arrays, e.g.
`magnetic.model = "example1"` or `output.snapshot_times = [0.0, 10.0]`. String keys
also take an unquoted word (`scheme = RS2`).
Validation collects every violation with its line number before raising.
"""

import json
import logging
import math
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, fields, asdict
from typing import List, Optional, Tuple

try:
    # When used as a package
    from ..integrators.regimes import REGIMES, RegimeCoefficients, regime_coefficients
    from ..mesh import Grid2D, MIN_CELLS
    from ..physics.magnetic import MODEL_REGISTRY, MagneticModel, get_model
    from ..physics.sampling import DISTRIBUTIONS, InitialDistribution, get_distribution
    from ..utils.errors import ConfigError, ConfigViolation
    from ..utils.helpers import step_count
except ImportError:
    # When used as standalone
    from erpic.integrators.regimes import REGIMES, RegimeCoefficients, regime_coefficients
    from erpic.mesh import Grid2D, MIN_CELLS
    from erpic.physics.magnetic import MODEL_REGISTRY, MagneticModel, get_model
    from erpic.physics.sampling import DISTRIBUTIONS, InitialDistribution, get_distribution
    from erpic.utils.errors import ConfigError, ConfigViolation
    from erpic.utils.helpers import step_count

logger = logging.getLogger(__name__)

SCHEME_NAMES = ["RS1", "RS2", "RK4REF"]
# unquoted words accepted for string keys, e.g. `regime = larmor`
BARE_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")


@dataclass(frozen=True)
class GridConfig:
    nx: int
    ny: int
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float


@dataclass(frozen=True)
class InitConfig:
    distribution: str
    particles: int
    seed: int = 0
    eta: Optional[float] = None
    k: Optional[float] = None
    alpha: Optional[float] = None
    l: Optional[int] = None
    r_minus: Optional[float] = None
    r_plus: Optional[float] = None
    r_center: Optional[float] = None
    x0_1: Optional[float] = None
    x0_2: Optional[float] = None


@dataclass(frozen=True)
class MagneticConfig:
    model: str = "uniform"
    b0: Optional[float] = None
    b1: Optional[float] = None


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "output"
    snapshot_times: Tuple[float, ...] = ()
    energy: bool = True
    moments: bool = True
    marginal: bool = False
    marginal_nv: int = 64
    marginal_vmax: float = 6.0
    log_every: int = 100
    debug: bool = False
    plots: bool = False


@dataclass(frozen=True)
class ReferenceConfig:
    dt: float = 1e-4
    guard_tol: float = 1e-6


@dataclass(frozen=True)
class SimulationConfig:
    """
    Validated run configuration.

    dt is a step of the integration time variable (t for fluid, tau for the rescaled
    regimes); snapshot times are given in that variable as well.
    """
    regime: str
    eps: float
    dt: float
    t_final: float
    grid: GridConfig
    init: InitConfig
    scheme: str = "RS2"
    magnetic: MagneticConfig = field(default_factory=MagneticConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    reference: ReferenceConfig = field(default_factory=ReferenceConfig)

    @property
    def coeffs(self) -> RegimeCoefficients:
        return regime_coefficients(self.regime, self.eps)

    @property
    def horizon(self):
        return self.coeffs.horizon(self.t_final)

    @property
    def n_steps(self):
        return step_count(self.horizon, self.dt)

    def build_grid(self) -> Grid2D:
        g = self.grid
        return Grid2D(g.nx, g.ny, g.x_lo, g.x_hi, g.y_lo, g.y_hi)

    def build_distribution(self) -> InitialDistribution:
        i, g = self.init, self.grid
        params = {"eta": i.eta, "k": i.k, "alpha": i.alpha, "l": i.l, "r_minus": i.r_minus,
                  "r_plus": i.r_plus, "r_center": i.r_center}
        if i.x0_1 is not None or i.x0_2 is not None:
            params["x0"] = (1.5 if i.x0_1 is None else i.x0_1, -1.5 if i.x0_2 is None else i.x0_2)
        accepted = {f.name for f in fields(get_distribution_class(i.distribution))}
        params = {key: value for key, value in params.items() if key in accepted}
        return get_distribution(i.distribution, bounds=(g.x_lo, g.x_hi, g.y_lo, g.y_hi), **params)

    def build_model(self) -> MagneticModel:
        return get_model(self.magnetic.model, self.magnetic.b0, self.magnetic.b1)


def get_distribution_class(name):
    if name not in DISTRIBUTIONS:
        raise ValueError(f"Invalid distribution: {name}. Available: {list(DISTRIBUTIONS)}")
    return DISTRIBUTIONS[name]


# key -> (value kind, required)
SCHEMA = {
    "regime": ("str", True),
    "eps": ("float", True),
    "dt": ("float", True),
    "t_final": ("float", True),
    "scheme": ("str", False),
    "grid.nx": ("int", True),
    "grid.ny": ("int", True),
    "grid.x_lo": ("float", True),
    "grid.x_hi": ("float", True),
    "grid.y_lo": ("float", True),
    "grid.y_hi": ("float", True),
    "init.distribution": ("str", True),
    "init.particles": ("int", True),
    "init.seed": ("int", False),
    "init.eta": ("float", False),
    "init.k": ("float", False),
    "init.alpha": ("float", False),
    "init.l": ("int", False),
    "init.r_minus": ("float", False),
    "init.r_plus": ("float", False),
    "init.r_center": ("float", False),
    "init.x0_1": ("float", False),
    "init.x0_2": ("float", False),
    "magnetic.model": ("str", False),
    "magnetic.b0": ("float", False),
    "magnetic.b1": ("float", False),
    "output.directory": ("str", False),
    "output.snapshot_times": ("float_list", False),
    "output.energy": ("bool", False),
    "output.moments": ("bool", False),
    "output.marginal": ("bool", False),
    "output.marginal_nv": ("int", False),
    "output.marginal_vmax": ("float", False),
    "output.log_every": ("int", False),
    "output.debug": ("bool", False),
    "output.plots": ("bool", False),
    "reference.dt": ("float", False),
    "reference.guard_tol": ("float", False),
}


def _coerce(kind, value):
    """Return (converted value, error message or None)."""
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            return None, f"expected an integer, got {value!r}"
        return value, None
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return None, f"expected a number, got {value!r}"
        return float(value), None
    if kind == "bool":
        if not isinstance(value, bool):
            return None, f"expected true or false, got {value!r}"
        return value, None
    if kind == "str":
        if not isinstance(value, str):
            return None, f"expected a string or a bare word, got {value!r}"
        return value, None
    if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
        return None, f"expected a list of numbers, got {value!r}"
    return tuple(float(v) for v in value), None


def _read_pairs(text, violations):
    """Split the text into {key: (value, line)} collecting syntax problems."""
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            violations.append(ConfigViolation(lineno, None, f"expected 'key = value', got {line!r}"))
            continue
        key, _, value_text = line.partition("=")
        key = key.strip()
        if key not in SCHEMA:
            violations.append(ConfigViolation(lineno, key, f"unknown key. Available: {list(SCHEMA)}"))
            continue
        if key in pairs:
            violations.append(ConfigViolation(lineno, key, f"duplicate key (first set on line {pairs[key][1]})"))
            continue
        try:
            value = tomllib.loads(f"v = {value_text.strip()}")["v"]
        except tomllib.TOMLDecodeError as exc:
            bare = value_text.split("#", 1)[0].strip()
            if SCHEMA[key][0] == "str" and BARE_WORD.fullmatch(bare):
                pairs[key] = (bare, lineno)
                continue
            violations.append(ConfigViolation(lineno, key, f"cannot parse value {value_text.strip()!r}: {exc}"))
            continue
        converted, error = _coerce(SCHEMA[key][0], value)
        if error:
            violations.append(ConfigViolation(lineno, key, error))
            continue
        pairs[key] = (converted, lineno)
    return pairs


def _check(values, lines, violations):
    def bad(key, message):
        violations.append(ConfigViolation(lines.get(key), key, message))

    eps = values.get("eps")
    if eps is not None and not (0.0 < eps <= 1.0):
        bad("eps", f"invalid eps {eps}: must satisfy 0 < eps <= 1")
    for key in ("dt", "t_final", "reference.dt", "reference.guard_tol", "output.marginal_vmax"):
        if key in values and not (values[key] > 0 and math.isfinite(values[key])):
            bad(key, f"invalid {key} {values[key]}: must be a finite number > 0")
    if "regime" in values and values["regime"] not in REGIMES:
        bad("regime", f"invalid regime {values['regime']!r}. Available: {REGIMES}")
    if "scheme" in values and values["scheme"] not in SCHEME_NAMES:
        bad("scheme", f"invalid scheme {values['scheme']!r}. Available: {SCHEME_NAMES}")
    for key in ("grid.nx", "grid.ny", "output.marginal_nv"):
        if key in values and values[key] < MIN_CELLS:
            bad(key, f"invalid {key} {values[key]}: must be >= {MIN_CELLS}")
    for lo, hi in (("grid.x_lo", "grid.x_hi"), ("grid.y_lo", "grid.y_hi")):
        if lo in values and hi in values and not values[hi] > values[lo]:
            bad(hi, f"invalid bounds: {hi} = {values[hi]} must exceed {lo} = {values[lo]}")
    if "init.particles" in values and values["init.particles"] < 1:
        bad("init.particles", f"invalid particle count {values['init.particles']}: must be >= 1")
    if "init.seed" in values and values["init.seed"] < 0:
        bad("init.seed", f"invalid seed {values['init.seed']}: must be >= 0")
    if "init.distribution" in values and values["init.distribution"] not in DISTRIBUTIONS:
        bad("init.distribution", f"invalid distribution {values['init.distribution']!r}. "
                                 f"Available: {list(DISTRIBUTIONS)}")
    if "magnetic.model" in values and values["magnetic.model"] not in MODEL_REGISTRY:
        bad("magnetic.model", f"invalid magnetic model {values['magnetic.model']!r}. "
                              f"Available: {list(MODEL_REGISTRY)}")
    if "output.log_every" in values and values["output.log_every"] < 0:
        bad("output.log_every", "must be >= 0")
    times = values.get("output.snapshot_times", ())
    if any(t < 0 or not math.isfinite(t) for t in times):
        bad("output.snapshot_times", f"snapshot times must be finite and >= 0, got {list(times)}")
    if "eps" in values and "dt" in values and "t_final" in values and "regime" in values and not violations:
        coeffs = regime_coefficients(values["regime"], values["eps"])
        n = values["t_final"] * coeffs.horizon_factor / values["dt"]
        if not math.isfinite(n):
            bad("t_final", f"step count {n} is not finite")


def parse_config(text) -> SimulationConfig:
    """
    Parse and validate a configuration text.

    Parameters:
    - text: str, configuration in the `key = value` format

    Raise: ConfigError with every violation found
    """
    violations: List[ConfigViolation] = []
    pairs = _read_pairs(text, violations)
    values = {key: value for key, (value, _) in pairs.items()}
    lines = {key: line for key, (_, line) in pairs.items()}
    for key, (_, required) in SCHEMA.items():
        if required and key not in values and not any(v.key == key for v in violations):
            violations.append(ConfigViolation(None, key, "missing required key"))
    _check(values, lines, violations)
    if violations:
        raise ConfigError(violations)

    def section(prefix):
        return {key[len(prefix) + 1:]: value for key, value in values.items() if key.startswith(prefix + ".")}

    config = SimulationConfig(
        regime=values["regime"],
        eps=values["eps"],
        dt=values["dt"],
        t_final=values["t_final"],
        scheme=values.get("scheme", "RS2"),
        grid=GridConfig(**section("grid")),
        init=InitConfig(**section("init")),
        magnetic=MagneticConfig(**section("magnetic")),
        output=OutputConfig(**section("output")),
        reference=ReferenceConfig(**section("reference")),
    )
    return config


def _render_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    return "[" + ", ".join(_render_value(float(v)) for v in value) + "]"


def render_config(config: SimulationConfig, header: Optional[str] = None) -> str:
    """
    Emit a configuration in the text format; parse_config(render_config(c)) == c.

    Parameters:
    - config: SimulationConfig
    - header: str, optional comment block written first (one '# ' line per text line)
    """
    out = []
    if header:
        out.extend(f"# {line}".rstrip() for line in header.splitlines())
        out.append("")
    for key in ("regime", "eps", "dt", "t_final", "scheme"):
        out.append(f"{key} = {_render_value(getattr(config, key))}")
    for name in ("grid", "init", "magnetic", "output", "reference"):
        out.append("")
        for key, value in asdict(getattr(config, name)).items():
            if value is None:
                continue
            out.append(f"{name}.{key} = {_render_value(value)}")
    return "\n".join(out) + "\n"


def apply_overrides(text, overrides) -> str:
    """
    Apply `key=value` overrides to a configuration text.

    An override replaces the line that sets the same key, or is appended when the
    key is absent.

    Parameters:
    - text: str, configuration text
    - overrides: list of "key=value" strings
    """
    lines = text.splitlines()
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError([ConfigViolation(None, None, f"invalid override {item!r}: expected key=value")])
        key, _, value = item.partition("=")
        key, value = key.strip(), value.strip()
        new_line = f"{key} = {value}"
        for i, line in enumerate(lines):
            stripped = line.strip()
            if not stripped.startswith("#") and "=" in stripped and stripped.partition("=")[0].strip() == key:
                lines[i] = new_line
                break
        else:
            lines.append(new_line)
    return "\n".join(lines) + "\n"


def load_config(path, overrides=None) -> Tuple[SimulationConfig, str]:
    """
    Read, override and parse a configuration file.

    Return: (SimulationConfig, effective configuration text)
    """
    with open(path) as fh:
        text = fh.read()
    text = apply_overrides(text, overrides)
    return parse_config(text), text
