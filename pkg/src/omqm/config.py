"""Experiment configuration: flat key=value files, presets, CLI overrides.

Exactly one parameter side may be given: thermodynamic (R, s) or quantum
(m, omega); the other side is derived through the dictionary using the
conversion constants k_B and hbar, which are always present. The `unit`
preset fixes the thermodynamic side R = s = k_B = hbar = 1 and derives
omega = 1, m = 0.5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError
from .params import QuantumParams, ThermoParams, to_quantum, to_thermo

EXPERIMENTS = (
    "stationary", "transition", "chapman-kolmogorov", "path-integral",
    "minimize", "wick-identity", "isoentropic", "quanta", "all",
)

#: every config key: (type, default, help). Defaults marked None are derived.
KEY_REGISTRY = {
    "R": (float, None, "Onsager coefficient (thermo side; give R and s, or m and omega)"),
    "s": (float, None, "entropy curvature (thermo side)"),
    "m": (float, None, "oscillator mass (quantum side)"),
    "omega": (float, None, "angular frequency (quantum side)"),
    "k_B": (float, 1.0, "Boltzmann constant (always required)"),
    "hbar": (float, 1.0, "Planck constant (always required)"),
    "dt": (float, 1e-3, "Euler-Maruyama step (units of 1/gamma at gamma=1)"),
    "n_paths": (int, 100_000, "ensemble size for stochastic experiments"),
    "burn_in": (float, None, "relaxation time before sampling; default 10/gamma"),
    "x1": (float, 1.0, "starting gate for the transition experiment"),
    "lags": (str, "0.1,0.6931471805599453,5.0", "transition lags, units of 1/gamma"),
    "total_a": (float, 1.0, "dimensionless interval gamma*dtau for kernel composition"),
    "ck_slices": (str, "2,4,8", "slice counts for the exact-kernel composition"),
    "euler_slices": (str, "16,32,64", "slice counts for the Euler-kernel composition"),
    "grid_points": (int, 401, "points of the reference position grid"),
    "grid_sigmas": (float, 8.0, "grid half-width in stationary deviations"),
    "n_steps": (int, 2000, "segments of the discrete action minimizer"),
    "endpoint_half_width": (float, 2.0, "minimizer endpoints span +- this value"),
    "endpoint_points": (int, 5, "minimizer endpoint grid points per axis"),
    "onegate_a": (float, 40.0, "dimensionless horizon realizing tau1 -> -infinity"),
    "wick_omega_t": (str, "0.3,0.9,1.5,2.2,2.9", "omega*t values for the identity grid"),
    "wick_half_width": (float, 2.0, "wick grid spans +- this in x1 and x2"),
    "wick_points": (int, 21, "wick grid points per axis"),
    "collapse_a": (float, 20.0, "dimensionless time for the long-time collapse check"),
    "rho_values": (str, "0.1,1.0,10.0", "isoentropic level labels rho"),
    "n_directions": (int, 1000, "random directions per rho"),
    "temperature": (float, 1.0, "temperature for the reciprocity calculator"),
    "mass": (float, 1.0, "particle mass for the Compton-length calculators"),
    "c": (float, 1.0, "speed of light for the Compton length"),
    "n_multiplier": (float, 1.0, "dimensionless multiplier of the entropy increase"),
    "N_quanta": (int, 1, "entropy quantum count for the second-law calculator"),
    "tol_stationary_sigmas": (float, 3.0, "ensemble tolerance, standard errors"),
    "ks_significance": (float, 0.01, "KS significance for the transition experiment"),
    "tol_semigroup": (float, 1e-8, "sup-norm tolerance for exact-kernel composition"),
    "ratio_lo": (float, 1.7, "lower bound of the error ratio per slice doubling"),
    "ratio_hi": (float, 2.3, "upper bound of the error ratio per slice doubling"),
    "tol_minimize": (float, 1e-4, "relative tolerance of the minimizer exponent"),
    "tol_wick": (float, 1e-10, "tolerance of the wick identity residual"),
    "tol_collapse": (float, 1e-10, "sup-norm tolerance of the long-time collapse"),
    "tol_ground_state": (float, 1e-12, "sup-norm tolerance of the ground-state match"),
    "tol_dictionary": (float, 1e-14, "relative tolerance of dictionary round trips"),
    "tol_isoentropic": (float, 1e-12, "tolerance of the on-shell reduction"),
    "tol_entropy_production": (float, 1e-8, "finite-difference tolerance of dS/dtau"),
}


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 7
    out: str = "out"
    figures: bool = True
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")

    def __getattr__(self, key):
        # dataclass fields resolve normally; everything else comes from the registry
        if key.startswith("_") or key in {f.name for f in fields(ExperimentConfig)}:
            raise AttributeError(key)
        if key in self.values:
            return self.values[key]
        if key in KEY_REGISTRY:
            return KEY_REGISTRY[key][1]
        raise AttributeError(key)

    def thermo(self) -> ThermoParams:
        tp, _ = resolve_params(self.values)
        return tp

    def quantum(self) -> QuantumParams:
        _, qp = resolve_params(self.values)
        return qp

    def floats(self, key: str) -> list:
        """Parse a comma-separated registry value into floats."""
        raw = getattr(self, key)
        try:
            return [float(tok) for tok in str(raw).split(",") if tok.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse {key}={raw!r} as comma-separated floats") from exc

    def ints(self, key: str) -> list:
        return [int(v) for v in self.floats(key)]

    def burn_in_time(self) -> float:
        b = self.values.get("burn_in")
        return float(b) if b is not None else 10.0 / self.thermo().gamma()


def resolve_params(values: dict) -> tuple[ThermoParams, QuantumParams]:
    """Build both parameter records from one given side plus the constants."""
    k_B = float(values.get("k_B", KEY_REGISTRY["k_B"][1]))
    hbar = float(values.get("hbar", KEY_REGISTRY["hbar"][1]))
    thermo_given = values.get("R") is not None or values.get("s") is not None
    quantum_given = values.get("m") is not None or values.get("omega") is not None
    if thermo_given and quantum_given:
        raise ConfigError("give either the thermo side (R, s) or the quantum side "
                          "(m, omega), not both; the other side is derived")
    if thermo_given:
        if values.get("R") is None or values.get("s") is None:
            raise ConfigError("thermo side needs both R and s")
        tp = ThermoParams(R=float(values["R"]), s=float(values["s"]), k_B=k_B)
        return tp, to_quantum(tp, hbar)
    if quantum_given:
        if values.get("m") is None or values.get("omega") is None:
            raise ConfigError("quantum side needs both m and omega")
        qp = QuantumParams(m=float(values["m"]), omega=float(values["omega"]), hbar=hbar)
        return to_thermo(qp, k_B), qp
    raise ConfigError("no parameters given: set R and s (or m and omega), "
                      "or use --preset unit")


PRESETS = {
    # fixes the thermo side; the dictionary then gives omega = 1, m = 0.5
    "unit": {"R": 1.0, "s": 1.0, "k_B": 1.0, "hbar": 1.0},
}


def parse_config_file(path: str) -> dict:
    """Flat key = value lines; '#' starts a comment; unknown keys are errors."""
    values = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        values[key] = _coerce(key, val, where=f"{path}:{lineno}")
    return values


def _coerce(key: str, val, where: str = "override"):
    meta = {"experiment": (str,), "seed": (int,), "out": (str,), "figures": (_to_bool,)}
    if key in meta:
        caster = meta[key][0]
    elif key in KEY_REGISTRY:
        caster = KEY_REGISTRY[key][0]
    else:
        raise ConfigError(f"{where}: unknown key {key!r}")
    try:
        return caster(val)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: bad value for {key}: {val!r} ({exc})") from exc


def _to_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if str(v).lower() in ("1", "true", "yes", "on"):
        return True
    if str(v).lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def build_config(experiment: str | None = None, preset: str | None = None,
                 config_file: str | None = None, overrides: dict | None = None,
                 seed: int | None = None, out: str | None = None,
                 figures: bool | None = None) -> ExperimentConfig:
    """Merge defaults < preset < config file < explicit overrides."""
    values: dict = {}
    meta: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; available: {', '.join(PRESETS)}")
        values.update(PRESETS[preset])
    if config_file is not None:
        for k, v in parse_config_file(config_file).items():
            (meta if k in ("experiment", "seed", "out", "figures") else values)[k] = v
    for k, v in (overrides or {}).items():
        if v is None:
            continue
        coerced = _coerce(k, v)
        (meta if k in ("experiment", "seed", "out", "figures") else values)[k] = coerced
    if experiment is not None:
        meta["experiment"] = experiment
    if seed is not None:
        meta["seed"] = int(seed)
    if out is not None:
        meta["out"] = out
    if figures is not None:
        meta["figures"] = bool(figures)
    if "experiment" not in meta:
        raise ConfigError("no experiment selected (use --experiment or a config file)")

    cfg = ExperimentConfig(experiment=meta["experiment"], seed=meta.get("seed", 7),
                           out=meta.get("out", "out"), figures=meta.get("figures", True),
                           values=values)
    for key, val in values.items():
        if key in KEY_REGISTRY and isinstance(val, (int, float)) and not math.isfinite(float(val)):
            raise ConfigError(f"{key} must be finite, got {val!r}")
    _validate_positive(cfg)
    resolve_params(values)  # raises ConfigError when the parameter sides are inconsistent
    return cfg


def _validate_positive(cfg: ExperimentConfig) -> None:
    positive_keys = ("R", "s", "m", "omega", "k_B", "hbar", "dt", "n_paths", "burn_in",
                     "total_a", "grid_points", "grid_sigmas", "n_steps", "onegate_a",
                     "wick_points", "collapse_a", "n_directions", "temperature", "mass",
                     "c", "n_multiplier")
    for key in positive_keys:
        val = cfg.values.get(key)
        if val is not None and not float(val) > 0.0:
            raise ConfigError(f"{key} must be positive, got {val!r}")
    if cfg.values.get("N_quanta") is not None and int(cfg.values["N_quanta"]) < 0:
        raise ConfigError(f"N_quanta must be >= 0, got {cfg.values['N_quanta']!r}")
