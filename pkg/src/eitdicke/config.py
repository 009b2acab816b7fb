"""Run configuration: flat key=value files with dot-namespaced keys.

One `key=value` pair per line, full-line '#' comments, unknown keys
rejected by name.  Values at this boundary use interface units (Hz,
mrad, Torr, Celsius, mm); conversion to internal SI / angular
frequencies happens in the accessor methods.
"""

from dataclasses import dataclass, fields

from .constants import ATOMIC_MASS, celsius_to_kelvin, hz_to_angular, torr_to_pa
from .imaging import ImagingConfig
from .kinetics import MediumParams, Species
from .lineshape import BeamGeometry, EitParams

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config_text", "dump_config"]


class ConfigError(ValueError):
    """Malformed or invalid configuration input."""


@dataclass(frozen=True)
class RunConfig:
    """Effective configuration; defaults are the reference cell:
    a 52 C Rb-87 cell with 10 Torr Ne probed on the 795 nm line,
    gamma_opt/2pi = 150 MHz, gamma_12/2pi = 1 kHz."""

    medium_temperature_c: float = 52.0
    medium_buffer_pressure_torr: float = 10.0
    medium_hard_sphere_radius_nm: float = 0.35
    medium_wavelength_nm: float = 795.0
    medium_active_name: str = "Rb-87"
    medium_active_mass_u: float = 86.909
    medium_buffer_name: str = "Ne"
    medium_buffer_mass_u: float = 20.18
    eit_gamma_opt_hz: float = 150e6
    eit_gamma_12_hz: float = 1000.0
    eit_rabi_pump_hz: float = 100e3
    eit_light_shift_hz: float = 0.0
    geometry_theta_mrad: float = 0.5
    mc_n_trajectories: int = 20000
    mc_n_time_samples: int = 2048
    mc_t_max_s: float = 0.0  # 0 = automatic (ten half-width decay times)
    imaging_waist_radius_mm: float = 0.66
    imaging_theta_max_mrad: float = 1.9
    imaging_background_transmission: float = 0.5
    imaging_eit_contrast: float = 0.3
    imaging_n_radii: int = 512
    output_dir: str = "."
    seed: int = 12345

    def medium(self) -> MediumParams:
        return MediumParams(
            temperature=celsius_to_kelvin(self.medium_temperature_c),
            buffer_pressure=torr_to_pa(self.medium_buffer_pressure_torr),
            active=Species(self.medium_active_name, self.medium_active_mass_u * ATOMIC_MASS),
            buffer=Species(self.medium_buffer_name, self.medium_buffer_mass_u * ATOMIC_MASS),
            hard_sphere_radius=self.medium_hard_sphere_radius_nm * 1e-9,
            optical_wavelength=self.medium_wavelength_nm * 1e-9,
        )

    def eit(self) -> EitParams:
        return EitParams(
            gamma_opt=hz_to_angular(self.eit_gamma_opt_hz),
            gamma_12=hz_to_angular(self.eit_gamma_12_hz),
            rabi_pump=hz_to_angular(self.eit_rabi_pump_hz),
            light_shift=hz_to_angular(self.eit_light_shift_hz),
        )

    def geometry(self, theta_mrad: float | None = None) -> BeamGeometry:
        theta = self.geometry_theta_mrad if theta_mrad is None else theta_mrad
        return BeamGeometry(angle=theta * 1e-3, wavelength=self.medium_wavelength_nm * 1e-9)

    def imaging(self, collimated: bool = False) -> ImagingConfig:
        return ImagingConfig(
            waist_radius=self.imaging_waist_radius_mm * 1e-3,
            theta_max=0.0 if collimated else self.imaging_theta_max_mrad * 1e-3,
            background_transmission=self.imaging_background_transmission,
            eit_contrast=self.imaging_eit_contrast,
            n_radii=self.imaging_n_radii,
        )


def _key_for_field(name: str) -> str:
    for prefix in ("medium", "eit", "geometry", "mc", "imaging", "output"):
        if name.startswith(prefix + "_"):
            return prefix + "." + name[len(prefix) + 1 :]
    return name


_FIELDS = {f.name: f for f in fields(RunConfig)}
_KEY_TO_FIELD = {_key_for_field(name): name for name in _FIELDS}


def _convert(key: str, raw: str, where: str):
    f = _FIELDS[_KEY_TO_FIELD[key]]
    if f.type in ("int", int):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{where}: key {key!r} expects an integer, got {raw!r}") from None
    if f.type in ("float", float):
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{where}: key {key!r} expects a number, got {raw!r}") from None
    return raw


def _parse_pairs(lines, where_prefix: str):
    pairs = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{where_prefix}line {lineno}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"{where_prefix}line {lineno}: unknown key {key!r}")
        pairs.append((key, raw, f"{where_prefix}line {lineno}"))
    return pairs


def _validate(cfg: RunConfig) -> RunConfig:
    checks = (
        ("medium.*", cfg.medium),
        ("eit.*", cfg.eit),
        ("geometry.theta_mrad", cfg.geometry),
        ("imaging.*", cfg.imaging),
    )
    for key, build in checks:
        try:
            build()
        except ValueError as exc:
            raise ConfigError(f"invalid configuration ({key}): {exc}") from exc
    if cfg.mc_n_trajectories < 1:
        raise ConfigError("invalid configuration (mc.n_trajectories): must be >= 1")
    if cfg.mc_n_time_samples < 2:
        raise ConfigError("invalid configuration (mc.n_time_samples): must be >= 2")
    if cfg.mc_t_max_s < 0.0:
        raise ConfigError("invalid configuration (mc.t_max_s): must be >= 0")
    return cfg


def parse_config_text(text: str, overrides=()) -> RunConfig:
    """Build a RunConfig from config-file text plus key=value overrides."""
    values = {}
    for key, raw, where in _parse_pairs(text.splitlines(), ""):
        values[_KEY_TO_FIELD[key]] = _convert(key, raw, where)
    for i, item in enumerate(overrides, start=1):
        stripped = item.strip()
        if "=" not in stripped:
            raise ConfigError(f"override {i}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _KEY_TO_FIELD:
            raise ConfigError(f"override {i}: unknown key {key!r}")
        values[_KEY_TO_FIELD[key]] = _convert(key, raw, f"override {i}")
    return _validate(RunConfig(**values))


def load_config(path=None, overrides=()) -> RunConfig:
    """Load a config file (None for pure defaults) and apply overrides."""
    if path is None:
        return parse_config_text("", overrides)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read(), overrides)


def dump_config(cfg: RunConfig) -> str:
    """Serialize to the same key=value format; reloads to an equal RunConfig."""
    lines = ["# effective configuration"]
    for name in _FIELDS:
        value = getattr(cfg, name)
        rep = value if isinstance(value, str) else repr(value)
        lines.append(f"{_key_for_field(name)}={rep}")
    return "\n".join(lines) + "\n"
