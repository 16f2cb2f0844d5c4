"""Config-file ingestion and the builders shared by the CLI subcommands.

Configs are INI-style key-value text read with :mod:`configparser`:

    [model]
    mode = normalized
    gamma = 0.1
    tau = 0.0

    [drive]
    polarization = lcp
    omega = 0.5

    [point]
    Omega = 0.2

Sections used per subcommand: ``model`` and ``drive`` always; ``point``,
``scan``, ``spectrum``, ``spinup`` + ``body`` (+ optional ``thermal``),
``thermal``, ``medium``, ``output``.  Presets seed the same layered
dictionary; file values override presets and command-line flags override
both.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

import numpy as np

from .dynamics import RigidBodyParams, ThermalParams
from .materials import (DrudeEllipsoid, DrudeSphere, from_drude_ellipsoid,
                        from_drude_sphere)
from .medium import MediumMember, MediumSpec
from .response import SPEED_OF_LIGHT, DriveField, OscillatorModel
from .scan import ScanRequest, polarization_amplitudes


class ConfigError(ValueError):
    """Bad or missing configuration; the CLI maps this to exit code 2."""


#: layered configuration: section -> key -> string value
Sections = dict

PRESETS = {
    # resonance maps of a dissipative rod under LCP light
    "fig2": {
        "model": {"mode": "normalized", "gamma": "0.1", "tau": "1e-4"},
        "drive": {"polarization": "lcp", "omega": "1.0"},
        "scan": {"omega_min": "0", "omega_max": "2", "omega_count": "256",
                 "Omega_min": "0", "Omega_max": "2", "Omega_count": "256",
                 "units": "fig2"},
    },
    # fixed fast rotation, dissipative regime (gamma >> tau*omega0^2)
    "fig3a": {
        "model": {"mode": "normalized", "gamma": "0.1", "tau": "1e-4"},
        "drive": {"polarization": "lcp", "omega": "1.0"},
        "spectrum": {"Omega": "2.0", "omega_min": "0", "omega_max": "3",
                     "omega_count": "601", "units": "fig2"},
    },
    # fixed fast rotation, radiation-dominated regime (gamma << tau*omega0^2)
    "fig3b": {
        "model": {"mode": "normalized", "gamma": "1e-4", "tau": "0.1"},
        "drive": {"polarization": "lcp", "omega": "1.0"},
        "spectrum": {"Omega": "2.0", "omega_min": "0", "omega_max": "3",
                     "omega_count": "601", "units": "fig2"},
    },
    # linear polarization, signed rotation axis: sideband mirror maps
    "figSI2": {
        "model": {"mode": "normalized", "gamma": "0.1", "tau": "1e-4"},
        "drive": {"polarization": "linear", "omega": "1.0"},
        "scan": {"omega_min": "0", "omega_max": "2", "omega_count": "256",
                 "Omega_min": "-2", "Omega_max": "2", "Omega_count": "257",
                 "units": "fig2"},
    },
}


def load_config(path) -> Sections:
    """Parse an INI file into plain nested dicts.

    Parse failures surface as ConfigError carrying configparser's
    line-numbered message.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str    # keys are case-sensitive (Omega vs omega)
    try:
        with open(path) as fh:
            parser.read_file(fh, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    return {name: dict(parser[name]) for name in parser.sections()}


def layer_configs(*layers) -> Sections:
    """Merge section dicts; later layers win key-by-key."""
    out: Sections = {}
    for layer in layers:
        for section, values in layer.items():
            out.setdefault(section, {}).update(
                {k: v for k, v in values.items() if v is not None})
    return out


def _section(cfg: Sections, name) -> dict:
    return cfg.get(name, {})


def _require(cfg: Sections, section, key) -> str:
    try:
        return cfg[section][key]
    except KeyError:
        raise ConfigError(f"missing [{section}] {key}") from None


def _get_float(cfg, section, key, default=None):
    raw = _section(cfg, section).get(key)
    if raw is None or raw == "":
        if default is None:
            raise ConfigError(f"missing [{section}] {key}")
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def _get_int(cfg, section, key, default=None):
    raw = _section(cfg, section).get(key)
    if raw is None or raw == "":
        if default is None:
            raise ConfigError(f"missing [{section}] {key}")
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from None


def _get_optional_float(cfg, section, key):
    raw = _section(cfg, section).get(key)
    if raw is None or raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from None


def build_model(cfg: Sections) -> OscillatorModel:
    mode = _section(cfg, "model").get("mode", "normalized").lower()
    if mode not in ("normalized", "physical"):
        raise ConfigError(f"[model] mode must be normalized or physical, "
                          f"got {mode!r}")
    source = _section(cfg, "model").get("source", "direct").lower()
    try:
        if source == "direct":
            if mode == "normalized":
                return OscillatorModel.normalized(
                    damping_rate=_get_float(cfg, "model", "gamma"),
                    radiative_time=_get_float(cfg, "model", "tau", 0.0),
                    natural_frequency=_get_float(cfg, "model", "omega0", 1.0),
                    coupling=_get_float(cfg, "model", "coupling", 1.0),
                    light_speed=_get_float(cfg, "model", "light_speed", 1.0))
            coupling = _get_float(cfg, "model", "coupling")
            omega0 = _get_float(cfg, "model", "omega0")
            gamma = _get_float(cfg, "model", "gamma")
            c = _get_float(cfg, "model", "light_speed", SPEED_OF_LIGHT)
            tau = _get_optional_float(cfg, "model", "tau")
            if tau is None:
                return OscillatorModel.physical(coupling, omega0, gamma, c)
            return OscillatorModel(coupling, omega0, gamma, tau, c)
        if source == "drude-sphere":
            sphere = DrudeSphere(
                plasma_frequency=_get_float(cfg, "model", "plasma_frequency"),
                damping=_get_float(cfg, "model", "damping"),
                radius=_get_float(cfg, "model", "radius"))
            c = _get_float(cfg, "model", "light_speed", SPEED_OF_LIGHT)
            return from_drude_sphere(sphere, c)
        if source == "drude-ellipsoid":
            ell = DrudeEllipsoid(
                plasma_frequency=_get_float(cfg, "model", "plasma_frequency"),
                damping=_get_float(cfg, "model", "damping"),
                volume=_get_float(cfg, "model", "volume"),
                depolarization_factor=_get_float(cfg, "model",
                                                 "depolarization_factor"))
            c = _get_float(cfg, "model", "light_speed", SPEED_OF_LIGHT)
            return from_drude_ellipsoid(ell, c)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"[model]: {exc}") from exc
    raise ConfigError(f"[model] source must be direct, drude-sphere or "
                      f"drude-ellipsoid, got {source!r}")


def drive_amplitudes(cfg: Sections, model: OscillatorModel):
    """(Ex, Ey, label) from the [drive] section."""
    sec = _section(cfg, "drive")
    kind = sec.get("polarization", "lcp").lower()
    amplitude = _get_float(cfg, "drive", "amplitude", 1.0)
    intensity = _get_optional_float(cfg, "drive", "intensity")
    if intensity is not None:
        if intensity < 0:
            raise ConfigError("[drive] intensity must be non-negative")
        amplitude = float(np.sqrt(2.0 * np.pi * intensity / model.light_speed))
    try:
        ex, ey = polarization_amplitudes(
            kind, amplitude=amplitude,
            angle=_get_float(cfg, "drive", "angle", 0.0),
            ex=_parse_complex(cfg, "ex") if kind == "explicit" else None,
            ey=_parse_complex(cfg, "ey") if kind == "explicit" else None)
    except ValueError as exc:
        raise ConfigError(f"[drive]: {exc}") from exc
    return ex, ey, kind


def _parse_complex(cfg: Sections, prefix):
    re = _get_float(cfg, "drive", f"{prefix}_re", 0.0)
    im = _get_float(cfg, "drive", f"{prefix}_im", 0.0)
    return complex(re, im)


def build_drive(cfg: Sections, model: OscillatorModel) -> DriveField:
    ex, ey, _ = drive_amplitudes(cfg, model)
    omega = _get_float(cfg, "drive", "omega")
    return DriveField(omega, ex, ey)


def build_scan_request(cfg: Sections, model: OscillatorModel,
                       section="scan") -> ScanRequest:
    ex, ey, label = drive_amplitudes(cfg, model)
    if section == "spectrum":
        Om = _get_float(cfg, "spectrum", "Omega")
        Om_min, Om_max, Om_count = Om, Om, 1
    else:
        Om_min = _get_float(cfg, section, "Omega_min")
        Om_max = _get_float(cfg, section, "Omega_max")
        Om_count = _get_int(cfg, section, "Omega_count")
    try:
        return ScanRequest(
            model=model, amplitude_x=ex, amplitude_y=ey,
            omega_min=_get_float(cfg, section, "omega_min"),
            omega_max=_get_float(cfg, section, "omega_max"),
            omega_count=_get_int(cfg, section, "omega_count"),
            Omega_min=Om_min, Omega_max=Om_max, Omega_count=Om_count,
            units=_section(cfg, section).get("units", "physical"),
            polarization_label=label)
    except ValueError as exc:
        raise ConfigError(f"[{section}]: {exc}") from exc


def build_body(cfg: Sections) -> RigidBodyParams:
    sec = _section(cfg, "body")
    if not sec:
        raise ConfigError("missing [body] section")
    shape = sec.get("shape", "direct").lower()
    melt = _get_optional_float(cfg, "body", "melting_temperature")
    surface = _get_optional_float(cfg, "body", "surface_tension")
    try:
        if shape == "direct":
            return RigidBodyParams(
                moment_of_inertia=_get_float(cfg, "body", "moment_of_inertia"),
                mass_density=_get_optional_float(cfg, "body", "density"),
                radius=_get_optional_float(cfg, "body", "radius"),
                melting_temperature=melt, surface_tension=surface)
        if shape == "sphere":
            return RigidBodyParams.solid_sphere(
                mass_density=_get_float(cfg, "body", "density"),
                radius=_get_float(cfg, "body", "radius"),
                melting_temperature=melt, surface_tension=surface)
        if shape == "rod":
            return RigidBodyParams.thin_rod(
                mass=_get_float(cfg, "body", "mass"),
                length=_get_float(cfg, "body", "length"),
                melting_temperature=melt, surface_tension=surface)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"[body]: {exc}") from exc
    raise ConfigError(f"[body] shape must be direct, sphere or rod, "
                      f"got {shape!r}")


def build_thermal(cfg: Sections) -> ThermalParams:
    if "thermal" not in cfg:
        raise ConfigError("missing [thermal] section")
    try:
        return ThermalParams(
            ambient_temperature=_get_float(cfg, "thermal",
                                           "ambient_temperature"),
            radiative_coefficient=_get_float(cfg, "thermal",
                                             "radiative_coefficient"))
    except ValueError as exc:
        raise ConfigError(f"[thermal]: {exc}") from exc


def build_medium(cfg: Sections, model: OscillatorModel) -> MediumSpec:
    """Ensemble from [medium]; members share the [model] particle.

    ``members`` is a comma-separated list of Omega:weight pairs, e.g.
    ``members = 2.0:0.5, 2.2:0.5``.  Weights are normalized to sum to 1.
    """
    sec = _section(cfg, "medium")
    if not sec:
        raise ConfigError("missing [medium] section")
    raw = sec.get("members")
    if not raw:
        raise ConfigError("missing [medium] members")
    members = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        rotation, sep, weight = item.partition(":")
        try:
            members.append((float(rotation), float(weight) if sep else 1.0))
        except ValueError:
            raise ConfigError(f"[medium] members: bad entry {item!r}; "
                              "expected Omega:weight") from None
    if not members:
        raise ConfigError("[medium] members is empty")
    total = sum(w for _, w in members)
    if total <= 0:
        raise ConfigError("[medium] members: weights must sum to > 0")
    try:
        spec = MediumSpec(
            number_density=_get_float(cfg, "medium", "number_density"),
            path_length=_get_float(cfg, "medium", "path_length"),
            members=tuple(MediumMember(model, om, w / total)
                          for om, w in members))
    except ValueError as exc:
        raise ConfigError(f"[medium]: {exc}") from exc
    return spec


@dataclass(frozen=True)
class OutputPaths:
    data: str
    sidecar: str | None = None


def build_output(cfg: Sections, default="rotospin-out.csv") -> OutputPaths:
    path = _section(cfg, "output").get("path", default)
    return OutputPaths(data=path, sidecar=path + ".meta")
