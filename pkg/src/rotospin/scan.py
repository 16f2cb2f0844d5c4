"""Grid maps and spectra of the six cross sections, with CSV export.

A scan evaluates every (omega, Omega) lattice point independently, so
the result is deterministic no matter how the work is split across
threads.  Cells with an exactly vanishing response denominator (the
lossless resonance ellipse, or omega = +/-Omega at |Omega| = omega0)
are flagged in a boolean mask and exported as NaN with a ``singular``
marker column.

Two unit conventions are supported.  ``physical`` leaves the areas in
cm^2 (or the normalized-model equivalent).  ``fig2`` divides the
friction-driven quantities (mechanical, absorption, extinction) by
Q^2 gamma / m c omega0^2 and the scattering quantities by Q^2 tau / m c,
which are the natural color-scale units for resonance maps; the numeric
divisors are recorded in the sidecar metadata so exported rows can be
restored to a common unit.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .response import (CrossSectionSet, DriveField, OscillatorModel,
                       cross_section_set)

CSV_HEADER = ("omega", "Omega", "sigma_mech", "sigma_abs", "sigma_elastic",
              "sigma_in_plus", "sigma_in_minus", "sigma_ext", "singular")

#: columns scaled by each divisor in fig2 units
_FRICTION_COLUMNS = ("sigma_mech", "sigma_abs", "sigma_ext")
_SCATTER_COLUMNS = ("sigma_elastic", "sigma_in_plus", "sigma_in_minus")


def polarization_amplitudes(kind, amplitude=1.0, angle=0.0,
                            ex=None, ey=None):
    """(Ex, Ey) for a named polarization: lcp | rcp | linear | explicit."""
    kind = kind.lower()
    if kind == "lcp":
        d = DriveField.lcp(0.0, amplitude)
    elif kind == "rcp":
        d = DriveField.rcp(0.0, amplitude)
    elif kind == "linear":
        d = DriveField.linear(0.0, amplitude, angle)
    elif kind == "explicit":
        if ex is None or ey is None:
            raise ValueError("explicit polarization needs ex and ey")
        return complex(ex), complex(ey)
    else:
        raise ValueError(f"unknown polarization '{kind}'")
    return d.amplitude_x, d.amplitude_y


@dataclass(frozen=True)
class ScanRequest:
    """A rectangular (omega, Omega) lattice to evaluate.

    For a fixed-Omega spectrum set ``Omega_min == Omega_max`` and
    ``Omega_count = 1`` (the one allowed count-1 axis).
    """

    model: OscillatorModel
    amplitude_x: complex
    amplitude_y: complex
    omega_min: float
    omega_max: float
    omega_count: int
    Omega_min: float
    Omega_max: float
    Omega_count: int
    units: str = "physical"            # "physical" | "fig2"
    polarization_label: str = "explicit"

    def __post_init__(self):
        for lo, hi, n, name in ((self.omega_min, self.omega_max,
                                 self.omega_count, "omega"),
                                (self.Omega_min, self.Omega_max,
                                 self.Omega_count, "Omega")):
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise ValueError(f"{name} range must be finite")
            if n < 1 or (n == 1 and lo != hi):
                raise ValueError(f"{name}_count must be >= 2, or 1 with a "
                                 "degenerate range")
            if n > 1 and hi <= lo:
                raise ValueError(f"{name} range must be increasing")
        if self.units not in ("physical", "fig2"):
            raise ValueError("units must be 'physical' or 'fig2'")
        if self.units == "fig2":
            if self.model.damping_rate == 0 or self.model.radiative_time == 0:
                raise ValueError("fig2 units divide by gamma and tau; both "
                                 "must be nonzero")
        if abs(self.amplitude_x) == 0 and abs(self.amplitude_y) == 0:
            raise ValueError("drive amplitude must be nonzero")

    @property
    def omega_axis(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.omega_count)

    @property
    def Omega_axis(self) -> np.ndarray:
        return np.linspace(self.Omega_min, self.Omega_max, self.Omega_count)

    def unit_divisors(self) -> dict:
        """Per-column divisor applied to physical values on export."""
        if self.units == "physical":
            return {name: 1.0 for name in _FRICTION_COLUMNS + _SCATTER_COLUMNS}
        m = self.model
        friction = (m.coupling * m.damping_rate
                    / (m.light_speed * m.natural_frequency**2))
        scatter = m.coupling * m.radiative_time / m.light_speed
        out = {name: friction for name in _FRICTION_COLUMNS}
        out.update({name: scatter for name in _SCATTER_COLUMNS})
        return out


@dataclass(frozen=True)
class ScanGrid:
    """Evaluated lattice: axes, six value arrays, singular mask, metadata.

    Value arrays have shape (Omega_count, omega_count) and are stored in
    the request's unit convention.
    """

    omega: np.ndarray
    Omega: np.ndarray
    values: dict                      # column name -> 2-D array
    singular: np.ndarray              # 2-D bool
    metadata: dict = field(default_factory=dict)

    def cell(self, i_Omega, i_omega) -> CrossSectionSet:
        return CrossSectionSet(
            mechanical=float(self.values["sigma_mech"][i_Omega, i_omega]),
            absorption=float(self.values["sigma_abs"][i_Omega, i_omega]),
            elastic=float(self.values["sigma_elastic"][i_Omega, i_omega]),
            inelastic_plus=float(self.values["sigma_in_plus"][i_Omega, i_omega]),
            inelastic_minus=float(self.values["sigma_in_minus"][i_Omega, i_omega]),
            extinction=float(self.values["sigma_ext"][i_Omega, i_omega]),
        )


def _eval_block(req: ScanRequest, omega_axis, Omega_rows):
    """Evaluate a slab of Omega rows; returns (n_rows, n_omega) arrays."""
    n_rows, n_om = len(Omega_rows), len(omega_axis)
    out = {name: np.empty((n_rows, n_om))
           for name in _FRICTION_COLUMNS + _SCATTER_COLUMNS}
    for i, Om in enumerate(Omega_rows):
        drive = DriveField(omega_axis, req.amplitude_x, req.amplitude_y)
        cs = cross_section_set(req.model, drive, float(Om))
        raw = cs.as_dict()
        for name in out:
            out[name][i] = raw[name]
    return out


def grid_scan(req: ScanRequest, n_threads=1) -> ScanGrid:
    """Evaluate the full lattice; identical results for any n_threads."""
    omega_axis = req.omega_axis
    Omega_axis = req.Omega_axis
    n_Om = len(Omega_axis)
    values = {name: np.empty((n_Om, len(omega_axis)))
              for name in _FRICTION_COLUMNS + _SCATTER_COLUMNS}

    n_threads = max(1, min(int(n_threads), n_Om))
    if n_threads == 1:
        blocks = [(0, n_Om)]
        results = [_eval_block(req, omega_axis, Omega_axis)]
    else:
        bounds = np.linspace(0, n_Om, n_threads + 1).astype(int)
        blocks = [(bounds[k], bounds[k + 1]) for k in range(n_threads)
                  if bounds[k] < bounds[k + 1]]
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            results = list(pool.map(
                lambda b: _eval_block(req, omega_axis, Omega_axis[b[0]:b[1]]),
                blocks))

    for (lo, hi), block in zip(blocks, results):
        for name, arr in block.items():
            values[name][lo:hi] = arr

    singular = np.zeros((n_Om, len(omega_axis)), dtype=bool)
    for arr in values.values():
        singular |= ~np.isfinite(arr)
    for arr in values.values():
        arr[singular] = np.nan

    divisors = req.unit_divisors()
    for name, arr in values.items():
        d = divisors[name]
        if d != 1.0:
            arr /= d

    metadata = {
        "units": req.units,
        "polarization": req.polarization_label,
        "amplitude_x": str(req.amplitude_x),
        "amplitude_y": str(req.amplitude_y),
        "coupling": repr(req.model.coupling),
        "natural_frequency": repr(req.model.natural_frequency),
        "damping_rate": repr(req.model.damping_rate),
        "radiative_time": repr(req.model.radiative_time),
        "light_speed": repr(req.model.light_speed),
        "omega_count": str(req.omega_count),
        "Omega_count": str(req.Omega_count),
        "n_singular": str(int(singular.sum())),
    }
    for name in CSV_HEADER[2:-1]:
        metadata[f"divisor_{name}"] = repr(divisors[name])
    return ScanGrid(omega=omega_axis, Omega=Omega_axis, values=values,
                    singular=singular, metadata=metadata)


def spectrum_sweep(model, amplitude_x, amplitude_y, Omega_fixed,
                   omega_min, omega_max, omega_count,
                   units="physical", polarization_label="explicit"):
    """Fixed-Omega sweep, returned both as a list and as a 1-row grid."""
    req = ScanRequest(model=model, amplitude_x=amplitude_x,
                      amplitude_y=amplitude_y,
                      omega_min=omega_min, omega_max=omega_max,
                      omega_count=omega_count,
                      Omega_min=Omega_fixed, Omega_max=Omega_fixed,
                      Omega_count=1, units=units,
                      polarization_label=polarization_label)
    grid = grid_scan(req)
    sets = [grid.cell(0, j) for j in range(omega_count)]
    return sets, grid


def _format(x) -> str:
    return f"{x:.17g}"


def write_grid_csv(grid: ScanGrid, path, sidecar_path=None) -> str:
    """Write the grid as CSV plus a key-value sidecar; returns sidecar path.

    Rows are emitted row-major, the Omega axis outermost.  Values use 17
    significant digits so a re-parse reproduces the doubles bit-exactly.
    """
    if sidecar_path is None:
        sidecar_path = str(path) + ".meta"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    cols = [grid.values[name] for name in CSV_HEADER[2:-1]]
    for i, Om in enumerate(grid.Omega):
        for j, om in enumerate(grid.omega):
            row = [_format(om), _format(Om)]
            row += [_format(c[i, j]) for c in cols]
            row.append("1" if grid.singular[i, j] else "0")
            writer.writerow(row)
    with open(path, "w") as fh:
        fh.write(buf.getvalue())
    with open(sidecar_path, "w") as fh:
        for key in sorted(grid.metadata):
            fh.write(f"{key} = {grid.metadata[key]}\n")
    return sidecar_path


def read_sidecar(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def reparse_balance_check(csv_path, sidecar_path=None):
    """Re-read an exported CSV and re-verify the power balance per row.

    Columns are first restored to a common unit with the sidecar's
    divisors.  Returns (max_relative_residual, n_rows_checked); singular
    rows are skipped.
    """
    if sidecar_path is None:
        sidecar_path = str(csv_path) + ".meta"
    meta = read_sidecar(sidecar_path)
    div = {name: float(meta[f"divisor_{name}"]) for name in CSV_HEADER[2:-1]}

    worst = 0.0
    checked = 0
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header}")
        for row in reader:
            if row[-1] == "1":
                continue
            sig = {name: float(row[k]) * div[name]
                   for k, name in enumerate(CSV_HEADER[2:-1], start=2)}
            partials = (sig["sigma_elastic"] + sig["sigma_in_plus"]
                        + sig["sigma_in_minus"] + sig["sigma_mech"]
                        + sig["sigma_abs"])
            scale = (abs(sig["sigma_elastic"]) + abs(sig["sigma_in_plus"])
                     + abs(sig["sigma_in_minus"]) + abs(sig["sigma_mech"])
                     + abs(sig["sigma_abs"]))
            if scale == 0.0:
                continue
            worst = max(worst, abs(sig["sigma_ext"] - partials) / scale)
            checked += 1
    return worst, checked


def thread_count_from_env(default=1) -> int:
    """Parallelism cap from ROTOSPIN_THREADS; invalid values mean 1."""
    raw = os.environ.get("ROTOSPIN_THREADS", "")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default
