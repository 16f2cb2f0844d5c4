"""Closed-form optical response of a harmonically bound charge spinning
about a transverse axis.

The particle is a damped oscillator of coupling strength ``Q^2/m``,
natural frequency ``omega0`` and friction rate ``gamma``, constrained to
oscillate along a rod axis that rotates with angular frequency ``Omega``
about z.  Monochromatic light enters as ``E(t) = (Ex, Ey) e^{-i w t} +
c.c.`` with intensity ``I = (c/2pi)|E|^2`` (Gaussian-CGS throughout).

Conventions worth pinning down, since they vary across texts:

* circular components are ``E_pm = Ex +/- i*Ey``; left circular
  polarization (LCP) means ``E_plus == 0``.  Use the ``DriveField``
  constructors rather than guessing signs.
* drive frequency ``w`` and rotation frequency ``Omega`` are signed;
  every formula below is well defined for negative values.
* radiation reaction enters through the damping time ``tau``.  In a
  physical model ``tau = 2*(Q^2/m)/(3 c^3)``; a normalized model
  (omega0 = c = Q^2/m = 1) treats ``tau`` as a free small parameter.
  All scattered-power prefactors are therefore written as
  ``(Q^2/mc)*(tau/2)`` instead of ``Q^4/(3 m^2 c^4)`` so that the power
  balance among the partial cross sections closes exactly in both modes.

Scalar inputs raise :class:`SingularResonanceError` when a response
denominator vanishes exactly (see that class for when this happens).
Array inputs instead propagate non-finite entries; grid code is
expected to mask them.
"""

from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass

import numpy as np

#: speed of light in vacuum, cm/s
SPEED_OF_LIGHT = 2.99792458e10


class SingularResonanceError(ValueError):
    """A response denominator is exactly zero: no bounded steady state.

    Happens in two situations.  With gamma = tau = 0 the denominators
    vanish anywhere on the resonance ellipse Omega^2 + (omega -/+
    Omega)^2 = omega0^2.  Independently of damping, the single point
    omega = +/-Omega with |Omega| = omega0 is singular too: there the
    co-rotating drive component is static in the rotating frame, every
    damping term carries a factor omega -/+ Omega, and the effective
    spring omega0^2 - Omega^2 is gone, so the displacement grows without
    bound.
    """


def _abs2(z):
    z = np.asarray(z)
    return z.real**2 + z.imag**2


_SINGULAR_MSG = ("response denominator vanishes (gamma = tau = 0 on the "
                 "resonance ellipse, or omega = +/-Omega at |Omega| = "
                 "omega0); no bounded steady state exists there")


def _guard_scalar(*values):
    """Raise on non-finite scalar results (lossless-resonance blowup)."""
    for v in values:
        if np.ndim(v) == 0 and not np.isfinite(v):
            raise SingularResonanceError(_SINGULAR_MSG)


def _amplitude(e, d):
    """e/d with the zero-drive shortcut and a loud lossless-resonance error."""
    if np.ndim(e) == 0 and e == 0:
        return 0j
    if np.ndim(d) == 0:
        if d == 0:
            raise SingularResonanceError(_SINGULAR_MSG)
        return e / d
    with np.errstate(divide="ignore", invalid="ignore"):
        # singular cells become NaN, never inf, so every downstream
        # product stays NaN regardless of its other factor
        return np.where(d == 0, complex(np.nan, np.nan), np.asarray(e) / d)


def _scalar_or_array(x):
    """Collapse 0-d results to float, raising if they are non-finite."""
    if np.ndim(x) == 0:
        _guard_scalar(x)
        return float(x)
    return x


def _quiet(fn):
    """Suppress 0*inf style warnings; singular cells carry NaN instead."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with np.errstate(all="ignore"):
            return fn(*args, **kwargs)
    return wrapper


@dataclass(frozen=True)
class OscillatorModel:
    """Effective spring parameters of the rotating particle.

    Attributes:
        coupling: Q^2/m (cm^3/s^2 in CGS).
        natural_frequency: omega0 (rad/s).
        damping_rate: intrinsic friction gamma (rad/s).
        radiative_time: radiation-reaction time tau (s).
        light_speed: c (cm/s); 1.0 in normalized mode.
    """

    coupling: float
    natural_frequency: float
    damping_rate: float
    radiative_time: float
    light_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not self.coupling > 0:
            raise ValueError("coupling must be positive")
        if not self.natural_frequency > 0:
            raise ValueError("natural_frequency must be positive")
        if self.damping_rate < 0:
            raise ValueError("damping_rate must be non-negative")
        if self.radiative_time < 0:
            raise ValueError("radiative_time must be non-negative")
        if not self.light_speed > 0:
            raise ValueError("light_speed must be positive")

    @classmethod
    def physical(cls, coupling, natural_frequency, damping_rate,
                 light_speed=SPEED_OF_LIGHT):
        """Model with the radiative time tied to the coupling,
        tau = (2/3) (Q^2/m) / c^3."""
        tau = 2.0 * coupling / (3.0 * light_speed**3)
        return cls(coupling, natural_frequency, damping_rate, tau, light_speed)

    @classmethod
    def normalized(cls, damping_rate, radiative_time=0.0,
                   natural_frequency=1.0, coupling=1.0, light_speed=1.0):
        """Dimensionless model (omega0 = c = Q^2/m = 1 by default) with a
        freely chosen radiative time."""
        return cls(coupling, natural_frequency, damping_rate,
                   radiative_time, light_speed)

    @property
    def is_physically_linked(self) -> bool:
        expected = 2.0 * self.coupling / (3.0 * self.light_speed**3)
        return bool(np.isclose(self.radiative_time, expected, rtol=1e-12, atol=0.0))

    @property
    def scattering_prefactor(self) -> float:
        # pi*(Q^2/mc)*(tau/2); equals pi*Q^4/(3 m^2 c^4) when tau is linked
        return np.pi * self.coupling / self.light_speed * self.radiative_time / 2.0


@dataclass(frozen=True)
class DriveField:
    """Monochromatic plane-wave drive.

    ``frequency`` is the signed angular frequency (rad/s); amplitudes are
    the complex Cartesian components in statvolt/cm.  ``frequency`` may be
    an array for vectorized sweeps; the amplitudes stay scalar.
    """

    frequency: float
    amplitude_x: complex
    amplitude_y: complex

    @classmethod
    def lcp(cls, frequency, amplitude=1.0):
        """Left circular polarization: E_plus = 0."""
        a = amplitude / np.sqrt(2.0)
        return cls(frequency, complex(a), 1j * a)

    @classmethod
    def rcp(cls, frequency, amplitude=1.0):
        """Right circular polarization: E_minus = 0."""
        a = amplitude / np.sqrt(2.0)
        return cls(frequency, complex(a), -1j * a)

    @classmethod
    def linear(cls, frequency, amplitude=1.0, angle=0.0):
        """Linear polarization at ``angle`` from x, real amplitudes."""
        return cls(frequency, complex(amplitude * np.cos(angle)),
                   complex(amplitude * np.sin(angle)))

    @property
    def e_plus(self) -> complex:
        return self.amplitude_x + 1j * self.amplitude_y

    @property
    def e_minus(self) -> complex:
        return self.amplitude_x - 1j * self.amplitude_y

    @property
    def field_norm_sq(self) -> float:
        """|E|^2 = |Ex|^2 + |Ey|^2."""
        return abs(self.amplitude_x) ** 2 + abs(self.amplitude_y) ** 2

    def intensity(self, light_speed=SPEED_OF_LIGHT) -> float:
        """I = (c/2pi)|E|^2, erg/(s cm^2)."""
        return light_speed / (2.0 * np.pi) * self.field_norm_sq

    def with_frequency(self, frequency) -> "DriveField":
        return dataclasses.replace(self, frequency=frequency)

    def mirrored(self) -> "DriveField":
        """Swap the two circular components (Ey -> -Ey)."""
        return dataclasses.replace(self, amplitude_y=-self.amplitude_y)


@dataclass(frozen=True)
class ShiftedFrequencies:
    """Rotation-shifted drive frequencies."""

    plus: float      # w + Omega
    minus: float     # w - Omega
    plus2: float     # w + 2*Omega
    minus2: float    # w - 2*Omega


def shifted_frequencies(omega, Omega) -> ShiftedFrequencies:
    return ShiftedFrequencies(omega + Omega, omega - Omega,
                              omega + 2.0 * Omega, omega - 2.0 * Omega)


def circular_components(drive: DriveField):
    """(E_plus, E_minus) = (Ex + i Ey, Ex - i Ey)."""
    return drive.e_plus, drive.e_minus


@dataclass(frozen=True)
class ResponseDenominators:
    """Complex denominators of the two helicity channels (rad^2/s^2)."""

    plus: complex
    minus: complex


def denominators(model: OscillatorModel, omega, Omega) -> ResponseDenominators:
    """d_pm = omega0^2 - Omega^2 - w_pm(w_pm + i*gamma)
    - i*tau*w_pm*(w_pm^2 + 3*Omega^2)."""
    w0sq = model.natural_frequency**2
    gamma = model.damping_rate
    tau = model.radiative_time
    s = shifted_frequencies(omega, Omega)

    def one(ws):
        return (w0sq - Omega**2 - ws * (ws + 1j * gamma)
                - 1j * tau * ws * (ws**2 + 3.0 * Omega**2))

    return ResponseDenominators(one(s.plus), one(s.minus))


@dataclass(frozen=True)
class CrossSectionSet:
    """The six areas at one (w, Omega) point (cm^2 in physical units)."""

    mechanical: float
    absorption: float
    elastic: float
    inelastic_plus: float    # emission at w + 2*Omega
    inelastic_minus: float   # emission at w - 2*Omega
    extinction: float

    @property
    def partial_sum(self):
        return (self.elastic + self.inelastic_plus + self.inelastic_minus
                + self.mechanical + self.absorption)

    @property
    def balance_residual(self):
        return self.extinction - self.partial_sum

    def as_dict(self) -> dict:
        return {
            "sigma_mech": self.mechanical,
            "sigma_abs": self.absorption,
            "sigma_elastic": self.elastic,
            "sigma_in_plus": self.inelastic_plus,
            "sigma_in_minus": self.inelastic_minus,
            "sigma_ext": self.extinction,
        }


@dataclass(frozen=True)
class _HelicityTerms:
    """Shared intermediates: shifted frequencies, helicity weights
    |E_pm/E|^2 and the weighted inverse denominators w_pm/|d_pm|^2."""

    shifted: ShiftedFrequencies
    weight_plus: float
    weight_minus: float
    term_plus: float
    term_minus: float
    d2_plus: float
    d2_minus: float


def _helicity_terms(model, drive, Omega) -> _HelicityTerms:
    e2 = drive.field_norm_sq
    if e2 == 0:
        raise ValueError("drive field has zero amplitude")
    wp = abs(drive.e_plus) ** 2 / e2
    wm = abs(drive.e_minus) ** 2 / e2
    d = denominators(model, drive.frequency, Omega)
    d2p = _abs2(d.plus)
    d2m = _abs2(d.minus)
    with np.errstate(divide="ignore", invalid="ignore"):
        # a channel the drive does not excite contributes 0 even on its
        # resonance; an excited channel with d = 0 becomes NaN (not inf),
        # keeping every downstream product NaN at singular cells
        tp = np.where(wp == 0.0, 0.0, np.where(d2p == 0.0, np.nan, wp / d2p))
        tm = np.where(wm == 0.0, 0.0, np.where(d2m == 0.0, np.nan, wm / d2m))
    return _HelicityTerms(shifted_frequencies(drive.frequency, Omega),
                          wp, wm, tp, tm, d2p, d2m)


@_quiet
def torque(model: OscillatorModel, drive: DriveField, Omega):
    """Time-averaged torque about z, erg.

    Positive torque spins the particle up; it changes sign once the
    rotation outruns the drive (both gamma and tau channels contribute).
    """
    if drive.field_norm_sq == 0:
        return 0.0
    h = _helicity_terms(model, drive, Omega)
    gamma = model.damping_rate
    tau = model.radiative_time
    s = h.shifted
    m = 0.5 * model.coupling * drive.field_norm_sq * (
        -(gamma * s.plus + tau * s.plus2**3) * h.term_plus
        + (gamma * s.minus + tau * s.minus2**3) * h.term_minus
    )
    return _scalar_or_array(m)


@_quiet
def absorption_cross_section(model, drive, Omega):
    """sigma_abs: proportional to the friction rate gamma; >= 0."""
    h = _helicity_terms(model, drive, Omega)
    s = h.shifted
    out = (np.pi * model.damping_rate * model.coupling / model.light_speed
           * (s.plus**2 * h.term_plus + s.minus**2 * h.term_minus))
    return _scalar_or_array(out)


@_quiet
def elastic_cross_section(model, drive, Omega):
    """sigma at the drive frequency (elastic re-emission); >= 0."""
    h = _helicity_terms(model, drive, Omega)
    out = (model.scattering_prefactor * drive.frequency**4
           * (h.term_plus + h.term_minus))
    return _scalar_or_array(out)


@_quiet
def inelastic_cross_sections(model, drive, Omega):
    """(sigma at w+2*Omega, sigma at w-2*Omega); both >= 0.

    Each helicity feeds exactly one sideband, so LCP light (E_plus = 0)
    emits only the down-shifted line.
    """
    h = _helicity_terms(model, drive, Omega)
    s = h.shifted
    pref = model.scattering_prefactor
    up = pref * s.plus2**4 * h.term_plus
    down = pref * s.minus2**4 * h.term_minus
    return _scalar_or_array(up), _scalar_or_array(down)


@_quiet
def mechanical_cross_section(model, drive, Omega):
    """sigma_mech = M*Omega/I; sign-indefinite."""
    h = _helicity_terms(model, drive, Omega)
    gamma = model.damping_rate
    tau = model.radiative_time
    s = h.shifted
    out = np.pi * model.coupling * Omega / model.light_speed * (
        -(gamma * s.plus + tau * s.plus2**3) * h.term_plus
        + (gamma * s.minus + tau * s.minus2**3) * h.term_minus
    )
    return _scalar_or_array(out)


@_quiet
def extinction_cross_section(model, drive, Omega):
    """Net power removed from the beam, as an area; negative extinction
    means the rotating particle amplifies the beam."""
    h = _helicity_terms(model, drive, Omega)
    gamma = model.damping_rate
    tau = model.radiative_time
    s = h.shifted
    osq3 = 3.0 * Omega**2
    out = np.pi * model.coupling * drive.frequency / model.light_speed * (
        s.plus * (gamma + tau * (s.plus**2 + osq3)) * h.term_plus
        + s.minus * (gamma + tau * (s.minus**2 + osq3)) * h.term_minus
    )
    return _scalar_or_array(out)


@_quiet
def cross_section_set(model, drive, Omega) -> CrossSectionSet:
    """All six cross sections at once, sharing intermediates."""
    h = _helicity_terms(model, drive, Omega)
    gamma = model.damping_rate
    tau = model.radiative_time
    c = model.light_speed
    K = model.coupling
    s = h.shifted
    omega = drive.frequency

    brake_plus = gamma * s.plus + tau * s.plus2**3
    brake_minus = gamma * s.minus + tau * s.minus2**3

    mech = np.pi * K * Omega / c * (-brake_plus * h.term_plus
                                    + brake_minus * h.term_minus)
    absorb = np.pi * gamma * K / c * (s.plus**2 * h.term_plus
                                      + s.minus**2 * h.term_minus)
    pref = model.scattering_prefactor
    elastic = pref * omega**4 * (h.term_plus + h.term_minus)
    in_plus = pref * s.plus2**4 * h.term_plus
    in_minus = pref * s.minus2**4 * h.term_minus
    osq3 = 3.0 * Omega**2
    ext = np.pi * K * omega / c * (
        s.plus * (gamma + tau * (s.plus**2 + osq3)) * h.term_plus
        + s.minus * (gamma + tau * (s.minus**2 + osq3)) * h.term_minus
    )
    if np.ndim(ext) == 0:
        return CrossSectionSet(*(_scalar_or_array(v) for v in
                                 (mech, absorb, elastic,
                                  in_plus, in_minus, ext)))
    return CrossSectionSet(mech, absorb, elastic, in_plus, in_minus, ext)


def energy_balance_residual(model, drive, Omega):
    """sigma_ext minus the sum of the five partial channels.

    Zero to rounding for every parameter set, because the scattering
    prefactors are written through tau (see module docstring).
    """
    return cross_section_set(model, drive, Omega).balance_residual


def steady_state_displacement(model, drive, Omega, t, charge_to_mass=1.0):
    """Radial displacement along the co-rotating rod axis at time ``t``.

    The model fixes only Q^2/m, which leaves the displacement scale
    undetermined; ``charge_to_mass`` supplies Q/m (default 1).  Every
    observable built from the displacement is independent of that choice.
    """
    d = denominators(model, drive.frequency, Omega)
    a_plus = _amplitude(drive.e_plus, d.plus)
    a_minus = _amplitude(drive.e_minus, d.minus)
    s = shifted_frequencies(drive.frequency, Omega)
    t = np.asarray(t, dtype=float)
    rho = charge_to_mass * (a_plus * np.exp(-1j * s.plus * t)
                            + a_minus * np.exp(-1j * s.minus * t)).real
    return rho if rho.ndim else float(rho)


def radial_ode_residual(model, drive, Omega, t, charge_to_mass=1.0):
    """Relative residual of the closed-form displacement in the radial
    equation of motion

        omega0^2 rho - Omega^2 rho + rho'' + gamma rho'
            - tau rho''' + 3 tau Omega^2 rho'  =  (Q/m) E . rho_hat.

    Derivatives are taken analytically term by term (each helicity
    component is a single complex exponential), so this checks the
    algebra of the closed form, not an integrator.  The residual is
    normalized by the sum of the magnitudes of all contributions, making
    10^-16-level output the signature of a correct steady state.
    """
    d = denominators(model, drive.frequency, Omega)
    a_plus = _amplitude(drive.e_plus, d.plus)
    a_minus = _amplitude(drive.e_minus, d.minus)
    s = shifted_frequencies(drive.frequency, Omega)
    qm = charge_to_mass
    w0sq = model.natural_frequency**2
    gamma = model.damping_rate
    tau = model.radiative_time

    t = np.asarray(t, dtype=float)
    lhs = 0.0
    scale = 0.0
    for a, w in ((a_plus, s.plus), (a_minus, s.minus)):
        ph = np.exp(-1j * w * t)
        rho = (a * ph).real
        rho1 = (-1j * w * a * ph).real
        rho2 = ((-1j * w) ** 2 * a * ph).real
        rho3 = ((-1j * w) ** 3 * a * ph).real
        lhs = lhs + qm * (w0sq * rho - Omega**2 * rho + rho2 + gamma * rho1
                          - tau * rho3 + 3.0 * tau * Omega**2 * rho1)
        scale = scale + qm * abs(a) * (w0sq + Omega**2 + w**2
                                       + gamma * abs(w)
                                       + tau * (abs(w) ** 3
                                                + 3.0 * Omega**2 * abs(w)))
    forcing = qm * ((drive.e_plus * np.exp(-1j * s.plus * t)).real
                    + (drive.e_minus * np.exp(-1j * s.minus * t)).real)
    scale = scale + qm * (abs(drive.e_plus) + abs(drive.e_minus))
    if scale == 0:
        return 0.0 if np.ndim(t) == 0 else np.zeros_like(t)
    out = np.abs(lhs - forcing) / scale
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SpectralLine:
    """One emission line: frequency plus the complex (x, y) dipole
    amplitude, convention p(t) = p_tilde e^{-i nu t} + c.c."""

    frequency: float
    amplitude_x: complex
    amplitude_y: complex

    @property
    def norm_sq(self) -> float:
        return abs(self.amplitude_x) ** 2 + abs(self.amplitude_y) ** 2


@dataclass(frozen=True)
class DipoleSpectrum:
    """Induced-dipole spectrum: carrier plus the two rotational sidebands."""

    carrier: SpectralLine        # at w
    upshifted: SpectralLine      # at w + 2*Omega
    downshifted: SpectralLine    # at w - 2*Omega

    def lines(self):
        return self.carrier, self.upshifted, self.downshifted


def induced_dipole_spectrum(model, drive, Omega) -> DipoleSpectrum:
    """Spectral decomposition of the induced dipole Q*rho*rho_hat.

    Rotation splits the response into a carrier at the drive frequency
    and two sidebands shifted by +/- 2*Omega; each sideband is fed by a
    single circular component of the drive.
    """
    d = denominators(model, drive.frequency, Omega)
    a_plus = _amplitude(drive.e_plus, d.plus)
    a_minus = _amplitude(drive.e_minus, d.minus)
    s = shifted_frequencies(drive.frequency, Omega)
    q = model.coupling / 4.0
    carrier = SpectralLine(drive.frequency,
                           q * (a_plus + a_minus),
                           -1j * q * (a_plus - a_minus))
    up = SpectralLine(s.plus2, q * a_plus, 1j * q * a_plus)
    down = SpectralLine(s.minus2, q * a_minus, -1j * q * a_minus)
    return DipoleSpectrum(carrier, up, down)


def static_polarizability(model, omega) -> complex:
    """Complex polarizability of the non-rotating particle,
    alpha = (Q^2/m) / (omega0^2 - w(w + i*gamma) - i*tau*w^3)."""
    d = (model.natural_frequency**2
         - omega * (omega + 1j * model.damping_rate)
         - 1j * model.radiative_time * omega**3)
    if np.ndim(d) == 0 and d == 0:
        raise SingularResonanceError(
            "lossless model driven exactly at its natural frequency")
    return model.coupling / d


def resonance_locus(omega0, branch="lower", n_points=256) -> np.ndarray:
    """Points (w, Omega) of the resonance ellipse
    Omega^2 + (w +/- Omega)^2 = omega0^2.

    ``branch`` picks the sign: "upper" for +, "lower" for - (the branch
    excited by LCP light).  Returns an (n_points, 2) array sampled
    uniformly in the ellipse parameter.
    """
    if branch not in ("upper", "lower"):
        raise ValueError("branch must be 'upper' or 'lower'")
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    theta = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    Omega = omega0 * np.sin(theta)
    shift = Omega if branch == "lower" else -Omega
    omega = omega0 * np.cos(theta) + shift
    return np.column_stack([omega, Omega])
