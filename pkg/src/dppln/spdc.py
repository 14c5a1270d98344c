"""Down-conversion physics: QPM periods, phase mismatch, coupling amplitudes,
entanglement metrics, sinc^2 spectra and dual-period poling patterns.

Units: wavelengths in nm, periods and transverse overlaps in um (1/um),
phase mismatch in rad/m, interaction lengths in cm.  Coupling amplitudes are
relative: the prefactor common to both processes (nonlinear coefficient,
pump field, hbar, interaction time) cancels from every ratio computed here
and is set to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import Polarization
from .errors import (
    AmplitudeUndefinedError,
    ConfigurationError,
    ConsistencyError,
    DegeneratePatternError,
    DownConversionError,
    PhaseMatchingError,
    SpanTooNarrowError,
)

C_UM_PER_FS = 0.299792458

# Argument where sinc^2 falls to one half: sin(x)/x = 1/sqrt(2).
HALF_MAX_ARG = 1.3915573782515102

# First-harmonic magnitude of the ideal dual-period nonlinearity decomposition.
IDEAL_HARMONIC_AMPLITUDE = 4.0 / np.pi**2


def sinc(x):
    """sin(x)/x with sinc(0) = 1 (unnormalised convention)."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def angular_frequency(wavelength_nm):
    """Angular frequency in rad/fs."""
    return 2.0 * np.pi * C_UM_PER_FS / (wavelength_nm * 1e-3)


def idler_wavelength(pump_nm: float, signal_nm: float) -> float:
    """Idler wavelength from energy conservation, 1/lp = 1/ls + 1/li."""
    if signal_nm <= pump_nm:
        raise DownConversionError(
            f"signal {signal_nm:g} nm must exceed the pump {pump_nm:g} nm"
        )
    return 1.0 / (1.0 / pump_nm - 1.0 / signal_nm)


def qpm_period(n_p, n_s, n_i, pump_nm, signal_nm, idler_nm) -> float:
    """First-order quasi-phase-matching period in um.

    Lambda = 1 / (n_p/lp - n_s/ls - n_i/li), wavelengths in um.
    """
    denominator = (
        n_p / (pump_nm * 1e-3) - n_s / (signal_nm * 1e-3) - n_i / (idler_nm * 1e-3)
    )
    if denominator <= 0.0:
        raise PhaseMatchingError(
            "no first-order grating: n_p/lp - n_s/ls - n_i/li = "
            f"{denominator:.6e} 1/um is not positive"
        )
    return 1.0 / denominator


@dataclass(frozen=True)
class SpdcProcess:
    """One pump -> (signal, idler) conversion with its grating period."""

    pump_nm: float
    signal_nm: float
    idler_nm: float
    pump_pol: Polarization
    signal_pol: Polarization
    idler_pol: Polarization
    qpm_period_um: float
    n_pump: float
    n_signal: float
    n_idler: float

    def __post_init__(self):
        residual = 1.0 / self.pump_nm - 1.0 / self.signal_nm - 1.0 / self.idler_nm
        if abs(residual) * self.pump_nm > 1e-9:
            raise ConfigurationError(
                f"energy conservation violated by {residual:.3e} 1/nm"
            )
        if not self.signal_nm < self.idler_nm:
            raise ConfigurationError("signal must be the shorter wavelength of the pair")
        if self.qpm_period_um <= 0.0:
            raise ConfigurationError("QPM period must be positive")


def make_process(pump_nm, signal_nm, pump_pol, signal_pol, idler_pol, n_pump, n_signal, n_idler):
    """Build an SpdcProcess, deriving the idler and the phase-matched period."""
    idler_nm = idler_wavelength(pump_nm, signal_nm)
    period = qpm_period(n_pump, n_signal, n_idler, pump_nm, signal_nm, idler_nm)
    return SpdcProcess(
        pump_nm=pump_nm,
        signal_nm=signal_nm,
        idler_nm=idler_nm,
        pump_pol=pump_pol,
        signal_pol=signal_pol,
        idler_pol=idler_pol,
        qpm_period_um=period,
        n_pump=n_pump,
        n_signal=n_signal,
        n_idler=n_idler,
    )


def _mismatch_rad_per_m(process, signal_nm, n_signal, n_idler):
    idler_nm = idler_wavelength(process.pump_nm, signal_nm)
    residual = (
        process.n_pump / (process.pump_nm * 1e-3)
        - n_signal / (signal_nm * 1e-3)
        - n_idler / (idler_nm * 1e-3)
    )
    return 2.0 * np.pi * (1.0 / process.qpm_period_um - residual) * 1e6


def phase_mismatch(process: SpdcProcess, signal_nm: float, index_provider) -> float:
    """Dispersive phase mismatch Delta-k in rad/m at a detuned signal wavelength.

    The idler follows from energy conservation and both down-converted
    indices are re-evaluated through `index_provider(wavelength_nm, pol)`.
    Zero at the design point by construction of the period.
    """
    idler_nm = idler_wavelength(process.pump_nm, signal_nm)
    n_s = index_provider(signal_nm, process.signal_pol)
    n_i = index_provider(idler_nm, process.idler_pol)
    return _mismatch_rad_per_m(process, signal_nm, n_s, n_i)


def design_point_mismatch(process: SpdcProcess, signal_nm: float) -> float:
    """Phase mismatch in rad/m with both indices frozen at their design values."""
    return _mismatch_rad_per_m(process, signal_nm, process.n_signal, process.n_idler)


@dataclass(frozen=True)
class CouplingAmplitude:
    """Relative coupling amplitude of one process (common prefactor dropped)."""

    magnitude: float
    base_magnitude: float
    overlap_per_um: float
    sinc_factor: float
    delta_k_rad_per_m: float
    length_cm: float

    def complex_value(self):
        """-|base| sinc(dk L/2) exp(-i dk L/2); phase rebuilt on demand."""
        half_phase = 0.5 * self.delta_k_rad_per_m * self.length_cm * 1e-2
        return -self.base_magnitude * self.sinc_factor * np.exp(-1j * half_phase)


def coupling_amplitude(process: SpdcProcess, overlap_per_um: float,
                       delta_k_rad_per_m: float, length_cm: float) -> CouplingAmplitude:
    """Relative amplitude |I| sqrt(ws wi) / (ns ni) * |sinc(dk L/2)|."""
    if length_cm <= 0.0:
        raise ConfigurationError("interaction length must be positive")
    ws = angular_frequency(process.signal_nm)
    wi = angular_frequency(process.idler_nm)
    base = abs(overlap_per_um) * math.sqrt(ws * wi) / (process.n_signal * process.n_idler)
    x = 0.5 * delta_k_rad_per_m * length_cm * 1e-2
    s = float(sinc(x))
    return CouplingAmplitude(
        magnitude=base * abs(s),
        base_magnitude=base,
        overlap_per_um=overlap_per_um,
        sinc_factor=s,
        delta_k_rad_per_m=delta_k_rad_per_m,
        length_cm=length_cm,
    )


def degree_of_entanglement(a1: CouplingAmplitude, a2: CouplingAmplitude) -> float:
    """gamma = min(|C1|, |C2|) / max(|C1|, |C2|) in [0, 1]."""
    m1, m2 = a1.magnitude, a2.magnitude
    if m1 == 0.0 and m2 == 0.0:
        raise AmplitudeUndefinedError("both coupling amplitudes vanish")
    if m1 == m2:
        return 1.0
    return min(m1, m2) / max(m1, m2)


def state_weights_and_entropy(a1: CouplingAmplitude, a2: CouplingAmplitude):
    """Normalised two-term weights (|C1|^2, |C2|^2) and their entropy in bits."""
    m1, m2 = a1.magnitude, a2.magnitude
    total = m1 * m1 + m2 * m2
    if total == 0.0:
        raise AmplitudeUndefinedError("both coupling amplitudes vanish")
    p1 = m1 * m1 / total
    p2 = m2 * m2 / total
    entropy = 0.0
    for p in (p1, p2):
        if p > 0.0:
            entropy -= p * math.log2(p)
    return (p1, p2), entropy


@dataclass(frozen=True)
class Spectrum:
    """Sampled sinc^2 gain curve along one photon's wavelength."""

    role: str  # "signal" or "idler"
    wavelengths_nm: np.ndarray
    gain: np.ndarray
    center_nm: float
    fwhm_nm: float

    def angular_frequency_fwhm(self):
        """FWHM converted to rad/fs via dw = 2 pi c dlam / lam^2."""
        return 2.0 * np.pi * C_UM_PER_FS * (self.fwhm_nm * 1e-3) / (self.center_nm * 1e-3) ** 2


def estimate_fwhm_nm(process: SpdcProcess, axis: str, length_cm: float) -> float:
    """Closed-form FWHM estimate from the design-point mismatch slope."""
    center = process.signal_nm if axis == "signal" else process.idler_nm
    signal_of = (lambda lam: lam) if axis == "signal" else (
        lambda lam: idler_wavelength(process.pump_nm, lam)
    )
    delta = 0.01
    slope = (
        design_point_mismatch(process, signal_of(center + delta))
        - design_point_mismatch(process, signal_of(center - delta))
    ) / (2.0 * delta)
    if slope == 0.0:
        raise PhaseMatchingError("flat mismatch: cannot estimate a bandwidth")
    # full width: the half-maximum offsets sit at dk = +-2*HALF_MAX_ARG/L
    return 4.0 * HALF_MAX_ARG / (length_cm * 1e-2 * abs(slope))


def _half_crossings(wavelengths, gain, center_index):
    """Linear-interpolated half-maximum crossings on each side of the peak."""
    left = None
    for i in range(center_index, 0, -1):
        if gain[i - 1] < 0.5 <= gain[i]:
            frac = (0.5 - gain[i - 1]) / (gain[i] - gain[i - 1])
            left = wavelengths[i - 1] + frac * (wavelengths[i] - wavelengths[i - 1])
            break
    right = None
    for i in range(center_index, len(gain) - 1):
        if gain[i] >= 0.5 > gain[i + 1]:
            frac = (gain[i] - 0.5) / (gain[i] - gain[i + 1])
            right = wavelengths[i] + frac * (wavelengths[i + 1] - wavelengths[i])
            break
    return left, right


def spectrum_scan(process: SpdcProcess, axis: str, span_nm: float, samples: int,
                  length_cm: float, index_provider=None,
                  index_model: str = "design-point") -> Spectrum:
    """Sample gain(lam) = sinc^2(dk(lam) L / 2) around the phase-matched point.

    `axis` selects which photon's wavelength is scanned; the partner follows
    from energy conservation with a monochromatic pump.  `index_model`
    "design-point" freezes both indices at their solved values (this is what
    the reference tables and bandwidths correspond to); "dispersive"
    re-evaluates them per grid point through `index_provider`.
    """
    if axis not in ("signal", "idler"):
        raise ConfigurationError(f"unknown scan axis '{axis}'")
    if samples < 101:
        raise ConfigurationError("a spectrum scan needs at least 101 samples")
    if index_model not in ("design-point", "dispersive"):
        raise ConfigurationError(f"unknown index model '{index_model}'")
    if index_model == "dispersive" and index_provider is None:
        raise ConfigurationError("dispersive scans need an index provider")

    center = process.signal_nm if axis == "signal" else process.idler_nm
    grid = np.linspace(center - span_nm / 2.0, center + span_nm / 2.0, samples)
    if axis == "signal":
        signal_grid = grid
    else:
        signal_grid = np.array([idler_wavelength(process.pump_nm, lam) for lam in grid])

    if index_model == "design-point":
        dk = np.array([design_point_mismatch(process, lam) for lam in signal_grid])
    else:
        dk = np.array([phase_mismatch(process, lam, index_provider) for lam in signal_grid])

    gain = sinc(0.5 * dk * length_cm * 1e-2) ** 2
    peak = int(np.argmax(gain))
    left, right = _half_crossings(grid, gain, peak)
    if left is None or right is None:
        suggestion = 3.0 * estimate_fwhm_nm(process, axis, length_cm)
        raise SpanTooNarrowError(
            f"span {span_nm:g} nm does not contain both half-maximum crossings; "
            f"try at least {suggestion:.3g} nm",
            suggested_span_nm=suggestion,
        )
    return Spectrum(
        role=axis,
        wavelengths_nm=grid,
        gain=gain,
        center_nm=center,
        fwhm_nm=float(right - left),
    )


def spectral_distinguishability(s1: Spectrum, s2: Spectrum):
    """Non-overlap test: center +- FWHM windows must be disjoint.

    Returns (distinguishable, margin_nm); the signed margin is positive when
    one spectrum's lower edge clears the other's upper edge.
    """
    if s1.role != s2.role:
        raise ConsistencyError(
            f"cannot compare a {s1.role} spectrum with a {s2.role} spectrum"
        )
    margin = max(
        (s1.center_nm - s1.fwhm_nm) - (s2.center_nm + s2.fwhm_nm),
        (s2.center_nm - s2.fwhm_nm) - (s1.center_nm + s1.fwhm_nm),
    )
    return margin >= 0.0, float(margin)


@dataclass(frozen=True)
class PolingPattern:
    """Sign-alternating domain pattern along the propagation axis."""

    boundaries_um: np.ndarray  # strictly increasing interior sign flips
    length_um: float
    first_sign: int  # sign of the first domain [0, boundaries[0])

    def segment_edges(self):
        return np.concatenate(([0.0], self.boundaries_um, [self.length_um]))

    def segment_signs(self):
        n = len(self.boundaries_um) + 1
        return self.first_sign * (-1) ** np.arange(n)


def synthesize_poling(period1_um: float, period2_um: float, length_cm: float) -> PolingPattern:
    """Digitise sgn[cos(2 pi x / L1) - cos(2 pi x / L2)] into domain boundaries.

    Sign flips are bracketed on a sub-period grid and bisected to well below
    1 nm.  Raises DegeneratePatternError when the periods coincide.
    """
    if period1_um <= 0.0 or period2_um <= 0.0:
        raise ConfigurationError("poling periods must be positive")
    if period1_um == period2_um:
        raise DegeneratePatternError("equal periods produce no beat pattern")
    length_um = length_cm * 1e4
    if length_um < 10.0 * max(period1_um, period2_um):
        raise ConfigurationError("pattern length must cover many grating periods")

    def value(x):
        return np.cos(2.0 * np.pi * x / period1_um) - np.cos(2.0 * np.pi * x / period2_um)

    step = min(period1_um, period2_um) / 16.0
    n_cells = int(np.ceil(length_um / step))
    # cell midpoints cannot land on the lattice zeros of the beat envelope
    mid = (np.arange(n_cells + 1) + 0.5) * step
    mid = mid[mid < length_um]
    signs = np.sign(value(mid))
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]

    lo = mid[flips].copy()
    hi = mid[flips + 1].copy()
    f_lo = value(lo)
    for _ in range(48):
        m = 0.5 * (lo + hi)
        f_m = value(m)
        take_left = f_lo * f_m <= 0.0
        hi = np.where(take_left, m, hi)
        lo = np.where(take_left, lo, m)
        f_lo = np.where(take_left, f_lo, f_m)
    boundaries = 0.5 * (lo + hi)

    first_sign = int(np.sign(value(min(0.5 * boundaries[0], 0.5 * step)))) if len(boundaries) else 1
    return PolingPattern(
        boundaries_um=boundaries,
        length_um=length_um,
        first_sign=first_sign if first_sign != 0 else 1,
    )


def poling_fourier_coefficient(pattern: PolingPattern, k_rad_per_um: float) -> float:
    """|(1/L) int d(x) exp(-i K x) dx| by exact piecewise integration."""
    edges = pattern.segment_edges()
    signs = pattern.segment_signs()
    if k_rad_per_um == 0.0:
        return float(abs(np.sum(signs * np.diff(edges))) / pattern.length_um)
    phases = np.exp(-1j * k_rad_per_um * edges)
    total = np.sum(signs * (phases[1:] - phases[:-1])) / (-1j * k_rad_per_um)
    return float(abs(total) / pattern.length_um)
