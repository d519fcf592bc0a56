"""Three-port linearized quantum noise of a driven optomechanical cavity.

The intracavity quadratures (X, Y), in a frame rotating at the drive
frequency, obey

    (Gamma/2 - i w) X + Delta Y = sum_j (sqrt(gamma_j)/2) X_in,j + a0 g_gamma0 x
    (Gamma/2 - i w) Y - Delta X = sum_j (sqrt(gamma_j)/2) Y_in,j + a0 g_omega0 x

with Gamma = gamma1 + gamma2 + gamma3, Delta the drive detuning, and
unit-white vacuum inputs on every port (the port-3 noise enters the Y
equation through its own Y quadrature, keeping the input statistics
phase-symmetric).  Port 1 is detected: X_in1 + X_out1 = 2 sqrt(gamma1) X,
likewise for Y.  The backaction force is

    F = -(hbar a0 g_gamma0 / sqrt(gamma2)) Y_in2 + 2 hbar a0 g_omega0 X.

In the symmetric, resonant, low-frequency limit (gamma1 = gamma2 = gamma,
Delta = 0, w -> 0) the optimal homodyne angle is
theta = atan(g_omega0/g_gamma0) and

    S_xx_imp = (gamma + gamma3/2)^2 / (4 a0^2 gamma (g_gamma0^2 + g_omega0^2))
    S_FF     = hbar^2 a0^2 gamma / (gamma + gamma3/2)^2
               * (A^2 g_gamma0^2 + 2 A g_omega0^2),      A = 1 + gamma3/(2 gamma)
    S_xx_imp * S_FF = (hbar^2/4) (A^2 + 2 A xi^2) / (1 + xi^2),
                      xi = g_omega0 / g_gamma0,

bounded below by hbar^2/4 (reached only at xi = 0, A = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, HBAR
from .errors import SingularSystem, ZeroCoupling

#: index layout of the input-quadrature noise basis
NOISE_BASIS = ("X_in1", "Y_in1", "X_in2", "Y_in2", "X_in3", "Y_in3")


@dataclass(frozen=True)
class PortRates:
    """Decay rates (rad/s) of the detection, dissipative-coupling, and
    loss ports."""

    gamma1: float
    gamma2: float
    gamma3: float = 0.0

    def __post_init__(self) -> None:
        if min(self.gamma1, self.gamma2, self.gamma3) < 0.0:
            raise ValueError("decay rates must be non-negative")
        if self.total <= 0.0:
            raise ValueError("total decay rate must be positive")

    @property
    def total(self) -> float:
        return self.gamma1 + self.gamma2 + self.gamma3


@dataclass(frozen=True)
class DriveConfig:
    """Drive detuning Delta, Fourier frequency omega, and the
    number-of-photons-normalized intracavity pump amplitude a0."""

    delta: float = 0.0
    omega: float = 0.0
    a0: float = 1.0

    def __post_init__(self) -> None:
        if self.a0 < 0.0:
            raise ValueError("pump amplitude a0 must be non-negative")


@dataclass(frozen=True)
class FluctuationSolution:
    """Noise/signal decomposition of the intracavity and port-1 output
    quadratures.

    Rows are (X, Y); noise columns follow NOISE_BASIS.  Power spectral
    densities are sums of |coefficient|^2 over the basis (unit-white,
    mutually uncorrelated vacuum inputs).
    """

    cavity_noise: np.ndarray   # (2, 6) complex
    cavity_signal: np.ndarray  # (2,) complex, per unit mechanical amplitude
    out1_noise: np.ndarray     # (2, 6) complex
    out1_signal: np.ndarray    # (2,) complex

    def out1_psd(self, theta: float) -> float:
        """Noise PSD of the homodyne quadrature cos(theta) X + sin(theta) Y."""
        combo = math.cos(theta) * self.out1_noise[0] + math.sin(theta) * self.out1_noise[1]
        return float(np.sum(np.abs(combo) ** 2))

    def out1_gain(self, theta: float) -> complex:
        """Signal transfer of the homodyne quadrature at angle theta."""
        return (
            math.cos(theta) * self.out1_signal[0]
            + math.sin(theta) * self.out1_signal[1]
        )


def solve_fluctuations(
    rates: PortRates,
    drive: DriveConfig,
    g_omega0: float,
    g_gamma0: float,
    x_signal: float = 1.0,
) -> FluctuationSolution:
    """Solve the 2x2 intracavity system at arbitrary detuning and frequency
    and propagate to the detected port-1 output quadratures."""
    kappa = complex(rates.total / 2.0, -drive.omega)
    det = kappa * kappa + drive.delta ** 2
    if abs(det) < 1e-300:
        raise SingularSystem(
            f"system determinant vanished (kappa={kappa}, delta={drive.delta})"
        )
    m_inv = np.array(
        [[kappa, -drive.delta], [drive.delta, kappa]], dtype=complex
    ) / det

    b_noise = np.zeros((2, 6), dtype=complex)
    for j, rate in enumerate((rates.gamma1, rates.gamma2, rates.gamma3)):
        b_noise[0, 2 * j] = math.sqrt(rate) / 2.0
        b_noise[1, 2 * j + 1] = math.sqrt(rate) / 2.0
    b_signal = np.array(
        [drive.a0 * g_gamma0 * x_signal, drive.a0 * g_omega0 * x_signal],
        dtype=complex,
    )

    cavity_noise = m_inv @ b_noise
    cavity_signal = m_inv @ b_signal

    root_g1 = math.sqrt(rates.gamma1)
    out1_noise = 2.0 * root_g1 * cavity_noise
    out1_noise[0, 0] -= 1.0  # X_out1 = 2 sqrt(gamma1) X - X_in1
    out1_noise[1, 1] -= 1.0
    out1_signal = 2.0 * root_g1 * cavity_signal
    return FluctuationSolution(
        cavity_noise=cavity_noise,
        cavity_signal=cavity_signal,
        out1_noise=out1_noise,
        out1_signal=out1_signal,
    )


def force_noise_coefficients(
    rates: PortRates,
    drive: DriveConfig,
    g_omega0: float,
    g_gamma0: float,
    hbar: float = HBAR,
) -> np.ndarray:
    """Noise coefficients of the backaction force over NOISE_BASIS."""
    if rates.gamma2 <= 0.0 and g_gamma0 != 0.0:
        raise ValueError("dissipative coupling requires gamma2 > 0")
    sol = solve_fluctuations(rates, drive, g_omega0, g_gamma0, x_signal=0.0)
    coeffs = 2.0 * hbar * drive.a0 * g_omega0 * sol.cavity_noise[0].copy()
    if g_gamma0 != 0.0:
        coeffs[3] += -hbar * drive.a0 * g_gamma0 / math.sqrt(rates.gamma2)
    return coeffs


def general_spectra(
    rates: PortRates,
    drive: DriveConfig,
    g_omega0: float,
    g_gamma0: float,
    theta: float,
    hbar: float = HBAR,
) -> tuple[float, float]:
    """(S_xx_imp, S_FF) from the general-frequency linear solver.

    S_xx_imp is the homodyne noise PSD at angle theta referred to the
    mechanical displacement; S_FF the backaction-force PSD.
    """
    sol = solve_fluctuations(rates, drive, g_omega0, g_gamma0, x_signal=1.0)
    gain = abs(sol.out1_gain(theta))
    if gain == 0.0:
        raise ZeroCoupling(f"no signal transfer at homodyne angle theta={theta}")
    s_xx = sol.out1_psd(theta) / gain ** 2
    f_coeffs = force_noise_coefficients(rates, drive, g_omega0, g_gamma0, hbar)
    s_ff = float(np.sum(np.abs(f_coeffs) ** 2))
    return s_xx, s_ff


def product_normalized(xi: float, big_a: float) -> float:
    """Backaction-imprecision product in units of hbar^2/4:
    (A^2 + 2 A xi^2) / (1 + xi^2)."""
    if math.isinf(xi):
        return 2.0 * big_a
    return (big_a ** 2 + 2.0 * big_a * xi ** 2) / (1.0 + xi ** 2)


@dataclass(frozen=True)
class NoiseReport:
    """Closed-form homodyne noise summary at the symmetric resonant
    operating point."""

    theta_opt: float
    s_xx_imp: float
    s_ff: float
    product: float
    xi: float
    A: float
    cooperativity: float | None = None


def homodyne_spectra(
    rates: PortRates,
    drive: DriveConfig,
    g_omega0: float,
    g_gamma0: float,
    hbar: float = HBAR,
    x_zpf: float | None = None,
    gamma_m: float | None = None,
) -> NoiseReport:
    """Closed-form optimal-angle spectra for the symmetric two-sided cavity.

    Preconditions (asserted): resonant drive (delta = 0), symmetric ports
    (gamma1 = gamma2); the forms are the low-frequency limit, drive.omega
    is ignored.  Raises ZeroCoupling if both constants vanish.  If x_zpf
    and gamma_m are given, the report carries the cooperativity
    (g_gamma0 x_zpf a0)^2 / (gamma gamma_m).
    """
    if drive.delta != 0.0:
        raise ValueError("closed forms hold at resonant drive (delta = 0)")
    if rates.gamma1 != rates.gamma2:
        raise ValueError("closed forms hold for a symmetric cavity (gamma1 = gamma2)")
    if g_omega0 == 0.0 and g_gamma0 == 0.0:
        raise ZeroCoupling("both coupling constants are zero")
    if drive.a0 <= 0.0:
        raise ValueError("imprecision diverges without a pump (a0 = 0)")
    gamma = rates.gamma1
    half_width = gamma + rates.gamma3 / 2.0
    big_a = 1.0 + rates.gamma3 / (2.0 * gamma)
    g_sq = g_gamma0 ** 2 + g_omega0 ** 2

    theta_opt = math.atan2(g_omega0, g_gamma0)
    s_xx = half_width ** 2 / (4.0 * drive.a0 ** 2 * gamma * g_sq)
    s_ff = (
        hbar ** 2 * drive.a0 ** 2 * gamma / half_width ** 2
        * (big_a ** 2 * g_gamma0 ** 2 + 2.0 * big_a * g_omega0 ** 2)
    )
    xi = math.inf if g_gamma0 == 0.0 else g_omega0 / g_gamma0
    coop = None
    if x_zpf is not None and gamma_m is not None:
        coop = (g_gamma0 * x_zpf * drive.a0) ** 2 / (gamma * gamma_m)
    return NoiseReport(
        theta_opt=theta_opt,
        s_xx_imp=s_xx,
        s_ff=s_ff,
        product=s_xx * s_ff,
        xi=xi,
        A=big_a,
        cooperativity=coop,
    )


def mechanical_scale(
    wavelength: float, l: float, x_zpf: float, gamma_m: float, a0: float = 1.0
) -> float:
    """Cooperativity prefactor M = c (k a0 x_zpf)^2 / (l gamma_m)."""
    k = 2.0 * math.pi / wavelength
    return C_LIGHT * (k * a0 * x_zpf) ** 2 / (l * gamma_m)


def cooperativity_mos(
    t: float, t_m: float, l: float, wavelength: float,
    x_zpf: float, gamma_m: float, a0: float = 1.0,
) -> float:
    """Single-photon-scalable cooperativity of the membrane-outside cavity
    at its dissipative operating point: C = M 4 t^2 / t_m^6.  No
    sideband-resolution factor enters (dissipative coupling through the
    non-feeding port)."""
    return mechanical_scale(wavelength, l, x_zpf, gamma_m, a0) * 4.0 * t ** 2 / t_m ** 6


def cooperativity_msi(
    r_ms: float, gamma_ms: float, omega_m: float, l: float, wavelength: float,
    x_zpf: float, gamma_m: float, a0: float = 1.0,
) -> float:
    """MSI cooperativity in the unresolved-sideband regime:
    C = 2 M r_ms^2 (2 omega_m / gamma_ms)^2."""
    m_scale = mechanical_scale(wavelength, l, x_zpf, gamma_m, a0)
    return 2.0 * m_scale * r_ms ** 2 * (2.0 * omega_m / gamma_ms) ** 2


def cooperativity_mate(
    t: float, t_m: float, omega_m: float, l: float, wavelength: float,
    x_zpf: float, gamma_m: float, a0: float = 1.0,
) -> float:
    """MATE cooperativity at its zero-dispersive point in the
    unresolved-sideband regime: C = M (t^2/t_m^2) (2 omega_m / gamma_mate)^2
    with gamma_mate = c t^2 / (2 l)."""
    gamma_mate = C_LIGHT * t ** 2 / (2.0 * l)
    m_scale = mechanical_scale(wavelength, l, x_zpf, gamma_m, a0)
    return m_scale * (t / t_m) ** 2 * (2.0 * omega_m / gamma_mate) ** 2


def cooperativity(system: str, **params: float) -> float:
    """Dispatch to the per-system cooperativity closed form.

    system is one of "mos", "msi", "mate"; params are forwarded to the
    matching cooperativity_* function.
    """
    table = {
        "mos": cooperativity_mos,
        "msi": cooperativity_msi,
        "mate": cooperativity_mate,
    }
    try:
        func = table[system.lower()]
    except KeyError:
        raise ValueError(f"unknown system {system!r}; expected mos, msi, or mate")
    return func(**params)
