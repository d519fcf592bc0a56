"""Self-contained oracle checks: unitarity, finite differences,
closed-form/matrix agreement, resonance bracketing, and limit reductions.

Every check re-derives its reference by an independent route (matrix
elimination, five-point central differences, bracketed root finding) and
never trusts the closed form it is checking.  Failures are reported, not
raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import mate as mate_mod
from . import mos as mos_mod
from . import msi as msi_mod
from . import noise as noise_mod
from .constants import C_LIGHT
from .datasets import reproduce_figure
from .elements import (
    ElementSpec,
    compose_synthetic,
    compose_synthetic_by_elimination,
    element_scattering,
    synthetic_response,
)
from .numerics import bisect, bracket_roots, central_diff_5pt


@dataclass(frozen=True)
class ToleranceProfile:
    """Check tolerances; "strict" tightens where double precision allows."""

    name: str = "default"
    unitarity: float = 1e-10
    constraint: float = 1e-12
    matrix_vs_closed_T: float = 1e-10
    matrix_vs_closed_tan_mu: float = 1e-8
    elimination_entry: float = 1e-12
    derivative_rel: float = 1e-6
    locus_psi: float = 1e-9
    locus_phi0_scale: float = 3.0       # x t^2/t_m^2 relative window
    limit_values: float = 1e-12
    noise_general_rel: float = 1e-4
    resonance_k_rel: float = 1e-10
    mate_dkdx_rel: float = 1e-4
    mos_resonance_rel: float = 1e-3
    regime_rel: float = 1e-2


PROFILES: dict[str, ToleranceProfile] = {
    "default": ToleranceProfile(),
    "strict": ToleranceProfile(
        name="strict",
        unitarity=1e-12,
        matrix_vs_closed_T=1e-12,
        matrix_vs_closed_tan_mu=1e-10,
        elimination_entry=1e-13,
        derivative_rel=1e-7,
        locus_psi=1e-10,
        resonance_k_rel=1e-11,
    ),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return (
            f"{status}  {self.name}: measured {self.measured:.3e} "
            f"vs tolerance {self.tolerance:.3e}{extra}"
        )


@dataclass
class ValidationReport:
    suite: str
    profile: str
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = [c.line() for c in self.checks]
        n_fail = sum(not c.passed for c in self.checks)
        out.append(
            f"{'PASS' if self.passed else 'FAIL'}  suite={self.suite} "
            f"profile={self.profile}: {len(self.checks) - n_fail}/{len(self.checks)} checks passed"
        )
        return out


def _random_pair(rng: np.random.Generator) -> tuple[ElementSpec, ElementSpec]:
    t = float(rng.uniform(0.01, 0.99))
    t_m = float(rng.uniform(0.01, 0.99))
    phi_r = float(rng.uniform(-math.pi, math.pi))
    return ElementSpec.mirror(t), ElementSpec.membrane(t_m, phi_r=phi_r)


def _check_unitarity(rng: np.random.Generator, tol: ToleranceProfile,
                     samples: int) -> CheckResult:
    worst = 0.0
    for _ in range(samples):
        mirror, membrane = _random_pair(rng)
        worst = max(worst, element_scattering(mirror).unitarity_defect())
        worst = max(worst, element_scattering(membrane).unitarity_defect())
        s = compose_synthetic(
            mirror, membrane,
            x=float(rng.uniform(0.0, 2e-6)), k=float(rng.uniform(1e6, 1e7)),
        )
        worst = max(worst, s.unitarity_defect())
    return CheckResult("unitarity", worst <= tol.unitarity, worst, tol.unitarity,
                       f"{samples} random element/tandem matrices")


def _check_elimination(rng: np.random.Generator, tol: ToleranceProfile) -> CheckResult:
    worst = 0.0
    for _ in range(200):
        mirror, membrane = _random_pair(rng)
        x = float(rng.uniform(0.0, 2e-6))
        k = float(rng.uniform(1e6, 1e7))
        a = compose_synthetic(mirror, membrane, x, k).as_array()
        b = compose_synthetic_by_elimination(mirror, membrane, x, k).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("tandem_closed_vs_elimination", worst <= tol.elimination_entry,
                       worst, tol.elimination_entry)


def _check_closed_vs_matrix(rng: np.random.Generator, tol: ToleranceProfile) -> CheckResult:
    worst_t = 0.0
    worst_mu = 0.0
    k = 7.0e6
    for _ in range(1000):
        t_m = float(rng.uniform(0.2, 0.9))
        t = float(rng.uniform(0.05, 0.8)) * t_m
        psi = float(rng.uniform(0.0, 2.0 * math.pi))
        mirror = ElementSpec.mirror(t)
        membrane = ElementSpec.membrane(t_m)
        x = (psi - membrane.phi_r) / (2.0 * k) % (math.pi / k)
        s = compose_synthetic(mirror, membrane, x, k)
        resp = synthetic_response(2.0 * k * x + membrane.phi_r, mirror, membrane)
        worst_t = max(worst_t, abs(resp.T - abs(s.m11) ** 2))
        worst_mu = max(
            worst_mu, abs(math.tan(resp.mu) - math.tan(np.angle(-s.m21)))
        )
    ok = worst_t <= tol.matrix_vs_closed_T and worst_mu <= tol.matrix_vs_closed_tan_mu
    return CheckResult(
        "closed_form_vs_matrix", ok, max(worst_t, worst_mu),
        max(tol.matrix_vs_closed_T, tol.matrix_vs_closed_tan_mu),
        f"T defect {worst_t:.2e}, tan(mu) defect {worst_mu:.2e}",
    )


def _check_response_derivatives(rng: np.random.Generator,
                                tol: ToleranceProfile) -> CheckResult:
    worst = 0.0
    for _ in range(60):
        t_m = float(rng.uniform(0.2, 0.9))
        t = float(rng.uniform(0.1, 0.8)) * t_m
        mirror = ElementSpec.mirror(t)
        membrane = ElementSpec.membrane(t_m)
        psi = float(rng.uniform(0.4, math.pi - 0.4))
        if rng.uniform() < 0.5:
            psi += math.pi  # sample both halves, away from sin(psi) = 0
        resp = synthetic_response(psi, mirror, membrane)
        d_t = central_diff_5pt(
            lambda p: synthetic_response(p, mirror, membrane).T, psi, 1e-4
        )
        d_mu = central_diff_5pt(
            lambda p: synthetic_response(p, mirror, membrane).mu, psi, 1e-4
        )
        worst = max(worst, abs(resp.dT_dpsi - d_t) / abs(d_t))
        worst = max(worst, abs(resp.dmu_dpsi - d_mu) / abs(d_mu))
    return CheckResult("response_derivatives_fd", worst <= tol.derivative_rel,
                       worst, tol.derivative_rel, "dT/dpsi, dmu/dpsi vs 5-point FD")


def _check_msi_derivatives(rng: np.random.Generator, tol: ToleranceProfile) -> CheckResult:
    worst = 0.0
    k = 7.0e6
    for _ in range(60):
        cfg = msi_mod.MsiConfig.balanced(
            r_ms=float(rng.uniform(0.3, 0.95)),
            l=1e-4, k=k,
            x=float(rng.uniform(0.15, 0.6)) * math.pi / (2.0 * k),
            Tb_sq=float(rng.uniform(0.35, 0.65)),
        )
        cpl = msi_mod.msi_couplings(cfg)
        d_tau = central_diff_5pt(
            lambda x: msi_mod.msi_effective_mirror(replace(cfg, x=x)).tau, cfg.x, 1e-12
        )
        d_mu = central_diff_5pt(
            lambda x: float(np.angle(msi_mod.msi_effective_mirror(replace(cfg, x=x)).rho)),
            cfg.x, 1e-12,
        )
        if abs(d_tau) > 1e-3 * 2 * k * cfg.r_ms:
            worst = max(worst, abs(cpl.dtau_dx - d_tau) / abs(d_tau))
        if abs(d_mu) > 1e-3 * 2 * k * cfg.r_ms:
            worst = max(worst, abs(cpl.dmu_dx - d_mu) / abs(d_mu))
    return CheckResult("msi_derivatives_fd", worst <= tol.derivative_rel,
                       worst, tol.derivative_rel, "dtau/dx, dmu/dx vs 5-point FD")


def _check_locus_oracle(rng: np.random.Generator, tol: ToleranceProfile,
                        samples: int) -> CheckResult:
    worst_psi = 0.0
    worst_phi = 0.0
    for _ in range(samples):
        t_m = float(rng.uniform(0.03, 0.15))
        t = float(rng.uniform(1.05 * t_m ** 2, 0.2 * t_m))
        mirror = ElementSpec.mirror(t)
        membrane = ElementSpec.membrane(t_m)
        locus = mos_mod.zero_dispersive_locus(t, t_m)

        def dmu(psi: float) -> float:
            return synthetic_response(psi, mirror, membrane).dmu_dpsi

        grid = np.linspace(1e-3, 2.0 * math.pi - 1e-3, 4001)
        brackets = bracket_roots(dmu, list(grid))
        roots = sorted(
            bisect(dmu, a, b, f_lo=fa, f_hi=fb, ftol=0.0, xtol=1e-13)
            for a, b, fa, fb in brackets
        )
        if len(roots) != 2:
            return CheckResult("zero_dispersive_locus_oracle", False,
                               float(len(roots)), 2.0,
                               f"expected 2 sign changes of dmu/dpsi, found {len(roots)}")
        worst_psi = max(
            worst_psi,
            abs(roots[0] - locus.psi_star[0]),
            abs(roots[1] - locus.psi_star[1]),
        )
        phi0 = t_m ** 2 / 4.0
        half = (locus.psi_star[1] - math.pi) / 2.0
        worst_phi = max(worst_phi, abs(half - phi0) / phi0 / (t ** 2 / t_m ** 2))
    ok = worst_psi <= tol.locus_psi and worst_phi <= tol.locus_phi0_scale
    return CheckResult(
        "zero_dispersive_locus_oracle", ok, worst_psi, tol.locus_psi,
        f"|dpsi| {worst_psi:.2e}; (psi*-pi)/2 vs Phi0 within "
        f"{worst_phi:.2f} x t^2/t_m^2 (limit {tol.locus_phi0_scale})",
    )


def _check_mos_limits(tol: ToleranceProfile) -> CheckResult:
    cfg = mos_mod.MosConfig(l=1e-4, wavelength=0.85e-6, t=0.014, t_m=0.1, x=0.0)
    worst = 0.0
    at0 = mos_mod.operating_point(cfg.at_phi(0.0))
    worst = max(worst, abs(at0.g_omega0 / at0.g_00 - 1.0), abs(at0.g_gamma0),
                abs(at0.gamma / cfg.gamma0 - 1.0))
    at1 = mos_mod.operating_point(cfg.at_phi(cfg.phi0))
    worst = max(worst, abs(at1.g_omega0 / at1.g_00), abs(at1.g_gamma0 / at1.g_00 - 0.5),
                abs(at1.gamma / cfg.gamma0 - 0.5))
    sp = mos_mod.two_port_setpoint(cfg)
    worst = max(worst, abs(sp.T_sym - 2.0 * cfg.t ** 2 / cfg.t_m ** 2),
                abs(sp.finesse * sp.T_sym / math.pi - 1.0),
                abs(cfg.k * sp.delta_x - cfg.phi0))
    return CheckResult("mos_limit_values", worst <= tol.limit_values, worst,
                       tol.limit_values, "Phi=0 and Phi=Phi0 reductions, two-port setpoint")


def _check_noise_general(tol: ToleranceProfile) -> CheckResult:
    gamma = 1.0e8
    worst = 0.0
    for g_w, g_g, g3 in ((0.0, 5.0, 0.0), (3.0, 4.0, 0.5 * gamma), (7.0, 2.0, gamma)):
        rates = noise_mod.PortRates(gamma, gamma, g3)
        report = noise_mod.homodyne_spectra(
            rates, noise_mod.DriveConfig(a0=1.0), g_w, g_g
        )
        s_xx, s_ff = noise_mod.general_spectra(
            rates, noise_mod.DriveConfig(delta=0.0, omega=1e-6 * gamma, a0=1.0),
            g_w, g_g, report.theta_opt,
        )
        worst = max(worst, abs(s_xx / report.s_xx_imp - 1.0),
                    abs(s_ff / report.s_ff - 1.0))
    return CheckResult("noise_general_vs_closed", worst <= tol.noise_general_rel,
                       worst, tol.noise_general_rel,
                       "general solver at omega = 1e-6 gamma")


def _check_figures(tol: ToleranceProfile) -> CheckResult:
    fig2 = reproduce_figure("fig2")
    fig3 = reproduce_figure("fig3")
    fig4 = reproduce_figure("fig4")
    worst = 0.0
    u = fig2.columns["phi_over_phi0"]
    mid = u.index(0.0)
    one = u.index(1.0)
    worst = max(worst, abs(fig2.columns["g_omega0_over_g00"][mid] - 1.0))
    worst = max(worst, abs(fig2.columns["g_omega0_over_g00"][one]))
    worst = max(worst, abs(fig2.columns["g_gamma0_over_g00"][one] - 0.5))
    worst = max(worst, abs(fig3.columns["gamma_over_gamma0"][one] - 0.5))
    xi = fig4.columns["xi"]
    zero = xi.index(0.0)
    for frac, value in ((0.0, 1.0), (0.5, 1.5625), (1.0, 2.25)):
        col = fig4.columns[f"product_normalized_loss{int(100 * frac)}"]
        worst = max(worst, abs(col[zero] - value))
    return CheckResult("figure_values", worst <= tol.limit_values, worst,
                       tol.limit_values, "fig2/fig3/fig4 anchor points")


def _check_mate_resonances(tol: ToleranceProfile) -> CheckResult:
    cfg = mate_mod.MateConfig(l=1e-4, x=1e-6, t=0.014, t_m=0.1,
                              wavelength=0.85e-6, phi_r=math.pi)
    fsr = math.pi / cfg.l
    k0 = cfg.k
    roots = mate_mod.mate_resonances(cfg, (k0 - fsr, k0 + fsr))
    worst_res = max(abs(mate_mod.resonance_residual(cfg, r)) for r in roots)
    worst_k = 0.0
    for root in roots:
        branch = mate_mod.classify_branch(cfg, root)
        k_branch = mate_mod.branch_wavevector(cfg, branch, root)
        worst_k = max(worst_k, abs(k_branch - root) / root)
    ok = worst_res <= 1e-12 and worst_k <= tol.resonance_k_rel
    return CheckResult(
        "mate_resonance_oracle", ok, worst_k, tol.resonance_k_rel,
        f"{len(roots)} roots over 2 FSR, max residual {worst_res:.2e}",
    )


def _check_mate_dkdx(tol: ToleranceProfile) -> CheckResult:
    cfg = mate_mod.MateConfig(l=1e-4, x=1e-6, t=0.014, t_m=0.1,
                              wavelength=0.85e-6, phi_r=math.pi)
    fsr = math.pi / cfg.l
    roots = mate_mod.mate_resonances(cfg, (cfg.k - fsr, cfg.k + fsr))
    worst = 0.0
    for root in roots:
        closed = mate_mod.mate_dispersive_constant(cfg, root).dk_dx
        numeric = mate_mod.dispersive_from_resonance(cfg, root)
        worst = max(worst, abs(closed - numeric) / abs(numeric))
    return CheckResult("mate_dkdx_oracle", worst <= tol.mate_dkdx_rel, worst,
                       tol.mate_dkdx_rel, "closed-form slope vs re-solved resonance")


def _check_mos_resonance(tol: ToleranceProfile) -> CheckResult:
    base = mos_mod.MosConfig(
        l=1e-4, wavelength=0.85e-6, t=0.0006, t_m=0.02, x=0.0,
        phi_r=math.pi - 1e-3,
    )
    worst = 0.0
    for frac in (0.0, 0.25, -0.5):
        cfg = base.at_phi(frac * base.phi0)
        k_c = mos_mod.solve_resonance(cfg)
        at_root = replace(cfg, wavelength=2.0 * math.pi / k_c)
        brute = mos_mod.dispersive_from_resonance(cfg)
        closed = mos_mod.operating_point(at_root).g_omega0
        exact = mos_mod.exact_corrections(at_root).g_omega_exact
        worst = max(worst, abs(brute / closed - 1.0))
        worst = max(worst, abs(brute / exact - 1.0))
    return CheckResult("mos_resonance_oracle", worst <= tol.mos_resonance_rel,
                       worst, tol.mos_resonance_rel,
                       "brute-force d(omega_c)/dx vs closed forms")


def _check_regime(rng: np.random.Generator, tol: ToleranceProfile) -> CheckResult:
    # gap grows in half-wavelength steps (branch N) at fixed tandem phase,
    # staying below 0.9 x the thin-tandem bound; long cavity so many
    # branches fit under the bound
    worst = 0.0
    wavelength = 0.85e-6
    length = 0.1
    for _ in range(60):
        t_m = float(rng.uniform(0.02, 0.06))
        t = float(rng.uniform(0.02, 0.1)) * t_m
        base = mos_mod.MosConfig(
            l=length, wavelength=wavelength, t=t, t_m=t_m, x=0.0,
            phi_r=math.pi - 1e-3,
        )
        phi = float(rng.uniform(-0.6, 0.6)) * base.phi0
        gap_cap = 0.9 * 0.01 * base.thin_tandem_bound()
        n_max = int((gap_cap - base.x_tilde - phi / base.k) / (wavelength / 2.0))
        cfg = replace(base, N=int(rng.integers(0, max(1, n_max + 1)))).at_phi(phi)
        resp = synthetic_response(cfg.psi, cfg.mirror, cfg.membrane)
        thin_gamma = C_LIGHT * resp.T / (2.0 * cfg.l)
        thin_g = -(C_LIGHT * cfg.k / cfg.l) * resp.dmu_dpsi
        corr = mos_mod.exact_corrections(cfg)
        worst = max(worst, abs(corr.gamma_exact / thin_gamma - 1.0))
        worst = max(worst, abs(corr.g_omega_exact / thin_g - 1.0))
    return CheckResult("thin_tandem_regime", worst <= tol.regime_rel, worst,
                       tol.regime_rel,
                       "finite-gap corrections below 1e-2 under the gap bound")


def run_validation(
    suite: str = "fast",
    profile: ToleranceProfile | str = "default",
    seed: int = 20240817,
) -> ValidationReport:
    """Run the oracle checks.  suite "fast" covers the closed-form algebra;
    "full" adds the resonance-bracketing and regime oracles."""
    if isinstance(profile, str):
        try:
            profile = PROFILES[profile]
        except KeyError:
            raise ValueError(f"unknown tolerance profile {profile!r}")
    if suite not in ("fast", "full"):
        raise ValueError(f"unknown suite {suite!r}; expected 'fast' or 'full'")
    rng = np.random.default_rng(seed)
    checks = [
        _check_unitarity(rng, profile, samples=1000 if suite == "full" else 300),
        _check_elimination(rng, profile),
        _check_closed_vs_matrix(rng, profile),
        _check_response_derivatives(rng, profile),
        _check_msi_derivatives(rng, profile),
        _check_locus_oracle(rng, profile, samples=100 if suite == "full" else 20),
        _check_mos_limits(profile),
        _check_noise_general(profile),
        _check_figures(profile),
    ]
    if suite == "full":
        checks += [
            _check_mate_resonances(profile),
            _check_mate_dkdx(profile),
            _check_mos_resonance(profile),
            _check_regime(rng, profile),
        ]
    return ValidationReport(suite=suite, profile=profile.name, checks=checks)
