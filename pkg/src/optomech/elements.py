"""Exact scattering algebra for lossless mirrors, membranes, and the
mirror+membrane tandem ("synthetic mirror").

Conventions
-----------
A 2x2 scattering matrix maps the two incoming wave amplitudes onto the two
outgoing ones, (out_far, out_near) = S (in_near, in_far), where "near" is
the mirror side of the element (the cavity side for a membrane-outside
cavity) and "far" the membrane side.  Diagonal entries are transmissions,
off-diagonal entries reflections.  All amplitudes are referenced at the
mirror plane.

The mirror matrix is fixed to

    [[ i t, -r ],
     [ -r , i t]]

(transmission phase pi/2, reflection phase pi).  The membrane carries free
transmission/reflection phases phi_t, phi_r constrained by
exp(2i(phi_r - phi_t)) = -1, and its matrix is

    [[ t_m e^{i phi_t}, r_m e^{i phi_r} ],
     [ r_m e^{i phi_r}, t_m e^{i phi_t} ]].

The tandem phase is psi = 2 k x + phi_r, with x the mirror-membrane gap.
The reflection phase of the tandem, mu(psi), is the argument of the
negated cavity-side reflection amplitude, -m21; with psi reduced to
(-pi, pi] this branch is continuous over one period and vanishes at the
transparency maximum psi = pi when the membrane is less reflective than
the mirror (r_m < r).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, InvalidElement

TWO_PI = 2.0 * math.pi

#: losslessness / phase-constraint tolerance (see ElementSpec.validate)
CONSTRAINT_TOL = 1e-12


def reduce_phase(psi: float) -> float:
    """Reduce a phase to (-pi, pi] using the exact IEEE remainder."""
    out = math.remainder(psi, TWO_PI)
    if out <= -math.pi:  # remainder may return -pi for boundary inputs
        out += TWO_PI
    return out


@dataclass(frozen=True)
class ElementSpec:
    """Lossless optical element: a fixed-phase mirror or a phased membrane.

    t, r are amplitude transmission/reflection magnitudes with t^2 + r^2 = 1.
    Phases are only meaningful for membranes; the mirror matrix has its
    phases built in.
    """

    kind: str  # "mirror" | "membrane"
    t: float
    r: float
    phi_t: float = 0.0
    phi_r: float = 0.0

    @classmethod
    def mirror(cls, t: float, r: float | None = None) -> "ElementSpec":
        if r is None:
            r = math.sqrt(max(0.0, 1.0 - t * t))
        return cls(kind="mirror", t=t, r=r)

    @classmethod
    def membrane(
        cls,
        t_m: float,
        phi_r: float = math.pi / 2,
        phi_t: float | None = None,
        r_m: float | None = None,
    ) -> "ElementSpec":
        """Membrane with reflection phase phi_r; phi_t defaults to
        phi_r - pi/2 so the phase constraint holds identically."""
        if r_m is None:
            r_m = math.sqrt(max(0.0, 1.0 - t_m * t_m))
        if phi_t is None:
            phi_t = phi_r - math.pi / 2
        return cls(kind="membrane", t=t_m, r=r_m, phi_t=phi_t, phi_r=phi_r)

    def validate(self, tol: float = CONSTRAINT_TOL) -> None:
        """Raise InvalidElement on a constraint violation.

        Checks 0 <= t, r <= 1, t^2 + r^2 = 1 (within tol) and, for
        membranes, exp(2i(phi_r - phi_t)) = -1 (within tol).
        """
        if self.kind not in ("mirror", "membrane"):
            raise InvalidElement(f"unknown element kind {self.kind!r}")
        if not (0.0 <= self.t <= 1.0 and 0.0 <= self.r <= 1.0):
            raise InvalidElement(
                f"amplitudes out of range: t={self.t}, r={self.r}"
            )
        defect = abs(self.t * self.t + self.r * self.r - 1.0)
        if defect > tol:
            raise InvalidElement(
                f"t^2 + r^2 deviates from 1 by {defect:.3e} (tol {tol:.1e})"
            )
        if self.kind == "membrane":
            phase_defect = abs(cmath.exp(2j * (self.phi_r - self.phi_t)) + 1.0)
            if phase_defect > tol:
                raise InvalidElement(
                    "membrane phase constraint exp(2i(phi_r-phi_t)) = -1 "
                    f"violated by {phase_defect:.3e} (tol {tol:.1e})"
                )


@dataclass(frozen=True)
class ScatteringMatrix:
    """2x2 complex scattering matrix, (out_far, out_near) = S (in_near, in_far).

    For lossless elements S is unitary; |m11| = |m22| (the two power
    transmissions are equal) and |m12| = |m21|.
    """

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def unitarity_defect(self) -> float:
        """Max entrywise deviation of S^dagger S from the identity."""
        s = self.as_array()
        return float(np.max(np.abs(s.conj().T @ s - np.eye(2))))

    @property
    def transmission(self) -> float:
        """Power transmission |m11|^2 (identical in both directions)."""
        return abs(self.m11) ** 2


def element_scattering(spec: ElementSpec, tol: float = CONSTRAINT_TOL) -> ScatteringMatrix:
    """Scattering matrix of a single validated element."""
    spec.validate(tol)
    if spec.kind == "mirror":
        return ScatteringMatrix(1j * spec.t, -spec.r, -spec.r, 1j * spec.t)
    tm = spec.t * cmath.exp(1j * spec.phi_t)
    rm = spec.r * cmath.exp(1j * spec.phi_r)
    return ScatteringMatrix(tm, rm, rm, tm)


def _check_tandem_args(mirror: ElementSpec, membrane: ElementSpec,
                       x: float, k: float, tol: float) -> None:
    mirror.validate(tol)
    membrane.validate(tol)
    if mirror.kind != "mirror" or membrane.kind != "membrane":
        raise InvalidElement(
            f"tandem needs (mirror, membrane), got ({mirror.kind}, {membrane.kind})"
        )
    if x < 0.0:
        raise ValueError(f"gap must be non-negative, got x={x}")
    if k <= 0.0:
        raise ValueError(f"wavevector must be positive, got k={k}")


def compose_synthetic(
    mirror: ElementSpec,
    membrane: ElementSpec,
    x: float,
    k: float,
    tol: float = CONSTRAINT_TOL,
) -> ScatteringMatrix:
    """Closed-form scattering matrix of the mirror+membrane tandem.

    With psi = 2 k x + phi_r and D = 1 + r r_m e^{i psi}:

        m11 = m22 = i t t_m e^{i phi_t} / D
        m12 = e^{2 i phi_r} (r + r_m e^{-i psi}) / D
        m21 = -(r + r_m e^{i psi}) / D

    The cavity-side reflection (mirror side) is m21.
    """
    _check_tandem_args(mirror, membrane, x, k, tol)
    t, r = mirror.t, mirror.r
    t_m, r_m = membrane.t, membrane.r
    psi = 2.0 * k * x + membrane.phi_r
    e_psi = cmath.exp(1j * psi)
    denom = 1.0 + r * r_m * e_psi
    if abs(denom) < 1e-150:
        raise DegenerateDenominator(
            "tandem denominator vanishes (perfect reflectors in anti-resonance)"
        )
    trans = 1j * t * t_m * cmath.exp(1j * membrane.phi_t) / denom
    m12 = cmath.exp(2j * membrane.phi_r) * (r + r_m / e_psi) / denom
    m21 = -(r + r_m * e_psi) / denom
    return ScatteringMatrix(trans, m12, m21, trans)


def compose_synthetic_by_elimination(
    mirror: ElementSpec,
    membrane: ElementSpec,
    x: float,
    k: float,
    tol: float = CONSTRAINT_TOL,
) -> ScatteringMatrix:
    """Tandem matrix obtained by numerically eliminating the internal waves.

    Sets up the four amplitude relations at the mirror plane -- mirror
    scattering, membrane scattering, and the e^{+-ikx} propagation phases
    between the planes -- and solves the resulting linear system for unit
    inputs on either port.  Serves as an independent route against the
    closed form of compose_synthetic.
    """
    _check_tandem_args(mirror, membrane, x, k, tol)
    t, r = mirror.t, mirror.r
    tm_ph = membrane.t * cmath.exp(1j * membrane.phi_t)
    rm_ph = membrane.r * cmath.exp(1j * membrane.phi_r)
    prop = cmath.exp(1j * k * x)

    # unknowns w = [g1, u1, u3, g2]; inputs (u2, g3) at the mirror plane
    #   g1 = i t u2 - r u1                  (mirror, toward membrane)
    #   g2 = -r u2 + i t u1                 (mirror, back out)
    #   u3 * prop = tm g1 prop + rm g3 / prop   (membrane, transmitted out)
    #   u1 = prop * (rm g1 prop + tm g3 / prop) (membrane, back toward mirror)
    a = np.array(
        [
            [1.0, r, 0.0, 0.0],
            [0.0, -1j * t, 0.0, 1.0],
            [-tm_ph * prop, 0.0, prop, 0.0],
            [-rm_ph * prop * prop, 1.0, 0.0, 0.0],
        ],
        dtype=complex,
    )
    cols = []
    for u2, g3 in ((1.0, 0.0), (0.0, 1.0)):
        b = np.array(
            [1j * t * u2, -r * u2, rm_ph * g3 / prop, tm_ph * g3], dtype=complex
        )
        w = np.linalg.solve(a, b)
        cols.append((w[2], w[3]))  # (u3, g2)
    return ScatteringMatrix(cols[0][0], cols[1][0], cols[0][1], cols[1][1])


@dataclass(frozen=True)
class SyntheticMirrorResponse:
    """Tandem response at phase psi: power transmission T, reflection phase
    mu = arg(-m21), and their psi-derivatives."""

    psi: float
    T: float
    mu: float
    dT_dpsi: float
    dmu_dpsi: float


def synthetic_response(
    psi: float,
    mirror: ElementSpec,
    membrane: ElementSpec,
    tol: float = CONSTRAINT_TOL,
) -> SyntheticMirrorResponse:
    """Closed-form synthetic-mirror response at tandem phase psi.

        T(psi)       = t^2 t_m^2 / (1 + r^2 r_m^2 + 2 r r_m cos psi)
        tan mu(psi)  = r_m t^2 sin psi /
                       (r_m (1 + r^2) cos psi + r (1 + r_m^2))
        dT/dpsi      = 2 r r_m t^2 t_m^2 sin psi / (...)^2
        dmu/dpsi     = r_m t^2 (r_m (1 + r^2) + r (1 + r_m^2) cos psi) /
                       ((r^2 + r_m^2 + 2 r r_m cos psi) (1 + r^2 r_m^2 + 2 r r_m cos psi))

    mu is resolved with atan2 on the rationalized reflection, which picks
    the quadrant making mu(psi) continuous on the reduced period and equal
    to arg(-m21) of compose_synthetic.
    """
    mirror.validate(tol)
    membrane.validate(tol)
    if mirror.kind != "mirror" or membrane.kind != "membrane":
        raise InvalidElement(
            f"response needs (mirror, membrane), got ({mirror.kind}, {membrane.kind})"
        )
    t, r = mirror.t, mirror.r
    t_m, r_m = membrane.t, membrane.r
    psi_red = reduce_phase(psi)
    cos_psi = math.cos(psi_red)
    sin_psi = math.sin(psi_red)

    denom = 1.0 + r * r * r_m * r_m + 2.0 * r * r_m * cos_psi
    if denom < 1e-300:
        raise DegenerateDenominator(
            "transmission denominator vanishes (r = r_m = 1, psi = pi)"
        )
    T = t * t * t_m * t_m / denom
    dT = 2.0 * r * r_m * t * t * t_m * t_m * sin_psi / (denom * denom)

    # rationalized cavity-side reflection: -m21 = (P + iQ) / |1 + r r_m e^{i psi}|^2
    p = r * (1.0 + r_m * r_m) + r_m * (1.0 + r * r) * cos_psi
    q = r_m * t * t * sin_psi
    refl_sq = r * r + r_m * r_m + 2.0 * r * r_m * cos_psi  # |r + r_m e^{i psi}|^2
    if refl_sq <= 0.0:
        raise DegenerateDenominator(
            "reflection amplitude vanishes (r = r_m, psi = pi); mu undefined"
        )
    mu = math.atan2(q, p)
    dmu = (
        r_m * t * t * (r_m * (1.0 + r * r) + r * (1.0 + r_m * r_m) * cos_psi)
        / (refl_sq * denom)
    )
    return SyntheticMirrorResponse(psi=psi_red, T=T, mu=mu, dT_dpsi=dT, dmu_dpsi=dmu)
