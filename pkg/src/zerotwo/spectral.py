"""Resolvent-set geometry for cosine generators.

Two regions matter.  A growth bound ``||C(t)|| <= M e^{omega t}`` confines
the spectrum of ``A`` to the inside of the parabola ``{lam^2 : Re lam = omega}``.
When in addition ``||C(t) - I|| < c < 2`` for ``0 <= t < t0``, every
``mu = lam^2`` with ``|lam| > r_c`` and ``|arg lam|`` in ``(phi_c, pi/2]``
is a resolvent point with ``||mu R(mu, A)|| <= M_c``.  The second statement is
checked here point by point, following the chain: choose ``s_lam`` so that
``lam s_lam`` is close to ``i pi``, note ``cosh(lam s_lam)`` is then close to
``cosh(i pi) = -1``, which is a resolvent point of every ``C(t)`` near 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRegionError, InvalidInputError, PreconditionError
from .linalg import identity, op_norm, solve, spectral_radius
from .resolvent import cosh_resolvent, cosine_sup

BISECTION_TOL = 1e-6
BOUNDARY_ANGLES = 2048
CERTIFICATE_STEP = 1e-4
PRECONDITION_GRID = 201


@dataclass(frozen=True)
class ParabolaRegion:
    omega: float

    def contains(self, mu: complex) -> bool:
        return parabola_contains(self, mu)


def parabola_contains(p: ParabolaRegion, mu: complex) -> bool:
    """Strict interior of ``{lam^2 : Re lam = omega}``: ``x < omega^2 - y^2 / (4 omega^2)``."""
    if not p.omega > 0:
        raise DegenerateRegionError(
            "omega = 0 collapses the parabola onto the closed negative real axis"
        )
    mu = complex(mu)
    w2 = p.omega * p.omega
    return mu.real < w2 - mu.imag**2 / (4.0 * w2)


def _target_radius(c: float) -> float:
    return (2.0 - c) / 2.0


def _check_c(c: float) -> float:
    c = float(c)
    if not 0.0 < c < 2.0:
        raise InvalidInputError(f"c must lie in (0, 2), got {c!r}")
    return c


def cosh_disk_deviation(radius: float, angles: int = BOUNDARY_ANGLES) -> float:
    """``max_theta |cosh(i pi + radius e^{i theta}) + 1|`` over sampled boundary angles.

    By the maximum principle this is the maximum over the whole closed disk.
    """
    theta = np.linspace(0.0, 2.0 * np.pi, angles, endpoint=False)
    z = 1j * np.pi + radius * np.exp(1j * theta)
    return float(np.max(np.abs(np.cosh(z) + 1.0)))


def find_r_tilde(c: float) -> float:
    """Largest radius whose closed disk about ``i pi`` maps under cosh into ``B_{(2-c)/2}(-1)``.

    Bisection to 1e-6 on the sampled boundary maximum.
    """
    c = _check_c(c)
    target = _target_radius(c)
    lo, hi = 0.0, math.pi
    while hi - lo > BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if cosh_disk_deviation(mid) < target:
            lo = mid
        else:
            hi = mid
    return lo


def r_tilde_certificate(c: float, r_tilde: float) -> tuple[bool, bool]:
    """``(holds at r_tilde, fails at r_tilde + 1e-4)``."""
    target = _target_radius(_check_c(c))
    return (cosh_disk_deviation(r_tilde) < target,
            cosh_disk_deviation(r_tilde + CERTIFICATE_STEP) >= target)


@dataclass(frozen=True)
class SpectralRegionParams:
    c: float
    t0: float
    r_tilde: float
    phi_c: float
    r_c: float
    m_c: float

    def check(self) -> None:
        if not math.pi * math.cos(self.phi_c) < self.r_tilde:
            raise InvalidInputError("need pi * cos(phi_c) < r_tilde")
        if not math.pi / self.r_c < self.t0:
            raise InvalidInputError("need pi / r_c < t0")

    def to_dict(self) -> dict:
        return dict(c=self.c, t0=self.t0, r_tilde=self.r_tilde, phi_c=self.phi_c,
                    r_c=self.r_c, m_c=self.m_c)


def region_constant(c: float, cos_sup: float) -> float:
    """``M_c = sup ||C|| * 2 pi e^pi * 2/(2-c)``, valid for every ``mu`` in the region."""
    return cos_sup * 2.0 * math.pi * math.exp(math.pi) * 2.0 / (2.0 - c)


def region_params(c: float, t0: float, fam=None) -> SpectralRegionParams:
    """Region constants with 1% margins on both strict inequalities.

    ``M_c`` needs ``sup_{[0, t0]} ||C(t)||``; without a family it is computed
    with the smallest possible value, 1.
    """
    c = _check_c(c)
    t0 = float(t0)
    if not (t0 > 0 and math.isfinite(t0)):
        raise InvalidInputError(f"t0 must be positive and finite, got {t0!r}")
    r_tilde = find_r_tilde(c)
    phi_c = math.acos(min(0.99 * r_tilde / math.pi, 0.99))
    r_c = 1.01 * math.pi / t0
    cos_sup = 1.0 if fam is None else cosine_sup(fam, t0)
    params = SpectralRegionParams(c, t0, r_tilde, phi_c, r_c, region_constant(c, cos_sup))
    params.check()
    return params


def s_lambda(lam: complex) -> float:
    """Real ``s`` minimizing ``|i pi - lam s|``: ``pi sin(arg lam) / |lam|``."""
    lam = complex(lam)
    if lam == 0:
        raise InvalidInputError("lambda must be nonzero")
    return math.pi * math.sin(cmath.phase(lam)) / abs(lam)


def in_region_rc(mu: complex, params: SpectralRegionParams) -> bool:
    lam = cmath.sqrt(complex(mu))
    if abs(lam) <= params.r_c:
        return False
    arg = abs(cmath.phase(lam))
    return params.phi_c < arg <= math.pi / 2


def sample_region(params: SpectralRegionParams, n: int, rng: np.random.Generator,
                  radius_factor: float = 4.0) -> list[complex]:
    """``n`` points ``mu = lam^2`` of the region, with ``r_c < |lam| < radius_factor * r_c``."""
    out = []
    while len(out) < n:
        rho = params.r_c * rng.uniform(1.0, radius_factor)
        theta = rng.uniform(params.phi_c, math.pi / 2) * rng.choice([-1.0, 1.0])
        mu = (rho * cmath.exp(1j * theta)) ** 2
        if in_region_rc(mu, params):
            out.append(mu)
    return out


@dataclass(frozen=True)
class RegionPoint:
    mu: complex
    s_lambda: float
    disk_distance: float  # |i pi - lam s_lam|
    cosh_resolvent_norm: float  # ||R(cosh(lam s_lam), C(s_lam))||
    neumann_factor: float  # |cosh(lam s_lam) + 1| * ||R(-1, C(s_lam))||
    resolvent_norm: float  # ||mu R(mu, A)||
    bound: float  # M_c
    passed: bool

    csv_header = ("re_mu", "im_mu", "s_lambda", "resolvent_norm", "bound", "pass")

    def csv_row(self) -> tuple:
        return (self.mu.real, self.mu.imag, self.s_lambda, self.resolvent_norm, self.bound,
                self.passed)


@dataclass(frozen=True)
class RegionReport:
    params: SpectralRegionParams
    points: list[RegionPoint]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.points)


def verify_region_bound(fam, params: SpectralRegionParams, sample) -> RegionReport:
    """Walk the resolvent estimate for every ``mu`` in ``sample``.

    Raises :class:`PreconditionError` if some sampled ``mu`` is outside the
    region or if ``||C(t) - I|| < c`` fails on the grid over ``[0, t0)``.  The
    bound ``M_c`` is recomputed from this family's ``sup ||C||`` on ``[0, t0]``.
    """
    params.check()
    eye = identity(fam.dim)
    grid = np.linspace(0.0, params.t0, PRECONDITION_GRID, endpoint=False)
    worst = max(fam.distance_to_identity(t) for t in grid)
    if not worst < params.c:
        raise PreconditionError(
            f"||C(t) - I|| reaches {worst:.6g} >= c = {params.c} on [0, t0)"
        )
    m_c = region_constant(params.c, cosine_sup(fam, params.t0))
    cosh_cap = 2.0 / (2.0 - params.c) + 1e-6
    points = []
    for mu in sample:
        mu = complex(mu)
        if not in_region_rc(mu, params):
            raise PreconditionError(f"mu = {mu} is not in the region")
        lam = cmath.sqrt(mu)
        s = s_lambda(lam)
        dist = abs(1j * math.pi - lam * s)
        c_s = fam(s)
        rc = cosh_resolvent(fam, lam, s)
        rc_norm = op_norm(rc)
        r_minus_one = op_norm(solve(-eye - c_s, eye))
        neumann = abs(np.cosh(lam * s) + 1.0) * r_minus_one
        res_norm = op_norm(mu * solve(mu * eye - fam.a, eye))
        ok = (dist < params.r_tilde and abs(s) < params.t0 and rc_norm <= cosh_cap
              and neumann <= 0.5 and res_norm <= m_c)
        points.append(RegionPoint(mu, s, dist, rc_norm, neumann, res_norm, m_c, ok))
    return RegionReport(params=params, points=points)


@dataclass(frozen=True)
class BoundednessReport:
    r_star: float
    radii: list[float]
    measured_sup: float
    bound: float | None  # None when the Neumann series does not apply

    @property
    def passed(self) -> bool:
        return self.bound is None or self.measured_sup <= self.bound + 1e-6


def boundedness_diagnostic(fam, radius_samples, angles: int = 64) -> BoundednessReport:
    """Sup of ``||mu R(mu, A)||`` over circles ``|mu| = rho`` beyond ``R* = max(1, 2 rho(A))``.

    ``mu R(mu, A) = (I - A/mu)^{-1}``, so when every radius exceeds ``||A||``
    the Neumann series caps it by ``1 / (1 - ||A|| / min radius)``.
    """
    eye = identity(fam.dim)
    r_star = max(1.0, 2.0 * spectral_radius(fam.a))
    radii = sorted(float(r) for r in radius_samples if r > r_star)
    if not radii:
        raise InvalidInputError(f"no sampled radius exceeds R* = {r_star:.6g}")
    theta = np.linspace(0.0, 2.0 * np.pi, angles, endpoint=False)
    sup = 0.0
    for rho in radii:
        for mu in rho * np.exp(1j * theta):
            sup = max(sup, op_norm(mu * solve(mu * eye - fam.a, eye)))
    q = fam.gen.norm / radii[0]
    return BoundednessReport(r_star, radii, sup, 1.0 / (1.0 - q) if q < 1.0 else None)
