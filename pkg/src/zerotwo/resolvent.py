"""Operator-valued quadrature and the resolvent identities built on it.

The central object is the sine-like operator

    S(lam, s) = int_0^s sinh(lam (s - t)) C(t) dt,

which satisfies ``(lam^2 I - A) S = lam (cosh(lam s) I - C(s))``.  Whenever
``cosh(lam s)`` is not an eigenvalue of ``C(s)`` this produces the resolvent
``R(lam^2, A) = S R(cosh(lam s), C(s)) / lam`` without ever inverting
``lam^2 I - A`` itself.  The direct solve is kept as an oracle.

For semigroups the module also provides the truncated Laplace transform of
``T`` and the Cesaro integral ``B_t = int_0^t T(s) ds``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import AccuracyWarning, InvalidInputError, NotInResolventSetError
from .family import GrowthBound, growth_bound_estimate
from .linalg import identity, inverse, matrix_to_dict, min_singular_value, op_norm, solve

REFINE_TOL = 1e-9
INVERTIBLE_RTOL = 1e-10
LAPLACE_TAIL_TOL = 1e-10
SUP_GRID_POINTS = 201


@lru_cache(maxsize=64)
def _gauss_legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule: equal panels, fixed order per panel.

    Exact for polynomials of degree ``2 * nodes_per_panel - 1`` on each panel.
    """

    panels: int
    nodes_per_panel: int = 8

    def __post_init__(self):
        if int(self.panels) < 1 or int(self.nodes_per_panel) < 1:
            raise InvalidInputError("panels and nodes_per_panel must be positive integers")

    def nodes(self, a: float, b: float):
        """Nodes and weights on ``[a, b]`` (``b < a`` gives the oriented integral)."""
        x, w = _gauss_legendre(self.nodes_per_panel)
        edges = np.linspace(a, b, self.panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        return t, weights

    def refined(self) -> QuadratureRule:
        return QuadratureRule(2 * self.panels, self.nodes_per_panel)

    def integrate(self, fn, a: float, b: float):
        """``int_a^b fn(t) dt`` for a matrix- or scalar-valued ``fn``."""
        t, w = self.nodes(a, b)
        total = w[0] * fn(t[0])
        for ti, wi in zip(t[1:], w[1:]):
            total = total + wi * fn(ti)
        return total


def default_rule(lam: complex, length: float) -> QuadratureRule:
    """8 nodes per panel, ``max(16, ceil(4 |length| (1 + |lam|)))`` panels."""
    return QuadratureRule(max(16, math.ceil(4.0 * abs(length) * (1.0 + abs(lam)))), 8)


def _check_s(s):
    s = float(s)
    if not math.isfinite(s):
        raise InvalidInputError(f"s must be finite, got {s!r}")
    return s


def _s_quad(fam, lam, s, rule):
    if s == 0.0:
        return np.zeros((fam.dim, fam.dim), dtype=np.complex128)
    return rule.integrate(lambda t: np.sinh(lam * (s - t)) * fam(t), 0.0, s)


def s_operator(fam, lam: complex, s: float, rule: QuadratureRule | None = None) -> np.ndarray:
    """Quadrature approximation of ``S(lam, s)``.

    The integral is computed with ``rule`` and with twice as many panels; the
    finer value is returned.  If the two differ by more than
    ``1e-9 * max(1, ||S||)`` an :class:`AccuracyWarning` is emitted.
    """
    lam = complex(lam)
    s = _check_s(s)
    rule = rule or default_rule(lam, s)
    coarse = _s_quad(fam, lam, s, rule)
    fine = _s_quad(fam, lam, s, rule.refined())
    change = op_norm(fine - coarse)
    if change > REFINE_TOL * max(1.0, op_norm(fine)):
        warnings.warn(
            f"S(lam={lam}, s={s}) moved by {change:.3e} under panel doubling "
            f"({rule.panels} -> {2 * rule.panels} panels)",
            AccuracyWarning,
            stacklevel=2,
        )
    return fine


def cosine_sup(fam, length: float, points: int = SUP_GRID_POINTS) -> float:
    """Grid maximum of ``||C(t)||`` on ``[0, |length|]`` (a lower bound of the true sup)."""
    return max(op_norm(fam(t)) for t in np.linspace(0.0, abs(length), points))


def s_bound_factor(lam: complex, s: float) -> float:
    """``sinh(|s| Re lam) / Re lam``."""
    re = complex(lam).real
    if not re > 0:
        raise InvalidInputError(f"the bound divides by Re(lambda); need Re(lambda) > 0, got {re!r}")
    return math.sinh(abs(s) * re) / re


def s_norm_bound_check(fam, lam: complex, s: float, rule: QuadratureRule | None = None,
                       grid_points: int = SUP_GRID_POINTS) -> tuple[float, float]:
    """Return ``(||S(lam, s)||, sup ||C|| * sinh(|s| Re lam) / Re lam)``."""
    lam = complex(lam)
    s = _check_s(s)
    factor = s_bound_factor(lam, s)
    lhs = op_norm(s_operator(fam, lam, s, rule))
    rhs = cosine_sup(fam, s, grid_points) * factor
    return lhs, rhs


def resolvent_identity_residual(fam, lam: complex, s: float,
                                rule: QuadratureRule | None = None) -> float:
    """``||(lam^2 I - A) S(lam, s) - lam (cosh(lam s) I - C(s))||``."""
    lam = complex(lam)
    s = _check_s(s)
    eye = identity(fam.dim)
    S = s_operator(fam, lam, s, rule)
    lhs = (lam * lam * eye - fam.a) @ S
    rhs = lam * (np.cosh(lam * s) * eye - fam(s))
    return op_norm(lhs - rhs)


def commutation_residuals(fam, lam: complex, s: float,
                          rule: QuadratureRule | None = None) -> tuple[float, float]:
    """``(||S C(s) - C(s) S||, ||S A - A S||)``; both vanish in exact arithmetic."""
    S = s_operator(fam, complex(lam), _check_s(s), rule)
    c = fam(s)
    return op_norm(S @ c - c @ S), op_norm(S @ fam.a - fam.a @ S)


@dataclass(frozen=True)
class ResolventReport:
    lam: complex
    s: float
    s_matrix: np.ndarray
    resolvent: np.ndarray
    identity_residual: float
    bound_slack: float
    oracle_error: float

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "s": self.s,
            "s_matrix": matrix_to_dict(self.s_matrix),
            "resolvent": matrix_to_dict(self.resolvent),
            "identity_residual": self.identity_residual,
            "bound_slack": self.bound_slack,
            "oracle_error": self.oracle_error,
        }

    csv_header = ("re_lambda", "im_lambda", "s", "resolvent_norm", "identity_residual",
                  "bound_slack", "oracle_error")

    def csv_row(self) -> tuple:
        return (self.lam.real, self.lam.imag, self.s, op_norm(self.resolvent),
                self.identity_residual, self.bound_slack, self.oracle_error)


def cosh_resolvent(fam, lam: complex, s: float) -> np.ndarray:
    """``R(cosh(lam s), C(s))``, refusing points numerically in the spectrum."""
    shifted = np.cosh(lam * s) * identity(fam.dim) - fam(s)
    scale = op_norm(shifted)
    if scale == 0.0 or min_singular_value(shifted) < INVERTIBLE_RTOL * scale:
        raise NotInResolventSetError(
            f"cosh(lambda*s) = {np.cosh(lam * s):.6g} lies in the numerical spectrum of C({s})"
        )
    return solve(shifted, identity(fam.dim))


def resolvent_via_s(fam, lam: complex, s: float, rule: QuadratureRule | None = None,
                    grid_points: int = SUP_GRID_POINTS) -> ResolventReport:
    """Resolvent ``R(lam^2, A)`` assembled from ``S(lam, s)`` and ``C(s)``.

    ``bound_slack`` is the right-hand side of
    ``||R(lam^2, A)|| <= sup ||C|| * 2|s| e^{|s Re lam|} / |lam| * ||R(cosh(lam s), C(s))||``
    minus the measured norm; ``oracle_error`` is the relative distance to a
    direct solve of ``(lam^2 I - A) X = I``.
    """
    lam = complex(lam)
    s = _check_s(s)
    if lam == 0:
        raise InvalidInputError("lambda must be nonzero")
    eye = identity(fam.dim)
    rc = cosh_resolvent(fam, lam, s)
    S = s_operator(fam, lam, s, rule)
    res = (S @ rc) / lam
    shifted = lam * lam * eye - fam.a
    residual = op_norm(shifted @ res - eye)
    rhs = (cosine_sup(fam, s, grid_points) * 2.0 * abs(s) * math.exp(abs(s * lam.real))
           / abs(lam) * op_norm(rc))
    direct = solve(shifted, eye)
    return ResolventReport(
        lam=lam,
        s=s,
        s_matrix=S,
        resolvent=res,
        identity_residual=residual,
        bound_slack=rhs - op_norm(res),
        oracle_error=op_norm(res - direct) / op_norm(direct),
    )


def growth_resolvent_check(fam, lam: complex, growth: GrowthBound) -> tuple[float, float]:
    """``(||lam^2 R(lam^2, A)||, M |lam| / (Re lam - omega))`` for ``Re lam > omega``."""
    lam = complex(lam)
    if not lam.real > growth.omega:
        raise InvalidInputError("need Re(lambda) > omega")
    mu = lam * lam
    res = solve(mu * identity(fam.dim) - fam.a, identity(fam.dim))
    return op_norm(mu * res), growth.m_const * abs(lam) / (lam.real - growth.omega)


# -- semigroups -------------------------------------------------------------


def laplace_horizon(lam: complex, growth: GrowthBound, tol: float = LAPLACE_TAIL_TOL) -> float:
    """Shortest horizon whose analytic tail ``M e^{(omega - Re lam) H} / (Re lam - omega)`` is <= tol."""
    gap = complex(lam).real - growth.omega
    if not gap > 0:
        raise InvalidInputError(
            f"Re(lambda) = {complex(lam).real} must exceed the growth rate {growth.omega}"
        )
    return max(0.0, math.log(growth.m_const / (gap * tol))) / gap


def laplace_resolvent(sg, lam: complex, horizon: float | None = None,
                      rule: QuadratureRule | None = None,
                      growth: GrowthBound | None = None) -> np.ndarray:
    """Truncated Laplace transform ``int_0^H e^{-lam t} T(t) dt`` of a semigroup.

    The horizon defaults to the shortest one with tail bound below 1e-10 for
    the (fitted, unless given) growth bound; a shorter explicit horizon is
    rejected.  The tail itself is not integrated.
    """
    lam = complex(lam)
    growth = growth or growth_bound_estimate(sg, 20.0, 201)
    needed = laplace_horizon(lam, growth)
    if horizon is None:
        horizon = needed
    elif horizon < needed:
        raise InvalidInputError(
            f"horizon {horizon} leaves a tail above {LAPLACE_TAIL_TOL}; need at least {needed:.6g}"
        )
    if horizon == 0.0:
        return np.zeros((sg.dim, sg.dim), dtype=np.complex128)
    rule = rule or default_rule(lam, horizon)
    return rule.integrate(lambda t: np.exp(-lam * t) * sg(t), 0.0, horizon)


class FrequencyCheck(NamedTuple):
    shifted_resolvent_dist: float  # ||lam R(lam, A) - I||
    scaled_operator_norm: float  # ||lam^{-1} (lam I - A)||
    inverse_bound: float | None  # 1 / (1 - r), when r < 1


def frequency_domain_check(sg, lam: float, r: float) -> FrequencyCheck:
    """Quantities in the resolvent argument for ``sup ||T(t) - I|| = r``."""
    lam = complex(lam)
    eye = identity(sg.dim)
    res = solve(lam * eye - sg.a, eye)
    return FrequencyCheck(
        shifted_resolvent_dist=op_norm(lam * res - eye),
        scaled_operator_norm=op_norm((lam * eye - sg.a) / lam),
        inverse_bound=1.0 / (1.0 - r) if r < 1.0 else None,
    )


def distance_sup(fam, horizon: float, samples: int) -> float:
    """Grid maximum of ``||F(t) - I||`` on ``[0, horizon]``."""
    return max(fam.distance_to_identity(t) for t in np.linspace(0.0, horizon, samples))


class CesaroReport(NamedTuple):
    identity_residual: float
    inv_norm: float
    bound: float | None  # None: r >= 1, bound not applicable
    r: float


def cesaro_integral(sg, t: float, rule: QuadratureRule | None = None) -> np.ndarray:
    """``B_t = int_0^t T(s) ds``."""
    rule = rule or QuadratureRule(max(16, math.ceil(4.0 * t * (1.0 + sg.gen.norm))), 8)
    return rule.integrate(sg, 0.0, t)


def cesaro_check(sg, t: float, rule: QuadratureRule | None = None,
                 r_horizon: float = 50.0, r_samples: int = 2001) -> CesaroReport:
    """Check ``T(t) - I = A B_t`` and ``||B_t^{-1}|| <= 1 / (t (1 - r))``.

    ``r`` is the grid supremum of ``||T(s) - I||`` over ``[0, r_horizon]``.
    """
    t = float(t)
    if not t > 0:
        raise InvalidInputError(f"t must be positive, got {t!r}")
    b = cesaro_integral(sg, t, rule)
    residual = op_norm(sg(t) - identity(sg.dim) - sg.a @ b)
    inv_norm = op_norm(inverse(b))
    r = distance_sup(sg, r_horizon, r_samples)
    bound = 1.0 / (t * (1.0 - r)) if r < 1.0 else None
    return CesaroReport(residual, inv_norm, bound, r)
