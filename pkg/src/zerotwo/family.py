"""Cosine families and semigroups generated by a matrix.

A cosine family with generator ``A`` is evaluated from its even power series

    C(t) = sum_n t^(2n) A^n / (2n)!

after scaling ``t`` down by powers of two, and then brought back up with the
double-angle form of d'Alembert's equation, ``C(2t) = 2 C(t)^2 - I``.  The
semigroup ``T(t) = exp(tA)`` uses the familiar scaled Taylor series plus
repeated squaring.

Both scaling rules pick the number of halvings from ``||A|| * t^2`` (resp.
``||A|| * t``) alone, so ``C(2t)`` is computed from exactly the ``C(t)`` one
would get by asking for ``t`` directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, ScalingRangeError
from .linalg import frozen, identity, matrix_from_dict, matrix_to_dict, op_norm

CACHE_SIZE = 4096


@dataclass(frozen=True, eq=False)
class Generator:
    """The matrix ``A`` generating a family (stored read-only)."""

    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", frozen(self.a))

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    @cached_property
    def norm(self) -> float:
        return op_norm(self.a)


def _as_generator(gen) -> Generator:
    return gen if isinstance(gen, Generator) else Generator(gen)


def _halvings(size: float, threshold: float, power: int, max_doublings: int) -> int:
    """Smallest j >= 0 with size / 2**(power*j) <= threshold."""
    if size <= threshold:
        return 0
    j = max(0, math.ceil(math.log2(size / threshold) / power))
    while size / 2.0 ** (power * j) > threshold:
        j += 1
    if j > max_doublings:
        raise ScalingRangeError(
            f"argument needs {j} halvings but max_doublings is {max_doublings}; "
            "increase the scaling depth (max_doublings) or the scaling_threshold"
        )
    return j


@dataclass(frozen=True, eq=False)
class _Family:
    gen: Generator
    taylor_terms: int = 20
    scaling_threshold: float = 1.0
    max_doublings: int = 64
    _eval: object = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "gen", _as_generator(self.gen))
        if int(self.taylor_terms) < 1:
            raise InvalidInputError("taylor_terms must be a positive integer")
        if not (self.scaling_threshold > 0 and math.isfinite(self.scaling_threshold)):
            raise InvalidInputError("scaling_threshold must be a positive finite number")
        object.__setattr__(self, "_eval", lru_cache(maxsize=CACHE_SIZE)(self._evaluate))

    @property
    def a(self) -> np.ndarray:
        return self.gen.a

    @property
    def dim(self) -> int:
        return self.gen.dim

    def _evaluate(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def _check_finite(self, out, t):
        if not np.all(np.isfinite(out)):
            raise ScalingRangeError(
                f"evaluation at t={t!r} overflowed; increase the scaling depth "
                "(max_doublings) or reduce |t|"
            )
        return out

    def distance(self, t: float, ref: complex = 1.0) -> float:
        """``||F(t) - ref * I||``."""
        return op_norm(self(t) - ref * identity(self.dim))

    def distance_to_identity(self, t: float) -> float:
        return self.distance(t)


class CosineFamily(_Family):
    """Cosine family ``t -> C(t)`` with a bounded (matrix) generator.

    Calling the family returns a fresh complex128 array.  ``C(0)`` is the
    identity exactly and ``C(-t)`` is bitwise ``C(t)``.
    """

    def __call__(self, t: float) -> np.ndarray:
        t = float(t)
        if not math.isfinite(t):
            raise InvalidInputError(f"t must be finite, got {t!r}")
        return self._eval(abs(t)).copy()

    def _evaluate(self, t: float) -> np.ndarray:
        n = self.dim
        eye = identity(n)
        if t == 0.0 or self.gen.norm == 0.0:
            return eye
        j = _halvings(self.gen.norm * t * t, self.scaling_threshold, 2, self.max_doublings)
        tau = t / 2.0**j
        y = (tau * tau) * self.a
        # Horner on sum_k y^k / (2k)!
        c = eye.copy()
        for k in range(self.taylor_terms - 1, 0, -1):
            c = eye + (y @ c) / ((2 * k - 1) * (2 * k))
        with np.errstate(over="ignore", invalid="ignore"):  # reported by _check_finite
            for _ in range(j):
                c = 2.0 * (c @ c) - eye
        return self._check_finite(c, t)


class Semigroup(_Family):
    """Matrix semigroup ``t -> exp(tA)`` for ``t >= 0``."""

    def __call__(self, t: float) -> np.ndarray:
        t = float(t)
        if not math.isfinite(t) or t < 0:
            raise InvalidInputError(f"semigroups are evaluated at finite t >= 0, got {t!r}")
        return self._eval(t).copy()

    def _evaluate(self, t: float) -> np.ndarray:
        eye = identity(self.dim)
        if t == 0.0 or self.gen.norm == 0.0:
            return eye
        j = _halvings(self.gen.norm * t, self.scaling_threshold, 1, self.max_doublings)
        x = (t / 2.0**j) * self.a
        e = eye.copy()
        for k in range(self.taylor_terms - 1, 0, -1):
            e = eye + (x @ e) / k
        with np.errstate(over="ignore", invalid="ignore"):
            for _ in range(j):
                e = e @ e
        return self._check_finite(e, t)


def cosine_at(fam: CosineFamily, t: float) -> np.ndarray:
    return fam(t)


def semigroup_at(sg: Semigroup, t: float) -> np.ndarray:
    return sg(t)


def dalembert_residual(fam, t: float, s: float) -> float:
    """``||2 C(t) C(s) - C(t+s) - C(t-s)||``."""
    return op_norm(2.0 * (fam(t) @ fam(s)) - fam(t + s) - fam(t - s))


def generator_recover(fam, h: float) -> np.ndarray:
    """Second-difference quotient ``2 (C(h) - I) / h^2``.

    Approximates the generator with an ``O(h^2)`` error for a matrix generator.
    """
    h = float(h)
    if not (0.0 < h <= 1.0):
        raise InvalidInputError(f"step h must lie in (0, 1], got {h!r}")
    return 2.0 * (fam(h) - identity(fam.dim)) / (h * h)


@dataclass(frozen=True)
class GrowthBound:
    """Constants with ``||C(t)|| <= m_const * exp(omega * t)``."""

    m_const: float
    omega: float

    def __call__(self, t):
        return self.m_const * np.exp(self.omega * np.asarray(t, dtype=float))


def growth_bound_estimate(fam, horizon: float, samples: int) -> GrowthBound:
    """Fit an exponential envelope to ``||C(t)||`` (or ``||T(t)||``) on ``[0, horizon]``.

    The rate is the least-squares slope of ``log ||C(t)||`` over the second
    half of the sample grid (clipped at 0).  The prefactor is then raised until
    every sample satisfies the bound, and never drops below 1.
    """
    if not horizon > 0:
        raise InvalidInputError("horizon must be positive")
    if int(samples) < 2:
        raise InvalidInputError("need at least two samples")
    ts = np.linspace(0.0, float(horizon), int(samples))
    norms = np.array([op_norm(fam(t)) for t in ts])
    logs = np.log(np.maximum(norms, np.finfo(float).tiny))
    tail = slice(len(ts) // 2, None) if len(ts) >= 4 else slice(None)
    slope = np.polyfit(ts[tail], logs[tail], 1)[0]
    omega = max(0.0, float(slope))
    m_const = max(1.0, float(np.max(norms * np.exp(-omega * ts))))
    # absorb rounding in exp() so the inequality holds at every sample
    return GrowthBound(m_const=m_const * (1.0 + 1e-12), omega=omega)


# -- descriptor files -----------------------------------------------------

_KINDS = {"cosine": CosineFamily, "semigroup": Semigroup}


def family_from_dict(doc: dict, kind: str | None = None):
    """Build a family from a matrix document, optionally carrying descriptor keys.

    Descriptor keys on top of the matrix format: ``kind`` ("cosine" or
    "semigroup"), ``taylor_terms``, ``scaling_threshold``.
    """
    kind = kind or doc.get("kind", "cosine")
    if kind not in _KINDS:
        raise InvalidInputError(f"unknown family kind {kind!r}; expected one of {sorted(_KINDS)}")
    opts = {}
    if "taylor_terms" in doc:
        opts["taylor_terms"] = int(doc["taylor_terms"])
    if "scaling_threshold" in doc:
        opts["scaling_threshold"] = float(doc["scaling_threshold"])
    return _KINDS[kind](Generator(matrix_from_dict(doc)), **opts)


def family_to_dict(fam) -> dict:
    kind = "semigroup" if isinstance(fam, Semigroup) else "cosine"
    doc = matrix_to_dict(fam.a)
    doc.update(kind=kind, taylor_terms=fam.taylor_terms, scaling_threshold=fam.scaling_threshold)
    return doc


def load_family(path, kind: str | None = None):
    with open(Path(path)) as fh:
        return family_from_dict(json.load(fh), kind=kind)
