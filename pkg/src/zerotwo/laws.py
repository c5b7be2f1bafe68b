"""Norm profiles, law classification and the extremal examples.

All suprema here are taken over finite grids, so every measured value is a
lower bound of the quantity appearing in a theorem.  :func:`classify` only
claims a theorem's conclusion when the measurement clears the threshold by a
margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidInputError
from .family import CosineFamily, Generator, Semigroup
from .linalg import eigenvalues, identity, op_norm

SCALAR_OPTIMAL_CONSTANT = 8.0 / (3.0 * math.sqrt(3.0))
DEFAULT_MARGIN = 1e-3

LAWS = ("zero-two-local", "zero-two-global", "zero-one-global", "scalar-distance")
_KIND_FOR_LAW = {
    "zero-two-local": "cosine",
    "zero-two-global": "cosine",
    "zero-one-global": "semigroup",
    "scalar-distance": "cosine",
}
_CONCLUSION = {
    "zero-two-local": "generator bounded ⇒ uniformly continuous",
    "zero-two-global": "family is identically I",
    "zero-one-global": "family is identically I",
    "scalar-distance": "family equals cos(at)I",
}
NO_CONCLUSION = "no conclusion (hypothesis fails)"


@dataclass(frozen=True)
class NormProfile:
    """Samples ``(t, ||F(t) - z I||)`` with ``z = 1`` or ``z = cos(baseline * t)``."""

    points: tuple
    kind: str
    baseline: float | None = None

    def __post_init__(self):
        if self.kind not in ("cosine", "semigroup"):
            raise InvalidInputError(f"unknown profile kind {self.kind!r}")
        ts = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidInputError("profile t values must be strictly increasing")
        if ts and ts[0] == 0.0 and self.points[0][1] != 0.0:
            raise InvalidInputError("distance at t = 0 must vanish")

    @property
    def ts(self) -> np.ndarray:
        return np.array([p[0] for p in self.points], dtype=float)

    @property
    def dists(self) -> np.ndarray:
        return np.array([p[1] for p in self.points], dtype=float)

    def sup(self) -> float:
        return float(self.dists.max()) if self.points else 0.0

    def limsup_proxy(self) -> float:
        """Max over the finer half of the positive sample times."""
        pos = [p for p in self.points if p[0] > 0]
        if not pos:
            return 0.0
        keep = pos[: math.ceil(len(pos) / 2)]
        return max(d for _, d in keep)


@dataclass(frozen=True)
class LawVerdict:
    law: str
    measured: float
    threshold: float
    conclusion: str

    def to_dict(self) -> dict:
        return dict(law=self.law, measured=self.measured, threshold=self.threshold,
                    conclusion=self.conclusion)


def _kind(fam) -> str:
    return "semigroup" if isinstance(fam, Semigroup) else "cosine"


def norm_profile(fam, grid, baseline: float | None = None) -> NormProfile:
    """Distance of the family from ``I`` (or from ``cos(baseline t) I``) on ``grid``.

    The grid is sorted and de-duplicated, so the result does not depend on the
    order in which times are given.
    """
    ts = sorted(set(float(t) for t in grid))
    if any(not math.isfinite(t) for t in ts):
        raise InvalidInputError("grid must be finite")
    if baseline is None:
        points = tuple((t, fam.distance(t)) for t in ts)
    else:
        points = tuple((t, fam.distance(t, math.cos(baseline * t))) for t in ts)
    return NormProfile(points, _kind(fam), baseline)


def geometric_grid(t_start: float, levels: int) -> list[float]:
    return [t_start * 2.0**-j for j in range(levels)]


def limsup_zero_estimate(fam, t_start: float = 1.0, levels: int = 30) -> float:
    """Proxy for ``limsup_{t -> 0+} ||C(t) - I||``.

    Max of the distance over ``t_start * 2^-j`` for the last ``ceil(levels/2)``
    values of ``j = 0 .. levels-1``.
    """
    if int(levels) < 3:
        raise InvalidInputError("levels must be at least 3")
    if not t_start > 0:
        raise InvalidInputError("t_start must be positive")
    grid = geometric_grid(float(t_start), int(levels))
    kept = grid[int(levels) - math.ceil(int(levels) / 2):]
    return max(fam.distance(t) for t in kept)


def classify(profile: NormProfile, law: str, margin: float = DEFAULT_MARGIN) -> LawVerdict:
    if law not in LAWS:
        raise InvalidInputError(f"unknown law {law!r}; expected one of {LAWS}")
    if profile.kind != _KIND_FOR_LAW[law]:
        raise InvalidInputError(f"law {law!r} needs a {_KIND_FOR_LAW[law]} profile")
    if (law == "scalar-distance") != (profile.baseline is not None):
        raise InvalidInputError(
            "scalar-distance needs a profile measured against cos(at)I, the other laws against I"
        )
    if law == "zero-two-local":
        measured = profile.limsup_proxy()
    else:
        measured = profile.sup()
    threshold = {"zero-one-global": 1.0, "scalar-distance": SCALAR_OPTIMAL_CONSTANT}.get(law, 2.0)
    conclusion = _CONCLUSION[law] if measured < threshold - margin else NO_CONCLUSION
    return LawVerdict(law, measured, threshold, conclusion)


def diag_cosine_example(n: int) -> CosineFamily:
    """Generator ``diag(-1, -4, ..., -n^2)``, i.e. ``C(t) = diag(cos t, ..., cos nt)``."""
    if int(n) < 1:
        raise InvalidInputError("n must be a positive integer")
    k = np.arange(1, int(n) + 1, dtype=float)
    return CosineFamily(Generator(np.diag(-(k**2))))


class ScaledCosineFamily:
    """The cosine family ``t -> C(factor * t)``; its generator is ``factor^2 A``."""

    def __init__(self, base, factor: float):
        self.base = base
        self.factor = float(factor)

    def __call__(self, t: float) -> np.ndarray:
        return self.base(self.factor * t)

    @property
    def dim(self) -> int:
        return self.base.dim

    @cached_property
    def gen(self) -> Generator:
        return Generator(self.factor**2 * self.base.a)

    @property
    def a(self) -> np.ndarray:
        return self.gen.a

    def distance(self, t: float, ref: float = 1.0) -> float:
        return op_norm(self(t) - ref * identity(self.dim))


class ExtensionFamily:
    """Block-diagonal family with ``n``-th block ``C(n t)``, ``n = 1..n_blocks``.

    Blocks are evaluated one at a time; the full matrix is never formed.  The
    operator norm of a block-diagonal matrix is the largest block norm.
    """

    def __init__(self, base, n_blocks: int):
        if int(n_blocks) < 1:
            raise InvalidInputError("n_blocks must be a positive integer")
        self.base = base
        self.n_blocks = int(n_blocks)

    @property
    def dim(self) -> int:
        return self.n_blocks * self.base.dim

    def block(self, n: int) -> ScaledCosineFamily:
        if not 1 <= n <= self.n_blocks:
            raise InvalidInputError(f"block index {n} outside 1..{self.n_blocks}")
        return ScaledCosineFamily(self.base, n)

    def blocks(self, t: float) -> list[np.ndarray]:
        return [self.base(n * t) for n in range(1, self.n_blocks + 1)]

    def generator_blocks(self) -> list[np.ndarray]:
        return [n * n * self.base.a for n in range(1, self.n_blocks + 1)]

    def distance(self, t: float, ref: float = 1.0) -> float:
        eye = identity(self.base.dim)
        return max(op_norm(b - ref * eye) for b in self.blocks(t))

    def distance_to_identity(self, t: float) -> float:
        return self.distance(t)


def extension_family(fam, n_blocks: int) -> ExtensionFamily:
    return ExtensionFamily(fam, n_blocks)


def scalar_distance_sup(a: float, grid_points: int) -> float:
    """Grid sup over one period of ``|cos(3at) - cos(at)|`` (tends to ``8/(3 sqrt 3)``)."""
    a = float(a)
    if a == 0.0 or not math.isfinite(a):
        raise InvalidInputError("a must be a nonzero finite number")
    if int(grid_points) < 2:
        raise InvalidInputError("grid_points must be at least 2")
    t = np.linspace(0.0, 2.0 * math.pi / abs(a), int(grid_points))
    return float(np.max(np.abs(np.cos(3.0 * a * t) - np.cos(a * t))))


def default_global_horizon(fam) -> float | None:
    """``4 pi / min |sqrt(mu)|`` over the nonzero eigenvalues ``mu`` of the generator.

    Returns None when every eigenvalue vanishes; the caller then has to choose.
    """
    mags = np.abs(eigenvalues(fam.a))
    scale = max(1.0, fam.gen.norm)
    nonzero = mags[mags > 1e-12 * scale]
    if nonzero.size == 0:
        return None
    return 4.0 * math.pi / math.sqrt(float(nonzero.min()))
