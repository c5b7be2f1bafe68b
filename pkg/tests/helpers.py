import math

import numpy as np

from zerotwo.family import CosineFamily, Generator, Semigroup


def random_matrix(rng, dim, norm):
    a = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    return a * (norm / np.linalg.norm(a, 2))


def eig_cosine(a, t):
    """Independent oracle: C(t) = V cosh(t sqrt(mu)) V^-1 for diagonalizable A."""
    mu, v = np.linalg.eig(a)
    return v @ np.diag(np.cosh(t * np.sqrt(mu.astype(complex)))) @ np.linalg.inv(v)


def cosine(a):
    return CosineFamily(Generator(np.asarray(a, dtype=complex)))


def semigroup(a):
    return Semigroup(Generator(np.asarray(a, dtype=complex)))
