"""Multi-indices and dense homogeneous polynomials on C^n.

Coefficient vectors are indexed by :func:`enumerate_multiindices`, which fixes
graded-lexicographic order for every module in the package.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np


@lru_cache(maxsize=None)
def _multiindices(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    if n == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in _multiindices(n - 1, k - first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_multiindices(n: int, k: int) -> list[tuple[int, ...]]:
    """All alpha in N^n with |alpha| = k, lexicographically descending.

    >>> enumerate_multiindices(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return list(_multiindices(n, k))


def num_monomials(n: int, k: int) -> int:
    return math.comb(n + k - 1, k)


@lru_cache(maxsize=None)
def _index_array(n: int, k: int) -> np.ndarray:
    arr = np.array(_multiindices(n, k), dtype=np.int64).reshape(-1, n)
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def multinomial_weights(n: int, k: int) -> np.ndarray:
    """k!/alpha! for every alpha in the global order."""
    w = np.array(
        [math.factorial(k) / math.prod(math.factorial(a) for a in alpha)
         for alpha in _multiindices(n, k)],
        dtype=float,
    )
    w.setflags(write=False)
    return w


def _as_points(zeta) -> np.ndarray:
    z = np.asarray(zeta, dtype=complex)
    if z.ndim == 0:
        z = z.reshape(1)
    return z


def monomial_matrix(points, k: int, scaled: bool = False) -> np.ndarray:
    """Rows of monomials zeta^alpha for a batch of points, shape (m, N)."""
    pts = np.atleast_2d(_as_points(points))
    n = pts.shape[1]
    alphas = _index_array(n, k)
    # powers[j, i, a] = pts[j, i] ** a, built by repeated multiplication so
    # that 0**0 == 1 and integer powers stay exact for small inputs.
    powers = np.ones((pts.shape[0], n, k + 1), dtype=complex)
    for a in range(1, k + 1):
        powers[:, :, a] = powers[:, :, a - 1] * pts
    rows = np.ones((pts.shape[0], alphas.shape[0]), dtype=complex)
    for i in range(n):
        rows *= powers[:, i, alphas[:, i]]
    if scaled:
        rows *= np.sqrt(multinomial_weights(n, k))
    return rows


def monomial_vector(zeta, k: int, scaled: bool = False) -> np.ndarray:
    """Monomials zeta^alpha for |alpha| = k, optionally times sqrt(k!/alpha!).

    >>> monomial_vector([1, 1], 2, scaled=True).real.round(6).tolist()
    [1.0, 1.414214, 1.0]
    """
    z = _as_points(zeta)
    if z.ndim != 1:
        raise ValueError("monomial_vector takes a single point")
    if k < 0:
        raise ValueError("degree must be non-negative")
    return monomial_matrix(z[None, :], k, scaled)[0]


@dataclass(frozen=True)
class HomogeneousPolynomial:
    """Degree-k homogeneous polynomial with dense complex coefficients.

    ``coefficients[i]`` multiplies the i-th monomial of
    ``enumerate_multiindices(dimension, degree)`` in the raw (unscaled) basis.
    """

    dimension: int
    degree: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dimension < 1 or self.degree < 0:
            raise ValueError("dimension must be >= 1 and degree >= 0")
        c = np.array(self.coefficients, dtype=complex).reshape(-1)
        expected = num_monomials(self.dimension, self.degree)
        if c.shape[0] != expected:
            raise ValueError(
                f"expected {expected} coefficients for n={self.dimension}, "
                f"k={self.degree}, got {c.shape[0]}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def zero(cls, n: int, k: int) -> "HomogeneousPolynomial":
        return cls(n, k, np.zeros(num_monomials(n, k), dtype=complex))

    @classmethod
    def from_terms(cls, n: int, k: int, terms: Mapping[Sequence[int], complex]):
        """Build from a sparse {alpha: coefficient} map; missing terms are zero."""
        index = {alpha: i for i, alpha in enumerate(_multiindices(n, k))}
        c = np.zeros(len(index), dtype=complex)
        for alpha, value in terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or sum(alpha) != k or min(alpha) < 0:
                raise ValueError(f"multi-index {alpha} is not of order {k} in {n} variables")
            c[index[alpha]] += value
        return cls(n, k, c)

    @classmethod
    def from_scaled(cls, n: int, k: int, scaled_coeffs) -> "HomogeneousPolynomial":
        """Convert coefficients of the sqrt-multinomial basis to raw ones."""
        c = np.asarray(scaled_coeffs, dtype=complex) * np.sqrt(multinomial_weights(n, k))
        return cls(n, k, c)

    def scaled_coefficients(self) -> np.ndarray:
        return self.coefficients / np.sqrt(multinomial_weights(self.dimension, self.degree))

    @property
    def multiindices(self) -> list[tuple[int, ...]]:
        return enumerate_multiindices(self.dimension, self.degree)

    def terms(self) -> dict[tuple[int, ...], complex]:
        return {a: complex(c) for a, c in zip(self.multiindices, self.coefficients) if c != 0}

    def __call__(self, zeta) -> complex:
        return eval_poly(self, zeta)

    def evaluate_many(self, points) -> np.ndarray:
        pts = np.atleast_2d(_as_points(points))
        if pts.shape[1] != self.dimension:
            raise ValueError("dimension mismatch")
        return monomial_matrix(pts, self.degree) @ self.coefficients

    def __add__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        if (self.dimension, self.degree) != (other.dimension, other.degree):
            raise ValueError("can only add polynomials of equal dimension and degree")
        return HomogeneousPolynomial(self.dimension, self.degree,
                                     self.coefficients + other.coefficients)

    def __mul__(self, scalar: complex) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(self.dimension, self.degree, self.coefficients * scalar)

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "degree": self.degree,
            "coefficients": [
                [list(a), float(c.real), float(c.imag)]
                for a, c in zip(self.multiindices, self.coefficients)
            ],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "HomogeneousPolynomial":
        n, k = int(d["dimension"]), int(d["degree"])
        terms = {tuple(a): complex(re, im) for a, re, im in d["coefficients"]}
        return cls.from_terms(n, k, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "HomogeneousPolynomial":
        return cls.from_dict(json.loads(s))


def eval_poly(p: HomogeneousPolynomial, zeta) -> complex:
    """Value of sum_alpha c_alpha zeta^alpha at a single point."""
    z = _as_points(zeta)
    if z.ndim != 1 or z.shape[0] != p.dimension:
        raise ValueError(
            f"point of dimension {z.shape[-1]} given to polynomial in {p.dimension} variables"
        )
    return complex(monomial_vector(z, p.degree) @ p.coefficients)


def linear_form_power(a, k: int) -> HomogeneousPolynomial:
    """Coefficients of <a, zeta>^k by the multinomial theorem."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    w = multinomial_weights(n, k)
    c = w * monomial_vector(a, k)
    return HomogeneousPolynomial(n, k, c)


def bilinear(z, zeta) -> complex:
    """<z, zeta> = sum z_j zeta_j, no conjugation."""
    return complex(np.sum(np.asarray(z, dtype=complex) * np.asarray(zeta, dtype=complex)))


def norm(zeta) -> float:
    return float(np.linalg.norm(np.asarray(zeta, dtype=complex)))
