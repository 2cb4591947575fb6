"""Synthetic rapidly decreasing fields on R^n built from radial components.

Every field is a sum of translated radial profiles A g(|x - c|), which keeps
Radon and Fourier integrals reducible to one-dimensional radial quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

FAMILIES = ("gaussian", "smoothed-ball", "bump-sum")
NEGLIGIBLE = 1e-12


def smoothstep(t):
    """C^2 ramp 10 t^3 - 15 t^4 + 6 t^5 clipped to [0, 1]."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


@dataclass(frozen=True)
class ScalarField:
    """A sum of radial components of one family.

    gaussian:      A exp(-|x - c|^2 / r^2)
    smoothed-ball: A on |x - c| <= r - w, zero beyond r, C^2 ramp between
    bump-sum:      A e exp(-1 / (1 - |x - c|^2 / r^2)) inside |x - c| < r
    """

    family: str
    centers: np.ndarray
    radii: np.ndarray
    amplitudes: np.ndarray
    widths: np.ndarray | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        c = np.atleast_2d(np.asarray(self.centers, dtype=float))
        m, n = c.shape
        if n not in (2, 3):
            raise ValueError("fields live in R^2 or R^3")
        r = np.broadcast_to(np.asarray(self.radii, dtype=float), (m,)).copy()
        a = np.broadcast_to(np.asarray(self.amplitudes, dtype=float), (m,)).copy()
        if np.any(r <= 0) or not np.all(np.isfinite(r)) or not np.all(np.isfinite(a)):
            raise ValueError("radii must be positive and amplitudes finite")
        if self.family == "smoothed-ball":
            w = np.broadcast_to(np.asarray(0.1 if self.widths is None else self.widths,
                                           dtype=float), (m,)).copy()
            if np.any(w <= 0) or np.any(w > r):
                raise ValueError("ball ramp widths must lie in (0, radius]")
        else:
            w = np.zeros(m)
        for arr in (c, r, a, w):
            arr.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "widths", w)

    @property
    def dimension(self) -> int:
        return self.centers.shape[1]

    @property
    def components(self) -> int:
        return self.centers.shape[0]

    def reach(self) -> np.ndarray:
        """Per-component radius beyond which the component is below NEGLIGIBLE."""
        if self.family == "gaussian":
            ratio = np.maximum(np.abs(self.amplitudes) / NEGLIGIBLE, 1.0)
            return self.radii * np.sqrt(np.log(ratio))
        return self.radii.copy()

    @property
    def R_eff(self) -> float:
        """Radius about the origin outside which |u| < NEGLIGIBLE."""
        live = self.amplitudes != 0
        if not live.any():
            return 0.0
        return float(np.max(np.linalg.norm(self.centers, axis=1)[live] + self.reach()[live]))

    @property
    def compact(self) -> bool:
        return self.family != "gaussian"

    def radial(self, j: int, r):
        """Profile of component j at distance r from its center."""
        r = np.asarray(r, dtype=float)
        A, R = self.amplitudes[j], self.radii[j]
        if self.family == "gaussian":
            return A * np.exp(-(r / R) ** 2)
        if self.family == "smoothed-ball":
            return A * smoothstep((R - r) / self.widths[j])
        q = (r / R) ** 2
        out = np.zeros_like(r)
        inside = q < 1.0
        out[inside] = A * np.exp(1.0 - 1.0 / (1.0 - q[inside]))
        return out

    def radial_breaks(self, j: int) -> list[float]:
        """Radii where component j is not analytic (inside its reach)."""
        if self.family == "smoothed-ball":
            return [float(self.radii[j] - self.widths[j])]
        return []

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        pts = x.reshape(-1, self.dimension)
        out = np.zeros(pts.shape[0])
        for j in range(self.components):
            out += self.radial(j, np.linalg.norm(pts - self.centers[j], axis=1))
        return out.reshape(x.shape[:-1])

    def translated(self, shift) -> "ScalarField":
        return ScalarField(self.family, self.centers + np.asarray(shift, dtype=float),
                           self.radii, self.amplitudes, self._widths_arg())

    def dilated(self, lam: float) -> "ScalarField":
        """x -> u(x / lam): supports scale by lam."""
        if lam <= 0:
            raise ValueError("dilation factor must be positive")
        return ScalarField(self.family, self.centers * lam, self.radii * lam, self.amplitudes,
                           None if self.family != "smoothed-ball" else self.widths * lam)

    def _widths_arg(self):
        return self.widths if self.family == "smoothed-ball" else None

    def support_radius_bound(self, omega) -> tuple[float, float]:
        """[min, max] of <x, omega> over the reach of all live components."""
        om = np.asarray(omega, dtype=float)
        live = self.amplitudes != 0
        if not live.any():
            return 0.0, 0.0
        proj = self.centers[live] @ om
        reach = self.reach()[live]
        return float(np.min(proj - reach)), float(np.max(proj + reach))

    def to_dict(self) -> dict:
        d = {"family": self.family, "centers": self.centers.tolist(),
             "radii": self.radii.tolist(), "amplitudes": self.amplitudes.tolist()}
        if self.family == "smoothed-ball":
            d["widths"] = self.widths.tolist()
        return d

    @classmethod
    def from_dict(cls, d) -> "ScalarField":
        return cls(d["family"], d["centers"], d["radii"], d.get("amplitudes", 1.0),
                   d.get("widths"))


def gaussian(center, width: float = 1.0, amplitude: float = 1.0) -> ScalarField:
    return ScalarField("gaussian", [center], width, amplitude)


def smoothed_ball(center, radius: float = 1.0, width: float = 0.1,
                  amplitude: float = 1.0) -> ScalarField:
    return ScalarField("smoothed-ball", [center], radius, amplitude, width)


def bump_sum(centers, radii, amplitudes) -> ScalarField:
    return ScalarField("bump-sum", centers, radii, amplitudes)


def zero_field(n: int = 2) -> ScalarField:
    return ScalarField("bump-sum", [np.zeros(n)], 1.0, 0.0)


def random_field(rng: np.random.Generator, n: int = 2) -> ScalarField:
    """A random member of one of the built-in families, for property tests."""
    family = FAMILIES[int(rng.integers(len(FAMILIES)))]
    m = 1 if family != "bump-sum" else int(rng.integers(1, 4))
    centers = rng.uniform(-1.0, 1.0, size=(m, n))
    radii = rng.uniform(0.4, 1.2, size=m)
    amps = rng.uniform(0.5, 2.0, size=m) * rng.choice([-1.0, 1.0], size=m)
    widths = radii * rng.uniform(0.1, 0.5, size=m) if family == "smoothed-ball" else None
    return ScalarField(family, centers, radii, amps, widths)


def unit_vector(angle_or_vec) -> np.ndarray:
    v = np.asarray(angle_or_vec, dtype=float)
    if v.ndim == 0:
        return np.array([math.cos(float(v)), math.sin(float(v))])
    return v / np.linalg.norm(v)
