"""Points of the projective line, the chordal metric, and Mobius maps.

A point (z:w) of P^1 is stored by a canonical representative: the pair is
scaled to unit Euclidean norm (|z|^2 + |w|^2 = 1) and rotated so that the
coordinate of largest modulus is positive real.  With both arguments
canonical, the chordal distance is simply |z1*w2 - z2*w1|, which takes
values in [0, 1] and is comparable to the spherical metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS


@dataclass(frozen=True)
class ProjPoint:
    """Canonical representative of a point of P^1.  Build via canonicalize()."""

    z: complex
    w: complex

    @property
    def is_infinity(self) -> bool:
        return abs(self.w) < DEFAULTS.pt

    def ratio(self) -> complex:
        """Affine coordinate z/w; returns complex('inf') at the point at infinity."""
        if self.w == 0:
            return complex(math.inf, 0.0)
        return self.z / self.w

    def as_array(self) -> np.ndarray:
        return np.array([self.z, self.w], dtype=complex)

    def close_to(self, other: "ProjPoint", tol: float = DEFAULTS.pt) -> bool:
        return chordal_distance(self, other) <= tol

    def to_json(self):
        return [[self.z.real, self.z.imag], [self.w.real, self.w.imag]]

    @staticmethod
    def from_json(data) -> "ProjPoint":
        (zr, zi), (wr, wi) = data
        return canonicalize(complex(zr, zi), complex(wr, wi))

    def __repr__(self):
        if self.is_infinity:
            return "ProjPoint(inf)"
        r = self.ratio()
        return f"ProjPoint({r.real:.6g}{r.imag:+.6g}j)"


def canonicalize(z: complex, w: complex) -> ProjPoint:
    """Canonical representative of (z:w).  Scale-invariant and idempotent."""
    z, w = complex(z), complex(w)
    m = max(abs(z), abs(w))
    if m == 0.0:
        raise ValueError("not a projective point: (0, 0)")
    z, w = z / m, w / m
    n = math.sqrt(abs(z) ** 2 + abs(w) ** 2)
    z, w = z / n, w / n
    anchor = z if abs(z) >= abs(w) else w
    phase = anchor / abs(anchor)
    return ProjPoint(z / phase, w / phase)


INFINITY = canonicalize(1, 0)
ZERO = canonicalize(0, 1)


def chordal_distance(p: ProjPoint, q: ProjPoint) -> float:
    """d(p, q) = |z_p w_q - z_q w_p| for canonical representatives."""
    return min(abs(p.z * q.w - q.z * p.w), 1.0)


@dataclass(frozen=True)
class Mobius:
    """An invertible 2x2 complex matrix acting on P^1."""

    a: complex
    b: complex
    c: complex
    d: complex

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def is_singular(self, tol: float = 1e-12) -> bool:
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d)) ** 2
        return abs(self.det()) <= tol * scale if scale > 0 else True

    def inverse(self) -> "Mobius":
        if self.is_singular():
            raise ValueError("singular matrix has no inverse")
        return Mobius(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "Mobius") -> "Mobius":
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    @staticmethod
    def identity() -> "Mobius":
        return Mobius(1, 0, 0, 1)

    @staticmethod
    def translation(t: complex) -> "Mobius":
        return Mobius(1, t, 0, 1)

    @staticmethod
    def swap() -> "Mobius":
        """(z:w) -> (w:z), i.e. z -> 1/z."""
        return Mobius(0, 1, 1, 0)


def mobius_apply(M: Mobius, p: ProjPoint) -> ProjPoint:
    if M.is_singular():
        raise ValueError("singular matrix does not act on P^1")
    return canonicalize(M.a * p.z + M.b * p.w, M.c * p.z + M.d * p.w)


# ---------------------------------------------------------------------------
# vectorized kernels used by the measure module


def canonicalize_rows(pairs) -> np.ndarray:
    """Canonicalize an (n, 2) array of representatives, rowwise."""
    a = np.array(pairs, dtype=complex)
    mods = np.abs(a)
    m = mods.max(axis=1)
    if np.any(m == 0.0):
        raise ValueError("not a projective point: (0, 0)")
    a /= m[:, None]
    a /= np.linalg.norm(a, axis=1)[:, None]
    anchor = np.where(np.abs(a[:, 0]) >= np.abs(a[:, 1]), a[:, 0], a[:, 1])
    a *= (np.abs(anchor) / anchor)[:, None]
    return a


def chordal_cross(A, B) -> np.ndarray:
    """All chordal distances between canonical rows of A (n, 2) and B (m, 2)."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    d = np.abs(A[:, 0, None] * B[None, :, 1] - A[:, 1, None] * B[None, :, 0])
    return np.minimum(d, 1.0)
