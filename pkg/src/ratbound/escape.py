"""Escape-rate (potential) functions in C^2 and the cone-angle dictionary.

The escape rate of a lift F = (P, Q) is G_F(x) = lim d^-n log||F^n(x)||,
computed here with the sup norm ||(z,w)|| = max(|z|, |w|) throughout so
that example values are exact and reproducible.  Nondegenerate lifts are
iterated with renormalization (log-scales tracked separately, no
overflow).  Degenerate lifts f = H*phi off the indeterminacy locus use the
telescoped series

    G_n(x) = sum_{k<n} d^-(k+1) log|H(Phi^k x)| + d^-n log||Phi^n x||,

whose H-term partial sums converge to G_F while the correction term decays
like (e/d)^n.

A probability measure with an atom of mass m induces a conformal metric
with a cone point of angle 2*pi - 4*pi*m; masses >= 1/2 sit at infinite
distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndeterminateMapError, MathDomainError
from .ratmap import BoundaryMap, Decomposition, decompose


@dataclass
class EscapeValue:
    """An escape-rate evaluation: value, steps used, last-increment residual.

    hit_hole marks orbits that landed exactly on a hole line; the value is
    then the -inf sentinel and must not be fed back into arithmetic.
    """

    value: float
    n_used: int
    residual: float
    hit_hole: bool = False

    @property
    def finite(self) -> bool:
        return not self.hit_hole


def _sup(z, w):
    return max(abs(z), abs(w))


def escape_rate(f: BoundaryMap, x, n_max: int = 60, tol: float = 1e-13,
                dec: Decomposition | None = None) -> EscapeValue:
    """G_F at x in C^2 - 0 for the normalized lift F of f.

    Nondegenerate maps iterate F directly with renormalization; degenerate
    maps off I(d) evaluate the telescoped H-series of the decomposition.
    Stops when the step-to-step change drops below tol or at n_max.
    """
    z, w = complex(x[0]), complex(x[1])
    if z == 0 and w == 0:
        raise ValueError("escape rate undefined at the origin of C^2")
    if dec is None:
        dec = decompose(f)
    if dec.indeterminate:
        raise IndeterminateMapError("escape rate undefined on indeterminacy locus")
    if dec.e == f.d:
        return _escape_direct(f, (z, w), n_max, tol)
    return _escape_series(f.d, dec, (z, w), n_max, tol)


def _escape_direct(f: BoundaryMap, x, n_max, tol) -> EscapeValue:
    d = f.d
    z, w = x
    scale = _sup(z, w)
    g = math.log(scale)
    z, w = z / scale, w / scale
    residual = math.inf
    n = 0
    for n in range(1, n_max + 1):
        z, w = f.P.evaluate((z, w)), f.Q.evaluate((z, w))
        s = _sup(z, w)
        if s == 0.0:
            return EscapeValue(-math.inf, n, 0.0, hit_hole=True)
        inc = math.log(s) / d**n
        g += inc
        z, w = z / s, w / s
        residual = abs(inc)
        if residual < tol:
            break
    return EscapeValue(g, n, residual)


def _escape_series(d: int, dec: Decomposition, x, n_max, tol) -> EscapeValue:
    H = dec.H
    p, q = dec.phi
    e = dec.e
    dH = d - e
    z, w = x
    lam = math.log(_sup(z, w))
    vz, vw = z / math.exp(lam), w / math.exp(lam)
    g = 0.0
    prev = math.inf
    residual = math.inf
    n = 0
    for n in range(1, n_max + 1):
        hv = abs(H.evaluate((vz, vw)))
        if hv == 0.0:
            return EscapeValue(-math.inf, n, 0.0, hit_hole=True)
        g += (dH * lam + math.log(hv)) / d**n
        pz, pw = p.evaluate((vz, vw)), q.evaluate((vz, vw))
        s = _sup(pz, pw)
        if s == 0.0:
            return EscapeValue(-math.inf, n, 0.0, hit_hole=True)
        lam = e * lam + math.log(s)
        vz, vw = pz / s, pw / s
        value = g + lam / d**n
        residual = abs(value - prev) if prev != math.inf else math.inf
        prev = value
        if residual < tol:
            break
    return EscapeValue(prev, n, residual)


def escape_partial(f: BoundaryMap, x, n: int) -> float:
    """G_n(x) = d^-n log||F^n(x)|| at exactly n renormalized steps."""
    d = f.d
    z, w = complex(x[0]), complex(x[1])
    scale = _sup(z, w)
    g = math.log(scale)
    z, w = z / scale, w / scale
    for k in range(1, n + 1):
        z, w = f.P.evaluate((z, w)), f.Q.evaluate((z, w))
        s = _sup(z, w)
        if s == 0.0:
            return -math.inf
        g += math.log(s) / d**k
        z, w = z / s, w / s
    return g


def escape_series_hterm(dec: Decomposition, x, n: int) -> float:
    """The H-term partial sum g_n(x) of the telescoped series (no tail term)."""
    d = dec.d
    H = dec.H
    p, q = dec.phi
    e = dec.e
    dH = d - e
    z, w = complex(x[0]), complex(x[1])
    lam = math.log(_sup(z, w))
    s0 = math.exp(lam)
    vz, vw = z / s0, w / s0
    g = 0.0
    for k in range(1, n + 1):
        hv = abs(H.evaluate((vz, vw)))
        if hv == 0.0:
            return -math.inf
        g += (dH * lam + math.log(hv)) / d**k
        pz, pw = p.evaluate((vz, vw)), q.evaluate((vz, vw))
        s = _sup(pz, pw)
        lam = e * lam + math.log(s)
        vz, vw = pz / s, pw / s
    return g


def escape_rate_constant_case(dec: Decomposition, x) -> float:
    """Closed form for e = 0: (1/d) log|H(x)| + log|H(a,b)| / (d(d-1)).

    (a, b) is the constant pair of the decomposition at the scale that
    multiplies back to the lift, which makes the value independent of how
    the scale is split between H and the constant.  Returns -inf on hole
    lines.
    """
    if dec.e != 0:
        raise ValueError("closed form requires deg(phi) = 0")
    if dec.indeterminate:
        raise IndeterminateMapError("escape rate undefined on indeterminacy locus")
    d = dec.d
    if d < 2:
        raise MathDomainError("closed form requires d >= 2")
    p, q = dec.phi
    a, b = complex(p.coeffs[0]), complex(q.coeffs[0])
    hx = abs(dec.H.evaluate((complex(x[0]), complex(x[1]))))
    hab = abs(dec.H.evaluate((a, b)))
    if hx == 0.0:
        return -math.inf
    return math.log(hx) / d + math.log(hab) / (d * (d - 1))


def functional_equation_residual(f: BoundaryMap, x, n_max: int = 60,
                                 tol: float = 1e-13) -> float:
    """|G(F(x)) - d G(x)|, which the defining limit forces to vanish."""
    z, w = complex(x[0]), complex(x[1])
    fx = f.evaluate_pair((z, w))
    g_x = escape_rate(f, (z, w), n_max, tol)
    g_fx = escape_rate(f, fx, n_max, tol)
    if not (g_x.finite and g_fx.finite):
        raise MathDomainError("orbit hit a hole line; functional equation undefined")
    return abs(g_fx.value - f.d * g_x.value)


def sup_normalization(f: BoundaryMap, n_grid: int = 12, n_max: int = 60,
                      tol: float = 1e-12) -> float:
    """sup{G_F(x) : ||x|| = 1} over a deterministic sup-sphere grid.

    Utility for the normalization sup G = 0 of lift comparisons; no
    convergence assertion is attached to it.
    """
    best = -math.inf
    angles = [2 * math.pi * k / n_grid for k in range(n_grid)]
    radii = [j / (n_grid // 2) for j in range(n_grid // 2 + 1)]
    dec = decompose(f)
    for th in angles:
        u = math.cos(th) + 1j * math.sin(th)
        for r in radii:
            for ph in angles:
                v = r * (math.cos(ph) + 1j * math.sin(ph))
                for x in ((u, v), (v, u)):
                    val = escape_rate(f, x, n_max, tol, dec=dec)
                    if val.finite and val.value > best:
                        best = val.value
    return best


def escape_grid(f: BoundaryMap, re_range, im_range, n_re: int, n_im: int,
                n_max: int = 50, tol: float = 1e-12):
    """Rows (re z, im z, G(z, 1)) over a rectangle, for CSV export."""
    rows = []
    res = np.linspace(re_range[0], re_range[1], n_re)
    ims = np.linspace(im_range[0], im_range[1], n_im)
    dec = decompose(f)
    for im in ims:
        for re in res:
            val = escape_rate(f, (complex(re, im), 1.0), n_max, tol, dec=dec)
            rows.append((float(re), float(im), val.value))
    return rows


# ---------------------------------------------------------------------------
# cone angles


def cone_angle_report(mu) -> list:
    """Per atom: (point, cone angle 2pi - 4pi*mass, infinite_end = mass >= 1/2).

    A probability measure admits at most two infinite ends; more than two
    flags a malformed input and raises.
    """
    out = []
    infinite_ends = 0
    for pt, mass in mu.atoms:
        if mass > 1.0 + 1e-12:
            raise ValueError(f"atom mass {mass} exceeds 1")
        angle = 2.0 * math.pi - 4.0 * math.pi * mass
        infinite = mass >= 0.5
        infinite_ends += infinite
        out.append((pt, angle, infinite))
    if infinite_ends > 2:
        raise ValueError("more than two infinite ends: not a probability measure")
    return out
