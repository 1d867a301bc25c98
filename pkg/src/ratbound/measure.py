"""Probability measures on P^1 attached to boundary points of Rat_d.

For degenerate f = H*phi (not on the indeterminacy locus) the limit measure
is atomic, supported on the holes and their phi-preimages:

    mu_f = sum_{n>=0} d^-(n+1) sum_i sum_{phi^n(z) = h_i} delta_z,

and when phi is constant simply mu_f = (1/d) sum_i depth_i delta_{h_i}.
Truncating the series at level N leaves exactly (e/d)^N of the mass, which
is carried as an explicit tail bound.  Individual point masses follow the
forward-orbit series

    mu_f({a}) = (1/d) sum_n m(phi^n(a)) depth(phi^n(a)) / d^n,

where m is the running product of local degrees along the orbit.

Maximal-entropy measures of nondegenerate maps are sampled by inverse
iteration: independent backward random walks choosing one of the d
preimages with multiplicity weights.  Weak convergence is quantified
against a fixed family of 1-Lipschitz test functions z -> chordal(z, c)
over a deterministic 32-point design (version 1: the two poles plus a
30-point Fibonacci sphere lattice); the design is frozen so distances are
reproducible across implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULTS
from .errors import ExceptionalPointError, IndeterminateMapError
from .hpoly import HPoly, RootList, roots
from .projline import (
    ProjPoint,
    canonicalize,
    canonicalize_rows,
    chordal_cross,
    chordal_distance,
)
from .ratmap import (
    BoundaryMap,
    Decomposition,
    apply_pair,
    decompose,
    local_degree,
    _match_hole,
)

DESIGN_VERSION = 1
_DESIGN_CACHE = None


def design_points() -> np.ndarray:
    """The frozen 32-point test family centers (version 1), as canonical rows."""
    global _DESIGN_CACHE
    if _DESIGN_CACHE is None:
        pts = [[1.0, 0.0], [0.0, 1.0]]  # infinity and zero
        n = 30
        golden = math.pi * (3.0 - math.sqrt(5.0))
        for k in range(n):
            y = 1.0 - 2.0 * (k + 0.5) / n
            r = math.sqrt(max(1.0 - y * y, 0.0))
            theta = golden * k
            x1, x2 = r * math.cos(theta), r * math.sin(theta)
            zeta = complex(x1, x2) / (1.0 - y)
            pts.append([zeta, 1.0])
        _DESIGN_CACHE = canonicalize_rows(np.array(pts, dtype=complex))
        _DESIGN_CACHE.flags.writeable = False
    return _DESIGN_CACHE


@dataclass
class AtomicMeasure:
    """Finite weighted atom list with an explicit truncation tail bound."""

    points: np.ndarray = field(repr=False)  # (n, 2) canonical rows
    masses: np.ndarray = field(repr=False)  # (n,) positive
    tail_bound: float = 0.0
    note: str = ""

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).reshape(-1, 2)
        self.masses = np.asarray(self.masses, dtype=float).reshape(-1)
        if len(self.points) != len(self.masses):
            raise ValueError("points and masses length mismatch")

    def total_mass(self) -> float:
        return float(self.masses.sum())

    @property
    def atoms(self):
        return [
            (ProjPoint(complex(z), complex(w)), float(m))
            for (z, w), m in zip(self.points, self.masses)
        ]

    def mass_near(self, pt: ProjPoint, radius: float = DEFAULTS.hole_match) -> float:
        d = chordal_cross(self.points, pt.as_array()[None, :])[:, 0]
        return float(self.masses[d <= radius].sum())

    def to_json(self):
        return {
            "atoms": [
                {"point": [[z.real, z.imag], [w.real, w.imag]], "mass": float(m)}
                for (z, w), m in zip(self.points, self.masses)
            ],
            "tail_bound": self.tail_bound,
            "note": self.note,
        }

    @staticmethod
    def from_json(data) -> "AtomicMeasure":
        pts = [
            [complex(a["point"][0][0], a["point"][0][1]),
             complex(a["point"][1][0], a["point"][1][1])]
            for a in data["atoms"]
        ]
        masses = [a["mass"] for a in data["atoms"]]
        return AtomicMeasure(
            canonicalize_rows(np.array(pts, dtype=complex)) if pts else np.zeros((0, 2), complex),
            np.array(masses, dtype=float),
            data.get("tail_bound", 0.0),
            data.get("note", ""),
        )


@dataclass
class EmpiricalMeasure:
    """A uniform cloud of backward-orbit endpoints; reproducible from its seed."""

    samples: np.ndarray = field(repr=False)  # (n, 2) canonical rows
    seed: int
    depth: int
    source: str = ""

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex).reshape(-1, 2)
        if len(self.samples) == 0:
            raise ValueError("empirical measure needs at least one sample")

    @property
    def count(self) -> int:
        return len(self.samples)

    def total_mass(self) -> float:
        return 1.0

    def to_json(self):
        return {
            "samples": [[[z.real, z.imag], [w.real, w.imag]] for z, w in self.samples],
            "seed": self.seed,
            "depth": self.depth,
            "count": self.count,
            "source": self.source,
        }


def _points_weights(mu):
    if isinstance(mu, AtomicMeasure):
        return mu.points, mu.masses
    if isinstance(mu, EmpiricalMeasure):
        n = mu.count
        return mu.samples, np.full(n, 1.0 / n)
    raise TypeError(f"not a measure: {type(mu).__name__}")


# ---------------------------------------------------------------------------
# preimages


def preimages(phi, a: ProjPoint, tol: float = 1e-10) -> RootList:
    """Roots of beta*p - alpha*q for a = (alpha:beta); multiplicities sum to e."""
    p, q = phi
    fiber = a.w * p - a.z * q
    if fiber.is_zero:
        raise ValueError("fiber polynomial vanished: pair is not coprime")
    return roots(fiber, tol)


def _companion_eigen_roots(C):
    """Roots (as (k, e) array) of the monic-normalized rows of C (k, e+1)."""
    k, width = C.shape
    e = width - 1
    monic = C / C[:, -1:]
    A = np.zeros((k, e, e), dtype=complex)
    if e > 1:
        idx = np.arange(e - 1)
        A[:, idx + 1, idx] = 1.0
    A[:, :, -1] = -monic[:, :-1]
    return np.linalg.eigvals(A)


def batched_preimage_slots(phi, pts) -> np.ndarray:
    """Preimage slots under phi of each row of pts: (n, e, 2) canonical.

    Each row yields exactly e slots counted with multiplicity.  Rows are
    solved in whichever affine chart has the larger leading coefficient;
    rows degenerate in both charts fall back to the robust root finder.
    """
    p, q = phi
    e = p.degree
    pts = np.asarray(pts, dtype=complex).reshape(-1, 2)
    n = len(pts)
    C = pts[:, 1:2] * p.coeffs[None, :] - pts[:, 0:1] * q.coeffs[None, :]
    rowmax = np.abs(C).max(axis=1)
    if np.any(rowmax == 0.0):
        raise ValueError("fiber polynomial vanished: pair is not coprime")
    lead_z = np.abs(C[:, -1])
    lead_w = np.abs(C[:, 0])
    floor = 1e-12 * rowmax
    use_z = (lead_z >= lead_w) & (lead_z > floor)
    use_w = (~use_z) & (lead_w > floor)
    fallback = ~(use_z | use_w)

    out = np.empty((n, e, 2), dtype=complex)
    if use_z.any():
        rts = _companion_eigen_roots(C[use_z])
        out[use_z, :, 0] = rts
        out[use_z, :, 1] = 1.0
    if use_w.any():
        rts = _companion_eigen_roots(C[use_w, ::-1])
        out[use_w, :, 0] = 1.0
        out[use_w, :, 1] = rts
    for i in np.nonzero(fallback)[0]:
        fiber = HPoly(e, C[i])
        slots = []
        for pt, mult in roots(fiber, 1e-10):
            slots.extend([pt.as_array()] * mult)
        out[i] = np.array(slots)
    return canonicalize_rows(out.reshape(-1, 2)).reshape(n, e, 2)


# ---------------------------------------------------------------------------
# atom merging


def merge_atoms(points, masses, eps: float = DEFAULTS.pt):
    """Merge atoms within chordal eps; masses add, location = weighted mean.

    Small lists get a full pairwise merge; large ones a bucket merge on an
    eps grid (near-duplicates across bucket edges may stay separate, which
    only affects presentation, never totals).
    """
    points = np.asarray(points, dtype=complex).reshape(-1, 2)
    masses = np.asarray(masses, dtype=float).reshape(-1)
    n = len(points)
    if n <= 1:
        return points, masses
    if n <= 3000:
        return _merge_pairwise(points, masses, eps)
    return _merge_buckets(points, masses, eps)


def _weighted_center(pts, wts):
    seed = pts[0]
    t = pts @ np.conj(seed)
    phases = np.where(np.abs(t) > 0, t / np.where(np.abs(t) == 0, 1, np.abs(t)), 1.0)
    avg = (wts[:, None] * np.conj(phases)[:, None] * pts).sum(axis=0)
    return canonicalize(avg[0], avg[1]).as_array()


def _merge_pairwise(points, masses, eps):
    D = chordal_cross(points, points)
    n = len(points)
    used = np.zeros(n, dtype=bool)
    out_p, out_m = [], []
    for i in range(n):
        if used[i]:
            continue
        group = (~used) & (D[i] <= eps)
        used |= group
        idx = np.nonzero(group)[0]
        if len(idx) == 1:
            out_p.append(points[i])
            out_m.append(masses[i])
        else:
            out_p.append(_weighted_center(points[idx], masses[idx]))
            out_m.append(masses[idx].sum())
    return np.array(out_p), np.array(out_m)


def _merge_buckets(points, masses, eps):
    grid = max(eps, 1e-12)
    reals = np.column_stack(
        [points[:, 0].real, points[:, 0].imag, points[:, 1].real, points[:, 1].imag]
    )
    keys = np.round(reals / grid).astype(np.int64)
    order = {}
    out_p, out_m = [], []
    for i, key in enumerate(map(tuple, keys)):
        j = order.get(key)
        if j is None:
            order[key] = len(out_p)
            out_p.append(points[i])
            out_m.append(masses[i])
        else:
            total = out_m[j] + masses[i]
            out_p[j] = (out_m[j] * out_p[j] + masses[i] * points[i]) / total
            out_m[j] = total
    out = canonicalize_rows(np.array(out_p))
    return out, np.array(out_m)


# ---------------------------------------------------------------------------
# the boundary measure and its point masses


def boundary_measure(dec: Decomposition, tol: float = 1e-9,
                     max_atoms: int = 400_000) -> AtomicMeasure:
    """The atomic measure of a degenerate map, truncated with an exact tail.

    Levels n = 0, 1, ... contribute the phi^n-preimages of the holes at
    weight d^-(n+1); level n carries exactly (1 - e/d)(e/d)^n of the mass,
    so stopping after N levels leaves tail_bound = (e/d)^N.  Expansion also
    stops early if the next level would exceed max_atoms (the reported
    tail_bound always reflects the levels actually included).
    """
    d, e = dec.d, dec.e
    if e == d:
        raise ValueError("map is nondegenerate: mu_f is not atomic, use sampling")
    note = "formal: measure map discontinuous here" if dec.indeterminate else ""
    hole_pts = np.array([pt.as_array() for pt, _ in dec.holes])
    depths = np.array([m for _, m in dec.holes], dtype=float)

    if e == 0:
        pts, ms = merge_atoms(hole_pts, depths / d)
        return AtomicMeasure(pts, ms, 0.0, note)

    n_levels = 1
    while (e / d) ** n_levels >= tol:
        n_levels += 1

    all_pts = [hole_pts]
    all_ms = [depths / d]
    cur_pts, cur_ms = hole_pts, depths / d
    total = len(cur_pts)
    level = 1
    while level < n_levels:
        if total + len(cur_pts) * e > max_atoms:
            break
        slots = batched_preimage_slots(dec.phi, cur_pts)
        child_pts = slots.reshape(-1, 2)
        child_ms = np.repeat(cur_ms / d, e)
        child_pts, child_ms = merge_atoms(child_pts, child_ms)
        all_pts.append(child_pts)
        all_ms.append(child_ms)
        cur_pts, cur_ms = child_pts, child_ms
        total += len(child_pts)
        level += 1

    pts = np.concatenate(all_pts)
    ms = np.concatenate(all_ms)
    pts, ms = merge_atoms(pts, ms)
    return AtomicMeasure(pts, ms, (e / d) ** level, note)


def point_mass(dec: Decomposition, a: ProjPoint, tol: float = 1e-12,
               n_max: int = 400):
    """mu_f({a}) by the forward-orbit series; returns (mass, error_bound).

    The running multiplicity m is the product of local degrees of phi along
    the orbit; truncating after the d^-(k+1) term leaves at most m/d^(k+1),
    which is the returned geometric error bound.  For e = 0 the mass is
    read directly off the hole list (error 0).
    """
    d, e = dec.d, dec.e
    if e == d:
        return 0.0, 0.0
    if e == 0:
        depth = dec.holes.multiplicity_at(a)
        return depth / d, 0.0
    mass = Fraction(0)
    m = 1
    x = a
    tail = Fraction(1)
    tol_exact = Fraction(tol)
    for k in range(n_max):
        depth, x = _match_hole(x, dec.holes, DEFAULTS.hole_match)
        if depth:
            mass += Fraction(m * depth, d ** (k + 1))
        m *= local_degree(dec.phi, x)
        tail = Fraction(m, d ** (k + 1))
        if tail < tol_exact:
            break
        x = apply_pair(dec.phi, x)
    return float(mass), float(tail)


def pullback(dec: Decomposition, mu: AtomicMeasure, normalize: bool = False) -> AtomicMeasure:
    """f^* mu: phi-preimages of every atom plus one unit atom per hole depth.

    Unnormalized total mass is e*|mu| + sum(depths); pass normalize=True to
    divide by d (the operator whose unique fixed point is mu_f).
    """
    if dec.indeterminate:
        raise IndeterminateMapError("pullback undefined on indeterminacy locus")
    d, e = dec.d, dec.e
    hole_pts = np.array([pt.as_array() for pt, _ in dec.holes]).reshape(-1, 2)
    depths = np.array([float(m) for _, m in dec.holes])
    if e == 0:
        pts, ms = hole_pts, depths
    else:
        slots = batched_preimage_slots(dec.phi, mu.points)
        pts = np.concatenate([slots.reshape(-1, 2), hole_pts])
        ms = np.concatenate([np.repeat(mu.masses, e), depths])
    pts, ms = merge_atoms(pts, ms)
    scale = d if normalize else 1.0
    tail = mu.tail_bound * e / scale
    return AtomicMeasure(pts, ms / scale, tail, mu.note)


# ---------------------------------------------------------------------------
# inverse-iteration sampling


def _distinct_count(points, eps=DEFAULTS.hole_match):
    pts, _ = merge_atoms(points, np.ones(len(points)), eps)
    return len(pts)


def backward_tree(f: BoundaryMap, a: ProjPoint, depth: int,
                  tol: float = 1e-10) -> AtomicMeasure:
    """Exact enumeration of f^-depth(a) with multiplicities, mass d^-depth each.

    Brute-force oracle for the sampler; feasible for d^depth in the
    thousands.
    """
    d = f.d
    atoms = [(a, 1)]
    for _ in range(depth):
        nxt = []
        for pt, mult in atoms:
            for child, cm in preimages(f.pair(), pt, tol):
                nxt.append((child, mult * cm))
        pts = np.array([p.as_array() for p, _ in nxt])
        ms = np.array([float(m) for _, m in nxt])
        pts, ms = merge_atoms(pts, ms, DEFAULTS.pt)
        atoms = [(canonicalize(p[0], p[1]), m) for p, m in zip(pts, ms)]
    pts = np.array([p.as_array() for p, _ in atoms])
    ms = np.array([m for _, m in atoms], dtype=float) / d**depth
    return AtomicMeasure(pts, ms, 0.0, "exact backward tree")


def sample_max_entropy(f: BoundaryMap, a: ProjPoint, depth: int, count: int,
                       seed: int, workers: int = 1,
                       gcd_tol: float = DEFAULTS.gcd) -> EmpiricalMeasure:
    """Inverse-iteration sample cloud of the maximal-entropy measure.

    Runs `count` independent backward orbits from a, at each step choosing
    one of the d preimages uniformly with multiplicity weights.  The stream
    is deterministic given (seed, workers): worker i draws from
    default_rng([seed, i]) and chunks are concatenated in worker order.
    """
    if depth < 1 or count < 1 or workers < 1:
        raise ValueError("depth, count and workers must be positive")
    dec = decompose(f, gcd_tol)
    if dec.e != f.d:
        raise ValueError("sampling requires a nondegenerate map")
    probe = backward_tree(f, a, min(3, depth))
    if len(probe.points) == 1:
        raise ExceptionalPointError("exceptional point")

    d = f.d
    chunks = []
    base = count // workers
    sizes = [base + (1 if i < count % workers else 0) for i in range(workers)]
    for widx, size in enumerate(sizes):
        if size == 0:
            continue
        rng = np.random.default_rng([seed, widx])
        X = np.tile(a.as_array(), (size, 1))
        for _ in range(depth):
            slots = batched_preimage_slots(f.pair(), X)
            pick = rng.integers(0, d, size)
            X = slots[np.arange(size), pick]
        chunks.append(X)
    samples = np.concatenate(chunks)
    return EmpiricalMeasure(
        samples, seed=seed, depth=depth,
        source=f"inverse-iteration d={f.d} count={count} workers={workers}",
    )


# ---------------------------------------------------------------------------
# weak distance and disk masses


def weak_distance(mu, nu) -> float:
    """max_j |int f_j dmu - int f_j dnu| over the frozen test family.

    The f_j(z) = chordal(z, c_j) are 1-Lipschitz, so this metrizes weak
    convergence up to the design resolution; symmetric and bounded by 1.
    """
    for m in (mu, nu):
        t = m.total_mass()
        if not 0.9 <= t <= 1.1:
            raise ValueError(f"total mass {t} outside [0.9, 1.1]")
    design = design_points()
    p1, w1 = _points_weights(mu)
    p2, w2 = _points_weights(nu)
    i1 = w1 @ chordal_cross(p1, design)
    i2 = w2 @ chordal_cross(p2, design)
    return float(np.abs(i1 - i2).max())


def mass_in_disk(mu, center: ProjPoint, radius: float) -> float:
    """Total weight within chordal radius of the center."""
    pts, wts = _points_weights(mu)
    dist = chordal_cross(pts, center.as_array()[None, :])[:, 0]
    return float(wts[dist <= radius].sum())


# ---------------------------------------------------------------------------
# support report


def _nonexceptional_hole(dec: Decomposition, probe_depth: int = 3):
    """First hole whose backward tree grows to >= 3 distinct points, if any."""
    for pt, _ in dec.holes:
        cloud = [(pt, 1)]
        seen = [pt.as_array()]
        for _ in range(probe_depth):
            nxt = []
            for x, m in cloud:
                for child, cm in preimages(dec.phi, x, 1e-10):
                    nxt.append((child, m * cm))
            cloud = nxt
            seen.extend(x.as_array() for x, _ in cloud)
            if _distinct_count(np.array(seen)) >= 3:
                return pt
    return None


def support_report(dec: Decomposition, mu: AtomicMeasure | None = None):
    """Classify supp(mu_f) for degenerate f: J(f) vs the exceptional set.

    Reports which structural case applies; the detection is a finite
    backward/forward probe, and no claim is computed beyond the detected
    case.
    """
    if dec.e == dec.d:
        raise ValueError("support report applies to degenerate maps")
    rep = {
        "e": dec.e,
        "holes": [{"point": pt.to_json(), "depth": m} for pt, m in dec.holes],
    }
    if dec.e == 0:
        rep["case"] = "constant"
        rep["claim"] = "J(phi) is empty; supp mu_f is the hole set itself"
        return rep
    witness = _nonexceptional_hole(dec)
    orbits = {}
    for pt, _ in dec.holes:
        x = pt
        orbit = [x]
        for _ in range(20):
            x = apply_pair(dec.phi, x)
            orbit.append(x)
        hits = sum(
            1 for y in orbit if any(chordal_distance(y, h) <= DEFAULTS.hole_match
                                    for h, _ in dec.holes)
        )
        orbits[repr(pt)] = {"length": len(orbit), "hole_hits": hits}
    rep["forward_orbit_probe"] = orbits
    if witness is not None:
        rep["case"] = "non-exceptional hole"
        rep["witness_hole"] = witness.to_json()
        rep["claim"] = "a hole is non-exceptional for phi, so supp mu_f = J(f)"
    else:
        rep["case"] = "all holes exceptional"
        rep["claim"] = "supp mu_f is contained in the exceptional set of phi"
    return rep
