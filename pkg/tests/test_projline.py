import math

import numpy as np
import pytest

from ratbound import (
    INFINITY,
    ZERO,
    Mobius,
    canonicalize,
    chordal_distance,
    mobius_apply,
)
from ratbound.projline import canonicalize_rows, chordal_cross


def test_canonicalize_scaling():
    p = canonicalize(2, 0)
    assert p.z == 1 and p.w == 0


def test_canonicalize_phase():
    p = canonicalize(0, -3j)
    assert abs(p.z) == 0 and abs(p.w - 1) < 1e-15


def test_canonicalize_direct_normalization():
    # direct oracle: (1,1) / ||(1,1)||
    p = canonicalize(1, 1)
    assert abs(p.z - 1 / math.sqrt(2)) < 1e-15
    assert abs(p.w - 1 / math.sqrt(2)) < 1e-15


def test_canonicalize_idempotent_and_scale_invariant():
    rng = np.random.default_rng(42)
    for _ in range(50):
        z, w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        lam = rng.standard_normal() + 1j * rng.standard_normal()
        if lam == 0:
            continue
        p = canonicalize(z, w)
        q = canonicalize(lam * z, lam * w)
        assert chordal_distance(p, q) < 1e-12
        r = canonicalize(p.z, p.w)
        assert abs(r.z - p.z) < 1e-14 and abs(r.w - p.w) < 1e-14


def test_canonicalize_rejects_origin():
    with pytest.raises(ValueError):
        canonicalize(0, 0)


def test_chordal_antipodal_and_identity():
    assert chordal_distance(ZERO, INFINITY) == 1.0
    p = canonicalize(0.3 + 0.7j, 1)
    assert chordal_distance(p, p) == 0.0


def test_chordal_formula_value():
    # |1*0 - 1*1| / sqrt(2) for (1:1) vs (1:0)
    assert abs(chordal_distance(canonicalize(1, 1), INFINITY) - 1 / math.sqrt(2)) < 1e-15


def test_chordal_triangle_inequality():
    rng = np.random.default_rng(7)
    for _ in range(200):
        pts = [
            canonicalize(*(rng.standard_normal(2) + 1j * rng.standard_normal(2)))
            for _ in range(3)
        ]
        a, b, c = pts
        assert chordal_distance(a, c) <= (
            chordal_distance(a, b) + chordal_distance(b, c) + 1e-12
        )


def test_mobius_identity_and_swap():
    p = canonicalize(0.2 - 0.4j, 1)
    assert chordal_distance(mobius_apply(Mobius.identity(), p), p) < 1e-15
    assert chordal_distance(mobius_apply(Mobius.swap(), INFINITY), ZERO) < 1e-15


def test_mobius_translation():
    p = mobius_apply(Mobius.translation(1), canonicalize(1, 1))
    assert chordal_distance(p, canonicalize(2, 1)) < 1e-15


def test_mobius_inverse_roundtrip():
    rng = np.random.default_rng(3)
    for _ in range(30):
        a, b, c, d = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        M = Mobius(a, b, c, d)
        if M.is_singular(1e-6):
            continue
        p = canonicalize(*(rng.standard_normal(2) + 1j * rng.standard_normal(2)))
        q = mobius_apply(M.inverse(), mobius_apply(M, p))
        assert chordal_distance(p, q) < 1e-12


def test_mobius_singular_rejected():
    with pytest.raises(ValueError):
        mobius_apply(Mobius(1, 1, 1, 1), ZERO)


def test_point_json_roundtrip():
    p = canonicalize(1.5 - 2.5j, 0.3j)
    q = type(p).from_json(p.to_json())
    assert chordal_distance(p, q) < 1e-15


def test_canonicalize_rows_matches_scalar():
    rng = np.random.default_rng(11)
    raw = rng.standard_normal((40, 2)) + 1j * rng.standard_normal((40, 2))
    rows = canonicalize_rows(raw)
    for raw_row, row in zip(raw, rows):
        p = canonicalize(raw_row[0], raw_row[1])
        assert abs(p.z - row[0]) < 1e-12 and abs(p.w - row[1]) < 1e-12


def test_chordal_cross_matches_scalar():
    rng = np.random.default_rng(13)
    A = canonicalize_rows(rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2)))
    B = canonicalize_rows(rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))
    D = chordal_cross(A, B)
    for i in range(5):
        for j in range(4):
            pi = canonicalize(A[i, 0], A[i, 1])
            qj = canonicalize(B[j, 0], B[j, 1])
            assert abs(D[i, j] - chordal_distance(pi, qj)) < 1e-12
