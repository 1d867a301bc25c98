import numpy as np
import pytest

from ratbound import (
    INFINITY,
    ZERO,
    HPoly,
    canonicalize,
    chordal_distance,
    compose_pair,
    numeric_gcd,
    projective_residual,
    pullback_poly,
    resultant,
    roots,
    vanishing_order,
    wronskian,
)
from ratbound.hpoly import count_zeros_in_disk, substitute


def hp(*coeffs):
    return HPoly.from_coeffs(coeffs)


Z = HPoly.z()
W = HPoly.w()


# -- evaluation --------------------------------------------------------------


def test_evaluate_monomials():
    assert abs(hp(0, 0, 1).evaluate((2, 5)) - 4) < 1e-12  # z^2
    assert abs(hp(0, 1, 0).evaluate((1, 1)) - 1) < 1e-12  # zw


def test_evaluate_direct_sum():
    # z^3 + 2 w^3 at (1,2): 1 + 16 = 17
    assert abs(hp(2, 0, 0, 1).evaluate((1, 2)) - 17) < 1e-12


def test_evaluate_homogeneity():
    rng = np.random.default_rng(0)
    P = hp(*(rng.standard_normal(5) + 1j * rng.standard_normal(5)))
    z, w, lam = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    lhs = P.evaluate((lam * z, lam * w))
    rhs = lam**4 * P.evaluate((z, w))
    assert abs(lhs - rhs) < 1e-12 * abs(rhs)


# -- products and composition ------------------------------------------------


def test_multiply_basic():
    zw = Z * W
    assert np.allclose(zw.coeffs, [0, 1, 0])
    sq = (Z + W) * (Z + W)
    assert np.allclose(sq.coeffs, [1, 2, 1])


def test_multiply_convolution():
    prod = hp(-1, 0, 1) * hp(1, 0, 1)  # (z^2-w^2)(z^2+w^2) = z^4 - w^4
    assert np.allclose(prod.coeffs, [-1, 0, 0, 0, 1])


def test_compose_identity_sides():
    F = (hp(0, 0, 1), hp(1, 0, 0))  # (z^2, w^2)
    G = (Z, W)
    R = compose_pair(F, G)
    assert np.allclose(R[0].coeffs, F[0].coeffs)
    assert np.allclose(R[1].coeffs, F[1].coeffs)
    L = compose_pair((Z, W), (hp(0, 1), hp(1, 0)))
    assert np.allclose(L[0].coeffs, [0, 1])
    assert np.allclose(L[1].coeffs, [1, 0])


def test_compose_substitute_expand():
    # (z^2, w^2) o (zw, w^2) = (z^2 w^2, w^4)
    R = compose_pair((hp(0, 0, 1), hp(1, 0, 0)), (hp(0, 1, 0), hp(1, 0, 0)))
    assert np.allclose(R[0].coeffs, [0, 0, 1, 0, 0])
    assert np.allclose(R[1].coeffs, [1, 0, 0, 0, 0])


def test_compose_bihomogeneous_degrees():
    # linear in F's coefficients, degree-d homogeneous in G's
    rng = np.random.default_rng(1)
    F = tuple(hp(*(rng.standard_normal(3) + 1j * rng.standard_normal(3))) for _ in range(2))
    G = tuple(hp(*(rng.standard_normal(3) + 1j * rng.standard_normal(3))) for _ in range(2))
    lam = 0.7 - 1.2j
    A = compose_pair((lam * F[0], lam * F[1]), G)
    B = compose_pair(F, (lam * G[0], lam * G[1]))
    base = compose_pair(F, G)
    assert np.allclose(A[0].coeffs, lam * base[0].coeffs)
    assert np.allclose(B[0].coeffs, lam**2 * base[0].coeffs)


def test_compose_associative_projectively():
    rng = np.random.default_rng(2)
    mk = lambda: tuple(
        hp(*(rng.standard_normal(3) + 1j * rng.standard_normal(3))) for _ in range(2)
    )
    F, G, K = mk(), mk(), mk()
    A = compose_pair(F, compose_pair(G, K))
    B = compose_pair(compose_pair(F, G), K)
    va = np.concatenate([A[0].coeffs, A[1].coeffs])
    vb = np.concatenate([B[0].coeffs, B[1].coeffs])
    assert projective_residual(va, vb) < 1e-9


def test_pullback_poly():
    H = hp(-1, 1)  # z - w
    assert np.allclose(pullback_poly((Z, W), H).coeffs, H.coeffs)
    assert np.allclose(pullback_poly((hp(1, 0), hp(0, 1)), Z).coeffs, [1, 0])
    out = pullback_poly((hp(0, 0, 1), hp(1, 0, 0)), H)  # z^2 - w^2
    assert np.allclose(out.coeffs, [-1, 0, 1])


# -- resultant ---------------------------------------------------------------


def test_resultant_disjoint_unit():
    for d in (1, 2, 3, 5):
        zd = HPoly(d, np.eye(d + 1, dtype=complex)[d])
        wd = HPoly(d, np.eye(d + 1, dtype=complex)[0])
        assert abs(abs(resultant(zd, wd)) - 1) < 1e-12


def test_resultant_shared_root():
    assert abs(resultant(hp(0, 1, 0), hp(1, 0, 0))) < 1e-14  # zw, w^2


def test_resultant_derived_value():
    # oracle: Res(p, q) = lead(p)^deg q * prod q(roots of p)
    # p = z^2 - 1 roots +-1, q = z^2 + 1: q(1) q(-1) = 4
    assert abs(resultant(hp(-1, 0, 1), hp(1, 0, 1)) - 4) < 1e-12


def test_resultant_vs_product_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        pr = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        qr = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        P = HPoly.from_roots([(canonicalize(r, 1), 1) for r in pr])
        Q = HPoly.from_roots([(canonicalize(r, 1), 1) for r in qr])
        # product formula over the affine roots; both monic-leading here
        lead_p = P.coeffs[-1]
        lead_q = Q.coeffs[-1]
        val = lead_p ** Q.degree * lead_q ** P.degree
        for r in pr:
            for s in qr:
                val *= r - s
        assert abs(resultant(P, Q) - val) < 1e-9 * max(1, abs(val))


def test_resultant_zero_iff_shared_root_random():
    rng = np.random.default_rng(4)
    for _ in range(20):
        pr = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        qr = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        P = HPoly.from_roots([(canonicalize(r, 1), 1) for r in pr])
        Q = HPoly.from_roots([(canonicalize(r, 1), 1) for r in qr])
        assert abs(resultant(P.normalize(), Q.normalize())) > 1e-8
        shared = canonicalize(qr[0], 1)
        P2 = HPoly.from_roots([(canonicalize(pr[0], 1), 1), (shared, 1)])
        Q2 = HPoly.from_roots([(canonicalize(qr[1], 1), 1), (shared, 1)])
        assert abs(resultant(P2.normalize(), Q2.normalize())) < 1e-10


# -- roots -------------------------------------------------------------------


def test_roots_monomial():
    rl = roots(hp(0, 0, 1, 0), 1e-8)  # z^2 w
    assert rl.multiplicity_at(ZERO) == 2
    assert rl.multiplicity_at(INFINITY) == 1


def test_roots_factorization():
    rl = roots(hp(-1, 0, 1), 1e-8)  # z^2 - w^2
    assert rl.multiplicity_at(canonicalize(1, 1), 1e-8) == 1
    assert rl.multiplicity_at(canonicalize(-1, 1), 1e-8) == 1


def test_roots_cluster_multiplicity():
    # (z - w)^3 w: three nearby numeric roots cluster to multiplicity 3
    P = HPoly.from_roots([(canonicalize(1, 1), 3), (ZERO, 1)])
    rl = roots(P, 1e-5)
    assert rl.multiplicity_at(canonicalize(1, 1), 1e-4) == 3
    assert rl.multiplicity_at(ZERO) == 1
    assert rl.total_multiplicity() == 4


def test_roots_total_multiplicity_random():
    rng = np.random.default_rng(5)
    for deg in (1, 2, 5, 8, 12, 16):
        P = hp(*(rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)))
        rl = roots(P, 1e-8)
        assert rl.total_multiplicity() == deg


def test_roots_accuracy_well_separated():
    # 1e-10 accuracy on chordally well-separated roots of degree <= 16
    # (moduli near 1; integer-ladder roots are the classic ill-conditioned case)
    pts = [
        canonicalize((1 + 0.2 * (k % 3)) * np.exp(2j * np.pi * k / 14), 1)
        for k in range(14)
    ]
    P = HPoly.from_roots([(p, 1) for p in pts])
    rl = roots(P, 1e-8)
    for p in pts:
        best = min(chordal_distance(p, q) for q, _ in rl)
        assert best < 1e-10


def test_roots_product_reconstruction():
    rng = np.random.default_rng(6)
    for deg in (2, 4, 6, 8):
        P = hp(*(rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)))
        rl = roots(P, 1e-8)
        R = HPoly.from_roots(rl.entries)
        assert projective_residual(P.coeffs, R.coeffs) < 1e-8


def test_roots_zero_poly_rejected():
    with pytest.raises(ValueError):
        roots(HPoly.zero(3))


def test_roots_resultant_consistency():
    rng = np.random.default_rng(7)
    for _ in range(10):
        pr = [canonicalize(r, 1) for r in rng.standard_normal(3) + 1j * rng.standard_normal(3)]
        qr = [canonicalize(r, 1) for r in rng.standard_normal(3) + 1j * rng.standard_normal(3)]
        P = HPoly.from_roots([(p, 1) for p in pr]).normalize()
        Q = HPoly.from_roots([(p, 1) for p in qr]).normalize()
        res = abs(resultant(P, Q))
        shares = any(
            chordal_distance(p, q) < 1e-9 for p, _ in roots(P, 1e-8) for q, _ in roots(Q, 1e-8)
        )
        assert (res < 1e-10) == shares


# -- gcd ---------------------------------------------------------------------


def test_gcd_monomials():
    H, p, q = numeric_gcd(hp(0, 0, 1, 0), hp(0, 1, 0, 0), 1e-6)  # z^2 w, z w^2
    assert H.degree == 2
    assert roots(H, 1e-8).multiplicity_at(ZERO) == 1
    assert roots(H, 1e-8).multiplicity_at(INFINITY) == 1
    assert projective_residual(p.coeffs, [0, 1]) < 1e-12  # p ~ z
    assert projective_residual(q.coeffs, [1, 0]) < 1e-12  # q ~ w


def test_gcd_coprime_gives_constant():
    rng = np.random.default_rng(8)
    P = hp(*(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
    Q = hp(*(rng.standard_normal(4) + 1j * rng.standard_normal(4)))
    assert abs(resultant(P.normalize(), Q.normalize())) > 1e-6
    H, p, q = numeric_gcd(P, Q, 1e-8)
    assert H.degree == 0
    assert np.allclose(p.coeffs, P.coeffs)
    assert np.allclose(q.coeffs, Q.coeffs)


def test_gcd_root_matching():
    # P = (z-w)(z+w), Q = (z-w)w: H = z-w, p = z+w, q = w
    shared = canonicalize(1, 1)
    P = HPoly.from_roots([(shared, 1), (canonicalize(-1, 1), 1)])
    Q = HPoly.from_roots([(shared, 1), (INFINITY, 1)])
    H, p, q = numeric_gcd(P, Q, 1e-6)
    assert H.degree == 1
    assert roots(H, 1e-8).multiplicity_at(shared, 1e-8) == 1
    assert projective_residual(p.coeffs, [1, 1]) < 1e-10  # z + w
    assert projective_residual(q.coeffs, [1, 0]) < 1e-10  # w


def test_gcd_zero_polynomial_side():
    P = hp(0, 1, 1, 0)  # zw(z + w)
    H, p, q = numeric_gcd(P, HPoly.zero(3), 1e-8)
    assert projective_residual(H.coeffs, P.coeffs) < 1e-12
    assert q.is_zero and p.degree == 0 and not p.is_zero
    with pytest.raises(ValueError):
        numeric_gcd(HPoly.zero(2), HPoly.zero(2))


def test_gcd_round_trip():
    rng = np.random.default_rng(9)
    for _ in range(10):
        shared = [(canonicalize(r, 1), 1) for r in rng.standard_normal(2) + 1j * rng.standard_normal(2)]
        H0 = HPoly.from_roots(shared)
        p0 = hp(*(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
        q0 = hp(*(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
        P, Q = H0 * p0, H0 * q0
        H, p, q = numeric_gcd(P, Q, 1e-6)
        assert H.degree >= 2
        assert projective_residual((H * p).coeffs, P.coeffs) < 1e-8
        assert projective_residual((H * q).coeffs, Q.coeffs) < 1e-8


def test_gcd_tight_tolerance_sees_split_clusters_as_coprime():
    # a numeric multiplicity-6 root is a cluster of radius ~eps^(1/6) ~ 2e-3;
    # probing far below that scale must coherently report coprimality
    six = canonicalize(1, 1)
    P = HPoly.from_roots([(six, 6)]) * hp(1, 1)
    Q = HPoly.from_roots([(six, 6)]) * hp(2, 1)
    H, p, q = numeric_gcd(P, Q, 1e-9)
    assert H.degree == 0
    assert projective_residual((H * p).coeffs, P.coeffs) < 1e-12
    # while a tolerance above the cluster spread recovers the shared factor
    H2, p2, q2 = numeric_gcd(P, Q, 1e-2)
    assert H2.degree == 6


# -- misc --------------------------------------------------------------------


def test_wronskian_of_squaring_map():
    # (z^2, w^2): W = 2z * 2w has critical points 0 and infinity
    Wr = wronskian((hp(0, 0, 1), hp(1, 0, 0)))
    rl = roots(Wr, 1e-8)
    assert rl.multiplicity_at(ZERO) == 1
    assert rl.multiplicity_at(INFINITY) == 1


def test_vanishing_order():
    P = HPoly.from_roots([(canonicalize(1, 1), 3), (ZERO, 2)])
    assert vanishing_order(P, canonicalize(1, 1)) == 3
    assert vanishing_order(P, ZERO) == 2
    assert vanishing_order(P, canonicalize(5, 1)) == 0


def test_count_zeros_in_disk():
    P = HPoly.from_roots([(canonicalize(1, 1), 3), (ZERO, 2), (INFINITY, 1)])
    assert count_zeros_in_disk(P, canonicalize(1, 1), 1e-2) == 3
    assert count_zeros_in_disk(P, ZERO, 1e-2) == 2
    assert count_zeros_in_disk(P, INFINITY, 1e-2) == 1
    assert count_zeros_in_disk(P, canonicalize(7, 1), 1e-2) == 0


def test_projective_residual_closed_form():
    rng = np.random.default_rng(10)
    a = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    lam = 2.3 - 0.7j
    assert projective_residual(lam * a, a) < 1e-14
    # oracle: brute-force scan over lambda beats the closed form by at most a hair
    b = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    closed = projective_residual(a, b)
    grid = min(
        np.linalg.norm(a - lam * b) / np.linalg.norm(a)
        for lam in (np.vdot(b, a) / np.vdot(b, b)) * (1 + np.linspace(-0.01, 0.01, 41))
    )
    assert closed <= grid + 1e-12
