import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from oracles import correlation_slow, exp_sum_slow
from sqdiff.errors import PreconditionError
from sqdiff.fourier import (ArcMassCalculator, MajorArc, W_hat, W_hat_grid, arc_integral,
                            arc_W2_ratio, arcs_overlapping, balanced_exp_sum,
                            balanced_exp_sum_grid, correlation_count,
                            decomposition_identity_ratio, exp_sum, exp_sum_grid,
                            full_circle_integral, gauss_sum, gauss_sums, integrate,
                            interval_exp_sum, square_weight_arc_ratio, major_arcs, parseval_mass,
                            small_beta_ratio)
from sqdiff.rationals import ReducedRational
from sqdiff.sdf import IntegerSet, greedy_sdf, is_sdf, planted_sdf, random_subset


def test_exp_sum_at_zero_and_one():
    A = greedy_sdf(500)
    assert exp_sum(A, 0) == len(A)
    assert exp_sum(A, 1) == len(A)
    assert exp_sum(A, Fraction(3)) == len(A)


def test_exp_sum_cancellation():
    A = IntegerSet(100, tuple(range(1, 101)))
    assert abs(exp_sum(A, Fraction(1, 2))) < 1e-12
    assert abs(exp_sum(A, 0.5)) < 1e-12


def test_exp_sum_matches_slow_reference():
    rng = random.Random(1)
    A = IntegerSet.of(10**6, rng.sample(range(1, 10**6), 50))
    for g in (Fraction(17, 101), Fraction(1, 3), 0.123456789, 0.5 + 1e-7):
        assert abs(exp_sum(A, g) - exp_sum_slow(A, g)) <= 1e-10 * len(A)
    xs = np.array([0.1, 0.2, 0.77])
    grid = exp_sum_grid(A, xs)
    assert np.allclose(grid, [exp_sum(A, float(x)) for x in xs], atol=1e-9)


def test_interval_dirichlet_closed_form():
    for N in (1, 7, 100):
        for g in (0.01, 0.3, Fraction(2, 7)):
            direct = sum(cmath.exp(2j * math.pi * n * float(g)) for n in range(1, N + 1))
            assert abs(interval_exp_sum(N, g) - direct) < 1e-9


def test_balanced_sum_vanishes():
    A = greedy_sdf(300)
    assert balanced_exp_sum(A, 0) == 0
    full = IntegerSet(50, tuple(range(1, 51)))
    for g in (0.1, 0.37, Fraction(1, 3)):
        assert abs(balanced_exp_sum(full, g)) < 1e-10
    g = np.array([0.0, 0.25, 0.6])
    assert balanced_exp_sum_grid(A, g)[0] == 0


def test_parseval_mass_exact_formula():
    A = greedy_sdf(1000)
    n, N = len(A), A.N
    ones, g2 = parseval_mass(A)
    assert ones == n
    assert g2 == pytest.approx(n * (1 - n / N), rel=1e-14)


def test_W_hat_examples():
    assert W_hat(0, 100) == pytest.approx(11.0, abs=1e-12)
    g = 0.2137
    assert W_hat(g, 1) == pytest.approx(2 * cmath.exp(2j * math.pi * g), abs=1e-14)
    xs = np.linspace(0, 1, 200)
    vals = np.abs(W_hat_grid(xs, 500))
    assert vals.max() <= abs(W_hat(0, 500)) + 1e-9


def test_gauss_examples():
    assert gauss_sum(1, 1) == pytest.approx(1)
    assert gauss_sum(1, 3) == pytest.approx(1j * math.sqrt(3), abs=1e-12)
    assert gauss_sum(1, 4) == pytest.approx(2 + 2j, abs=1e-12)
    assert gauss_sum(1, 3) == pytest.approx(1 + 2 * cmath.exp(2j * math.pi / 3), abs=1e-12)
    with pytest.raises(PreconditionError):
        gauss_sum(2, 4)


def test_gauss_sums_vector_matches_scalar():
    for q in (5, 12, 97, 100):
        vec = gauss_sums(q)
        assert all(abs(vec[a] - gauss_sum(a, q)) < 1e-9 for a in vec)


def test_gauss_sum_vanishes_for_q_2_mod_4():
    for q in (2, 6, 10, 30):
        assert all(abs(v) < 1e-9 for v in gauss_sums(q).values())


def test_major_arc_geometry():
    arc = MajorArc(ReducedRational(1, 3), 5, 1000)
    assert arc.half_width == Fraction(5, 3000)
    assert arc.contains(Fraction(1, 3) + Fraction(1, 1000))
    assert not arc.contains(Fraction(1, 3) + Fraction(1, 100))
    one = MajorArc(ReducedRational(1, 1), 2, 100)
    assert one.contains(0.995) and one.contains(0.01)


def test_major_arcs_disjoint_when_2K2_below_N():
    arcs = major_arcs(10**4, 70)
    assert len(arcs) == sum(1 for q in range(1, 71) for a in range(1, q + 1) if math.gcd(a, q) == 1)
    assert arcs_overlapping(arcs) == []
    # 2K^2 >= N: the check is skipped, and overlaps do occur
    wide = major_arcs(100, 20)
    assert arcs_overlapping(wide)


def test_arc_integral_empty_set():
    A = IntegerSet(100, ())
    arc = MajorArc(ReducedRational(1, 2), 3, 100)
    assert arc_integral(A, arc).value == 0.0


def test_full_circle_parseval():
    A = random_subset(700, 0.3, seed=2)
    for integrand, expect in (("g2", parseval_mass(A)[1]),):
        res = full_circle_integral(A, integrand)
        assert res.converged
        assert res.value == pytest.approx(expect, rel=1e-6)
    ones = integrate(A, 0.0, 1.0, "W2")
    # |W^|^2 integrates to sum of W(n)^2 = sum 4m^2/N
    m = np.arange(1, math.isqrt(700) + 1)
    assert ones.value == pytest.approx(float((4 * m**2 / 700).sum()), rel=1e-6)


def test_closed_form_arc_mass_matches_quadrature():
    A = planted_sdf(3000, 3, 1)
    calc = ArcMassCalculator(A)
    K = 6
    masses = calc.masses_for_denominator(3, K)
    for a, mu in masses.items():
        quad = arc_integral(A, MajorArc(ReducedRational(a, 3), K, A.N)).value
        assert mu == pytest.approx(quad, rel=1e-6)
    assert calc.interval(0.5, 0.5) == pytest.approx(parseval_mass(A)[1], rel=1e-12)
    with pytest.raises(PreconditionError):
        calc.masses_for_denominator(2, A.N)


def test_correlation_examples():
    assert correlation_count(IntegerSet(2, (1, 2))) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert correlation_count(greedy_sdf(2000)) == 0.0


def test_correlation_matches_sdf_and_slow_count():
    rng = random.Random(4)
    for i in range(100):
        N = rng.randint(2, 400)
        A = IntegerSet.of(N, rng.sample(range(1, N + 1), rng.randint(0, min(N, 12))))
        c = correlation_count(A)
        assert (c == 0) == is_sdf(A).ok
        assert c == pytest.approx(correlation_slow(A.elements, N), rel=1e-12, abs=0)


def test_orthogonality_integral_matches_count():
    # integral of 1_A^ conj(1_A^) W^ over the circle equals the combinatorial count
    A = IntegerSet.of(64, [1, 2, 5, 9, 20, 30, 31])
    xs = np.linspace(0, 1, 4097)[:-1]
    f = exp_sum_grid(A, xs)
    w = W_hat_grid(xs, 64)
    integral = np.mean(np.conj(f) * f * w)
    assert integral.real == pytest.approx(correlation_count(A), rel=1e-9)


def test_square_weight_arc_part1_q1_ratio():
    N = 10**4
    assert square_weight_arc_ratio(1, 1, 0.0, N) == pytest.approx(abs(W_hat(0, N)) / 100, rel=1e-12)
    assert square_weight_arc_ratio(1, 1, 0.0, N) == pytest.approx(1.0, abs=0.02)


def test_square_weight_arc_regression(regression):
    N = 10**4
    ref = regression["square_weight_arcs"]
    vals1, vals2 = [], []
    for q in range(2, 51):
        for a in (1, q - 1):
            if math.gcd(a, q) == 1:
                for b in (0.0, 5 / N, -25 / N, 50 / N):
                    vals1.append(square_weight_arc_ratio(a, q, b, N))
                    vals2.append(decomposition_identity_ratio(a, q, b, N))
    assert max(vals1) <= ref["part1_max"] * (1 + 1e-9)
    assert max(vals2) <= ref["identity_max"] * (1 + 1e-9)
    w2 = [arc_W2_ratio(q, N, 20) for q in range(1, 11)]
    assert max(w2) == pytest.approx(ref["arc_W2_max"], rel=1e-6)


def test_small_beta_ratio_reported():
    N = 4096
    r = small_beta_ratio(N ** (-7 / 8) / 2, N)
    assert 0 < r < 10
