import math
import random
from fractions import Fraction

import pytest

from partembed.core import BaseMismatch, PowerPartition, from_base_counts, from_entries, power, to_base_counts
from partembed.norms import (
    INF,
    dominates_all_s,
    exact_dominates_powerq,
    norm_profile,
    p_norm,
    power_sum,
    _eval_poly,
    _isolate_roots,
    _squarefree_part,
    _variations,
)
from partembed.core import InvalidExponent
from helpers import LAM1, LAM2, MU3, random_partition, random_powerq

S_STAR = math.log(1 + math.sqrt(5)) / math.log(2)  # where the lam2/mu3 norms touch


class TestPNorm:
    def test_l1_is_sum(self):
        assert p_norm(LAM1, 1) == 8

    def test_linf_is_max(self):
        assert p_norm(from_entries([8] * 4 + [4] * 4), INF) == 8

    def test_l2_exact_root(self):
        # sum of squares of [2,2,2,2] is 16, a perfect square
        assert p_norm(LAM1, 2) == 4

    def test_l2_inexact(self):
        got = p_norm(from_entries([2, 1]), 2)
        assert abs(float(got) - math.sqrt(5)) < 1e-12

    def test_fractional_exponent(self):
        got = p_norm(from_entries([2, 1]), 1.5)
        expected = (2**1.5 + 1) ** (1 / 1.5)
        assert abs(float(got) - expected) < 1e-9

    def test_below_one_rejected(self):
        with pytest.raises(InvalidExponent):
            p_norm(LAM1, 0.5)

    def test_power_sum_exact(self):
        assert power_sum(from_entries([3, 2]), 3) == 27 + 8

    def test_power_norm_identity_on_power_sums(self):
        # power sums of an n-fold product factor exactly
        rng = random.Random(21)
        for _ in range(10):
            lam = random_partition(rng, 4, 9)
            for n in (2, 3):
                lam_n = power(lam, n)
                for s in (1, 2):
                    assert power_sum(lam_n, s) == power_sum(lam, s) ** n
                assert lam_n.max_entry == lam.max_entry**n


class TestNormProfile:
    def test_counterexample_profile(self):
        prof = norm_profile(LAM2, MU3)
        assert prof.as_dict() == {16: 1, 8: -4, 4: -4, 2: 16, 1: 16}

    def test_identical_is_empty(self):
        assert norm_profile(LAM1, LAM1).coefficients == ()

    def test_small_profile(self):
        prof = norm_profile(from_entries([2]), from_entries([1, 1, 1]))
        assert prof.as_dict() == {2: -1, 1: 3}

    def test_f1_matches_totals(self):
        rng = random.Random(22)
        for _ in range(25):
            lam = random_partition(rng)
            mu = random_partition(rng)
            assert norm_profile(lam, mu).f1() == mu.total - lam.total

    def test_sign_agreement_with_norms(self):
        # sign of f(s) equals sign of the norm difference at sampled s
        rng = random.Random(23)
        for _ in range(15):
            lam = random_partition(rng, 4, 16)
            mu = random_partition(rng, 4, 16)
            prof = norm_profile(lam, mu)
            for s in (1.5, 2, 3):
                f = float(prof.f_mpf(s))
                diff = float(p_norm(mu, s)) - float(p_norm(lam, s))
                if abs(f) > 1e-9:
                    assert (f > 0) == (diff > 0)


class TestDominatesAllS:
    def test_counterexample_touch_point(self):
        verdict = dominates_all_s(LAM2, MU3)
        assert verdict.holds
        assert len(verdict.interior_equalities) == 1
        eq = verdict.interior_equalities[0]
        assert not eq.exact
        assert abs(eq.s - S_STAR) <= 1e-4

    def test_failing_pair(self):
        verdict = dominates_all_s(from_entries([2]), from_entries([1, 1, 1]))
        assert not verdict.holds
        s = verdict.failure_exponent
        assert s is not None and s > math.log2(3) - 0.1
        prof = norm_profile(from_entries([2]), from_entries([1, 1, 1]))
        assert prof.f_mpf(s) < 0

    def test_identical_tight_everywhere(self):
        verdict = dominates_all_s(LAM1, LAM1)
        assert verdict.holds and verdict.tight_at_one and verdict.tight_at_infinity

    def test_fails_at_one(self):
        verdict = dominates_all_s(from_entries([3]), from_entries([2]))
        assert not verdict.holds and verdict.failure_exponent == 1.0

    def test_fails_at_infinity_with_equal_l1(self):
        # equal sums but lam's top entry bigger: fails for large s
        verdict = dominates_all_s(from_entries([4, 1]), from_entries([3, 2]))
        assert not verdict.holds

    def test_dip_right_after_one(self):
        # equal sums, positive top coefficient, but f decreases at s=1: the
        # dominance failure sits just above 1, before any grid sample
        lam, mu = from_entries([8, 8, 8, 6]), from_entries([16] + [1] * 14)
        verdict = dominates_all_s(lam, mu)
        assert not verdict.holds and verdict.tight_at_one
        assert verdict.failure_exponent < 1.01
        assert norm_profile(lam, mu).f_mpf(verdict.failure_exponent) < 0

    def test_agrees_with_exact_on_powerq(self):
        rng = random.Random(24)
        for _ in range(60):
            base = rng.choice([2, 3])
            u = random_powerq(rng, base=base, levels=4, max_count=5)
            v = random_powerq(rng, base=base, levels=4, max_count=5)
            lam, mu = from_base_counts(u), from_base_counts(v)
            numeric = dominates_all_s(lam, mu)
            exact = exact_dominates_powerq(u, v)
            assert numeric.holds == exact.holds, (u, v)


class TestExactDominates:
    def test_counterexample_double_root(self):
        # profile polynomial is x^4 - 4x^3 - 4x^2 + 16x + 16 = (x^2 - 2x - 4)^2,
        # which touches zero at x = 1 + sqrt(5) inside (2, oo)
        verdict = exact_dominates_powerq(to_base_counts(LAM2, 2), to_base_counts(MU3, 2))
        assert verdict.holds
        assert len(verdict.interior_equalities) == 1
        eq = verdict.interior_equalities[0]
        assert eq.exact and eq.base == 2
        a, b = eq.x_interval
        assert a == b or ((a - 1) ** 2 < 5 and 5 < (b - 1) ** 2)  # contains 1+sqrt5
        assert b - a <= Fraction(1, 10**9)
        assert abs(eq.s - S_STAR) < 1e-9
        assert not verdict.tight_at_one and not verdict.tight_at_infinity

    def test_identical_zero_polynomial(self):
        pp = to_base_counts(LAM1, 2)
        verdict = exact_dominates_powerq(pp, pp)
        assert verdict.holds and verdict.tight_at_one and verdict.tight_at_infinity
        assert verdict.interior_equalities == ()

    def test_failing_pair(self):
        # [4] vs [2,2]: P(x) = 2x - x^2 < 0 beyond x=2
        verdict = exact_dominates_powerq(PowerPartition(2, (0, 0, 1)), PowerPartition(2, (0, 2)))
        assert not verdict.holds
        x = verdict.failure_x
        assert x is not None and 2 * x - x * x < 0

    def test_base_mismatch(self):
        with pytest.raises(BaseMismatch):
            exact_dominates_powerq(PowerPartition(2, (1,)), PowerPartition(3, (1,)))

    def test_tight_at_one_only(self):
        # [2,2] vs [4]: P(x) = x^2 - 2x, zero at x=2 (s=1), positive beyond
        verdict = exact_dominates_powerq(PowerPartition(2, (0, 2)), PowerPartition(2, (0, 0, 1)))
        assert verdict.holds and verdict.tight_at_one
        assert verdict.interior_equalities == ()

    def test_crossing_inside_interval(self):
        # lam = [4,4,4,1], mu = [8,2,2,1]: equal sums, mu top bigger, but
        # f(2) = 64+4+4+1 - (48+1) = 24 > 0 ... construct a genuine interior
        # crossing instead: lam = [2,2,2], mu = [4,1]. P(x) = x^2 - 3x + 1.
        # P(2) = -1 < 0: fails already at s=1 region (x=q). Use sums equal:
        # lam = [2,2], mu = [4]: wait that holds. Take lam=[2,2,2], mu=[4,1,1]:
        # P(x) = x^2 - 3x + 2 = (x-1)(x-2): at x=q=2 P=0, positive beyond.
        verdict = exact_dominates_powerq(PowerPartition(2, (0, 3)), PowerPartition(2, (2, 0, 1)))
        assert verdict.holds and verdict.tight_at_one
        assert verdict.interior_equalities == ()


class TestRootIsolation:
    def test_sturm_variations(self):
        assert _variations([1, -1, 1]) == 2
        assert _variations([1, 0, 1]) == 0
        assert _variations([0, -2, 3]) == 1

    def test_isolate_two_roots(self):
        # (x-3)(x-5) = x^2 - 8x + 15
        exact, intervals, _ = _isolate_roots([15, -8, 1], Fraction(2), Fraction(100))
        found = sorted([Fraction(r) for r in exact] + [(a + b) / 2 for a, b in intervals])
        assert len(found) == 2
        assert abs(float(found[0]) - 3) < 1.5 and abs(float(found[1]) - 5) < 1.5

    def test_isolate_irrational(self):
        # x^2 - 2 on (0, 10): one root at sqrt(2)
        exact, intervals, _ = _isolate_roots([-2, 0, 1], Fraction(0), Fraction(10))
        assert len(exact) + len(intervals) == 1
        if intervals:
            a, b = intervals[0]
            assert a * a < 2 < b * b

    def test_squarefree_part(self):
        # (x-1)^2 (x-2) = x^3 - 4x^2 + 5x - 2 -> squarefree (x-1)(x-2)
        sf = _squarefree_part([-2, 5, -4, 1])
        assert _eval_poly(sf, Fraction(1)) == 0
        assert _eval_poly(sf, Fraction(2)) == 0
        assert len(sf) == 3

    def test_rational_root_hit(self):
        # root exactly at a bisection midpoint: (x-3)(x^2-2)
        poly = [6, -2, -3, 1]
        exact, intervals, _ = _isolate_roots(poly, Fraction(1), Fraction(8))
        total = len(exact) + len(intervals)
        assert total == 2  # 3 and sqrt(2) both lie in (1, 8)

    def test_separation_after_deflation(self):
        # (2x-9)(x^2-5): the first midpoint of (1, 8) is exactly 4.5, so the
        # rational root deflates and the restart isolates sqrt(5) in an
        # interval that must then be shrunk clear of 4.5
        poly = [45, -10, -9, 2]
        exact, intervals, _ = _isolate_roots(poly, Fraction(1), Fraction(8))
        assert exact == [Fraction(9, 2)]
        assert len(intervals) == 1
        a, b = intervals[0]
        assert not (a <= Fraction(9, 2) <= b)
        assert a * a < 5 < b * b  # still contains sqrt(5)


class TestExactPathMixedRoots:
    def _pair_for_poly(self, coeffs, base=2):
        # realize an integer polynomial as mu-counts minus lam-counts
        b = [max(c, 0) for c in coeffs]
        a = [max(-c, 0) for c in coeffs]
        while a and a[-1] == 0:
            a.pop()
        while b and b[-1] == 0:
            b.pop()
        return PowerPartition(base, tuple(a)), PowerPartition(base, tuple(b))

    def test_two_touch_roots_one_rational(self):
        # (x-3)^2 (x^2-10)^2 >= 0 everywhere: holds with two interior
        # equalities on (2, oo), at 3 and at sqrt(10)
        coeffs = [900, -600, -80, 120, -11, -6, 1]
        lam, mu = self._pair_for_poly(coeffs)
        verdict = exact_dominates_powerq(lam, mu)
        assert verdict.holds
        assert len(verdict.interior_equalities) == 2
        spots = sorted(float(sum(e.x_interval) / 2) for e in verdict.interior_equalities)
        assert abs(spots[0] - 3) < 1e-6 and abs(spots[1] - 10**0.5) < 1e-6

    def test_negative_gap_between_close_roots(self):
        # (x-3)(x^2-11) is negative exactly on (3, sqrt(11)), a gap of width
        # ~0.32 between a rational and an irrational crossing
        coeffs = [33, -11, -3, 1]
        lam, mu = self._pair_for_poly(coeffs)
        verdict = exact_dominates_powerq(lam, mu)
        assert not verdict.holds
        x = verdict.failure_x
        assert x is not None and 3 < x < Fraction(3317, 1000)
        assert _eval_poly(coeffs, x) < 0
