"""Prime-field arithmetic and polynomial operations."""

import random

import pytest

from lrshare.errors import DomainError
from lrshare.field import DEFAULT_MODULUS, PrimeField, is_probable_prime, trim_poly


class TestPrimality:
    def test_small_primes(self):
        for p in (2, 3, 5, 13, 31, 2**31 - 1):
            assert is_probable_prime(p)

    def test_composites(self):
        for c in (0, 1, 4, 9, 15, 2**31, 561, 341550071728321):
            assert not is_probable_prime(c)

    def test_composite_modulus_rejected(self):
        with pytest.raises(DomainError):
            PrimeField(15)

    def test_default_modulus_is_prime(self):
        assert is_probable_prime(DEFAULT_MODULUS)


class TestElementOps:
    def test_inverse_of_one(self, gf13):
        assert gf13.inv(1) == 1

    def test_inverse_of_five(self, gf13):
        # 5 * 8 = 40 = 3*13 + 1
        assert gf13.inv(5) == 8

    def test_inverse_of_twelve(self, gf13):
        # 12 * 12 = 144 = 11*13 + 1
        assert gf13.inv(12) == 12

    def test_inverse_of_zero_rejected(self, gf13):
        with pytest.raises(DomainError):
            gf13.inv(0)

    def test_inverse_exhaustive_gf13(self, gf13):
        for a in range(1, 13):
            assert gf13.mul(a, gf13.inv(a)) == 1

    def test_inverse_random_big_field(self, big_field, rng):
        for _ in range(50):
            a = rng.randrange(1, big_field.modulus)
            assert big_field.mul(a, big_field.inv(a)) == 1

    def test_basic_arithmetic_wraps(self, gf13):
        assert gf13.add(12, 1) == 0
        assert gf13.sub(0, 1) == 12
        assert gf13.mul(12, 12) == 1
        assert gf13.neg(0) == 0
        assert gf13.neg(5) == 8

    def test_rand_element_in_range(self, gf13, rng):
        for _ in range(100):
            assert 0 <= gf13.rand_element(rng) < 13


class TestPolyEval:
    def test_constant_term_at_zero(self, gf13):
        assert gf13.poly_eval([2, 3], 0) == 2

    def test_linear(self, gf13):
        # 2 + 3*2 = 8
        assert gf13.poly_eval([2, 3], 2) == 8

    def test_cubic_reduces(self, gf13):
        # 1 + 2*4 + 3*16 + 4*64 = 313 = 24*13 + 1
        assert gf13.poly_eval([1, 2, 3, 4], 4) == 1

    def test_zero_polynomial(self, gf13):
        assert gf13.poly_eval([0], 7) == 0


class TestTrim:
    def test_trailing_zeros_dropped(self):
        assert trim_poly([3, 2, 0, 0]) == [3, 2]

    def test_zero_polynomial_canonical(self):
        assert trim_poly([0, 0, 0]) == [0]
        assert trim_poly([0]) == [0]


class TestInterpolate:
    def test_line_through_two_points(self, gf13):
        assert gf13.poly_interpolate([(1, 5), (2, 7)]) == [3, 2]

    def test_single_point_constant(self, gf13):
        assert gf13.poly_interpolate([(4, 9)]) == [9]

    def test_duplicate_x_rejected(self, gf13):
        with pytest.raises(DomainError):
            gf13.poly_interpolate([(1, 5), (1, 7)])

    def test_empty_rejected(self, gf13):
        with pytest.raises(DomainError):
            gf13.poly_interpolate([])

    def test_roundtrip_exhaustive_low_degree(self, gf13):
        """Every polynomial of degree <= 2 over GF(13) survives the roundtrip."""
        for a0 in range(13):
            for a1 in range(13):
                for a2 in range(13):
                    poly = trim_poly([a0, a1, a2])
                    points = [(x, gf13.poly_eval(poly, x)) for x in range(len(poly))]
                    assert gf13.poly_interpolate(points) == poly

    def test_roundtrip_random_degree_six(self, gf13, rng):
        for _ in range(300):
            degree = rng.randrange(7)
            poly = trim_poly([rng.randrange(13) for _ in range(degree + 1)])
            xs = rng.sample(range(13), len(poly))
            points = [(x, gf13.poly_eval(poly, x)) for x in xs]
            assert gf13.poly_interpolate(points) == poly


class TestPolyRandom:
    def test_fully_constrained_degree_zero(self, gf13, rng):
        assert gf13.poly_random(0, [(0, 5)], rng) == [5]

    def test_deterministic_per_seed(self, gf13):
        a = gf13.poly_random(2, [(0, 5)], random.Random(99))
        b = gf13.poly_random(2, [(0, 5)], random.Random(99))
        assert a == b

    def test_full_constraints_ignore_seed(self, gf13):
        constraints = [(1, 4), (2, 11)]
        a = gf13.poly_random(1, constraints, random.Random(1))
        b = gf13.poly_random(1, constraints, random.Random(2))
        assert a == b

    def test_passes_through_constraints(self, gf13, rng):
        for _ in range(50):
            poly = gf13.poly_random(3, [(0, 7), (5, 2)], rng)
            assert len(poly) <= 4
            assert gf13.poly_eval(poly, 0) == 7
            assert gf13.poly_eval(poly, 5) == 2

    def test_over_constrained_rejected(self, gf13, rng):
        with pytest.raises(DomainError):
            gf13.poly_random(1, [(0, 1), (1, 2), (2, 3)], rng)

    def test_duplicate_constraint_x_rejected(self, gf13, rng):
        with pytest.raises(DomainError):
            gf13.poly_random(2, [(0, 1), (0, 2)], rng)

    def test_negative_degree_rejected(self, gf13, rng):
        with pytest.raises(DomainError):
            gf13.poly_random(-1, [], rng)

    def test_free_values_uniform(self, gf13):
        """f(1) over many seeds is uniform on GF(13) (chi-square, df=12)."""
        counts = [0] * 13
        for seed in range(10_000):
            poly = gf13.poly_random(2, [(0, 5)], random.Random(seed))
            counts[gf13.poly_eval(poly, 1)] += 1
        expected = 10_000 / 13
        chi2 = sum((c - expected) ** 2 / expected for c in counts)
        assert chi2 < 32.909  # 99.9th percentile of chi-square with 12 dof
