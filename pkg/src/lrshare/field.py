"""Prime-field arithmetic and polynomial helpers.

Everything in this package works over GF(p) for a public prime modulus p.
Field elements are plain ints in [0, p).  Polynomials are coefficient lists
with the constant term first and trailing zeros trimmed, so list equality is
polynomial equality; the canonical zero polynomial is [0].

Only prime fields are supported.  The default production modulus is the
Mersenne prime 2^31 - 1, so products of two elements fit comfortably in
64-bit intermediates; tests use GF(13) where exhaustive enumeration is
feasible.
"""

from __future__ import annotations

import random

from .errors import DomainError

DEFAULT_MODULUS = (1 << 31) - 1

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin primality test with the first twelve prime bases.

    Deterministic for n < 3.3 * 10^24, far beyond the 64-bit moduli this
    package targets.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def trim_poly(coeffs: list[int]) -> list[int]:
    """Drop trailing zero coefficients; the zero polynomial stays [0]."""
    end = len(coeffs)
    while end > 1 and coeffs[end - 1] == 0:
        end -= 1
    return list(coeffs[:end])


class PrimeField:
    """Arithmetic over GF(modulus) for a prime modulus.

    The modulus is validated (probabilistic primality) at construction and
    is a runtime parameter everywhere; it is never baked into share data
    implicitly.  All methods are pure, so instances are safe to share
    between threads.
    """

    __slots__ = ("modulus",)

    def __init__(self, modulus: int):
        if not is_probable_prime(modulus):
            raise DomainError(f"modulus must be prime, got {modulus}")
        self.modulus = modulus

    def __repr__(self) -> str:
        return f"PrimeField({self.modulus})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(("PrimeField", self.modulus))

    # -- element arithmetic -------------------------------------------------

    def reduce(self, a: int) -> int:
        return a % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return a * b % self.modulus

    def neg(self, a: int) -> int:
        return -a % self.modulus

    def inv(self, a: int) -> int:
        """Multiplicative inverse via Fermat's little theorem."""
        a %= self.modulus
        if a == 0:
            raise DomainError("zero has no multiplicative inverse")
        return pow(a, self.modulus - 2, self.modulus)

    def rand_element(self, rng: random.Random) -> int:
        return rng.randrange(self.modulus)

    # -- polynomials ---------------------------------------------------------

    def poly_eval(self, coeffs: list[int], x: int) -> int:
        """Evaluate a coefficient list (constant first) at x, Horner order."""
        x %= self.modulus
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % self.modulus
        return acc

    def poly_interpolate(self, points: list[tuple[int, int]]) -> list[int]:
        """Unique polynomial of degree <= len(points)-1 through all points.

        Lagrange basis accumulation, O(d^2) per basis polynomial.  Returns
        the trimmed coefficient list.

        Raises DomainError for an empty point list or duplicate x values.
        """
        if not points:
            raise DomainError("interpolation needs at least one point")
        p = self.modulus
        xs = [x % p for x, _ in points]
        if len(set(xs)) != len(xs):
            raise DomainError("interpolation points must have distinct x values")
        result = [0] * len(points)
        for i, (xi, yi) in enumerate(points):
            xi %= p
            # basis := prod_{j != i} (x - x_j), built one factor at a time
            basis = [1]
            denom = 1
            for j, xj in enumerate(xs):
                if j == i:
                    continue
                shifted = [0] + basis
                for t in range(len(basis)):
                    shifted[t] = (shifted[t] - basis[t] * xj) % p
                basis = shifted
                denom = denom * (xi - xj) % p
            scale = yi % p * self.inv(denom) % p
            for t, c in enumerate(basis):
                result[t] = (result[t] + c * scale) % p
        return trim_poly(result)

    def poly_random(
        self,
        degree: int,
        constraints: list[tuple[int, int]],
        rng: random.Random,
    ) -> list[int]:
        """Random polynomial of degree <= degree through all constraint points.

        The remaining degrees of freedom are uniform over the field: the
        free slots are parameterized by uniformly drawn values at auxiliary
        abscissas, which is a bijection onto the set of polynomials through
        the constraints.  Fully constrained inputs never touch the rng, so
        the result is then deterministic regardless of seed.

        Raises DomainError for a negative degree, duplicate constraint x
        values, or more constraints than degree+1 allows.
        """
        if degree < 0:
            raise DomainError(f"degree must be >= 0, got {degree}")
        xs = [x % self.modulus for x, _ in constraints]
        if len(set(xs)) != len(xs):
            raise DomainError("constraint x values must be distinct")
        free = degree + 1 - len(constraints)
        if free < 0:
            raise DomainError(
                f"{len(constraints)} constraints over-determine degree {degree}"
            )
        points = [(x % self.modulus, y % self.modulus) for x, y in constraints]
        taken = set(xs)
        x = 0
        while free > 0:
            if x not in taken:
                points.append((x, rng.randrange(self.modulus)))
                free -= 1
            x += 1
        return self.poly_interpolate(points)
