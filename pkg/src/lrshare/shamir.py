"""Shamir (k, n) threshold secret sharing over a prime field.

Used twice by the wider system: once for the global secret, and once per
group as the second sharing that distributes the group's sub-secret.  The
secret is a single field element; a share is a public nonzero x paired
with a private y on a random degree-(k-1) polynomial f with f(0) = secret.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import (
    ConfigurationError,
    CorruptShareError,
    DomainError,
    InsufficientSharesError,
)
from .field import PrimeField

# Lagrange-at-zero weight vectors keyed by (modulus, x tuple).  Recoveries
# repeat the same x subsets heavily (subset sweeps, repeated repairs), and
# the weights depend only on the x coordinates.
_zero_weights: dict[tuple[int, tuple[int, ...]], tuple[int, ...]] = {}


@dataclass(frozen=True, order=True)
class Share:
    """One share: public abscissa x (nonzero), private value y."""

    x: int
    y: int

    def __post_init__(self):
        if self.x == 0:
            raise DomainError("x = 0 is reserved for the secret position")


@dataclass(frozen=True)
class SharingParams:
    """Threshold k, share count n, and the public x for each participant.

    x_assignment lists the share abscissas in participant order; they must
    be distinct and nonzero (x = 0 is reserved for the secret position).
    """

    k: int
    n: int
    x_assignment: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ConfigurationError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if len(self.x_assignment) != self.n:
            raise ConfigurationError(
                f"x_assignment has {len(self.x_assignment)} entries, expected {self.n}"
            )
        if 0 in self.x_assignment:
            raise ConfigurationError("x = 0 is reserved for the secret")
        if len(set(self.x_assignment)) != self.n:
            raise ConfigurationError("x_assignment values must be distinct")

    @classmethod
    def with_default_assignment(cls, k: int, n: int) -> "SharingParams":
        """Participant P_i gets x_i = i (1-based)."""
        return cls(k=k, n=n, x_assignment=tuple(range(1, n + 1)))


def split(
    field: PrimeField,
    secret: int,
    params: SharingParams,
    rng: random.Random,
) -> list[Share]:
    """Split a secret into n shares with threshold k.

    A random degree-(k-1) polynomial f with f(0) = secret is drawn from the
    given rng (deterministic per seed); share i is (x_i, f(x_i)) in
    x_assignment order.
    """
    for x in params.x_assignment:
        if not 0 < x < field.modulus:
            raise ConfigurationError(f"x assignment {x} outside field range")
    secret %= field.modulus
    poly = field.poly_random(params.k - 1, [(0, secret)], rng)
    return [Share(x, field.poly_eval(poly, x)) for x in params.x_assignment]


def _checked_sorted(shares: list[Share]) -> list[Share]:
    ordered = sorted(shares)
    xs = [s.x for s in ordered]
    if len(set(xs)) != len(xs):
        raise DomainError("shares must have distinct x values")
    return ordered


def _lagrange_zero_weights(field: PrimeField, xs: tuple[int, ...]) -> tuple[int, ...]:
    key = (field.modulus, xs)
    weights = _zero_weights.get(key)
    if weights is None:
        p = field.modulus
        computed = []
        for i, xi in enumerate(xs):
            num, den = 1, 1
            for j, xj in enumerate(xs):
                if j == i:
                    continue
                num = num * -xj % p
                den = den * (xi - xj) % p
            computed.append(num * field.inv(den) % p)
        weights = tuple(computed)
        _zero_weights[key] = weights
    return weights


def recover(field: PrimeField, shares: list[Share], k: int) -> int:
    """Recover the secret f(0) from at least k shares.

    Uses the k shares that come first in x order; any surplus shares are
    cross-checked against the polynomial those k define and a mismatch
    raises CorruptShareError.  The result equals evaluating
    poly_interpolate over the first k shares at zero.
    """
    if len(shares) < k:
        raise InsufficientSharesError(
            f"need at least {k} shares, got {len(shares)}"
        )
    ordered = _checked_sorted(shares)
    first = ordered[:k]
    weights = _lagrange_zero_weights(field, tuple(s.x for s in first))
    p = field.modulus
    secret = 0
    for share, w in zip(first, weights):
        secret = (secret + share.y * w) % p
    if len(ordered) > k:
        poly = field.poly_interpolate([(s.x, s.y) for s in first])
        for extra in ordered[k:]:
            if field.poly_eval(poly, extra.x) != extra.y:
                raise CorruptShareError(
                    f"share at x={extra.x} is inconsistent with the first {k}"
                )
    return secret


def reconstruct_polynomial(field: PrimeField, shares: list[Share], k: int) -> list[int]:
    """The unique degree-<=(k-1) polynomial through the first k shares (x order)."""
    if len(shares) < k:
        raise InsufficientSharesError(
            f"need at least {k} shares, got {len(shares)}"
        )
    ordered = _checked_sorted(shares)
    return field.poly_interpolate([(s.x, s.y) for s in ordered[:k]])
