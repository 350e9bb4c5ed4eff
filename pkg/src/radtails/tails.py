"""Exact tail probabilities of normalized Rademacher sums.

Covers the equal-weight vectors (n coordinates sqrt(1/n)) and the two-atom
vectors (n equal coordinates plus one coordinate t), together with a
sign-pattern enumeration oracle.  All probabilities are exact dyadic
rationals; all threshold events use the non-strict inequality ">=", so
atoms equal to the threshold are included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (
    CertInterval,
    Ordering,
    QRoot,
    Rat,
    RootExpr,
    qroot_cmp,
    rootexpr_cmp,
)

# Enumerating 2^25 sign patterns is where desk-scale brute force stops.
BRUTE_FORCE_MAX_COORDS = 24


class NotRepresentableError(ValueError):
    """The split thresholds u, v are not square roots of rationals."""


@dataclass(frozen=True)
class EqualWeight:
    """The unit vector with n coordinates sqrt(1/n)."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be a positive integer")

    def atom(self, i: int) -> QRoot:
        """The i-th atom (n-2i)/sqrt(n) of the sum's distribution."""
        return QRoot.scaled_root(self.n - 2 * i, Fraction(1, self.n))


@dataclass(frozen=True)
class TwoAtom:
    """The unit vector with n coordinates sqrt((1-t^2)/n) plus one coordinate t."""

    n: int
    t: QRoot

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.t.sign <= 0 or self.t.square >= 1:
            raise ValueError("t must lie in the open interval (0, 1)")

    @property
    def shared_square(self) -> Rat:
        """The squared weight (1-t^2)/n of each equal coordinate."""
        return (1 - self.t.square) / self.n

    def atom_expr(self, i: int, s: int) -> RootExpr:
        """(n-2i)*sqrt((1-t^2)/n) + s*t, one atom of the sum."""
        return RootExpr(Fraction(self.n - 2 * i), self.shared_square, Fraction(s), self.t.square)


@dataclass(frozen=True)
class TailValue:
    """An exact dyadic tail probability, optionally with a certified enclosure."""

    exact: Rat
    enclosure: CertInterval | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.exact <= 1:
            raise ValueError(f"tail probability out of range: {self.exact}")
        if self.enclosure is not None and not self.enclosure.contains(self.exact):
            raise ValueError("exact value outside its enclosure")


def flip_threshold(n: int, x: QRoot) -> int | None:
    """Largest i in {0,...,n} with atom (n-2i)/sqrt(n) >= x, or None.

    The atoms are strictly decreasing in i, so a binary search over exact
    comparisons suffices.
    """
    ew = EqualWeight(n)
    if qroot_cmp(ew.atom(0), x) is Ordering.LT:
        return None
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if qroot_cmp(ew.atom(mid), x) is Ordering.LT:
            hi = mid - 1
        else:
            lo = mid
    return lo


def _cumulative_binomial(n: int, upto: int) -> int:
    """Sum of C(n, i) for i <= upto, by incremental ratios."""
    total = 1
    c = 1
    for i in range(upto):
        c = c * (n - i) // (i + 1)
        total += c
    return total


def tail_equal(n: int, x: QRoot) -> TailValue:
    """P(equal-weight sum >= x), exactly, as S/2^n."""
    upto = flip_threshold(n, x)
    if upto is None:
        return TailValue(Fraction(0))
    return TailValue(Fraction(_cumulative_binomial(n, upto), 1 << n))


def atom_mass_equal(n: int, x: QRoot) -> Rat:
    """P(equal-weight sum == x): C(n,i)/2^n when x is the atom (n-2i)/sqrt(n), else 0."""
    EqualWeight(n)
    if x.sign == 0:
        m = 0
    else:
        m2 = x.square * n
        if m2.denominator != 1:
            return Fraction(0)
        root = math.isqrt(m2.numerator)
        if root * root != m2.numerator:
            return Fraction(0)
        m = x.sign * root
    if abs(m) > n or (n - m) % 2 != 0:
        return Fraction(0)
    return Fraction(math.comb(n, (n - m) // 2), 1 << n)


def tail_two_atom(v: TwoAtom, x: QRoot) -> TailValue:
    """P(two-atom sum >= x), exactly, by enumerating the 2(n+1) atoms.

    Each atom-versus-threshold event (n-2i)*sqrt((1-t^2)/n) + s*t >= x is
    decided by the exact root-expression comparison, so ties count.
    """
    n = v.n
    shared = v.shared_square
    t2 = v.t.square
    hits = 0
    c = 1
    for i in range(n + 1):
        m = Fraction(n - 2 * i)
        for s in (1, -1):
            expr = RootExpr(m, shared, Fraction(s), t2)
            if rootexpr_cmp(expr, x) is not Ordering.LT:
                hits += c
        c = c * (n - i) // (i + 1)
    return TailValue(Fraction(hits, 1 << (n + 1)))


def _shifted_threshold(x: QRoot, t: QRoot, xt: Rat, add: bool) -> QRoot:
    """(x +/- t)/sqrt(1-t^2) as a QRoot, given the exact rational product xt."""
    if add:
        num_sq = x.square + t.square + 2 * xt
        sign_cmp = qroot_cmp(x, -t)
    else:
        num_sq = x.square + t.square - 2 * xt
        sign_cmp = qroot_cmp(x, t)
    if sign_cmp is Ordering.EQ:
        return QRoot(0, Fraction(0))
    return QRoot(int(sign_cmp), num_sq / (1 - t.square))


def tail_two_atom_decomp(v: TwoAtom, x: QRoot) -> TailValue:
    """P(two-atom sum >= x) via conditioning on the extra coordinate.

    Splits the tail as the average of two equal-weight tails at the
    shifted thresholds u = (x-t)/sqrt(1-t^2) and v = (x+t)/sqrt(1-t^2).
    Requires x*t rational so that u and v are square roots of rationals;
    otherwise raises NotRepresentableError and the caller must use
    tail_two_atom.
    """
    xt = (x * v.t).to_rational()
    if xt is None:
        raise NotRepresentableError(
            f"x*t is irrational for x={x}, t={v.t}; use tail_two_atom"
        )
    u = _shifted_threshold(x, v.t, xt, add=False)
    w = _shifted_threshold(x, v.t, xt, add=True)
    exact = (tail_equal(v.n, u).exact + tail_equal(v.n, w).exact) / 2
    return TailValue(exact)


def brute_force_tail(v: EqualWeight | TwoAtom, x: QRoot) -> Rat:
    """Tail probability by enumerating every sign pattern.

    Independent oracle: each of the 2^n (equal-weight) or 2^(n+1)
    (two-atom) patterns contributes its own mass, with the pattern sum
    compared exactly against x.  Rejects more than 24 coordinates.
    """
    two_atom = isinstance(v, TwoAtom)
    coords = v.n + 1 if two_atom else v.n
    if coords > BRUTE_FORCE_MAX_COORDS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_COORDS} coordinates, got {coords}")
    n = v.n
    mask = (1 << n) - 1
    decided: dict[tuple[int, int], bool] = {}
    hits = 0
    if two_atom:
        shared = v.shared_square
        t2 = v.t.square
        for pattern in range(1 << (n + 1)):
            m = 2 * (pattern & mask).bit_count() - n
            s = 1 if pattern >> n else -1
            key = (m, s)
            ok = decided.get(key)
            if ok is None:
                expr = RootExpr(Fraction(m), shared, Fraction(s), t2)
                ok = rootexpr_cmp(expr, x) is not Ordering.LT
                decided[key] = ok
            if ok:
                hits += 1
        return Fraction(hits, 1 << (n + 1))
    inv_n = Fraction(1, n)
    for pattern in range(1 << n):
        m = 2 * pattern.bit_count() - n
        key = (m, 0)
        ok = decided.get(key)
        if ok is None:
            ok = qroot_cmp(QRoot.scaled_root(m, inv_n), x) is not Ordering.LT
            decided[key] = ok
        if ok:
            hits += 1
    return Fraction(hits, 1 << n)


def series_tail_value(n: int) -> Rat:
    """The closed-form tail value (n+1)/2^(n+1) of the counterexample series."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return Fraction(n + 1, 1 << (n + 1))
