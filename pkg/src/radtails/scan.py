"""Exact maximum of the equal-weight tails over a range of coordinate counts.

The scan maintains the cumulative binomial numerator W_j with
tail(j) = W_j / 2^j across consecutive j through the Pascal identity

    sum_{i<=I} C(j+1, i)  =  2 * sum_{i<=I} C(j, i)  -  C(j, I),

so a full certified pass over j = 1..J costs O(J) big-integer operations
instead of recomputing each cumulative sum from scratch.  Every tail value
the scan touches is exact; there is no filtering phase to audit.

The range may be sharded into disjoint blocks (each block seeds its own
recurrence), and the block results merge by an exact max-reduction that is
independent of the block boundaries.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .exactnum import QRoot, Rat

SCAN_EXACT_SMALL_MAX_J = 5000

ProgressFn = Callable[[dict], None]


@dataclass(frozen=True)
class Certificate:
    """How the scan values were established.

    ALL_EXACT means every tail in range was computed exactly.  FILTERED is
    reserved for strategies that certify most values by upper bound only;
    the recurrence scan never needs it.
    """

    kind: str
    count_exact: int
    count_filtered: int = 0


@dataclass(frozen=True)
class ScanResult:
    """Exact maximum of tail(j) = P(equal-weight sum over j coords >= x) for j <= J."""

    J: int
    x: QRoot
    max_value: Rat
    argmax_j: int
    beaten_by: Rat | None
    certificate: Certificate
    violation_j: int | None = None

    def __post_init__(self) -> None:
        if self.beaten_by is not None and self.max_value >= self.beaten_by:
            raise ValueError("beaten_by must strictly exceed the scanned maximum")


def _boundary_index(j: int, num: int, den: int, sign: int) -> int | None:
    """Largest i with (j-2i)/sqrt(j) >= x for x = sign*sqrt(num/den).

    Exact integer arithmetic: with m = j-2i, the event is m >= x*sqrt(j),
    i.e. for x > 0: m >= 0 and m^2*den >= num*j (ties exact); for x < 0:
    m >= 0, or m < 0 and m^2*den <= num*j.  Returns None when even the
    rightmost atom m = j falls below x.
    """
    if sign == 0:
        # smallest admissible m is 0 (j even) or 1 (j odd)
        return j // 2
    N = num * j
    if sign > 0:
        if j * j * den < N:
            return None
        m = math.isqrt(N // den)
        while m * m * den < N:
            m += 1
        while m >= 1 and (m - 1) * (m - 1) * den >= N:
            m -= 1
        if (m ^ j) & 1:
            m += 1
        if m > j:
            return None
        return (j - m) // 2
    # x < 0: admissible m are all m >= 0 plus negative m with m^2*den <= num*j.
    r = math.isqrt(N // den)
    while (r + 1) * (r + 1) * den <= N:
        r += 1
    while r >= 0 and r * r * den > N:
        r -= 1
    m = -r
    if (m ^ j) & 1:
        m += 1
    if m < -j:
        m = -j  # parity of -j always matches j
    return (j - m) // 2


def _seed_row(j: int, upto: int) -> tuple[int, int]:
    """(W, B) with W = sum_{i<=upto} C(j,i) and B = C(j,upto), from scratch."""
    c = 1
    total = 1
    for i in range(upto):
        c = c * (j - i) // (i + 1)
        total += c
    return total, c


def _scan_block(
    args: tuple[int, int, int, int, int, int | None, int | None],
) -> tuple[int, int, int | None]:
    """Scan j in [start, end] for x = sign*sqrt(num/den).

    Returns (best_W, best_j, first_violation_j) where the block maximum is
    best_W / 2^best_j and a violation means tail(j) >= p_num/p_den.
    """
    start, end, num, den, sign, p_num, p_den = args
    best_w, best_j = 0, start
    violation: int | None = None
    state: tuple[int, int, int] | None = None  # (I, W, B) at the previous j
    for j in range(start, end + 1):
        upto = _boundary_index(j, num, den, sign)
        if upto is None:
            state = None
            continue
        if state is None:
            w, b = _seed_row(j, upto)
        else:
            prev_upto, prev_w, prev_b = state
            if upto == prev_upto:
                w = 2 * prev_w - prev_b
                b = prev_b * j // (j - prev_upto)
            elif upto == prev_upto + 1:
                w = 2 * prev_w - prev_b
                b = prev_b * j // upto
                w += b
            else:
                # boundary moved irregularly (only near tiny j); reseed
                w, b = _seed_row(j, upto)
        state = (upto, w, b)
        if p_num is not None and violation is None and w * p_den >= p_num << j:
            violation = j
        # Prescreen by binary magnitude: tail < 2^(bl-j) and best >= 2^(bb-1-bj),
        # so the exact (shifted) comparison only runs when the ranges overlap.
        if best_w == 0 or w.bit_length() - j > best_w.bit_length() - 1 - best_j:
            if w << best_j > best_w << j:
                best_w, best_j = w, j
    return best_w, best_j, violation


def _merge_max(candidates: list[tuple[int, int]]) -> tuple[int, int]:
    """Exact max-reduction of (W, j) pairs; ties resolve to the smallest j."""
    best_w, best_j = candidates[0]
    for w, j in candidates[1:]:
        lhs = w << best_j
        rhs = best_w << j
        if lhs > rhs or (lhs == rhs and j < best_j):
            best_w, best_j = w, j
    return best_w, best_j


def scan_max_equal(
    x: QRoot,
    J: int,
    p_ref: Rat | None = None,
    *,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> ScanResult:
    """Exact maximum of tail(j) over 1 <= j <= J, with optional certification.

    When p_ref is given, every tail in range is checked against it exactly:
    either all are strictly below (the result carries beaten_by = p_ref) or
    the first violating j is reported.  Results are identical for any jobs
    value; sharding only changes how the range is traversed.
    """
    if J < 1:
        raise ValueError("J must be a positive integer")
    if jobs < 1:
        raise ValueError("jobs must be a positive integer")
    num, den = x.square.numerator, x.square.denominator
    p_num, p_den = (None, None) if p_ref is None else (p_ref.numerator, p_ref.denominator)

    blocks: list[tuple[int, int]] = []
    # sequential runs get finer blocks when progress is wanted; the block
    # layout never affects the merged result
    n_blocks = min(jobs if jobs > 1 or progress is None else 16, J)
    step = -(-J // n_blocks)
    start = 1
    while start <= J:
        end = min(start + step - 1, J)
        blocks.append((start, end))
        start = end + 1
    tasks = [(a, b, num, den, x.sign, p_num, p_den) for a, b in blocks]

    if len(tasks) == 1 or jobs == 1:
        results = [_scan_block(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_block, tasks))

    if progress is not None:
        running: list[tuple[int, int]] = []
        for (a, b), (w, j, _) in zip(blocks, results):
            running.append((w, j))
            bw, bj = _merge_max(running)
            progress({"j": b, "max": f"{Fraction(bw, 1 << bj)}"})

    best_w, best_j = _merge_max([(w, j) for w, j, _ in results])
    violations = [v for _, _, v in results if v is not None]
    violation = min(violations) if violations else None
    max_value = Fraction(best_w, 1 << best_j)
    beaten = p_ref if (p_ref is not None and violation is None) else None
    return ScanResult(
        J=J,
        x=x,
        max_value=max_value,
        argmax_j=best_j,
        beaten_by=beaten,
        certificate=Certificate("ALL_EXACT", count_exact=J),
        violation_j=violation,
    )


def scan_exact_small(x: QRoot, J: int) -> ScanResult:
    """Per-j independent exact scan, used to validate scan_max_equal.

    Computes every tail with the standalone tail_equal routine (no shared
    recurrence state), so agreement with scan_max_equal is a genuine
    cross-check of two computation paths.  Limited to J <= 5000.
    """
    from .tails import tail_equal

    if J < 1:
        raise ValueError("J must be a positive integer")
    if J > SCAN_EXACT_SMALL_MAX_J:
        raise ValueError(f"scan_exact_small is limited to J <= {SCAN_EXACT_SMALL_MAX_J}")
    best = Fraction(0)
    best_j = 1
    for j in range(1, J + 1):
        value = tail_equal(j, x).exact
        if value > best:
            best, best_j = value, j
    return ScanResult(
        J=J,
        x=x,
        max_value=best,
        argmax_j=best_j,
        beaten_by=None,
        certificate=Certificate("ALL_EXACT", count_exact=J),
    )
