"""Heuristic search for two-atom counterexample candidates.

A candidate is a quadruple (x, n, k, t) where t in (0, 1) is chosen so the
shifted threshold u = (x-t)/sqrt(1-t^2) lands exactly on the atom k/sqrt(n)
of the equal-weight sum, i.e. t solves

    (1 + k^2/n) t^2 - 2 x t + (x^2 - k^2/n) = 0

with x - t >= 0 (squaring the pin equation introduces a spurious branch).
The largest x admitting such a t is x = sqrt(1 + k^2/n), where t = 1/x;
specializing to k = n-2 yields the closed-form series x_n = sqrt(n-3+4/n)
whose two-atom tail is (n+1)/2^(n+1) exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable

from .exactnum import (
    CertInterval,
    Ordering,
    QRoot,
    Rat,
    RootExpr,
    interval_refine,
    qroot_interval,
    rational_sqrt,
    rootexpr_cmp,
    rootexpr_sign,
    sqrt_bounds,
)
from .gaussian import max_width_bits
from .scan import ScanResult, scan_max_equal
from .tails import TwoAtom, tail_two_atom

ProgressFn = Callable[[dict], None]


class NoAdmissibleRootError(ValueError):
    """The pin equation has no root t in (0,1) with x - t >= 0."""


@dataclass(frozen=True)
class Quadruple:
    """A pinned candidate (x, n, k, t).

    t is exact when it is the square root of a rational; otherwise t_expr
    gives it as a two-term root expression and t_enclosure isolates it from
    the pin equation's other root.
    """

    x: QRoot
    n: int
    k: int
    t: QRoot | None = None
    t_expr: RootExpr | None = None
    t_enclosure: CertInterval | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise ValueError("k must satisfy 1 <= k <= n")
        if (self.t is None) == (self.t_expr is None):
            raise ValueError("exactly one of t and t_expr must be set")
        if self.t is not None and (self.t.sign <= 0 or self.t.square >= 1):
            raise ValueError("exact t must lie in (0, 1)")
        if self.t_expr is not None and self.t_enclosure is None:
            raise ValueError("an inexact t requires an isolating enclosure")

    @property
    def t_is_exact(self) -> bool:
        return self.t is not None

    def pinned_atom(self) -> QRoot:
        """The equal-weight atom k/sqrt(n) that u is pinned to."""
        return QRoot.scaled_root(self.k, Fraction(1, self.n))

    def pin_quadratic(self) -> tuple[Rat, Rat, Rat]:
        """Coefficients (a, b, c) of a*t^2 + b*(x*t) + c = 0 defining t."""
        r = Fraction(self.k * self.k, self.n)
        return 1 + r, Fraction(-2), self.x.square - r

    def pin_poly_sign_at(self, tau: Rat) -> int:
        """Exact sign of the defining quadratic at a rational point tau."""
        a, b, c = self.pin_quadratic()
        return rootexpr_sign(RootExpr(a * tau * tau + c, Fraction(1), b * tau, self.x.square))


@dataclass(frozen=True)
class CandidateReport:
    """One search cell: candidate tail versus the scanned equal-weight maximum."""

    quadruple: Quadruple
    p_candidate: Rat
    scan_result: ScanResult
    margin: Rat

    def __post_init__(self) -> None:
        if self.margin != self.p_candidate - self.scan_result.max_value:
            raise ValueError("margin must equal p_candidate - scanned maximum")


def solve_t(x: QRoot, n: int, k: int) -> Quadruple:
    """Solve the pin equation for t, preferring the smaller admissible root.

    The quadratic has roots (x -/+ sqrt(D))/c with c = 1 + k^2/n and
    D = (k^2/n)(c - x^2); a root is admissible when it lies in the open
    interval (0, 1) and x - t >= 0.  Of two admissible roots the smaller
    one gives the smaller second shifted threshold v, hence the larger
    candidate tail, so it is returned.  Raises NoAdmissibleRootError when
    neither root qualifies (in particular when x > sqrt(c)).
    """
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= n")
    if x.sign <= 0:
        raise ValueError("x must be positive")
    x2 = x.square
    r = Fraction(k * k, n)
    c = 1 + r
    D = r * (c - x2)
    if D < 0:
        raise NoAdmissibleRootError(f"x^2 = {x2} exceeds 1 + k^2/n = {c}")
    if D == 0:
        # double root t = x/c = 1/x; always in (0,1) since c > 1
        return Quadruple(x=x, n=n, k=k, t=QRoot(1, x2 / (c * c)))

    s = rational_sqrt(x2 * D)
    if s is not None:
        # x*sqrt(D) = s is rational, so both roots are square roots of rationals
        for branch in (-1, 1):
            if branch < 0 and x2 <= D:
                continue  # t_minus <= 0
            if branch > 0 and r * r * x2 < D:
                continue  # x - t_plus < 0: spurious branch
            tsq = (x2 + D + 2 * branch * s) / (c * c)
            if not 0 < tsq < 1:
                continue
            return Quadruple(x=x, n=n, k=k, t=QRoot(1, tsq))
        raise NoAdmissibleRootError(f"no root in (0,1) for x^2={x2}, n={n}, k={k}")

    c_root = QRoot.of_rational(c)
    for branch in (-1, 1):
        expr = RootExpr(Fraction(1, c), x2, Fraction(branch, c), D)
        if branch < 0:
            if rootexpr_sign(expr) <= 0:
                continue  # t_minus <= 0
        else:
            if r * r * x2 < D:
                continue  # spurious branch
        # t < 1 iff x + branch*sqrt(D) < c
        if rootexpr_cmp(RootExpr(Fraction(1), x2, Fraction(branch), D), c_root) is not Ordering.LT:
            continue
        # isolate from the other root, which sits 2*sqrt(D)/c away
        sep_lo, _ = sqrt_bounds(D, Fraction(1, 1 << 16))
        width = min(Fraction(1, 1 << 20), sep_lo / c)
        enclosure = interval_refine(expr, width)
        return Quadruple(x=x, n=n, k=k, t_expr=expr, t_enclosure=enclosure)
    raise NoAdmissibleRootError(f"no root in (0,1) for x^2={x2}, n={n}, k={k}")


def family_max_x(n: int, k: int) -> Quadruple:
    """The extreme quadruple x = sqrt(1 + k^2/n), t = 1/x = sqrt(n/(n+k^2)).

    This is the largest x for which the pin equation still has a root in
    (0, 1); k = 0 degenerates to t = 1 and is rejected.
    """
    if not 1 <= k <= n:
        raise ValueError("k must satisfy 1 <= k <= n")
    c = 1 + Fraction(k * k, n)
    x = QRoot.sqrt(c)
    return Quadruple(x=x, n=n, k=k, t=QRoot(1, 1 / c))


def series_quadruple(n: int) -> Quadruple:
    """The counterexample series member x = sqrt(n-3+4/n), t = 1/x, k = n-2.

    Identical to family_max_x(n, n-2); defined for n >= 8.
    """
    if n < 8:
        raise ValueError("the series starts at n = 8")
    return family_max_x(n, n - 2)


def two_atom_tail_quadratic(
    n: int, x: QRoot, quad: Quadruple, *, max_bits: int | None = None
) -> Rat:
    """Exact two-atom tail when t^2 is irrational (general pinned root).

    The pin construction makes the atom with m = k and s = +1 equal x
    exactly; every other atom differs from x algebraically (an s = -1 tie
    would force t^2 rational), so strict comparisons are settled by
    refining certified enclosures of atom and threshold until they
    separate.
    """
    if quad.t_expr is None or quad.t_enclosure is None:
        raise ValueError("quadruple does not carry an inexact t")
    cap = max_width_bits() if max_bits is None else max_bits
    inv_n = Fraction(1, n)
    hits = 0
    c_binom = 1
    for i in range(n + 1):
        m = n - 2 * i
        for s in (1, -1):
            if m == quad.k and s == 1:
                hits += c_binom  # the pinned atom: an exact tie, included
                continue
            bits = 24
            while True:
                w = Fraction(1, 1 << bits)
                t_iv = interval_refine(quad.t_expr, w).clamp(0, 1)
                t2_iv = t_iv * t_iv
                shared_iv = (CertInterval.point(1) - t2_iv).clamp(0, 1).scale(inv_n)
                atom_iv = shared_iv.sqrt(w).scale(m) + t_iv.scale(s)
                x_iv = qroot_interval(x, w)
                if atom_iv.strictly_below(x_iv):
                    break
                if atom_iv.strictly_above(x_iv):
                    hits += c_binom
                    break
                if bits >= cap:
                    raise ArithmeticError(
                        f"atom comparison did not separate within {cap} bits"
                    )
                bits *= 2
        c_binom = c_binom * (n - i) // (i + 1)
    return Fraction(hits, 1 << (n + 1))


def candidate_tail(quad: Quadruple) -> Rat:
    """Exact two-atom tail of the quadruple's vector at its own x."""
    if quad.t is not None:
        return tail_two_atom(TwoAtom(quad.n, quad.t), quad.x).exact
    return two_atom_tail_quadratic(quad.n, quad.x, quad)


def default_x_grid(count: int) -> list[QRoot]:
    """Threshold grid sqrt(14/10), sqrt(24/10), ... staying far from every
    rightmost equal-weight atom sqrt(m)."""
    return [QRoot.sqrt(Fraction(10 * r + 4, 10)) for r in range(1, count + 1)]


def heuristic_search(
    x_grid: Iterable[QRoot],
    n_max: int,
    scan_J: int,
    *,
    jobs: int = 1,
    counters: dict | None = None,
    progress: ProgressFn | None = None,
) -> list[CandidateReport]:
    """Evaluate every (x, n, k) cell and rank candidates by margin.

    Inadmissible cells (no pin root in (0,1)) are skipped and counted, not
    errored.  The equal-weight scan depends only on x, so it is computed
    once per grid point and shared across the (n, k) cells.  Reports are
    sorted by descending margin, then by (x^2, n, k) for determinism.
    """
    if n_max < 1 or scan_J < 1:
        raise ValueError("n_max and scan_J must be positive")
    reports: list[CandidateReport] = []
    scans: dict[tuple[int, Rat], ScanResult] = {}
    cells = 0
    skipped = 0
    for x in x_grid:
        scan_key = (x.sign, x.square)
        for n in range(1, n_max + 1):
            for k in range(1, n + 1):
                cells += 1
                try:
                    quad = solve_t(x, n, k)
                except NoAdmissibleRootError:
                    skipped += 1
                    continue
                p_cand = candidate_tail(quad)
                scan = scans.get(scan_key)
                if scan is None:
                    scan = scan_max_equal(x, scan_J, jobs=jobs)
                    scans[scan_key] = scan
                margin = p_cand - scan.max_value
                scan_out = replace(scan, beaten_by=p_cand if margin > 0 else None)
                reports.append(
                    CandidateReport(
                        quadruple=quad,
                        p_candidate=p_cand,
                        scan_result=scan_out,
                        margin=margin,
                    )
                )
                if progress is not None:
                    progress(
                        {
                            "x2": f"{x.square}",
                            "n": n,
                            "k": k,
                            "p_candidate": f"{p_cand}",
                            "margin": f"{margin}",
                        }
                    )
    reports.sort(key=lambda r: (-r.margin, r.quadruple.x.square, r.quadruple.n, r.quadruple.k))
    if counters is not None:
        counters.update(cells=cells, skipped=skipped, evaluated=len(reports))
    return reports


def load_search_config(path: str) -> dict[str, str]:
    """Parse a plain-text key = value configuration file."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out
