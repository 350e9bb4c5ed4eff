"""End-to-end certificates that a two-atom candidate beats (or fails to
beat) every equal-weight tail at its threshold.

A COUNTEREXAMPLE verdict is the conjunction of two finite, exact facts:

  (a) for every j above a threshold J, the normal-tail upper bound plus the
      Berry-Esseen slack C/sqrt(j) falls strictly below the candidate tail;
  (b) an exact scan certifies every tail with j <= J strictly below it.

NOT_COUNTEREXAMPLE always carries an explicit witness j whose equal-weight
tail meets or exceeds the candidate.  UNDECIDED is reserved for runs where
no finite threshold exists and no witness was found within the configured
range, or where the scan budget was deliberately capped.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exactnum import CertInterval, QRoot, Rat
from .gaussian import (
    BEConfig,
    DEFAULT_WIDTH,
    be_threshold,
    max_width_bits,
    normal_tail_bounds,
)
from .scan import ProgressFn, ScanResult, scan_max_equal
from .tails import TwoAtom, tail_equal, tail_two_atom

#: How far to look for an explicit witness when no finite threshold exists.
DEFAULT_WITNESS_SCAN_CAP = 4096


class Verdict(str, Enum):
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    NOT_COUNTEREXAMPLE = "NOT_COUNTEREXAMPLE"
    UNDECIDED = "UNDECIDED"


class CheckLessStatus(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class VerificationReport:
    """Full certificate of one candidate check."""

    n: int
    x: QRoot
    t: QRoot
    p_star: Rat
    phi_enclosure: CertInterval
    be_threshold_j: int | None
    scan: ScanResult | None
    verdict: Verdict
    witness_j: int | None
    wall_time: float


@dataclass(frozen=True)
class CheckLessResult:
    """Separation of the series value (n+1)/2^(n+1) from the normal tail at x_n."""

    n: int
    status: CheckLessStatus
    series_value: Rat
    phi_enclosure: CertInterval


@dataclass(frozen=True)
class BaseCaseReport:
    """Check that thresholds in (0, 1] pin every equal-weight tail at 1/2."""

    x: QRoot
    j_checked: int
    ok: bool
    first_tail: Rat
    worst_j: int
    worst_tail: Rat


def _separate(p: Rat, x: QRoot, start_width: Rat) -> tuple[str, CertInterval]:
    """Refine the normal-tail enclosure at x until p separates from it.

    Returns ("above", enc) when p > enc.hi, ("below", enc) when p < enc.lo,
    or ("straddles", enc) once the refinement cap is hit.
    """
    cap = max_width_bits()
    floor_width = Fraction(1, 1 << cap)
    width = max(start_width, floor_width)
    while True:
        enc = normal_tail_bounds(x, width).bounds
        if p > enc.hi:
            return "above", enc
        if p < enc.lo:
            return "below", enc
        if width <= floor_width:
            return "straddles", enc
        width = max(width / (1 << 24), floor_width)


def verify_counterexample(
    n: int,
    x: QRoot,
    t: QRoot,
    *,
    config: BEConfig = BEConfig(),
    phi_width: Rat = DEFAULT_WIDTH,
    max_scan_j: int | None = None,
    witness_scan_cap: int = DEFAULT_WITNESS_SCAN_CAP,
    jobs: int = 1,
    progress: ProgressFn | None = None,
) -> VerificationReport:
    """Decide whether the two-atom vector (n, t) beats every equal-weight
    tail at threshold x, with a finite certificate either way.

    When the candidate tail exceeds the normal-tail upper bound, a finite
    threshold J exists: all j > J are disposed of by the Berry-Esseen
    inequality and all j <= J by the exact scan.  Setting max_scan_j caps
    the scan budget and yields UNDECIDED instead of a long run.
    """
    started = time.perf_counter()
    vector = TwoAtom(n, t)
    p_star = tail_two_atom(vector, x).exact

    side, phi = _separate(p_star, x, phi_width)
    if side == "above":
        threshold = be_threshold(x, p_star, config=config, width=phi.width)
        # Re-check the disposal inequality explicitly: C/sqrt(J+1) < p* - phi_hi.
        delta = p_star - phi.hi
        assert config.C**2 < delta * delta * (threshold + 1)
        if max_scan_j is not None and threshold > max_scan_j:
            return VerificationReport(
                n=n,
                x=x,
                t=t,
                p_star=p_star,
                phi_enclosure=phi,
                be_threshold_j=threshold,
                scan=None,
                verdict=Verdict.UNDECIDED,
                witness_j=None,
                wall_time=time.perf_counter() - started,
            )
        scan = scan_max_equal(x, threshold, p_ref=p_star, jobs=jobs, progress=progress)
        if scan.violation_j is None:
            verdict, witness = Verdict.COUNTEREXAMPLE, None
        else:
            verdict, witness = Verdict.NOT_COUNTEREXAMPLE, scan.violation_j
        return VerificationReport(
            n=n,
            x=x,
            t=t,
            p_star=p_star,
            phi_enclosure=phi,
            be_threshold_j=threshold,
            scan=scan,
            verdict=verdict,
            witness_j=witness,
            wall_time=time.perf_counter() - started,
        )

    # No finite threshold can exist (p* is at or below the normal tail, and
    # the equal-weight tails converge to it): hunt for an explicit witness.
    scan = scan_max_equal(x, witness_scan_cap, p_ref=p_star, jobs=jobs)
    if scan.violation_j is not None:
        verdict, witness = Verdict.NOT_COUNTEREXAMPLE, scan.violation_j
    else:
        verdict, witness = Verdict.UNDECIDED, None
    return VerificationReport(
        n=n,
        x=x,
        t=t,
        p_star=p_star,
        phi_enclosure=phi,
        be_threshold_j=None,
        scan=scan,
        verdict=verdict,
        witness_j=witness,
        wall_time=time.perf_counter() - started,
    )


def check_less(n: int, *, start_width: Rat = DEFAULT_WIDTH) -> CheckLessResult:
    """Certify the series value (n+1)/2^(n+1) against the normal tail at x_n.

    "holds" means the series value is certifiably below the normal tail
    (so the series member cannot beat the equal-weight supremum, whose
    limit includes the normal tail); "fails" means it is certifiably at or
    above the enclosure; "undecided" means the refinement cap could not
    separate them.
    """
    from .search import series_quadruple
    from .tails import series_tail_value

    quad = series_quadruple(n)  # validates n >= 8
    p = series_tail_value(n)
    side, phi = _separate(p, quad.x, start_width)
    if side == "below":
        status = CheckLessStatus.HOLDS
    elif side == "above":
        status = CheckLessStatus.FAILS
    else:
        status = CheckLessStatus.UNDECIDED
    return CheckLessResult(n=n, status=status, series_value=p, phi_enclosure=phi)


def base_case_check(x: QRoot, j_max: int = 200) -> BaseCaseReport:
    """For thresholds in (0, 1]: the single-coordinate tail is exactly 1/2
    and no coordinate count does better."""
    if x.sign != 1 or x.square > 1:
        raise ValueError("x must lie in (0, 1]")
    if j_max < 1:
        raise ValueError("j_max must be positive")
    half = Fraction(1, 2)
    first = tail_equal(1, x).exact
    worst_j, worst = 1, first
    for j in range(2, j_max + 1):
        value = tail_equal(j, x).exact
        if value > worst:
            worst_j, worst = j, value
    ok = first == half and worst <= half
    return BaseCaseReport(
        x=x, j_checked=j_max, ok=ok, first_tail=first, worst_j=worst_j, worst_tail=worst
    )


# ---------------------------------------------------------------------------
# serialization


def rat_str(r: Rat) -> str:
    return f"{r.numerator}/{r.denominator}"


def qroot_dict(x: QRoot) -> dict:
    return {"sign": x.sign, "square": rat_str(x.square), "approx": x.approx()}


def interval_dict(iv: CertInterval) -> dict:
    return {
        "lo": rat_str(iv.lo),
        "hi": rat_str(iv.hi),
        "lo_approx": float(iv.lo),
        "hi_approx": float(iv.hi),
    }


def scan_dict(s: ScanResult) -> dict:
    return {
        "J": s.J,
        "x": qroot_dict(s.x),
        "max_value": rat_str(s.max_value),
        "max_value_approx": float(s.max_value),
        "argmax_j": s.argmax_j,
        "beaten_by": None if s.beaten_by is None else rat_str(s.beaten_by),
        "violation_j": s.violation_j,
        "certificate": {
            "kind": s.certificate.kind,
            "count_exact": s.certificate.count_exact,
            "count_filtered": s.certificate.count_filtered,
        },
    }


def report_dict(rep: VerificationReport) -> dict:
    return {
        "n": rep.n,
        "x": qroot_dict(rep.x),
        "t": qroot_dict(rep.t),
        "p_star": rat_str(rep.p_star),
        "p_star_approx": float(rep.p_star),
        "normal_tail": interval_dict(rep.phi_enclosure),
        "be_threshold_j": rep.be_threshold_j,
        "scan": None if rep.scan is None else scan_dict(rep.scan),
        "verdict": rep.verdict.value,
        "witness_j": rep.witness_j,
        "wall_time_s": round(rep.wall_time, 3),
    }


def report_text(rep: VerificationReport) -> str:
    """Human-readable rendering following the certificate's structure."""
    lines = [
        f"candidate      : n = {rep.n}, x^2 = {rep.x.square}, t^2 = {rep.t.square}",
        f"candidate tail : p* = {rat_str(rep.p_star)} (~{float(rep.p_star):.10g})",
        "normal tail    : in [{:.12g}, {:.12g}]".format(
            float(rep.phi_enclosure.lo), float(rep.phi_enclosure.hi)
        ),
    ]
    if rep.be_threshold_j is not None:
        lines.append(
            f"tail threshold : every j > {rep.be_threshold_j} certifiably has tail < p*"
        )
    else:
        lines.append("tail threshold : none exists (p* does not exceed the normal tail)")
    if rep.scan is not None:
        s = rep.scan
        line = (
            f"finite scan    : max over 1 <= j <= {s.J} is {rat_str(s.max_value)}"
            f" (~{float(s.max_value):.10g}) at j = {s.argmax_j}"
        )
        if s.beaten_by is not None:
            line += "; certified < p*"
        if s.violation_j is not None:
            line += f"; first violation at j = {s.violation_j}"
        lines.append(line)
    else:
        lines.append("finite scan    : not performed (scan budget exceeded)")
    if rep.witness_j is not None:
        witness_tail = tail_equal(rep.witness_j, rep.x).exact
        lines.append(
            f"witness        : j = {rep.witness_j} with tail {rat_str(witness_tail)}"
            f" >= p*"
        )
    lines.append(f"verdict        : {rep.verdict.value}")
    lines.append(f"wall time      : {rep.wall_time:.3f} s")
    return "\n".join(lines)
