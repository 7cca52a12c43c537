"""
Finite resolution diagnostics of global hypoellipticity: scans of a system over the truncated
dual, fits of the growth condition lambda_min >= C <xi>^k on the tail window, and each of the
sufficient and necessary criteria combined into a `Verdict`.

"All but finitely many" is read at two scales: the tail window is the top `tail_fraction` of
the enumeration by <xi>, zeros in the head are tolerated, and a violation needs zeros (or
values below <xi>^k_floor) recurring in the tail with a count that grows from the cutoff to
twice the cutoff.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, NamedTuple, Optional, Sequence

import numpy as np

from .block import SystemSymbol, evaluate, smallest_singular_value
from .bounds import BoundReport, SymbolClass, bound_report, check_hs_factors
from .groups import (RepIndex, dimension_bound, enumerate_reps, format_rep, rep_meta,
                     weyl_constant_check)
from .print import print_progress
from .symbols import ScalarSymbol, estimate_order, op_norm
from .util import EvaluationError, GhxError, NotSupportedError, NumericalError


class Classification(str, Enum):
    """
    Outcome of a criterion at finite resolution.
    """
    GH_CONSISTENT = "GH_CONSISTENT"
    GH_VIOLATED = "GH_VIOLATED"
    INCONCLUSIVE = "INCONCLUSIVE"

    @property
    def exit_code(self) -> int:
        """exit code of `ghx verdict` for this classification"""
        return {Classification.GH_CONSISTENT: 0, Classification.GH_VIOLATED: 2,
                Classification.INCONCLUSIVE: 3}[self]


@dataclass(frozen=True)
class DiagnosticOptions:
    """
    Tunables of the scans and criteria, usually taken from the `[scan]` and `[verdict]`
    sections of the settings.
    """
    tail_fraction: float = 0.5
    k_floor: float = -20.0
    min_tail_records: int = 3
    order_margin_epsilon: float = 0.1
    zero_tolerance: float = 1e-12
    marginal_tolerance: float = 1e-12
    threads: int = 1

    def __post_init__(self):
        if not 0.0 < self.tail_fraction <= 1.0:
            raise ValueError(f"tail fraction must be in (0, 1] but got {self.tail_fraction}")
        if self.threads < 1:
            raise ValueError(f"thread count must be positive but got {self.threads}")


@dataclass(frozen=True)
class ScanRecord:
    """
    Per representation data of a scan.

    Attributes:
        xi: index of the representation
        bracket: <xi>
        dim: d_xi
        lambda_min: smallest singular value of sigma_P(xi), exactly 0.0 when a numerical zero
        zero_flag: whether lambda_min is a numerical zero
        bounds: the `BoundReport`, None when the scan skipped the bounds
        det: determinant of sigma_P(xi) for square systems
        hs: Hilbert-Schmidt norm of sigma_P(xi)
        op: operator norm of sigma_P(xi)
    """
    xi: RepIndex
    bracket: float
    dim: int
    lambda_min: float
    zero_flag: bool
    bounds: Optional[BoundReport]
    det: Optional[complex]
    hs: float
    op: float


@dataclass(frozen=True)
class GrowthEstimate:
    """
    Fitted lower envelope lambda_min >= c_hat <xi>^k_hat over the tail window.

    Attributes:
        k_hat: fitted exponent
        c_hat: largest constant making the envelope hold on the tail sample
        zero_count: numerical zeros over the whole scan
        tail_zero_count: numerical zeros inside the tail window
        violating_set: nonzero tail points below the envelope
        tail_window: (<xi> of the first, <xi> of the last) tail record
        sample_count: nonzero tail records used by the fit
    """
    k_hat: float
    c_hat: float
    zero_count: int
    tail_zero_count: int
    violating_set: tuple[RepIndex, ...]
    tail_window: tuple[float, float]
    sample_count: int


@dataclass
class Fragment:
    """
    Result of one criterion. Criteria deciding the classification fill `classification`,
    sufficient conditions fill `holds`.
    """
    name: str
    classification: Optional[Classification] = None
    holds: Optional[bool] = None
    reasons: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)


@dataclass
class Verdict:
    """
    The combined verdict: the classification of the main criterion, the evidence and the
    fragments of every applicable criterion keyed "main", "det_sufficient",
    "block_dominance", "column" and "diagonal".
    """
    classification: Classification
    evidence: list[str]
    criteria: dict[str, Fragment]


class ProfilePoint(NamedTuple):
    """a (xi, <xi>, value, zero flag) sample of any lower bound profile"""
    xi: RepIndex
    bracket: float
    value: float
    zero: bool


def symbol_class_constants(sys: SystemSymbol, cutoff: float) -> Optional[SymbolClass]:
    """
    Sample constants of the symbol class of a system: tau_P is the largest order of the
    nonvanishing entries (estimated where not declared), C_P the smallest constant with
    ||sigma_ji(xi)||_op <= C_P <xi>^tau_P over the enumeration, and C_G the Weyl constant.

    :param sys: the system
    :param cutoff: the cutoff on <xi> of the sample
    :return: the `SymbolClass`, or None if every entry vanishes
    """
    entries = [entry for row in sys.grid for entry in row if not entry.is_zero]
    if not entries:
        return None
    tau_p = max(entry_order(entry, cutoff)[0] for entry in entries)
    if not math.isfinite(tau_p):
        return None
    c_p = 0.0
    for xi in enumerate_reps(sys.group, cutoff):
        bracket = rep_meta(sys.group, xi).bracket
        for entry in entries:
            c_p = max(c_p, op_norm(entry(xi)) / bracket ** tau_p)
    if c_p == 0.0:
        return None
    return SymbolClass(c_p * (1.0 + 1e-12), tau_p, weyl_constant_check(sys.group, cutoff),
                       sys.group.dim, dimension_bound(sys.group))


def entry_order(entry: ScalarSymbol, cutoff: float) -> tuple[float, bool]:
    """
    Order of a symbol for the criteria: -inf for vanishing symbols, the declared order if
    any, else the order estimated up to the cutoff.

    :return: tuple of (order, whether it was estimated)
    """
    if entry.is_zero:
        return -math.inf, False
    if entry.order is not None:
        return entry.order, False
    return estimate_order(entry, cutoff).tau_hat, True


def scan(sys: SystemSymbol, cutoff: float, options: DiagnosticOptions = DiagnosticOptions(),
         with_bounds: bool = True) -> list[ScanRecord]:
    """
    Evaluate a system at every representation with <xi> <= cutoff.

    :param sys: the system
    :param cutoff: the cutoff on <xi>
    :param options: the `DiagnosticOptions` (threads, tolerances)
    :param with_bounds: whether to compute the `BoundReport` of each record
    :return: one `ScanRecord` per representation in enumeration order
    """
    reps = enumerate_reps(sys.group, cutoff)
    symbol_class = symbol_class_constants(sys, cutoff) if with_bounds and sys.is_square \
        else None

    def scan_one(xi: RepIndex) -> ScanRecord:
        try:
            ev = evaluate(sys, xi, options.zero_tolerance)
        except NumericalError as ex:
            raise EvaluationError(str(ex), format_rep(sys.group, xi)) from ex
        bounds = bound_report(sys, ev, symbol_class, options.marginal_tolerance) \
            if with_bounds else None
        return ScanRecord(ev.xi, ev.bracket, ev.dim, ev.lambda_min, ev.numerical_zero, bounds,
                          ev.det, ev.hs_norm, ev.op_norm)

    if options.threads > 1:
        with ThreadPoolExecutor(max_workers=options.threads) as executor:
            # map yields in submission order which keeps the enumeration order
            records = list(executor.map(scan_one, reps))
    else:
        records = [scan_one(xi) for xi in reps]
    for record in records:
        print_progress(f"xi={format_rep(sys.group, record.xi)} <xi>={record.bracket:.6g} "
                       f"lambda_min={record.lambda_min:.6g}")
    return records


def profile(records: Sequence[ScanRecord]) -> list[ProfilePoint]:
    """the smallest singular value profile of a scan"""
    return [ProfilePoint(r.xi, r.bracket, r.lambda_min, r.zero_flag) for r in records]


def tail_slice(points: Sequence[Any], tail_fraction: float) -> Sequence[Any]:
    """
    The tail window: the last ceil(tail_fraction * len) points, extended backwards to
    include every point tied at the <xi> of the window start.

    :param points: records or profile points sorted by <xi>
    :param tail_fraction: fraction in (0, 1]
    :return: the tail as a slice of the input
    """
    if not points:
        return points
    start = len(points) - max(1, math.ceil(tail_fraction * len(points)))
    while start > 0 and points[start - 1].bracket == points[start].bracket:
        start -= 1
    return points[start:]


def fit_envelope(points: Sequence[ProfilePoint], min_records: int = 3) -> tuple[float, float]:
    """
    Least-squares fit of log value against log <xi> over the nonzero points, followed by
    the largest C with value >= C <xi>^k on every one of them.

    :param points: the profile points to fit
    :param min_records: least number of nonzero points needed
    :return: tuple of (k, C)
    """
    nonzero = [p for p in points if not p.zero and p.value > 0.0]
    if not nonzero:
        raise NumericalError("no growth to fit: every tail value is zero")
    if len(nonzero) < min_records:
        raise NumericalError(f"need at least {min_records} nonzero tail records to fit "
                             f"the growth but got {len(nonzero)}")
    log_b = np.log(np.array([p.bracket for p in nonzero]))
    log_v = np.log(np.array([p.value for p in nonzero]))
    k_hat = 0.0 if np.ptp(log_b) == 0.0 else float(np.polyfit(log_b, log_v, 1)[0])
    # shrink by a few ulps so the envelope survives the rounding of exp/pow
    c_hat = math.exp(float(np.min(log_v - k_hat * log_b))) * (1.0 - 1e-12)
    return k_hat, c_hat


def growth_estimate(points: Sequence[ProfilePoint], tail_fraction: float,
                    min_records: int = 3) -> GrowthEstimate:
    """`fit_growth` for an arbitrary profile"""
    tail = tail_slice(points, tail_fraction)
    k_hat, c_hat = fit_envelope(tail, min_records)
    violating = tuple(p.xi for p in tail
                      if not p.zero and p.value < c_hat * p.bracket ** k_hat)
    return GrowthEstimate(k_hat, c_hat, sum(1 for p in points if p.zero),
                          sum(1 for p in tail if p.zero), violating,
                          (tail[0].bracket, tail[-1].bracket),
                          sum(1 for p in tail if not p.zero and p.value > 0.0))


def fit_growth(records: Sequence[ScanRecord], tail_fraction: float = 0.5,
               min_records: int = 3) -> GrowthEstimate:
    """
    Fit the growth condition lambda_min >= C <xi>^k over the nonzero tail records.

    :param records: the scan records in enumeration order
    :param tail_fraction: fraction of the records forming the tail window
    :param min_records: least number of nonzero tail records needed
    :return: the `GrowthEstimate`
    """
    return growth_estimate(profile(records), tail_fraction, min_records)


def _deep(points: Sequence[ProfilePoint], k_floor: float) -> list[ProfilePoint]:
    # zeros and values decaying faster than the lowest tested power
    return [p for p in points if p.zero or p.value < p.bracket ** k_floor]


def _estimate_dict(est: GrowthEstimate) -> dict[str, Any]:
    return {"k_hat": est.k_hat, "c_hat": est.c_hat, "zero_count": est.zero_count,
            "tail_zero_count": est.tail_zero_count, "violating_set": list(est.violating_set),
            "tail_window": list(est.tail_window), "sample_count": est.sample_count}


def classify_profile(name: str, points: Sequence[ProfilePoint],
                     points_hi: Optional[Sequence[ProfilePoint]],
                     options: DiagnosticOptions) -> Fragment:
    """
    Classify a lower bound profile at the cutoff and (if available) twice the cutoff.

    GH_VIOLATED needs zeros or values below <xi>^k_floor inside the tail at twice the cutoff
    with their total count growing from the cutoff. GH_CONSISTENT needs no such points in
    either tail and a growth fit at the cutoff with k_hat >= k_floor. Everything else is
    INCONCLUSIVE with the reasons listed.

    :param name: name of the fragment
    :param points: the profile at the cutoff
    :param points_hi: the profile at twice the cutoff, if scanned
    :param options: the `DiagnosticOptions`
    :return: the classified `Fragment`
    """
    frag = Fragment(name)
    tail = tail_slice(points, options.tail_fraction)
    deep_all = _deep(points, options.k_floor)
    deep_tail = _deep(tail, options.k_floor)
    frag.details["zero_count"] = sum(1 for p in points if p.zero)
    frag.details["deep_count"] = len(deep_all)
    frag.details["tail_deep"] = [p.xi for p in deep_tail]
    try:
        estimate: Optional[GrowthEstimate] = growth_estimate(points, options.tail_fraction,
                                                             options.min_tail_records)
        frag.details["fit"] = _estimate_dict(estimate)  # type: ignore
    except GhxError as ex:
        estimate = None
        frag.reasons.append(str(ex))
    deep_tail_hi: list[ProfilePoint] = []
    if points_hi is not None:
        deep_hi = _deep(points_hi, options.k_floor)
        deep_tail_hi = _deep(tail_slice(points_hi, options.tail_fraction), options.k_floor)
        frag.details["deep_count_hi"] = len(deep_hi)
        frag.details["zero_count_hi"] = sum(1 for p in points_hi if p.zero)
        try:
            frag.details["fit_hi"] = _estimate_dict(growth_estimate(
                points_hi, options.tail_fraction, options.min_tail_records))
        except GhxError as ex:
            frag.reasons.append(f"at twice the cutoff: {ex}")
        if deep_tail_hi and len(deep_hi) > len(deep_all):
            frag.classification = Classification.GH_VIOLATED
            frag.reasons.append(
                f"zeros or decay below <xi>^{options.k_floor:g} recur in the tail and their "
                f"count grows from {len(deep_all)} to {len(deep_hi)} at twice the cutoff")
            return frag
    elif deep_tail:
        frag.reasons.append("tail has zeros or super-polynomial decay but the re-scan at "
                            "twice the cutoff is unavailable")
    if deep_tail or deep_tail_hi:
        frag.classification = Classification.INCONCLUSIVE
        frag.reasons.append("tail has zeros or super-polynomial decay without growth "
                            "in their count")
        return frag
    if estimate is None:
        frag.classification = Classification.INCONCLUSIVE
        return frag
    if estimate.k_hat < options.k_floor:
        frag.classification = Classification.INCONCLUSIVE
        frag.reasons.append(f"fitted exponent {estimate.k_hat:g} is below the floor "
                            f"{options.k_floor:g}")
        return frag
    frag.classification = Classification.GH_CONSISTENT
    head = [p.xi for p in points if p.zero]
    frag.reasons.append(f"lower envelope {estimate.c_hat:.6g} <xi>^{estimate.k_hat:.6g} holds "
                        f"on the tail; {len(head)} zero(s) outside the tail form the observed "
                        "exceptional set")
    frag.details["exceptional_set"] = head
    return frag


def check_main_criterion(records: Sequence[ScanRecord],
                         records_hi: Optional[Sequence[ScanRecord]] = None,
                         options: DiagnosticOptions = DiagnosticOptions()) -> Fragment:
    """
    The characterisation: the system is globally hypoelliptic iff lambda_min[sigma_P(xi)] >=
    C <xi>^k for all but finitely many xi. See `classify_profile` for the finite resolution
    reading.

    :param records: scan at the cutoff
    :param records_hi: scan at twice the cutoff, if available
    :param options: the `DiagnosticOptions`
    :return: the "main" `Fragment`
    """
    return classify_profile("main", profile(records),
                            None if records_hi is None else profile(records_hi), options)


def _fit_holds(name: str, points: Sequence[ProfilePoint], options: DiagnosticOptions,
               frag: Fragment, floor: bool = True) -> Optional[tuple[float, float]]:
    # a fit of the tail with no zeros (and with `floor` no decay below k_floor), else None
    tail = tail_slice(points, options.tail_fraction)
    if floor and (deep := _deep(tail, options.k_floor)):
        frag.reasons.append(f"{name}: {len(deep)} tail value(s) vanish or fall below "
                            f"<xi>^{options.k_floor:g}")
        return None
    if not floor and (zeros := [p for p in tail if p.zero]):
        frag.reasons.append(f"{name}: {len(zeros)} tail value(s) vanish")
        return None
    try:
        return fit_envelope(tail, options.min_tail_records)
    except GhxError as ex:
        frag.reasons.append(f"{name}: {ex}")
        return None


def check_det_sufficient(sys: SystemSymbol, records: Sequence[ScanRecord],
                         records_hi: Optional[Sequence[ScanRecord]] = None,
                         options: DiagnosticOptions = DiagnosticOptions(),
                         cutoff: Optional[float] = None) -> Fragment:
    """
    Determinant criterion for square systems: |det sigma_P(xi)| >= C <xi>^k on the tail
    together with either every entry order below -dim(G)/4 (order branch) or a uniform bound
    on d_xi (bounded dimension branch, always true on the torus with K = 1).

    :param sys: the square system
    :param records: scan at the cutoff
    :param records_hi: scan at twice the cutoff, if available
    :param options: the `DiagnosticOptions`
    :param cutoff: cutoff used to estimate undeclared orders (defaults to the largest <xi>)
    :return: the "det_sufficient" `Fragment`
    """
    if not sys.is_square:
        raise NotSupportedError(f"determinant criterion needs a square system, got "
                                f"{sys.m}x{sys.n}")
    frag = Fragment("det_sufficient")
    cutoff = cutoff or (records[-1].bracket if records else 1.0)
    fits = []
    for label, recs in (("det", records), ("det at twice the cutoff", records_hi)):
        if recs is None:
            continue
        # the numerical zero flag of lambda_min marks singular blocks whose det only rounds
        # to a few ulp
        points = [ProfilePoint(r.xi, r.bracket, 0.0 if zero else abs(r.det or 0.0), zero)
                  for r in recs for zero in (r.zero_flag or (r.det or 0.0) == 0.0,)]
        fits.append(_fit_holds(label, points, options, frag, floor=False))
    fit_ok = all(fit is not None for fit in fits)
    if fits[0] is not None:
        frag.details["det_fit"] = {"k_hat": fits[0][0], "c_hat": fits[0][1]}
        if fits[0][0] < options.k_floor:
            frag.reasons.append(f"det: the fitted exponent {fits[0][0]:.6g} is below "
                                f"<xi>^{options.k_floor:g} so the envelope is only "
                                f"established on the sampled tail")

    orders = [(entry_order(entry, cutoff), entry.name) for row in sys.grid for entry in row]
    finite_orders = [order for (order, _), _ in orders if order != -math.inf]
    tau_p = max(finite_orders) if finite_orders else -math.inf
    order_branch = tau_p < -sys.group.dim / 4.0
    dim_bound = dimension_bound(sys.group)
    frag.details.update({"tau_p": tau_p, "order_branch": order_branch,
                         "dimension_bound": dim_bound,
                         "estimated_orders": [name for (_, est), name in orders if est]})
    branch = "order" if order_branch else "bounded_dimension" if dim_bound is not None else None
    frag.details["branch"] = branch
    if branch is None:
        frag.reasons.append(f"neither branch: entry orders up to {tau_p:g} are not below "
                            f"-{sys.group.dim}/4 and d_xi is unbounded on {sys.group}")
    hs_failures = [r.xi for r in records
                   if r.bounds is not None and check_hs_factors(r.bounds)]
    frag.details["hs_factor_violations"] = hs_failures
    frag.holds = fit_ok and branch is not None
    if frag.holds:
        frag.reasons.append(f"|det| envelope holds on the tail with the {branch} branch")
    return frag


def _diagonal_points(sys: SystemSymbol, ell: int,
                     records: Sequence[ScanRecord], zero_tolerance: float) -> list[ProfilePoint]:
    entry = sys.entry(ell, ell)
    points = []
    for r in records:
        block = entry(r.xi)
        lam = smallest_singular_value(block)
        zero = lam < zero_tolerance * max(1.0, float(np.linalg.norm(block)))
        points.append(ProfilePoint(r.xi, r.bracket, 0.0 if zero else lam, zero))
    return points


def check_block_dominance_sufficient(sys: SystemSymbol, records: Sequence[ScanRecord],
                                     options: DiagnosticOptions = DiagnosticOptions(),
                                     cutoff: Optional[float] = None) -> Fragment:
    """
    Block dominance criterion for square systems: (a) block diagonal dominance by rows and
    columns in the maximum norm at every tail representation, and (b) for each l a lower
    envelope lambda_min[sigma_P_ll(xi)] >= C_l <xi>^k_l on the tail with k_l > tau_l, the
    largest order of the off-diagonal entries in row and column l.

    :param sys: the square system
    :param records: scan at the cutoff, with bounds
    :param options: the `DiagnosticOptions`
    :param cutoff: cutoff used to estimate undeclared orders (defaults to the largest <xi>)
    :return: the "block_dominance" `Fragment`
    """
    if not sys.is_square:
        raise NotSupportedError(f"block dominance criterion needs a square system, got "
                                f"{sys.m}x{sys.n}")
    frag = Fragment("block_dominance")
    cutoff = cutoff or (records[-1].bracket if records else 1.0)
    tail = tail_slice(records, options.tail_fraction)
    not_dominant = [r.xi for r in tail if r.bounds is None or not r.bounds.dominant_maxnorm]
    marginal = [r.xi for r in tail if r.bounds is not None and r.bounds.marginal]
    dominance_ok = not not_dominant
    frag.details["not_dominant"] = not_dominant
    frag.details["marginal"] = marginal
    if not dominance_ok:
        frag.reasons.append(f"not block diagonally dominant at {len(not_dominant)} tail "
                            "representation(s)")
    per_entry = []
    entries_ok = True
    for ell in range(sys.m):
        off = [entry_order(sys.entry(ell, i), cutoff) for i in range(sys.n) if i != ell]
        off += [entry_order(sys.entry(j, ell), cutoff) for j in range(sys.m) if j != ell]
        tau = max((order for order, _ in off), default=-math.inf)
        estimated = any(est for _, est in off)
        item: dict[str, Any] = {"ell": ell + 1, "tau": tau, "estimated": estimated}
        fit = _fit_holds(f"diagonal entry {ell + 1}",
                         _diagonal_points(sys, ell, records, options.zero_tolerance),
                         options, frag)
        if fit is None:
            entries_ok = False
            item.update({"k": None, "margin": None})
        else:
            k_ell, c_ell = fit
            margin = k_ell - tau
            item.update({"k": k_ell, "c": c_ell, "margin": margin})
            # fitted exponents of exact powers carry rounding noise
            if not margin > 1e-9:
                entries_ok = False
                frag.reasons.append(f"diagonal entry {ell + 1}: k={k_ell:.6g} does not "
                                    f"exceed tau={tau:g}")
        per_entry.append(item)
    frag.details["entries"] = per_entry
    frag.holds = dominance_ok and entries_ok
    if frag.holds:
        frag.details["implied_growth_exponent"] = \
            min((item["k"] for item in per_entry), default=math.inf) - options.order_margin_epsilon
        frag.reasons.append("dominant on the tail and every diagonal entry grows faster "
                            "than its off-diagonal orders")
    return frag


def check_column_system(sys: SystemSymbol, records: Sequence[ScanRecord],
                        records_hi: Optional[Sequence[ScanRecord]] = None,
                        options: DiagnosticOptions = DiagnosticOptions()) -> Fragment:
    """
    Column systems (n = 1): the profile max_j lambda_min[sigma_P_j(xi)] is a lower bound of
    lambda_min[sigma_P(xi)] and its growth is sufficient. On the torus lambda_min equals
    sqrt(sum_j |P_j(xi)|^2), which is checked, and the criterion becomes necessary too;
    the same holds trivially for a single equation.

    :param sys: the system with a single column
    :param records: scan at the cutoff
    :param records_hi: scan at twice the cutoff, if available
    :param options: the `DiagnosticOptions`
    :return: the "column" `Fragment`
    """
    if sys.n != 1:
        raise NotSupportedError(f"column criterion needs a single unknown, got n={sys.n}")

    def column_points(recs: Sequence[ScanRecord]) -> list[ProfilePoint]:
        points = []
        for r in recs:
            blocks = [row[0] for row in sys.blocks(r.xi)]
            best = max(smallest_singular_value(block) for block in blocks)
            if sys.group.is_torus:
                exact = math.sqrt(sum(abs(complex(block[0, 0])) ** 2 for block in blocks))
                tol = 1e-12 * max(1.0, exact)
                if abs(r.lambda_min - exact) > tol:
                    equality_failures.append(r.xi)
                if not best - tol <= r.lambda_min <= math.sqrt(sys.m) * best + tol:
                    sandwich_failures.append(r.xi)
            zero = best < options.zero_tolerance * max(1.0, r.hs)
            points.append(ProfilePoint(r.xi, r.bracket, 0.0 if zero else best, zero))
        return points

    equality_failures: list[RepIndex] = []
    sandwich_failures: list[RepIndex] = []
    points = column_points(records)
    points_hi = None if records_hi is None else column_points(records_hi)
    frag = classify_profile("column", points, points_hi, options)
    iff = sys.group.is_torus or sys.m == 1
    if sys.group.is_torus:
        frag.details["equality_failures"] = equality_failures
        frag.details["sandwich_failures"] = sandwich_failures
        if equality_failures or sandwich_failures:
            frag.reasons.append("torus column equality failed at "
                                f"{len(equality_failures) + len(sandwich_failures)} point(s)")
    frag.details["if_and_only_if"] = iff
    if not iff and frag.classification == Classification.GH_VIOLATED:
        frag.classification = Classification.INCONCLUSIVE
        frag.reasons.append("the column profile is only a sufficient condition on this group")
    frag.holds = frag.classification == Classification.GH_CONSISTENT
    return frag


def _combine(classifications: Sequence[Optional[Classification]]) -> Classification:
    if any(c == Classification.GH_VIOLATED for c in classifications):
        return Classification.GH_VIOLATED
    if all(c == Classification.GH_CONSISTENT for c in classifications):
        return Classification.GH_CONSISTENT
    return Classification.INCONCLUSIVE


def check_diagonal_system(sys: SystemSymbol, records: Sequence[ScanRecord],
                          records_hi: Optional[Sequence[ScanRecord]] = None,
                          options: DiagnosticOptions = DiagnosticOptions()) -> Fragment:
    """
    Diagonal systems are globally hypoelliptic iff every diagonal operator is: classify the
    profile of each diagonal entry and combine.

    :param sys: the diagonal system
    :param records: scan at the cutoff
    :param records_hi: scan at twice the cutoff, if available
    :param options: the `DiagnosticOptions`
    :return: the "diagonal" `Fragment`
    """
    if not sys.is_diagonal:
        raise NotSupportedError("diagonal criterion needs a diagonal square system")
    frag = Fragment("diagonal")
    parts = []
    for ell in range(sys.m):
        points = _diagonal_points(sys, ell, records, options.zero_tolerance)
        points_hi = None if records_hi is None else \
            _diagonal_points(sys, ell, records_hi, options.zero_tolerance)
        part = classify_profile(f"diagonal entry {ell + 1}", points, points_hi, options)
        parts.append(part)
        frag.reasons.extend(f"entry {ell + 1}: {reason}" for reason in part.reasons)
    frag.details["entries"] = [part.classification for part in parts]
    frag.classification = _combine([part.classification for part in parts])
    frag.holds = frag.classification == Classification.GH_CONSISTENT
    return frag


def verdict(sys: SystemSymbol, records: Sequence[ScanRecord],
            records_hi: Optional[Sequence[ScanRecord]] = None,
            options: DiagnosticOptions = DiagnosticOptions(),
            cutoff: Optional[float] = None) -> Verdict:
    """
    Run every applicable criterion and combine the fragments. The classification is the one
    of the main criterion; disagreements of the other criteria are listed in the evidence.

    :param sys: the system
    :param records: scan at the cutoff (with bounds)
    :param records_hi: scan at twice the cutoff, if available
    :param options: the `DiagnosticOptions`
    :param cutoff: the cutoff of `records`, used for order estimates
    :return: the `Verdict`
    """
    main = check_main_criterion(records, records_hi, options)
    criteria = {"main": main}
    if sys.is_square:
        criteria["det_sufficient"] = check_det_sufficient(sys, records, records_hi, options,
                                                          cutoff)
        criteria["block_dominance"] = check_block_dominance_sufficient(sys, records, options,
                                                                       cutoff)
    if sys.n == 1:
        criteria["column"] = check_column_system(sys, records, records_hi, options)
    if sys.is_diagonal:
        criteria["diagonal"] = check_diagonal_system(sys, records, records_hi, options)
    assert main.classification is not None
    evidence = list(main.reasons)
    for name, frag in criteria.items():
        if name == "main":
            continue
        if frag.holds and main.classification == Classification.GH_VIOLATED:
            evidence.append(f"inconsistency: sufficient criterion '{name}' holds while the "
                            "main criterion is violated")
        if frag.classification == Classification.GH_VIOLATED and \
                main.classification != Classification.GH_VIOLATED:
            evidence.append(f"inconsistency: criterion '{name}' is violated while the main "
                            f"criterion is {main.classification.value}")
    dominance = criteria.get("block_dominance")
    if dominance is not None and dominance.holds and "fit" in main.details:
        implied = dominance.details["implied_growth_exponent"]
        if (k_hat := main.details["fit"]["k_hat"]) < implied:
            evidence.append(f"inconsistency: block dominance implies growth exponent "
                            f"{implied:.6g} but the fit gives {k_hat:.6g}")
    return Verdict(main.classification, evidence, criteria)


def diagnose(sys: SystemSymbol, cutoff: float,
             options: DiagnosticOptions = DiagnosticOptions()) -> tuple[Verdict, list[ScanRecord]]:
    """
    Scan a system at the cutoff and at twice the cutoff, then compute its `Verdict`.

    :return: tuple of the `Verdict` and the records at the cutoff
    """
    records = scan(sys, cutoff, options)
    records_hi = scan(sys, 2.0 * cutoff, options, with_bounds=False)
    return verdict(sys, records, records_hi, options, cutoff), records
