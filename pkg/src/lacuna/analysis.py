"""Sequence and root diagnostics for lacking-polynomial coefficient vectors.

Log-concavity and unimodality verdicts are computed in exact integer
arithmetic and carry a concrete witness on failure.  Root location uses a
simultaneous-iteration (Aberth-style) solver in double precision, with
membership testing against the open sector 2*pi/3 < arg(z) < 4*pi/3.
"""

from __future__ import annotations

import cmath
import csv
import json
import math
import time
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import BudgetExceededError
from .graphs import BipartiteSpec
from .polynomials import LackingPolynomial
from .recurrence import sto_bipartite_symmetric

SECTOR_LOWER = 2.0 * math.pi / 3.0
SECTOR_UPPER = 4.0 * math.pi / 3.0
SECTOR_BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class ViolationWitness:
    """Index of a failed comparison and the three neighboring values."""

    index: int
    values: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class SequenceVerdict:
    property: str
    holds: bool
    witness: ViolationWitness | None = None
    internal_zero: bool = False


def is_log_concave(seq: Sequence[int]) -> SequenceVerdict:
    """a_k^2 >= a_{k-1} * a_{k+1} at every interior index, checked exactly.

    An interior zero flanked by positives is a violation and is flagged
    distinctly via ``internal_zero``.
    """
    values = list(seq)
    if any(x < 0 for x in values):
        raise ValueError("log-concavity is defined for nonnegative sequences only")
    for k in range(1, len(values) - 1):
        left, mid, right = values[k - 1], values[k], values[k + 1]
        if mid * mid < left * right:
            zero_gap = mid == 0 and left > 0 and right > 0
            return SequenceVerdict(
                property="log-concave",
                holds=False,
                witness=ViolationWitness(
                    index=k,
                    values=(left, mid, right),
                    detail=f"a[{k}]^2 = {mid * mid} < {left * right} = a[{k - 1}]*a[{k + 1}]",
                ),
                internal_zero=zero_gap,
            )
    return SequenceVerdict(property="log-concave", holds=True)


def is_unimodal(seq: Sequence[int]) -> SequenceVerdict:
    """Weakly rises, then weakly falls."""
    values = list(seq)
    falling = False
    for k in range(1, len(values)):
        if values[k] < values[k - 1]:
            falling = True
        elif values[k] > values[k - 1] and falling:
            return SequenceVerdict(
                property="unimodal",
                holds=False,
                witness=ViolationWitness(
                    index=k,
                    values=(values[k - 2] if k >= 2 else values[k - 1], values[k - 1], values[k]),
                    detail=f"a[{k}] = {values[k]} rises after the sequence fell at a[{k - 1}] = {values[k - 1]}",
                ),
            )
    return SequenceVerdict(property="unimodal", holds=True)


def partial_sums(seq: Sequence[int]) -> list[int]:
    out = []
    running = 0
    for x in seq:
        running += x
        out.append(running)
    return out


def convolve(x: Sequence[int], y: Sequence[int]) -> list[int]:
    """Ordinary convolution z_k = sum of x_i * y_{k-i}."""
    if not x or not y:
        return []
    out = [0] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        for j, yj in enumerate(y):
            out[i + j] += xi * yj
    return out


@dataclass
class RootReport:
    """All complex roots with residual magnitudes |p(z)| / |lead|."""

    roots: list[complex]
    residuals: list[float]
    iterations: int
    converged: bool
    in_sector: list[bool | None] | None = None


class RootConvergenceError(RuntimeError):
    """Raised when the simultaneous iteration fails; carries the best iterate."""

    def __init__(self, message: str, best: RootReport) -> None:
        super().__init__(message)
        self.best = best


def _horner_with_derivative(coeffs: list[float], z: complex) -> tuple[complex, complex]:
    p: complex = 0.0
    dp: complex = 0.0
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def roots(
    p: LackingPolynomial | Sequence[int],
    tol: float = 1e-12,
    max_iterations: int = 200,
    residual_tol: float = 1e-8,
) -> RootReport:
    """All complex roots by Aberth-style simultaneous refinement.

    Converges when the largest update falls below ``tol``; stalled iterates
    whose residuals are already below ``residual_tol`` are accepted, which
    tolerates multiple roots.  Anything else raises RootConvergenceError with
    the best iterate attached.
    """
    coeffs_int = list(p.coefficients) if isinstance(p, LackingPolynomial) else list(p)
    while len(coeffs_int) > 1 and coeffs_int[-1] == 0:
        coeffs_int.pop()
    degree = len(coeffs_int) - 1
    if degree < 1:
        raise ValueError("root finding needs degree >= 1")
    if any(abs(c) > 1e300 for c in coeffs_int):
        raise ValueError("coefficients overflow double precision")
    coeffs = [float(c) for c in coeffs_int]
    lead = coeffs[-1]

    # initial guesses on a circle of the Cauchy-style radius, offset to avoid
    # symmetry lock-in
    radius = 1.0 + max(abs(c / lead) for c in coeffs[:-1])
    z = [
        radius * cmath.exp(2j * math.pi * (k + 0.354) / degree)
        for k in range(degree)
    ]

    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        max_update = 0.0
        for i in range(degree):
            pi, dpi = _horner_with_derivative(coeffs, z[i])
            if pi == 0:
                continue
            if dpi == 0:
                z[i] += tol + 1e-6
                max_update = math.inf
                continue
            newton = pi / dpi
            repulsion = 0.0 + 0.0j
            for j in range(degree):
                if j != i:
                    repulsion += 1.0 / (z[i] - z[j])
            denominator = 1.0 - newton * repulsion
            w = newton if denominator == 0 else newton / denominator
            z[i] -= w
            update = abs(w)
            if update > max_update:
                max_update = update
        if max_update < tol * max(1.0, max(abs(v) for v in z)):
            converged = True
            break

    residuals = [abs(_horner_with_derivative(coeffs, v)[0]) / abs(lead) for v in z]
    scale = max(1.0, max(abs(c / lead) for c in coeffs))
    report = RootReport(
        roots=z,
        residuals=residuals,
        iterations=iterations,
        converged=converged or all(r <= residual_tol * scale for r in residuals),
    )
    if not report.converged:
        raise RootConvergenceError(
            f"no convergence after {iterations} iterations "
            f"(worst residual {max(residuals):.3e})",
            best=report,
        )
    return report


@dataclass(frozen=True)
class SectorResult:
    """Per-root membership in the open sector; None marks a boundary call too
    close to decide in floating point."""

    per_root: tuple[bool | None, ...]
    all_inside: bool | None


def sector_check(report: RootReport, boundary_tol: float = SECTOR_BOUNDARY_TOL) -> SectorResult:
    """Membership of each root in 2*pi/3 < arg(z) < 4*pi/3 (argument in [0, 2*pi))."""
    per_root: list[bool | None] = []
    for z in report.roots:
        phi = cmath.phase(z)
        if phi < 0:
            phi += 2.0 * math.pi
        if abs(phi - SECTOR_LOWER) <= boundary_tol or abs(phi - SECTOR_UPPER) <= boundary_tol:
            per_root.append(None)
        else:
            per_root.append(SECTOR_LOWER < phi < SECTOR_UPPER)
    if any(v is False for v in per_root):
        aggregate: bool | None = False
    elif any(v is None for v in per_root):
        aggregate = None
    else:
        aggregate = True
    report.in_sector = per_root
    return SectorResult(per_root=tuple(per_root), all_inside=aggregate)


@dataclass(frozen=True)
class BoundsReport:
    """Exact counting comparisons for one K_{m,n} cell.

    ``dominates`` answers whether recurrent states outnumber half the stable
    ones: "greater", "equal", or "less" comparing sto_count to stable/2.
    """

    m: int
    n: int
    sto_count: int
    stable_count: int
    spanning_tree_count: int
    lower_ok: bool
    upper_ok: bool
    dominates: str


def bounds_report(spec: BipartiteSpec, sto_count: int) -> BoundsReport:
    m, n = spec.m, spec.n
    trees = n ** (m - 1) * m ** (n - 1)
    stable = n ** (m - 1) * m ** n
    doubled = 2 * sto_count
    if doubled > stable:
        dominates = "greater"
    elif doubled == stable:
        dominates = "equal"
    else:
        dominates = "less"
    return BoundsReport(
        m=m,
        n=n,
        sto_count=sto_count,
        stable_count=stable,
        spanning_tree_count=trees,
        lower_ok=trees <= sto_count,
        upper_ok=sto_count <= stable,
        dominates=dominates,
    )


@dataclass(frozen=True)
class ScanCell:
    """One (m, n) cell of the log-concavity scan."""

    m: int
    n: int
    polynomial: LackingPolynomial | None
    log_concave: SequenceVerdict | None
    unimodal: SequenceVerdict | None
    bounds: BoundsReport | None
    error: str | None = None

    def violated(self) -> bool:
        return (
            self.error is None
            and (not self.log_concave.holds or not self.unimodal.holds)
        )


def conjecture_scan(
    max_total: int,
    engine_budget: float | None = None,
    *,
    workers: int = 1,
) -> list[ScanCell]:
    """Verdicts for every cell 2 <= m, 2 <= n, m + n <= max_total.

    ``engine_budget`` is a per-cell wall-clock soft cap in seconds; an
    exhausted cell is recorded and the scan continues.
    """
    if max_total < 4:
        raise ValueError(f"max_total must be >= 4, got {max_total}")
    cells: list[ScanCell] = []
    for m in range(2, max_total - 1):
        for n in range(2, max_total - m + 1):
            spec = BipartiteSpec(m=m, n=n)
            deadline = None if engine_budget is None else time.monotonic() + engine_budget
            try:
                histogram = sto_bipartite_symmetric(
                    spec, workers=workers, deadline=deadline
                )
            except BudgetExceededError as exc:
                cells.append(
                    ScanCell(m=m, n=n, polynomial=None, log_concave=None,
                             unimodal=None, bounds=None, error=str(exc))
                )
                continue
            poly = LackingPolynomial(coefficients=histogram.counts)
            cells.append(
                ScanCell(
                    m=m,
                    n=n,
                    polynomial=poly,
                    log_concave=is_log_concave(poly.coefficients),
                    unimodal=is_unimodal(poly.coefficients),
                    bounds=bounds_report(spec, poly.evaluate(1)),
                )
            )
    return cells


SCAN_CSV_COLUMNS = (
    "m",
    "n",
    "degree",
    "coeffs",
    "log_concave",
    "unimodal",
    "sto_count",
    "lower_bound",
    "upper_bound",
    "dominates",
)


def write_scan_csv(cells: Iterable[ScanCell], stream: TextIO) -> None:
    """CSV emission; coefficient vectors ride inside a JSON array of decimal strings."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SCAN_CSV_COLUMNS)
    for cell in cells:
        if cell.error is not None:
            writer.writerow(
                [cell.m, cell.n, "", f"budget: {cell.error}", "", "", "", "", "", ""]
            )
            continue
        bounds = cell.bounds
        writer.writerow(
            [
                cell.m,
                cell.n,
                cell.polynomial.degree,
                json.dumps([str(c) for c in cell.polynomial.coefficients]),
                str(cell.log_concave.holds).lower(),
                str(cell.unimodal.holds).lower(),
                bounds.sto_count,
                bounds.spanning_tree_count,
                bounds.stable_count,
                bounds.dominates,
            ]
        )
