"""Finite truncations of semi-infinite banded stochastic matrices.

Builds the pure-death factor (lower bandwidth 2), the pure-birth factor
(upper bandwidth 1) and the pentadiagonal composite chain, multiplies
banded truncations, and cross-checks that the factor product equals the
directly reconstructed chain row by row.

Truncating a semi-infinite matrix loses mass off the right edge in the
last ``upper_bandwidth`` rows.  Those rows are flagged non-interior and
excluded from row-sum checks; they are never renormalized, since that
would silently change the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .coefficients import (
    IntegerParameters,
    LUCoefficients,
    Parameters,
    Scalar,
    lu_coefficients,
    lu_coefficients_integer,
    reconstruct_row,
)


@dataclass(frozen=True)
class BandedMatrix:
    """Dense-in-band storage of a square banded matrix.

    ``rows[i][k]`` holds entry (i, i - lower_bandwidth + k); positions
    whose column falls outside [0, size) are stored as zero and are
    structurally zero outside the band.
    """

    size: int
    lower_bandwidth: int
    upper_bandwidth: int
    rows: tuple[tuple[Scalar, ...], ...]

    @classmethod
    def build(
        cls,
        size: int,
        lower_bandwidth: int,
        upper_bandwidth: int,
        entry_fn: Callable[[int, int], Scalar],
    ) -> "BandedMatrix":
        """Construct from a function giving the in-band entry (i, j)."""
        if size < 1:
            raise ValueError(f"size must be >= 1 (got {size})")
        rows = []
        for i in range(size):
            row = []
            for j in range(i - lower_bandwidth, i + upper_bandwidth + 1):
                row.append(entry_fn(i, j) if 0 <= j < size else 0)
            rows.append(tuple(row))
        return cls(size, lower_bandwidth, upper_bandwidth, tuple(rows))

    def entry(self, i: int, j: int) -> Scalar:
        if not (0 <= i < self.size and 0 <= j < self.size):
            raise IndexError(f"entry ({i}, {j}) outside a {self.size}x{self.size} matrix")
        offset = j - i
        if -self.lower_bandwidth <= offset <= self.upper_bandwidth:
            return self.rows[i][offset + self.lower_bandwidth]
        return 0

    def row_entries(self, i: int) -> list[tuple[int, Scalar]]:
        """In-band (column, value) pairs of row i, ascending column."""
        out = []
        for k, value in enumerate(self.rows[i]):
            j = i - self.lower_bandwidth + k
            if 0 <= j < self.size:
                out.append((j, value))
        return out

    def row_sum(self, i: int) -> Scalar:
        total = 0
        for _, value in self.row_entries(i):
            total += value
        return total

    def is_interior(self, i: int) -> bool:
        """True when row i keeps all its in-band columns inside the
        truncation, so a stochastic row still sums to 1."""
        return i + self.upper_bandwidth < self.size

    def scalar_kind(self) -> str:
        """'float' / 'exact' (contains Fraction) / 'int' (ints only)."""
        has_float = has_fraction = False
        for row in self.rows:
            for value in row:
                if isinstance(value, float):
                    has_float = True
                elif isinstance(value, Fraction):
                    has_fraction = True
        if has_float and has_fraction:
            raise ValueError("matrix mixes float and Fraction entries")
        if has_float:
            return "float"
        return "exact" if has_fraction else "int"

    def to_dense(self) -> list[list[Scalar]]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]


def identity(size: int) -> BandedMatrix:
    return BandedMatrix.build(size, 0, 0, lambda i, j: 1)


def multiply(a: BandedMatrix, b: BandedMatrix) -> BandedMatrix:
    """Banded product; bandwidths add.  Exact when both factors are."""
    if a.size != b.size:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    kinds = {a.scalar_kind(), b.scalar_kind()}
    if "float" in kinds and "exact" in kinds:
        raise ValueError("scalar kind mismatch: cannot multiply float and exact matrices")

    def entry(i: int, j: int) -> Scalar:
        lo = max(i - a.lower_bandwidth, j - b.upper_bandwidth, 0)
        hi = min(i + a.upper_bandwidth, j + b.lower_bandwidth, a.size - 1)
        total = 0
        for k in range(lo, hi + 1):
            total += a.entry(i, k) * b.entry(k, j)
        return total

    return BandedMatrix.build(
        a.size,
        a.lower_bandwidth + b.lower_bandwidth,
        a.upper_bandwidth + b.upper_bandwidth,
        entry,
    )


def death_factor(c: LUCoefficients, size: int) -> BandedMatrix:
    """Pure-death factor: row n holds (t_n, r_n, s_n) at columns
    n-2, n-1, n; row 0 is the absorbing row (s_0 = 1)."""
    _require_coverage(c, size)

    def entry(i: int, j: int) -> Scalar:
        if j == i:
            return c.s[i]
        if j == i - 1:
            return c.r[i]
        return c.t[i]

    return BandedMatrix.build(size, 2, 0, entry)


def birth_factor(c: LUCoefficients, size: int) -> BandedMatrix:
    """Pure-birth factor: row n holds (y_n, x_n) at columns n, n+1.
    The last row loses x over the truncation edge and is non-interior."""
    _require_coverage(c, size)

    def entry(i: int, j: int) -> Scalar:
        return c.y[i] if j == i else c.x[i]

    return BandedMatrix.build(size, 0, 1, entry)


def reconstructed_matrix(c: LUCoefficients, size: int) -> BandedMatrix:
    """Pentadiagonal composite chain assembled row by row from
    :func:`reconstruct_row` (lower bandwidth 2, upper 1)."""
    _require_coverage(c, size)
    rows = [reconstruct_row(c, n).probabilities() for n in range(size)]

    def entry(i: int, j: int) -> Scalar:
        return rows[i].get(j, 0)

    return BandedMatrix.build(size, 2, 1, entry)


def _require_coverage(c: LUCoefficients, size: int) -> None:
    if size < 1:
        raise ValueError(f"size must be >= 1 (got {size})")
    if c.n_max < size - 1:
        raise ValueError(
            f"insufficient coefficients: need indices 0..{size - 1}, have 0..{c.n_max}"
        )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    detail: str = ""


@dataclass(frozen=True)
class FactorizationReport:
    size: int
    kind: str
    tolerance: float
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "kind": self.kind,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "checks": [
                {
                    "name": check.name,
                    "passed": check.passed,
                    "max_deviation": check.deviation,
                    "detail": check.detail,
                }
                for check in self.checks
            ],
        }


def verify_factorization(
    c: LUCoefficients,
    size: int,
    tolerance: float | None = None,
) -> FactorizationReport:
    """Build the chain two ways and report their agreement.

    Route one assembles the pentadiagonal rows directly from the factor
    coefficients; route two multiplies the death and birth factors.
    Entrywise equality is checked on rows 0..size-3, together with band
    structure, factor and product row sums, coefficient bounds and the
    boundary values t_0 = t_1 = r_0 = 0, s_0 = 1.

    ``tolerance`` defaults to 0 for exact coefficients and 1e-12 for
    float coefficients (entries are O(1) ratios and the products sum at
    most three terms, so no cancellation grows the error).
    """
    lower = death_factor(c, size)
    upper = birth_factor(c, size)
    product = multiply(lower, upper)
    direct = reconstructed_matrix(c, size)
    kind = product.scalar_kind()
    if tolerance is None:
        tolerance = 0.0 if kind in ("exact", "int") else 1e-12

    def bounded(name: str, deviation, detail: str = "") -> CheckResult:
        return CheckResult(name, not deviation > tolerance, float(deviation), detail)

    checks = []

    dev = 0
    for n in range(size):
        dev = max(dev, abs(c.x[n] + c.y[n] - 1), abs(c.t[n] + c.r[n] + c.s[n] - 1))
    checks.append(bounded("coefficient_row_sums", dev, "x+y = 1 and t+r+s = 1"))

    dev = 0
    for seq in (c.x, c.y, c.t, c.r, c.s):
        for value in seq[:size]:
            dev = max(dev, -value, value - 1, 0)
    checks.append(bounded("coefficient_bounds", dev, "all coefficients within [0, 1]"))

    dev = max(abs(c.t[0]), abs(c.r[0]), abs(c.s[0] - 1))
    if size > 1:
        dev = max(dev, abs(c.t[1]))
    checks.append(bounded("boundary_values", dev, "t_0 = t_1 = r_0 = 0 and s_0 = 1"))

    band_ok = product.lower_bandwidth == 2 and product.upper_bandwidth == 1
    checks.append(
        CheckResult(
            "band_structure",
            band_ok,
            0.0,
            f"product bandwidths (lower, upper) = ({product.lower_bandwidth}, {product.upper_bandwidth})",
        )
    )

    dev = 0
    for i in range(size):
        dev = max(dev, abs(lower.row_sum(i) - 1))
        if upper.is_interior(i):
            dev = max(dev, abs(upper.row_sum(i) - 1))
    checks.append(bounded("factor_row_sums", dev, "interior factor rows sum to 1"))

    dev = 0
    rows_compared = max(size - 2, 0)
    for i in range(rows_compared):
        for j, value in product.row_entries(i):
            dev = max(dev, abs(value - direct.entry(i, j)))
    checks.append(
        bounded("lu_identity", dev, f"product vs direct rows 0..{rows_compared - 1}")
    )

    dev = 0
    for i in range(size):
        if product.is_interior(i):
            dev = max(dev, abs(product.row_sum(i) - 1))
    checks.append(bounded("product_row_sums", dev, "interior product rows sum to 1"))

    return FactorizationReport(size, kind, float(tolerance), tuple(checks))


def verify_lu(
    params: Parameters | IntegerParameters,
    size: int,
    tolerance: float | None = None,
) -> FactorizationReport:
    """Run :func:`verify_factorization` on coefficients built from the
    given parameter form (exact for integer parameters)."""
    if isinstance(params, IntegerParameters):
        coeffs = lu_coefficients_integer(params, size - 1)
    else:
        coeffs = lu_coefficients(params, size - 1)
    return verify_factorization(coeffs, size, tolerance)
