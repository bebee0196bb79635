"""
Extended-precision reference values of w(z).

Two mathematically independent methods are used:

    - the Maclaurin series w(z) = sum_k (iz)^k / Gamma(k/2 + 1), summed with
      enough guard digits to absorb the e^{|z|^2} cancellation;
    - the Laplace continued fraction
      w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...)))),
      evaluated forward with the modified Lentz recurrence.

w_ref routes between them by |z| and cross-checks both on an annulus, so a
defect in either method shows up as InconsistentOracleError.

Each thread works in its own mpmath context; results are handed back as
values of the global mpmath context.
"""

import logging
import math
import random
import threading
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import mpmath

from .config import DEFAULT_ORACLE_DIGITS, MIN_ORACLE_DIGITS
from .exceptions import (
    InconsistentOracleError,
    InvalidParameterError,
    OracleConvergenceError,
    OracleRangeError,
)

logger = logging.getLogger(__name__)

SERIES_MAX_RADIUS = 16.0
CF_MIN_RADIUS = 6.0
# w_ref: series up to CROSS_CHECK_INNER, continued fraction from
# CROSS_CHECK_OUTER, both in between.
CROSS_CHECK_INNER = 12.0
CROSS_CHECK_OUTER = 14.0

NEAR_AXIS_Y = 1.0
CF_MAX_DEPTH = 10000
SERIES_GUARD_DIGITS = 10
CF_GUARD_DIGITS = 10

_LOG10_E = math.log10(math.e)
_local = threading.local()


class ReferenceMethod(Enum):
    """Method that produced a reference value."""

    MACLAURIN_SERIES = "series"
    CONTINUED_FRACTION = "continued-fraction"
    CROSS_CHECKED = "cross-checked"


@dataclass(frozen=True)
class ReferenceValue:
    """An extended-precision value of w(z) with its provenance."""

    value: mpmath.mpc
    digits: int
    method: ReferenceMethod
    depth: Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.digits < MIN_ORACLE_DIGITS:
            raise InvalidParameterError(
                f"reference digits must be >= {MIN_ORACLE_DIGITS}, got {self.digits}"
            )

    @property
    def real(self) -> mpmath.mpf:
        return self.value.real

    @property
    def imag(self) -> mpmath.mpf:
        return self.value.imag

    def to_complex(self) -> complex:
        """Round each component to the nearest double."""
        return complex(float(self.value.real), float(self.value.imag))


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of the oracle self-certification checks."""

    digits: int
    annulus_points: int
    annulus_worst_digits: float
    known_point_digits: float
    real_axis_worst_digits: float
    monotonic_points: int
    monotonic_worst_ratio: float


def _context(dps: int) -> mpmath.MPContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = mpmath.MPContext()
        _local.ctx = ctx
    ctx.dps = dps
    return ctx


def _export(value: mpmath.mpc) -> mpmath.mpc:
    return mpmath.mp.make_mpc(value._mpc_)


def _conjugate(value: mpmath.mpc) -> mpmath.mpc:
    # exact; mpc.conjugate() would round to the global 53-bit precision
    real, imag = value._mpc_
    return mpmath.mp.make_mpc((real, mpmath.libmp.mpf_neg(imag)))


def _check_digits(digits: int) -> None:
    if digits < MIN_ORACLE_DIGITS:
        raise InvalidParameterError(
            f"oracle digits must be >= {MIN_ORACLE_DIGITS}, got {digits}"
        )


def _agreement_digits(a: mpmath.mpc, b: mpmath.mpc, dps: int) -> float:
    """Decimal digits to which a and b agree, relative to |b|, worked at dps."""
    ctx = _context(dps)
    diff = abs(ctx.convert(a) - ctx.convert(b))
    scale = abs(ctx.convert(b))
    if diff == 0:
        return math.inf
    if scale == 0:
        return -math.inf
    return float(-ctx.log10(diff / scale))


def w_ref_series(z: complex, digits: int = DEFAULT_ORACLE_DIGITS) -> ReferenceValue:
    """
    Sum the Maclaurin series of w(z) in extended precision.

    The working precision is digits + ceil(|z|^2 log10 e) + 10, which
    covers the growth of the partial sums, plus ceil((x^2 - y^2) log10 e)
    when x > y: there Re w ~ e^{-(x^2 - y^2)} can sit far below |w|.

    Args:
        z: Complex argument, |z| <= SERIES_MAX_RADIUS
        digits: Requested decimal precision (>= 20)

    Returns:
        ReferenceValue rounded to `digits`, method MACLAURIN_SERIES

    Raises:
        OracleRangeError: If |z| > SERIES_MAX_RADIUS
    """
    _check_digits(digits)
    z = complex(z)
    radius = abs(z)
    if not radius <= SERIES_MAX_RADIUS:
        raise OracleRangeError(
            f"series oracle needs |z| <= {SERIES_MAX_RADIUS}, got |z|={radius:.6g}"
        )

    # Re w keeps full relative precision only if the digits lost to its size
    # against |w| are paid for as well
    small_real = max(z.real * z.real - z.imag * z.imag, 0.0)
    working = (
        digits
        + math.ceil((radius * radius + small_real) * _LOG10_E)
        + SERIES_GUARD_DIGITS
    )
    ctx = _context(working)
    iz = ctx.mpc(-z.imag, z.real)
    step = iz * iz
    eps = ctx.mpf(10) ** (-working)
    r2 = radius * radius

    # even and odd chains: t_{k+2} = t_k (iz)^2 / (k/2 + 1)
    even = ctx.mpc(1)
    odd = iz / ctx.gamma(ctx.mpf(3) / 2)
    total = even + odd
    k = 0
    while True:
        even = even * step / (ctx.mpf(k) / 2 + 1)
        odd = odd * step / (ctx.mpf(k + 1) / 2 + 1)
        total += even + odd
        k += 2
        if k / 2.0 + 1 > r2 and abs(even) + abs(odd) <= eps * abs(total):
            break

    ctx.dps = digits
    value = +total
    logger.debug("series oracle z=%r working=%d terms=%d", z, working, k + 2)
    return ReferenceValue(
        value=_export(value), digits=digits, method=ReferenceMethod.MACLAURIN_SERIES
    )


def _lentz(
    ctx: mpmath.MPContext, z: mpmath.mpc, tolerance: mpmath.mpf
) -> Tuple[mpmath.mpc, int]:
    """
    Forward evaluation of z - (1/2)/(z - 1/(z - (3/2)/(z - ...))).

    Modified Lentz recurrence; stops once two consecutive correction
    factors lie within `tolerance` of one.
    """
    tiny = ctx.mpf(10) ** (-2 * ctx.dps)
    f = z
    c = z
    d = ctx.mpc(0)
    settled = 0
    for j in range(1, CF_MAX_DEPTH + 1):
        a = -ctx.mpf(j) / 2
        d = z + a * d
        if d == 0:
            d = ctx.mpc(tiny)
        c = z + a / c
        if c == 0:
            c = ctx.mpc(tiny)
        d = 1 / d
        delta = c * d
        f *= delta
        if abs(delta - 1) <= tolerance:
            settled += 1
            if settled == 2:
                return f, j
        else:
            settled = 0
    raise OracleConvergenceError(
        f"continued fraction did not converge at z={complex(z)!r} "
        f"within depth {CF_MAX_DEPTH}"
    )


def _taylor_from_axis(
    ctx: mpmath.MPContext,
    x: mpmath.mpf,
    y: mpmath.mpf,
    base: mpmath.mpc,
    tolerance: mpmath.mpf,
) -> mpmath.mpc:
    """
    Step from w(x) to w(x + iy) with the Taylor series in iy.

    Derivatives follow w' = -2zw + 2i/sqrt(pi) and
    w^(k+1) = -2z w^(k) - 2k w^(k-1).
    """
    h = ctx.mpc(0, y)
    prev = base
    cur = -2 * x * base + 2 * ctx.mpc(0, 1) / ctx.sqrt(ctx.pi)
    total = base
    power = ctx.mpc(1)
    small = 0
    for k in range(1, CF_MAX_DEPTH + 1):
        power = power * h / k
        term = power * cur
        total += term
        scale = min(abs(total.real), abs(total.imag)) or abs(total)
        if abs(term) <= tolerance * scale:
            small += 1
            if small == 2:
                return total
        else:
            small = 0
        prev, cur = cur, -2 * x * cur - 2 * k * prev
    raise OracleConvergenceError(
        f"near-axis Taylor step did not converge at x={float(x)!r}, y={float(y)!r}"
    )


def w_ref_cf(z: complex, digits: int = DEFAULT_ORACLE_DIGITS) -> ReferenceValue:
    """
    Evaluate the Laplace continued fraction of w(z).

    On the real axis the continued fraction settles on Im w only; the exact
    real part e^{-x^2} is added there. Just above the axis, where the
    settled value cannot resolve Re w, the value is carried up from the axis
    with a Taylor step in iy.

    Args:
        z: Complex argument with Im z >= 0 and |z| >= CF_MIN_RADIUS
        digits: Requested decimal precision (>= 20)

    Returns:
        ReferenceValue rounded to `digits`, method CONTINUED_FRACTION

    Raises:
        OracleRangeError: If |z| < CF_MIN_RADIUS or Im z < 0
        OracleConvergenceError: If the recurrence has not settled to
            digits + 2 within CF_MAX_DEPTH levels
    """
    _check_digits(digits)
    z = complex(z)
    if not abs(z) >= CF_MIN_RADIUS:
        raise OracleRangeError(
            f"continued fraction needs |z| >= {CF_MIN_RADIUS}, got |z|={abs(z):.6g}"
        )
    if z.imag < 0.0:
        raise OracleRangeError(f"continued fraction needs Im z >= 0, got {z!r}")

    ctx = _context(digits + CF_GUARD_DIGITS)
    tolerance = ctx.mpf(10) ** (-(digits + 2))
    zz = ctx.mpc(z.real, z.imag)
    scale = ctx.mpc(0, 1) / ctx.sqrt(ctx.pi)

    tail, depth = _lentz(ctx, zz, tolerance)
    value = scale / tail
    if z.imag == 0.0:
        value += ctx.exp(-(zz.real ** 2))
    elif z.imag < NEAR_AXIS_Y and (
        abs(ctx.exp(-(zz * zz)))
        > tolerance * ctx.mpf(10) ** (-CF_GUARD_DIGITS) * abs(value.real)
    ):
        # the Taylor terms grow like (2xy)^k / k! before they decay
        ctx.dps += math.ceil(2.0 * abs(z.real) * z.imag * _LOG10_E)
        x = ctx.mpf(z.real)
        axis_tail, depth = _lentz(ctx, ctx.mpc(x), tolerance)
        axis = scale / axis_tail + ctx.exp(-(x ** 2))
        value = _taylor_from_axis(ctx, x, ctx.mpf(z.imag), axis, tolerance)
        logger.debug("continued fraction oracle z=%r stepped from the real axis", z)
    elif value.real != 0 and abs(value.real) < abs(value) / 100:
        # Re w is small against |w| close to the axis; settle it to full
        # relative precision as well
        lost = math.ceil(float(-ctx.log10(abs(value.real) / abs(value)))) + 2
        ctx.dps += lost
        tail, depth = _lentz(ctx, zz, tolerance * ctx.mpf(10) ** (-lost))
        value = scale / tail

    ctx.dps = digits
    value = +value
    logger.debug("continued fraction oracle z=%r depth=%d", z, depth)
    return ReferenceValue(
        value=_export(value),
        digits=digits,
        method=ReferenceMethod.CONTINUED_FRACTION,
        depth=depth,
    )


def w_ref(z: complex, digits: int = DEFAULT_ORACLE_DIGITS) -> ReferenceValue:
    """
    Reference value of w(z) in the closed upper-right quadrant.

    |z| <= 12 uses the series, |z| >= 14 the continued fraction, and the
    annulus in between evaluates both and requires agreement to digits - 2.

    Args:
        z: Argument with Re z >= 0 and Im z >= 0
        digits: Requested decimal precision (>= 20)

    Returns:
        ReferenceValue

    Raises:
        OracleRangeError: If z lies outside the upper-right quadrant
        InconsistentOracleError: If the annulus cross-check fails
    """
    z = complex(z)
    if not (z.real >= 0.0 and z.imag >= 0.0) or math.isinf(abs(z)):
        raise OracleRangeError(f"w_ref needs a finite z in the upper-right quadrant, got {z!r}")

    radius = abs(z)
    if radius <= CROSS_CHECK_INNER:
        return w_ref_series(z, digits)
    if radius >= CROSS_CHECK_OUTER:
        return w_ref_cf(z, digits)

    series = w_ref_series(z, digits)
    fraction = w_ref_cf(z, digits)
    agreement = min(
        _agreement_digits(fraction.value, series.value, digits + CF_GUARD_DIGITS),
        # Re w can sit far below |w| near the axis
        _agreement_digits(fraction.real, series.real, digits + CF_GUARD_DIGITS),
    )
    if agreement < digits - 2:
        raise InconsistentOracleError(
            f"series and continued fraction disagree at z={z!r}: "
            f"{agreement:.1f} digits, need {digits - 2}"
        )
    return ReferenceValue(
        value=series.value,
        digits=digits,
        method=ReferenceMethod.CROSS_CHECKED,
        depth=fraction.depth,
    )


def w_ref_any(z: complex, digits: int = DEFAULT_ORACLE_DIGITS) -> ReferenceValue:
    """
    Reference value of w(z) anywhere in the plane.

    Uses w(-conj z) = conj w(z) for Re z < 0 and w(z) = 2 e^{-z^2} - w(-z)
    for Im z < 0, both carried out in extended precision.
    """
    z = complex(z)
    if z.imag < 0.0:
        mirror = w_ref_any(-z, digits)
        working = digits + CF_GUARD_DIGITS + math.ceil(
            max(z.imag * z.imag - z.real * z.real, 0.0) * _LOG10_E
        )
        ctx = _context(working)
        zz = ctx.mpc(z.real, z.imag)
        value = 2 * ctx.exp(-(zz * zz)) - ctx.mpc(mirror.value)
        ctx.dps = digits
        value = +value
        return ReferenceValue(
            value=_export(value), digits=digits, method=mirror.method, depth=mirror.depth
        )
    if z.real < 0.0:
        mirror = w_ref(complex(-z.real, z.imag), digits)
        return ReferenceValue(
            value=_conjugate(mirror.value),
            digits=digits,
            method=mirror.method,
            depth=mirror.depth,
        )
    return w_ref(z, digits)


def erfc_ref(x: float, digits: int = DEFAULT_ORACLE_DIGITS) -> mpmath.mpf:
    """Real complementary error function from the mpmath library."""
    _check_digits(digits)
    ctx = _context(digits + CF_GUARD_DIGITS)
    value = ctx.erfc(ctx.mpf(x))
    ctx.dps = digits
    return mpmath.mp.make_mpf((+value)._mpf_)


def _random_annulus_point(rng: random.Random) -> complex:
    radius = rng.uniform(CROSS_CHECK_INNER, CROSS_CHECK_OUTER)
    angle = rng.uniform(0.0, math.pi / 2)
    return complex(radius * math.cos(angle), radius * math.sin(angle))


def self_certify(
    digits: int = DEFAULT_ORACLE_DIGITS,
    samples: int = 50,
    seed: int = 2016,
    monotonic_samples: Optional[int] = None,
) -> CertificationReport:
    """
    Run the oracle self-certification checks.

    - annulus agreement of series and continued fraction (digits - 2)
    - w_ref(i) against e * erfc(1) from the library erfc (digits - 2)
    - Re w_ref(x) = e^{-x^2} for x in {0.5, 1, 2, 4} (digits - 2)
    - precision monotonicity: |w_ref(z, d + 10) - w_ref(z, d)| <=
      10^{-(d - 2)} |w_ref(z, d)| on `monotonic_samples` random points with
      |z| <= 20

    Args:
        digits: Precision under test
        samples: Number of random annulus points
        seed: Seed for the point generator
        monotonic_samples: Number of monotonicity points, default 2 * samples

    Returns:
        CertificationReport with the worst observed agreement of each check

    Raises:
        InconsistentOracleError: If any check fails
    """
    _check_digits(digits)
    rng = random.Random(seed)
    required = digits - 2
    work = digits + CF_GUARD_DIGITS
    if monotonic_samples is None:
        monotonic_samples = 2 * samples

    annulus_worst = math.inf
    for _ in range(samples):
        z = _random_annulus_point(rng)
        series = w_ref_series(z, digits)
        fraction = w_ref_cf(z, digits)
        annulus_worst = min(
            annulus_worst, _agreement_digits(fraction.value, series.value, work)
        )

    known = w_ref(1j, digits)
    ctx = _context(work)
    expected = ctx.e * ctx.convert(erfc_ref(1.0, digits))
    known_digits = _agreement_digits(known.value, expected, work)

    real_worst = math.inf
    for x in (0.5, 1.0, 2.0, 4.0):
        ref = w_ref(complex(x, 0.0), digits)
        ctx = _context(work)
        exact = ctx.exp(-(ctx.mpf(x) ** 2))
        real_worst = min(real_worst, _agreement_digits(ref.real, exact, work))

    worst_ratio = 0.0
    for _ in range(monotonic_samples):
        radius = rng.uniform(0.0, 20.0)
        angle = rng.uniform(0.0, math.pi / 2)
        z = complex(radius * math.cos(angle), radius * math.sin(angle))
        coarse = w_ref(z, digits)
        fine = w_ref(z, digits + 10)
        ctx = _context(digits + 20)
        gap = abs(ctx.convert(fine.value) - ctx.convert(coarse.value))
        ratio = gap / (ctx.mpf(10) ** (-required) * abs(ctx.convert(coarse.value)))
        worst_ratio = max(worst_ratio, float(ratio))

    report = CertificationReport(
        digits=digits,
        annulus_points=samples,
        annulus_worst_digits=annulus_worst,
        known_point_digits=known_digits,
        real_axis_worst_digits=real_worst,
        monotonic_points=monotonic_samples,
        monotonic_worst_ratio=worst_ratio,
    )
    logger.info("oracle self-certification: %s", report)

    failures: List[str] = []
    if annulus_worst < required:
        failures.append(f"annulus agreement {annulus_worst:.1f} digits")
    if known_digits < required:
        failures.append(f"w(i) vs e*erfc(1) {known_digits:.1f} digits")
    if real_worst < required:
        failures.append(f"real-axis identity {real_worst:.1f} digits")
    if worst_ratio > 1.0:
        failures.append(f"precision monotonicity ratio {worst_ratio:.3g}")
    if failures:
        raise InconsistentOracleError(
            "oracle self-certification failed: " + "; ".join(failures)
        )
    return report
