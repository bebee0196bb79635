"""
Core functionality for the wofzfourier package.

Double-precision evaluation of the Faddeeva function

    w(z) = exp(-z^2) * (1 + 2i/sqrt(pi) * integral_0^z exp(t^2) dt)

by a truncated Fourier expansion of exp(-t^2). Two algebraically equivalent
forms are provided: the exponential form (accurate for Im z >~ 1e-6) and
the cosine form built on w(z) = exp(-z^2) + (w(z) - w(-z))/2 (accurate for
Im z <~ 0.1). w_upper_right combines them and w_any extends the result to
the whole complex plane by symmetry.

All functions are pure; CoefficientTable is immutable and may be shared.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

from .exceptions import (
    DomainError,
    IndexOutOfRangeError,
    InvalidParameterError,
    WofzOverflowError,
)

logger = logging.getLogger(__name__)

TAU_M = 12.0
N_TERMS = 23

# Im z below which the cosine form is used.
Y_SWITCH = 0.05
# |v| below which exprel/cosm1_over switch to their Taylor polynomials.
DELTA_POLE = 1e-4
# |u| = |tau_m z - n pi| below which a summand is taken in shifted form.
POLE_BAND = 1.0

SQRT_PI = math.sqrt(math.pi)
NAN_COMPLEX = complex(math.nan, math.nan)


class Variant(Enum):
    """Which formula evaluates the upper-right quadrant."""

    EQ2 = "eq2"
    EQ4 = "eq4"
    AUTO = "auto"


class SeriesMode(Enum):
    """Summand flavour: exponential (EQ2) or cosine (EQ4)."""

    EXP = "exp"
    COS = "cos"


@dataclass(frozen=True)
class CoefficientTable:
    """Fourier expansion coefficients a_0..a_N for period parameter tau_m."""

    tau_m: float
    n_terms: int
    a: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.a) != self.n_terms + 1:
            raise InvalidParameterError(
                f"expected {self.n_terms + 1} coefficients, got {len(self.a)}"
            )


def build_coefficients(tau_m: float = TAU_M, n_terms: int = N_TERMS) -> CoefficientTable:
    """
    Build the coefficient table a_n = (2 sqrt(pi)/tau_m) exp(-n^2 pi^2/tau_m^2).

    Args:
        tau_m: Period parameter, must be positive and finite
        n_terms: Truncation order N, must be at least 1

    Returns:
        An immutable CoefficientTable holding a_0..a_N

    Raises:
        InvalidParameterError: If tau_m <= 0, n_terms < 1, or the last
            coefficient underflows to zero
    """
    if isinstance(n_terms, bool) or not isinstance(n_terms, int) or n_terms < 1:
        raise InvalidParameterError(f"n_terms must be an integer >= 1, got {n_terms!r}")
    tau_m = float(tau_m)
    if not math.isfinite(tau_m) or tau_m <= 0.0:
        raise InvalidParameterError(f"tau_m must be positive and finite, got {tau_m!r}")

    a0 = 2.0 * SQRT_PI / tau_m
    a = tuple(a0 * math.exp(-((n * math.pi / tau_m) ** 2)) for n in range(n_terms + 1))
    if a[-1] <= 0.0:
        raise InvalidParameterError(
            f"coefficient a_{n_terms} underflows for tau_m={tau_m}; reduce n_terms"
        )

    logger.debug("built coefficient table tau_m=%s n_terms=%d", tau_m, n_terms)
    return CoefficientTable(tau_m=tau_m, n_terms=n_terms, a=a)


DEFAULT_TABLE = build_coefficients()


def _table(table: Optional[CoefficientTable]) -> CoefficientTable:
    return DEFAULT_TABLE if table is None else table


def _times_i(v: complex) -> complex:
    # exact, and free of 0 * inf
    return complex(-v.imag, v.real)


def _is_nan(z: complex) -> bool:
    return math.isnan(z.real) or math.isnan(z.imag)


def _expm1(v: complex) -> complex:
    a, b = v.real, v.imag
    em1 = math.expm1(a)
    half = math.sin(0.5 * b)
    return complex(em1 * math.cos(b) - 2.0 * half * half, (em1 + 1.0) * math.sin(b))


def exprel(v: complex) -> complex:
    """
    Return (e^v - 1)/v without cancellation; exprel(0) = 1.

    Args:
        v: Complex argument with Re v not large and positive

    Returns:
        The relative exponential
    """
    v = complex(v)
    if abs(v) < DELTA_POLE:
        return 1.0 + v * (1.0 / 2.0 + v * (1.0 / 6.0 + v * (1.0 / 24.0 + v / 120.0)))
    return _expm1(v) / v


def cosm1_over(v: complex) -> complex:
    """Return (cos v - 1)/v as -2 sin^2(v/2)/v; zero at v = 0."""
    v = complex(v)
    if abs(v) < DELTA_POLE:
        v2 = v * v
        return v * (-0.5 + v2 * (1.0 / 24.0 - v2 / 720.0))
    half = cmath.sin(0.5 * v)
    return -2.0 * half * half / v


def exp_neg_square(z: complex) -> complex:
    """
    Return e^{-z^2}, exactly conjugate-symmetric in Im z.

    Raises:
        WofzOverflowError: If |e^{-z^2}| = e^{y^2 - x^2} exceeds the double range
    """
    z = complex(z)
    x, y = z.real, z.imag
    exponent = (y - x) * (y + x)
    try:
        magnitude = math.exp(exponent)
    except OverflowError:
        raise WofzOverflowError(
            f"exp(-z^2) is not representable at z={z!r} (exponent {exponent:.6g})"
        ) from None
    phase = 2.0 * x * y
    return complex(magnitude * math.cos(phase), -magnitude * math.sin(phase))


def _check_quadrant(z: complex, name: str) -> None:
    if math.isinf(z.real) or math.isinf(z.imag):
        raise DomainError(f"{name}: non-finite argument {z!r}")
    if z.real < 0.0 or z.imag < 0.0:
        raise DomainError(
            f"{name} needs Re z >= 0 and Im z >= 0, got {z!r}; use w_any instead"
        )


def _summand(
    n: int, t: complex, phase: complex, table: CoefficientTable, mode: SeriesMode
) -> complex:
    # phase is e^{it} (EXP) or cos t (COS), shared by every n
    n_pi = n * math.pi
    a_n = table.a[n]
    u = t - n_pi

    if abs(u) < POLE_BAND:
        # (-1)^n e^{it} - 1 = e^{iu} - 1 and n^2 pi^2 - t^2 = -u (2 n pi + u)
        if mode is SeriesMode.EXP:
            return -a_n * 1j * exprel(_times_i(u)) / (2.0 * n_pi + u)
        return -a_n * cosm1_over(u) / (2.0 * n_pi + u)

    sign = -1.0 if n % 2 else 1.0
    return a_n * (sign * phase - 1.0) / ((n_pi - t) * (n_pi + t))


def leading_term_eq2(z: complex, tau_m: float = TAU_M) -> complex:
    """
    Leading term i (1 - e^{i tau_m z})/(tau_m z) of the exponential form.

    It equals (e^v - 1)/v with v = i tau_m z, so the z -> 0 limit is 1.
    """
    return exprel(_times_i(tau_m * complex(z)))


def series_term(
    n: int,
    z: complex,
    table: Optional[CoefficientTable] = None,
    mode: SeriesMode = SeriesMode.EXP,
) -> complex:
    """
    Return the n-th summand of the exponential or cosine series.

    EXP: a_n ((-1)^n e^{i tau_m z} - 1)/(n^2 pi^2 - tau_m^2 z^2)
    COS: a_n ((-1)^n cos(tau_m z) - 1)/(n^2 pi^2 - tau_m^2 z^2)

    The removable singularity at tau_m z = n pi is evaluated in shifted form.

    Args:
        n: Summand index, 1 <= n <= table.n_terms
        z: Complex argument
        table: Coefficient table, default (12, 23)
        mode: SeriesMode.EXP or SeriesMode.COS

    Returns:
        The summand, coefficient included

    Raises:
        IndexOutOfRangeError: If n is outside [1, table.n_terms]
    """
    table = _table(table)
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= table.n_terms:
        raise IndexOutOfRangeError(f"n must lie in [1, {table.n_terms}], got {n!r}")
    z = complex(z)
    t = table.tau_m * z
    if mode is SeriesMode.EXP:
        phase = cmath.exp(_times_i(t))
    else:
        phase = cmath.cos(t)
    return _summand(n, t, phase, table, mode)


def _series_sum(
    t: complex, phase: complex, table: CoefficientTable, mode: SeriesMode
) -> complex:
    total = 0j
    for n in range(1, table.n_terms + 1):
        total += _summand(n, t, phase, table, mode)
    return total


def w_eq2(z: complex, table: Optional[CoefficientTable] = None) -> complex:
    """
    Evaluate w(z) by the exponential form of the Fourier expansion.

    Args:
        z: Argument with Re z >= 0 and Im z >= 0
        table: Coefficient table, default (12, 23)

    Returns:
        The approximation of w(z); NaN + NaN i if z has a NaN component

    Raises:
        DomainError: If z lies outside the closed upper-right quadrant
    """
    table = _table(table)
    z = complex(z)
    if _is_nan(z):
        return NAN_COMPLEX
    _check_quadrant(z, "w_eq2")

    t = table.tau_m * z
    phase = cmath.exp(_times_i(t))
    total = _series_sum(t, phase, table, SeriesMode.EXP)
    prefactor = 1j * (table.tau_m * table.tau_m * z / SQRT_PI)
    return exprel(_times_i(t)) + prefactor * total


def w_eq4(z: complex, table: Optional[CoefficientTable] = None) -> complex:
    """
    Evaluate w(z) by the cosine form, accurate close to the real axis.

    Args:
        z: Argument with Re z >= 0 and Im z >= 0
        table: Coefficient table, default (12, 23)

    Returns:
        The approximation of w(z); NaN + NaN i if z has a NaN component

    Raises:
        DomainError: If z lies outside the closed upper-right quadrant
        WofzOverflowError: If cos(tau_m z) is not representable (large Im z)
    """
    table = _table(table)
    z = complex(z)
    if _is_nan(z):
        return NAN_COMPLEX
    _check_quadrant(z, "w_eq4")

    t = table.tau_m * z
    gauss = exp_neg_square(z)
    try:
        cos_t = cmath.cos(t)
        middle = cosm1_over(t)
    except OverflowError:
        raise WofzOverflowError(
            f"w_eq4: cos(tau_m z) is not representable at z={z!r}"
        ) from None

    total = _series_sum(t, cos_t, table, SeriesMode.COS)
    prefactor = 1j * (table.tau_m * table.tau_m * z / SQRT_PI)
    return gauss - 1j * middle + prefactor * total


def select_variant(y: float) -> Variant:
    """Return the formula w_upper_right uses at imaginary part y."""
    return Variant.EQ4 if y < Y_SWITCH else Variant.EQ2


def w_upper_right(z: complex, table: Optional[CoefficientTable] = None) -> complex:
    """Evaluate w(z) in the upper-right quadrant, choosing the formula by Im z."""
    z = complex(z)
    if select_variant(z.imag) is Variant.EQ4:
        return w_eq4(z, table)
    return w_eq2(z, table)


def _kernel(variant: Variant) -> Callable[[complex, Optional[CoefficientTable]], complex]:
    # looked up at call time so the module-level functions stay patchable
    kernels: Dict[Variant, Callable[[complex, Optional[CoefficientTable]], complex]] = {
        Variant.EQ2: w_eq2,
        Variant.EQ4: w_eq4,
        Variant.AUTO: w_upper_right,
    }
    return kernels[variant]


def w_any(
    z: complex,
    table: Optional[CoefficientTable] = None,
    variant: Variant = Variant.AUTO,
) -> complex:
    """
    Evaluate w(z) anywhere in the complex plane.

    Re z < 0 uses w(-conj z) = conj(w(z)); Im z < 0 uses
    w(z) = 2 e^{-z^2} - w(-z). Accuracy in the lower half-plane degrades as
    the subtraction cancels.

    Args:
        z: Complex argument
        table: Coefficient table, default (12, 23)
        variant: Formula used for the upper-right quadrant

    Returns:
        The approximation of w(z); NaN + NaN i if z has a NaN component

    Raises:
        DomainError: If z has an infinite component
        WofzOverflowError: If Im z < 0 and e^{-z^2} is not representable
    """
    z = complex(z)
    if _is_nan(z):
        return NAN_COMPLEX
    if math.isinf(z.real) or math.isinf(z.imag):
        raise DomainError(f"w_any: non-finite argument {z!r}")

    if z.imag < 0.0:
        gauss = exp_neg_square(z)
        result = 2 * gauss - w_any(-z, table, variant)
        if math.isinf(result.real) or math.isinf(result.imag):
            raise WofzOverflowError(f"w_any: result is not representable at z={z!r}")
        return result

    kernel = _kernel(variant)
    if z.real < 0.0:
        return kernel(complex(-z.real, z.imag), table).conjugate()
    return kernel(z, table)


def evaluate(
    z: complex,
    variant: Variant = Variant.AUTO,
    table: Optional[CoefficientTable] = None,
) -> complex:
    """Evaluate w(z) with the given variant over the whole plane."""
    return w_any(z, table, variant)


def voigt(x: float, y: float, table: Optional[CoefficientTable] = None) -> float:
    """
    Voigt function K(x, y) = Re w(x + iy).

    Args:
        x: Reduced distance from line centre (sign ignored; K is even in x)
        y: Reduced damping, y >= 0
        table: Coefficient table, default (12, 23)

    Returns:
        Re w(|x| + iy)

    Raises:
        DomainError: If y < 0
    """
    x = float(x)
    y = float(y)
    if math.isnan(x) or math.isnan(y):
        return math.nan
    if y < 0.0:
        raise DomainError(f"voigt needs y >= 0, got {y!r}")
    return w_upper_right(complex(abs(x), y), table).real
