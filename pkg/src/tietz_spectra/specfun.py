"""Real-argument special functions: log-gamma, Gauss 2F1 and Kummer 1F1.

Series are summed with a running term ratio, so no factorial or Pochhammer
symbol is ever materialised.  Gamma prefactors are combined in log space, and
the hypergeometric kernels carry an explicit exponent so that values far
outside the float range (which do occur for molecular parameters) can still be
multiplied against small prefactors.  ``gauss_2f1_log`` exposes that form.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass

from scipy.special import digamma

from .errors import ConvergenceError, DomainError

_EPS = 2.220446049250313e-16
_BIG = 1e250
_LOG_BIG = math.log(_BIG)
# c - a - b closer than this to an integer makes the z -> 1-z connection
# formula ill-conditioned; power-series forms are used instead.
_CONNECTION_GAP = 1e-5
# cancelling terminating polynomials up to this degree are summed exactly
_EXACT_DEGREE = 150
# estimated relative rounding error above which the ODE continuation is used
_ODE_SWITCH = 1e-12
# a candidate this accurate is accepted without trying the others
_GOOD_ENOUGH = 1e-14


@dataclass(frozen=True)
class SeriesControl:
    """Stopping rules for the hypergeometric power series.

    ``snap_tolerance`` is the distance from a non-positive integer below which
    an upper parameter is treated as that integer (terminating polynomial).
    Root scans over quantization conditions pass ``snap_tolerance=0`` so the
    function stays continuous across its zeros.
    """

    rel_tolerance: float = 1e-15
    max_terms: int = 100_000
    snap_tolerance: float = 1e-9

    def __post_init__(self):
        if not self.rel_tolerance > 0:
            raise DomainError("rel_tolerance must be > 0")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.snap_tolerance < 0:
            raise DomainError("snap_tolerance must be >= 0")


DEFAULT_CONTROL = SeriesControl()


_LN2_HI = 6.93147180369123816490e-01  # 33 significant bits, so k * _LN2_HI is exact
_LN2_LO = 1.9082149292705877e-10
_HALF_LN_2PI = (0.9189385332046728, -3.8782941580672414e-17)
# B_2k / (2k (2k - 1)), k = 1..10
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156,
             -3617 / 122400, 43867 / 244188, -174611 / 125400)
_STIRLING_FROM = 8.0


def _two_product(a, b):
    """a*b as an unevaluated sum hi + lo (Dekker)."""
    p = a * b
    ca = 134217729.0 * a
    ah = ca - (ca - a)
    al = a - ah
    cb = 134217729.0 * b
    bh = cb - (cb - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _stirling_log_gamma(x):
    # (x - 1/2) ln x - x + ln(2 pi)/2 + sum_k B_2k / (2k (2k-1) x^(2k-1)), with
    # ln x split as k ln 2 + ln m and every product kept exact, so the result
    # is rounded once at the end.  math.lgamma is off by up to ~10 ulp here.
    m, k = math.frexp(x)
    if m < 0.7071067811865476:
        m, k = 2.0 * m, k - 1
    hi = k * _LN2_HI
    lo = k * _LN2_LO + math.log(m)
    xm = x - 0.5
    p1, e1 = _two_product(xm, hi)
    p2, e2 = _two_product(xm, lo)
    z = 1.0 / (x * x)
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * z + c
    return math.fsum((p1, e1, p2, e2, -x, _HALF_LN_2PI[0], _HALF_LN_2PI[1], series / x))


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if x >= _STIRLING_FROM and math.isfinite(x):
        return _stirling_log_gamma(x)
    return math.lgamma(x)


def log_gamma_signed(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign Gamma(x))`` for any real x off the poles."""
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma has a pole at {x!r}")
    if x > 0:
        return log_gamma(x), 1
    value = math.lgamma(x)
    return value, -1 if math.floor(x) % 2 else 1


def is_nonpositive_integer(x: float, tol: float = 0.0) -> bool:
    n = round(x)
    return n <= 0 and abs(x - n) <= tol


# A scaled value is a tuple (m, e, err): value = m * exp(e), and err is an
# estimate of the absolute rounding error on m.


def _sum_series(ratio, z, ctrl, n_stop=None, n_guard=0):
    """Sum  1 + sum_n t_n  with t_{n+1} = t_n * ratio(n) * z, scaled.

    ``n_stop`` terminates after that many terms (polynomial case).  Otherwise
    summation ends once two consecutive terms are negligible, either relative
    to the running sum or to the largest term seen (cancellation floor).  The
    test is not applied before term ``n_guard`` or while terms still grow:
    negative parameters make the terms dip and recover.
    """
    total = 1.0
    abs_total = 1.0
    term = 1.0
    peak = 1.0
    shift = 0.0
    quiet = 0
    limit = ctrl.max_terms if n_stop is None else n_stop
    for n in range(limit):
        step = ratio(n) * z
        term *= step
        total += term
        mag = abs(term)
        abs_total += mag
        if abs_total > _BIG:
            term /= _BIG
            total /= _BIG
            abs_total /= _BIG
            peak /= _BIG
            mag /= _BIG
            shift += _LOG_BIG
        if not math.isfinite(abs_total):
            raise ConvergenceError("hypergeometric series overflowed")
        if n_stop is not None:
            continue
        if mag > peak:
            peak = mag
        if n < n_guard or abs(step) >= 1.0:
            quiet = 0
            continue
        if mag <= ctrl.rel_tolerance * abs(total) or mag <= _EPS * _EPS * peak:
            quiet += 1
            if quiet == 2:
                break
        else:
            quiet = 0
    else:
        if n_stop is None:
            raise ConvergenceError(
                f"hypergeometric series did not converge in {ctrl.max_terms} terms"
            )
    return total, shift, _EPS * abs_total


def _terminating_order(a, b, ctrl):
    """Return (degree, snapped_a, b) if either upper parameter terminates."""
    for p, q in ((a, b), (b, a)):
        if is_nonpositive_integer(p, ctrl.snap_tolerance):
            return -round(p), float(round(p)), q
    return None


def _series_2f1(a, b, c, z, ctrl):
    """Power series at |z| < 1 (z may be negative); terminating when possible."""
    term = _terminating_order(a, b, ctrl)
    if term is not None:
        degree, a, b = term
        return _sum_series(lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)), z, ctrl, degree)
    guard = math.ceil(max(0.0, -a, -b, -c))
    return _sum_series(lambda n: (a + n) * (b + n) / ((c + n) * (n + 1)), z, ctrl, n_guard=guard)


def _power_forms(a, b, c, z, ctrl):
    """Yield scaled values from power series at z or at z/(z-1).

    Direct series, Euler's transformation and both Pfaff transformations all
    represent the same function; which one suffers least cancellation depends
    on the signs and sizes of the parameters.  A form whose series fails to
    converge is skipped.
    """
    log_w = math.log1p(-z)
    forms = [((a, b, c, z), 0.0), ((c - a, c - b, c, z), (c - a - b) * log_w)]
    if z < 0.4:
        x = z / (z - 1.0)
        forms += [((a, c - b, c, x), -a * log_w), ((c - a, b, c, x), -b * log_w)]
    for args, log_pre in forms:
        try:
            m, e, err = _series_2f1(*args, ctrl)
        except ConvergenceError:
            continue
        yield m, e + log_pre, err


def _best(candidates, good_enough=0.0):
    """Pick the candidate with the smallest estimated relative error.

    Stops consuming ``candidates`` once one is within ``good_enough``.
    """
    best, best_rel = None, math.inf
    for m, e, err in candidates:
        if not (math.isfinite(m) and math.isfinite(e)):
            continue
        rel = err / abs(m) if m != 0.0 else math.inf
        if best is None or rel < best_rel:
            best, best_rel = (m, e, err), rel
        if best_rel <= good_enough:
            break
    if best is None:
        raise ConvergenceError("no finite hypergeometric representation")
    return best, best_rel


def _add_scaled(x, y):
    """Sum of two scaled values."""
    if x is None:
        return y
    (m1, e1, r1), (m2, e2, r2) = x, y
    if e1 < e2:
        (m1, e1, r1), (m2, e2, r2) = (m2, e2, r2), (m1, e1, r1)
    f = math.exp(e2 - e1)
    return m1 + m2 * f, e1, r1 + r2 * f


def _connection(a, b, c, z, ctrl):
    """2F1 for z in (0.5, 1) via the linear z -> 1-z transformation."""
    w = 1.0 - z
    s = c - a - b
    lg_c, sg_c = log_gamma_signed(c)
    out = None
    # Gamma(c)Gamma(s) / (Gamma(c-a)Gamma(c-b)) * F(a, b; 1-s; w)
    if not (is_nonpositive_integer(c - a) or is_nonpositive_integer(c - b)):
        lg_s, sg_s = log_gamma_signed(s)
        lg_ca, sg_ca = log_gamma_signed(c - a)
        lg_cb, sg_cb = log_gamma_signed(c - b)
        log_coef = lg_c + lg_s - lg_ca - lg_cb
        m, e, err = _gauss_scaled(a, b, 1.0 - s, w, ctrl)
        sign = sg_c * sg_s * sg_ca * sg_cb
        err += abs(m) * _EPS * (4.0 + abs(log_coef))
        out = _add_scaled(out, (sign * m, e + log_coef, err))
    # w^s Gamma(c)Gamma(-s) / (Gamma(a)Gamma(b)) * F(c-a, c-b; 1+s; w)
    if not (is_nonpositive_integer(a) or is_nonpositive_integer(b)):
        lg_ms, sg_ms = log_gamma_signed(-s)
        lg_a, sg_a = log_gamma_signed(a)
        lg_b, sg_b = log_gamma_signed(b)
        log_coef = lg_c + lg_ms - lg_a - lg_b + s * math.log(w)
        m, e, err = _gauss_scaled(c - a, c - b, 1.0 + s, w, ctrl)
        sign = sg_c * sg_ms * sg_a * sg_b
        err += abs(m) * _EPS * (4.0 + abs(log_coef))
        out = _add_scaled(out, (sign * m, e + log_coef, err))
    if out is None:
        return 0.0, 0.0, 0.0
    return out


def _connection_integer(a, b, m, z, ctrl):
    """z -> 1-z connection when c = a + b + m exactly, m a non-negative integer.

    The two gamma-function terms of the generic formula have poles that
    cancel; this is their limit, with the logarithmic series in 1-z.
    """
    w = 1.0 - z
    log_w = math.log(w)
    c = a + b + m
    lg_c, sg_c = log_gamma_signed(c)
    out = None
    if m > 0:
        lg_am, sg_am = log_gamma_signed(a + m)
        lg_bm, sg_bm = log_gamma_signed(b + m)
        log_coef = lg_c + math.lgamma(m) - lg_am - lg_bm
        t, total, mag = 1.0, 1.0, 1.0
        for n in range(1, m):
            t *= (a + n - 1) * (b + n - 1) / (n * (n - m)) * w
            total += t
            mag += abs(t)
        out = (sg_c * sg_am * sg_bm * total, log_coef, _EPS * (mag + abs(total) * (4.0 + abs(log_coef))))
    lg_a, sg_a = log_gamma_signed(a)
    lg_b, sg_b = log_gamma_signed(b)
    log_coef = lg_c - lg_a - lg_b - math.lgamma(m + 1.0) + m * log_w
    psi_a, psi_b = float(digamma(a + m)), float(digamma(b + m))
    psi_1, psi_m = float(digamma(1.0)), float(digamma(m + 1.0))
    t, total, mag = 1.0, 0.0, 0.0
    for n in range(ctrl.max_terms):
        term = t * (log_w - psi_1 - psi_m + psi_a + psi_b)
        total += term
        mag += abs(term)
        if n > 2 and abs(term) <= _EPS * _EPS * mag + ctrl.rel_tolerance * abs(total) * 1e-2:
            break
        t *= (a + m + n) * (b + m + n) / ((n + 1.0) * (n + m + 1.0)) * w
        psi_1 += 1.0 / (n + 1.0)
        psi_m += 1.0 / (n + m + 1.0)
        psi_a += 1.0 / (a + m + n)
        psi_b += 1.0 / (b + m + n)
    else:
        raise ConvergenceError("logarithmic connection series did not converge")
    sign = -sg_c * sg_a * sg_b * (-1.0) ** m
    part = (sign * total, log_coef, _EPS * (10.0 * mag + abs(total) * (4.0 + abs(log_coef))))
    return _add_scaled(out, part)


def _connection_near_integer(a, b, c, z, ctrl):
    """Connection formula when c - a - b is an integer or very close to one.

    Exact integers use the logarithmic limit.  Otherwise F is interpolated in c
    through the integer point and two neighbours a safe distance away, where
    the generic formula is well conditioned.
    """
    s = c - a - b
    m = round(s)
    if m < 0:
        # Euler: F(a, b; c; z) = (1-z)^s F(c-a, c-b; c; z), and (c-a)+(c-b) = c - s
        mm, e, err = _connection_near_integer(c - a, c - b, c, z, ctrl)
        return mm, e + s * math.log1p(-z), err
    if _terminating_order(a, b, ctrl) is not None:
        return _series_2f1(a, b, c, z, ctrl)
    delta = s - m
    if delta == 0.0:
        return _connection_integer(a, b, m, z, ctrl)
    h = 1e-3
    nodes = [_connection_integer(a, b, m, z, ctrl),
             _connection(a, b, c - delta - h, z, ctrl),
             _connection(a, b, c - delta + h, z, ctrl)]
    e = max(node[1] for node in nodes)
    f0, fm, fp = (node[0] * math.exp(node[1] - e) for node in nodes)
    errs = [node[2] * math.exp(node[1] - e) for node in nodes]
    t = delta / h
    value = f0 + 0.5 * t * (fp - fm) + 0.5 * t * t * (fp - 2.0 * f0 + fm)
    err = errs[0] + abs(t) * (errs[1] + errs[2]) + abs(delta) * abs(fp - 2.0 * f0 + fm)
    return value, e, err


def _taylor_step(a, b, c, x, f0, f1, h, ctrl):
    """Advance (F, F') from x to x+h with the Taylor series generated by

        z(1-z) F'' + [c - (a+b+1) z] F' - ab F = 0

    re-expanded about x.  Returns (F, F', cancellation ratio).
    """
    p0 = x * (1.0 - x)
    p1 = 1.0 - 2.0 * x
    q0 = c - (a + b + 1.0) * x
    q1 = -(a + b + 1.0)
    ab = a * b
    # Taylor coefficients stored pre-multiplied by h**n
    g_prev, g_cur = f0, f1 * h
    val = g_prev + g_cur
    der = g_cur
    mag = abs(g_prev) + abs(g_cur)
    quiet = 0
    for n in range(ctrl.max_terms):
        nn = float(n)
        g_next = -(
            (p1 * nn * (nn + 1.0) + q0 * (nn + 1.0)) * g_cur * h
            + (-nn * (nn - 1.0) + q1 * nn - ab) * g_prev * h * h
        ) / (p0 * (nn + 2.0) * (nn + 1.0))
        val += g_next
        der += (nn + 2.0) * g_next
        mag += abs(g_next)
        if not math.isfinite(mag):
            # step too long for these parameters; the caller shortens it
            return math.nan, math.nan, math.inf
        if abs(g_next) <= ctrl.rel_tolerance * abs(val) or abs(g_next) <= _EPS * _EPS * mag:
            quiet += 1
            if quiet == 2:
                break
        else:
            quiet = 0
        g_prev, g_cur = g_cur, g_next
    else:
        raise ConvergenceError("ODE continuation series did not converge")
    return val, der / h, mag / max(abs(val), 1e-300)


def _ode_continuation(a, b, c, z, ctrl):
    """2F1 by analytic continuation of the ODE solution from near z = 0.

    Used when every power-series form cancels badly (large parameters of
    opposite sign): the oscillatory solution is carried along in short Taylor
    steps whose length adapts to keep each local series well scaled.
    """
    k = abs(a * b) / max(abs(c), 1.0) + abs(a) + abs(b) + 1.0
    x = min(z, 0.25 / k)
    # the second solution ~ z**(1-c) outgrows F when c < 1
    amplification = math.exp(min(700.0, max(0.0, 1.0 - c) * math.log(z / x)))
    m0, e0, _ = _gauss_scaled(a, b, c, x, ctrl, allow_ode=False)
    m1, e1, _ = _gauss_scaled(a + 1.0, b + 1.0, c + 1.0, x, ctrl, allow_ode=False)
    shift = max(e0, e1)
    f0 = m0 * math.exp(e0 - shift)
    f1 = a * b / c * m1 * math.exp(e1 - shift)
    worst = 1.0
    while x < z:
        h = min(z - x, 0.5 * min(x, 1.0 - x))
        while True:
            g0, g1, ratio = _taylor_step(a, b, c, x, f0, f1, h, ctrl)
            if ratio < 1e2:
                break
            if h < 1e-12:
                if not math.isfinite(ratio):
                    raise ConvergenceError("ODE continuation overflowed")
                break
            h *= 0.5
        worst = max(worst, ratio)
        x = z if h == z - x else x + h
        f0, f1 = g0, g1
        size = abs(f0) + abs(f1)
        if size > _BIG or (0.0 < size < 1.0 / _BIG):
            f0 /= size
            f1 /= size
            shift += math.log(size)
    return f0, shift, 10.0 * _EPS * worst * amplification * abs(f0)


def _candidates(a, b, c, z, ctrl):
    if z > 0.5:
        s = c - a - b
        generic = abs(s - round(s)) >= _CONNECTION_GAP
        try:
            if generic:
                yield _connection(a, b, c, z, ctrl)
            else:
                yield _connection_near_integer(a, b, c, z, ctrl)
        except ConvergenceError:
            pass
    yield from _power_forms(a, b, c, z, ctrl)


def _exact_polynomial(degree, a, b, c, z):
    """Terminating 2F1 summed in rational arithmetic; None if out of float range."""
    a, b, c, z = (Fraction(v) for v in (a, b, c, z))
    term = total = Fraction(1)
    for n in range(degree):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
    if total == 0:
        return 0.0, 0.0, 0.0
    try:
        value = float(total)
    except OverflowError:
        return None
    if value == 0.0 or not math.isfinite(value):
        return None
    return value, 0.0, _EPS * abs(value)


def _gauss_scaled(a, b, c, z, ctrl, allow_ode=True):
    term = _terminating_order(a, b, ctrl)
    if term is not None:
        poly = _series_2f1(a, b, c, z, ctrl)
        if abs(poly[2]) <= _GOOD_ENOUGH * abs(poly[0]):
            return poly
        degree, a, b = term
        if degree <= _EXACT_DEGREE:
            exact = _exact_polynomial(degree, a, b, c, z)
            if exact is not None:
                return exact
        # the polynomial may cancel; its rearrangements terminate too
        a = float(round(a)) if is_nonpositive_integer(a, ctrl.snap_tolerance) else a
        b = float(round(b)) if is_nonpositive_integer(b, ctrl.snap_tolerance) else b
        best, rel = _best([poly, *_candidates(a, b, c, z, ctrl)], good_enough=_GOOD_ENOUGH)
        return best
    best, rel = _best(_candidates(a, b, c, z, ctrl), good_enough=_GOOD_ENOUGH)
    if allow_ode and rel > _ODE_SWITCH:
        try:
            ode = _ode_continuation(a, b, c, z, ctrl)
        except ConvergenceError:
            return best
        if math.isfinite(ode[0]) and ode[0] != 0.0:
            return ode
    return best


def _check_2f1_args(c, z):
    if not 0.0 <= z < 1.0:
        raise DomainError(f"gauss_2f1 requires 0 <= z < 1, got z={z!r}")
    if is_nonpositive_integer(c, 1e-14):
        raise DomainError(f"gauss_2f1 undefined for c={c!r}")


def gauss_2f1_log(a: float, b: float, c: float, z: float,
                  ctrl: SeriesControl | None = None) -> tuple[float, int]:
    """2F1(a, b; c; z) as ``(ln|F|, sign F)``; sign 0 means F == 0 exactly.

    Same method as :func:`gauss_2f1` but never overflows, which matters when
    F is to be multiplied by an exponentially small prefactor.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    _check_2f1_args(c, z)
    if z == 0.0:
        return 0.0, 1
    m, e, _ = _gauss_scaled(a, b, c, z, ctrl)
    if m == 0.0:
        return -math.inf, 0
    return e + math.log(abs(m)), 1 if m > 0 else -1


def gauss_2f1(a: float, b: float, c: float, z: float, ctrl: SeriesControl | None = None) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z in [0, 1).

    A non-positive integer ``a`` or ``b`` gives the exact terminating
    polynomial.  Otherwise the power series (with its Euler and Pfaff
    rearrangements) is used for z <= 0.5 and the z -> 1-z connection formula
    above that; whichever form carries the smallest rounding-error estimate
    wins.  When all of them cancel badly the solution of the hypergeometric
    ODE is continued numerically from a point near the origin.

    Raises:
        DomainError: z outside [0, 1) or c a non-positive integer.
        ConvergenceError: the series needed more than ``ctrl.max_terms`` terms,
            or the value does not fit in a float.
    """
    ctrl = ctrl or DEFAULT_CONTROL
    _check_2f1_args(c, z)
    if z == 0.0:
        return 1.0
    m, e, _ = _gauss_scaled(a, b, c, z, ctrl)
    try:
        value = m * math.exp(e)
    except OverflowError:
        value = math.inf
    if not math.isfinite(value):
        raise ConvergenceError("2F1 value exceeds the float range; use gauss_2f1_log")
    return value


def _kummer_scaled(a, b, z, ctrl):
    if is_nonpositive_integer(b, 1e-14):
        raise DomainError(f"kummer_1f1 undefined for b={b!r}")
    if z == 0.0:
        return 1.0, 0.0
    if is_nonpositive_integer(a, ctrl.snap_tolerance):
        a_int = float(round(a))
        m, e, _ = _sum_series(lambda n: (a_int + n) / ((b + n) * (n + 1)), z, ctrl, -round(a))
    elif z < 0:
        guard = math.ceil(max(0.0, a - b, -b))
        m, e, _ = _sum_series(lambda n: (b - a + n) / ((b + n) * (n + 1)), -z, ctrl, n_guard=guard)
        e += z
    else:
        guard = math.ceil(max(0.0, -a, -b))
        m, e, _ = _sum_series(lambda n: (a + n) / ((b + n) * (n + 1)), z, ctrl, n_guard=guard)
    return m, e


def kummer_1f1(a: float, b: float, z: float, ctrl: SeriesControl | None = None) -> float:
    """Confluent hypergeometric function 1F1(a; b; z) for real arguments.

    Negative z with a non-terminating series goes through Kummer's
    transformation 1F1(a; b; z) = e^z 1F1(b-a; b; -z) to avoid cancellation.
    """
    m, e = _kummer_scaled(a, b, z, ctrl or DEFAULT_CONTROL)
    try:
        return m * math.exp(e)
    except OverflowError:
        raise ConvergenceError("1F1 value exceeds the float range") from None


def kummer_1f1_log(a: float, b: float, z: float,
                   ctrl: SeriesControl | None = None) -> tuple[float, int]:
    """1F1(a; b; z) as ``(ln|F|, sign F)``."""
    m, e = _kummer_scaled(a, b, z, ctrl or DEFAULT_CONTROL)
    if m == 0.0:
        return -math.inf, 0
    return e + math.log(abs(m)), 1 if m > 0 else -1
