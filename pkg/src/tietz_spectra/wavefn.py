"""Radial wave functions chi(r) = r R(r) for the bound levels of each regime.

Case1 carries a closed-form normalization constant.  The other regimes are
normalized by quadrature.  Every wave function is signed so that it is
positive just inside the left end of its domain.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, LevelIndexError, LevelMismatchError, RegimeError
from .model import (CentrifugalApprox, PotentialParams, Regime, RegimeKind, classify_regime,
                    effective_potential, fit_centrifugal_approx, mr_constants, rm_constants)
from .spectra import BoundLevel, case1_auxiliaries, morse_level_count, morse_s
from .specfun import SeriesControl, gauss_2f1_log, kummer_1f1_log, log_gamma

_CONTROL = SeriesControl(snap_tolerance=0.0)
_TAIL = math.log(1e-18)  # integrand cut relative to its peak
_SAMPLES = 2000
_A_WINDOW = 1e-7  # relative search window for the polished 2F1 parameter


@dataclass(frozen=True)
class WavefunctionSpec:
    """A bound level together with its normalization.

    ``log_norm`` and ``norm_sign`` hold the constant in log form because the
    unnormalized shapes can be far outside the float range.
    """

    regime: Regime
    level: BoundLevel
    params: PotentialParams
    log_norm: float
    norm_sign: int
    approx: Optional[CentrifugalApprox] = None
    r_end: float = math.inf
    a: Optional[float] = None  # polished first 2F1 parameter (Case2, Case3)

    @property
    def norm_constant(self) -> float:
        return self.norm_sign * math.exp(self.log_norm)

    @property
    def r_start(self) -> float:
        return self.regime.domain_start


# ------------------------------------------------------------ shapes

def _case1_shape(p, level, approx, r):
    aux = case1_auxiliaries(p, level.l, level.n_r, approx)
    N, lam, n = aux.N_r, aux.lambda_l, level.n_r
    z = p.c_h * math.exp(-p.b_h * (r - p.r_e))
    if z >= 1.0:
        return -math.inf, 0
    lf, s = gauss_2f1_log(-n, N + lam / N - n, lam / N - N + 1.0, z, _CONTROL)
    return (N - n) * math.log1p(-z) + 0.5 * (lam / N - N) * math.log(z) + lf, s


def _gap(p: PotentialParams) -> float:
    """Delta = kappa^2 - k^2, independent of E."""
    q = abs(p.c_h)
    return (p.D / (q * q) - p.D) / (p.hbar2_over_2mu * p.b_h**2)


def _case2_d0(p):
    h, b, c = p.hbar2_over_2mu, p.b_h, p.c_h
    return math.sqrt(0.25 + 4.0 * mr_constants(p).V2 / (h * b * b * c))


def _case3_L(p):
    h, b, q = p.hbar2_over_2mu, p.b_h, -p.c_h
    return -0.5 + math.sqrt(0.25 + 4.0 * rm_constants(p).U2 / (h * b * b * q))


def _exponents_from_a(p, kind, a):
    """(k, kappa) from the first hypergeometric parameter a = M1 - L.

    In Case2 a = d0 + 1/2 + (k - kappa), in Case3 a = k + kappa - L; together
    with kappa^2 - k^2 = Delta either relation fixes k and kappa without the
    cancellation of computing a from E.
    """
    gap = _gap(p)
    if kind is RegimeKind.CASE2_HALFSPACE_MR:
        t = a - _case2_d0(p) - 0.5  # k - kappa < 0
        k = 0.5 * (t - gap / t)
        return k, k - t
    s = a + _case3_L(p)  # k + kappa > 0
    k = 0.5 * (s - gap / s)
    return k, s - k


def _a_from_energy(p, kind, E):
    h, b = p.hbar2_over_2mu, p.b_h
    k = math.sqrt((p.D - E) / h) / b
    kappa = math.sqrt((p.D / p.c_h**2 - E) / h) / b
    if kind is RegimeKind.CASE2_HALFSPACE_MR:
        return _case2_d0(p) + 0.5 - _gap(p) / (k + kappa)
    return k + kappa - _case3_L(p)


def _hyper_args(p, kind, a):
    k, kappa = _exponents_from_a(p, kind, a)
    L = -0.5 + kappa if kind is RegimeKind.CASE2_HALFSPACE_MR else _case3_L(p)
    return (a, a + 2.0 * L + 1.0, 2.0 * k + 1.0), k, kappa


def _wall_argument(p, kind):
    if kind is RegimeKind.CASE2_HALFSPACE_MR:
        return p.c_h * math.exp(p.b_h * p.r_e)
    q = -p.c_h
    return q / (math.exp(-p.b_h * p.r_e) + q)


def _polish_a(p, kind, E) -> float:
    """Re-solve the quantization condition in the variable a near a(E).

    Near a non-positive integer the hypergeometric factor is extremely
    sensitive to a, and an a rebuilt from a rounded energy leaves chi(0)
    visibly nonzero.  Bisection in a itself reaches full relative precision.
    """
    z0 = _wall_argument(p, kind)

    def sign(a):
        args, _, _ = _hyper_args(p, kind, a)
        return gauss_2f1_log(*args, z0, _CONTROL)

    a0 = _a_from_energy(p, kind, E)
    l0, s0 = sign(a0)
    if s0 == 0:
        return a0
    size = 1.0 + abs(a0) + abs(_exponents_from_a(p, kind, a0)[1])
    width = 1e-14 * size
    # a level from the root scan sits far closer than this to a root
    while True:
        lo, hi = a0 - width, a0 + width
        (llo, slo), (lhi, shi) = sign(lo), sign(hi)
        if slo * shi <= 0:
            break
        width *= 4.0
        if width > _A_WINDOW * size:
            raise LevelMismatchError(f"E = {E!r} is not a root of the quantization condition")
    if slo == 0:
        return lo
    if shi == 0:
        return hi
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        lm, sm = sign(mid)
        if sm == 0:
            return mid
        if sm == slo:
            lo, llo = mid, lm
        else:
            hi, lhi = mid, lm
    return lo if llo <= lhi else hi


def _case2_shape(p, a, r):
    args, k, _ = _hyper_args(p, RegimeKind.CASE2_HALFSPACE_MR, a)
    z = p.c_h * math.exp(-p.b_h * (r - p.r_e))
    lf, s = gauss_2f1_log(*args, z, _CONTROL)
    return (_case2_d0(p) + 0.5) * math.log1p(-z) + k * math.log(z) + lf, s


def _case3_shape(p, a, r):
    args, k, kappa = _hyper_args(p, RegimeKind.CASE3_RM, a)
    q = -p.c_h
    x = p.b_h * (r - p.r_e)
    # w = q/(q + e^x) and 1 - w = e^x/(q + e^x), in log form
    log_den = float(np.logaddexp(math.log(q), x))
    log_w = math.log(q) - log_den
    lf, s = gauss_2f1_log(*args, math.exp(log_w), _CONTROL)
    return k * log_w + kappa * (x - log_den) + lf, s


def _morse_shape(p, level, r):
    s = morse_s(p)
    n = level.n_r
    t = -p.beta * (r - p.r_e)  # ln y
    y = math.exp(t)
    lf, sign = kummer_1f1_log(-n, 2.0 * s - 2.0 * n, 2.0 * s * y)
    return -s * y + (s - n - 0.5) * t + lf, sign


def _log_shape(p: PotentialParams, kind: RegimeKind, level: BoundLevel,
               approx: CentrifugalApprox | None, a: float | None, r: float) -> tuple[float, int]:
    if kind is RegimeKind.CASE1_MR:
        return _case1_shape(p, level, approx, r)
    if kind is RegimeKind.CASE2_HALFSPACE_MR:
        return _case2_shape(p, a, r)
    if kind is RegimeKind.CASE3_RM:
        return _case3_shape(p, a, r)
    return _morse_shape(p, level, r)


def case1_log_norm(p: PotentialParams, level: BoundLevel, approx: CentrifugalApprox) -> float:
    """ln of the closed-form Case1 normalization factor."""
    aux = case1_auxiliaries(p, level.l, level.n_r, approx)
    N, lam, n = aux.N_r, aux.lambda_l, level.n_r
    g = lam / N
    inner = (math.log(p.b_h / (2.0 * N)) + math.log(g + N) + math.log(g - N)
             + log_gamma(N - n + g) + log_gamma(1.0 - N + n + g)
             - log_gamma(n + 1.0) - log_gamma(2.0 * N - n))
    return 0.5 * inner - log_gamma(g - N + 1.0)


# ------------------------------------------------------------ quadrature

def _profile(shape, lo: float, hi: float, n: int = _SAMPLES):
    r = np.linspace(lo, hi, n + 2)[1:-1]
    vals = [shape(float(x)) for x in r]
    return r, np.array([v[0] for v in vals]), np.array([v[1] for v in vals])


def _support(shape, lo: float, scale: float) -> tuple[float, float, float]:
    """Right truncation point, peak location and ln peak of |shape|.

    ``scale`` is a decay length; the scan walks outward until the squared
    shape has fallen below exp(_TAIL) of its peak and keeps falling.
    """
    hi = lo + 40.0 * scale
    for _ in range(60):
        r, logs, _ = _profile(shape, lo, hi)
        i = int(np.argmax(logs))
        peak = logs[i]
        if 2.0 * (logs[-1] - peak) < _TAIL and i < len(r) - 1:
            break
        hi = lo + 2.0 * (hi - lo)
    # pull the right end in to where the integrand first drops below the cut
    tail = np.nonzero((2.0 * (logs - peak) < _TAIL) & (r > r[i]))[0]
    r_end = float(r[tail[0]]) if len(tail) else hi
    return r_end, float(r[i]), float(peak)


def _integrate(fn, lo: float, hi: float, panels: int) -> float:
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = quad(fn, float(a), float(b), epsabs=1e-16, epsrel=1e-13, limit=200)
        total += val
    return total


def _panels(lo, hi, scale):
    return int(min(max(8, 4 * (hi - lo) / scale), 400))


@functools.lru_cache(maxsize=256)
def _build(p: PotentialParams, level: BoundLevel, approx: CentrifugalApprox | None,
           analytic: bool) -> WavefunctionSpec:
    reg = classify_regime(p)
    kind = reg.kind
    lo = reg.domain_start
    scale = 1.0 / p.b_h if kind is not RegimeKind.MORSE else 1.0 / p.beta

    a = None
    if kind in (RegimeKind.CASE2_HALFSPACE_MR, RegimeKind.CASE3_RM):
        if not 0 < level.energy < p.D:
            raise LevelMismatchError("bound energies lie in (0, D)")
        a = _polish_a(p, kind, level.energy)

    def shape(r):
        return _log_shape(p, kind, level, approx, a, r)

    r_end, _, log_peak = _support(shape, lo, scale)
    r, logs, signs = _profile(shape, lo, r_end)
    first = np.nonzero(logs - log_peak > math.log(1e-3))[0][0]
    sign = int(signs[first]) or 1

    if analytic:
        log_norm = case1_log_norm(p, level, approx)
    else:
        def integrand(x):
            lf, _ = shape(x)
            return math.exp(2.0 * (lf - log_peak))

        total = _integrate(integrand, lo, r_end, _panels(lo, r_end, scale))
        log_norm = -log_peak - 0.5 * math.log(total)
    spec = WavefunctionSpec(reg, level, p, log_norm, sign, approx, r_end, a)
    if kind in (RegimeKind.CASE2_HALFSPACE_MR, RegimeKind.CASE3_RM):
        edge = abs(evaluate(spec, 0.0)) / math.exp(log_norm + log_peak)
        if edge > 1e-6:
            raise LevelMismatchError(
                f"chi(0) = {edge:.3g} of peak: E = {level.energy!r} is not a level of this potential")
    return spec


def make_wavefunction(p: PotentialParams, level: BoundLevel,
                      approx: CentrifugalApprox | None = None, analytic: bool = True) -> WavefunctionSpec:
    """Wave function of ``level``.

    In Case1 ``approx`` defaults to the fitted centrifugal coefficients and
    ``analytic`` selects the closed-form constant over quadrature.
    """
    kind = classify_regime(p).kind
    if kind is RegimeKind.CASE1_MR:
        approx = approx or fit_centrifugal_approx(p)
    else:
        if level.l != 0:
            raise RegimeError(f"{kind.value} wave functions exist for l = 0 only")
        approx, analytic = None, False
        if kind is RegimeKind.MORSE and level.n_r >= morse_level_count(p):
            raise LevelIndexError(f"n_r = {level.n_r} beyond n_max = {morse_level_count(p) - 1}")
    if level.n_r < 0:
        raise LevelIndexError("n_r must be >= 0")
    return _build(p, level, approx, analytic)


def evaluate(spec: WavefunctionSpec, r):
    """chi(r) for a float or array of radii inside the domain."""
    p, kind = spec.params, spec.regime.kind

    def one(x):
        lf, s = _log_shape(p, kind, spec.level, spec.approx, spec.a, float(x))
        if s == 0:
            return 0.0
        return spec.norm_sign * s * math.exp(lf + spec.log_norm)

    if np.ndim(r) == 0:
        return one(r)
    return np.array([one(x) for x in np.asarray(r, dtype=float)])


def _check_domain(spec_kind: RegimeKind, p: PotentialParams, expected: RegimeKind, r):
    if spec_kind is not expected:
        raise RegimeError(f"expected regime {expected.value}, got {spec_kind.value}")
    start = classify_regime(p).domain_start
    if np.any(np.asarray(r) <= start):
        raise DomainError(f"r must exceed {start!r}")


def case1_wavefunction(spec: WavefunctionSpec, r):
    _check_domain(spec.regime.kind, spec.params, RegimeKind.CASE1_MR, r)
    return evaluate(spec, r)


def case2_wavefunction(params: PotentialParams, level: BoundLevel, r):
    _check_domain(classify_regime(params).kind, params, RegimeKind.CASE2_HALFSPACE_MR, r)
    return evaluate(make_wavefunction(params, level), r)


def case3_wavefunction(params: PotentialParams, level: BoundLevel, r):
    _check_domain(classify_regime(params).kind, params, RegimeKind.CASE3_RM, r)
    return evaluate(make_wavefunction(params, level), r)


def morse_wavefunction(params: PotentialParams, level: BoundLevel, r):
    _check_domain(classify_regime(params).kind, params, RegimeKind.MORSE, r)
    return evaluate(make_wavefunction(params, level), r)


# ------------------------------------------------------------ diagnostics

def quadrature_log_norm(spec: WavefunctionSpec) -> float:
    """ln of the constant that normalizes the shape by quadrature."""
    return _build(spec.params, spec.level, spec.approx, False).log_norm


def overlap(a: WavefunctionSpec, b: WavefunctionSpec) -> float:
    if a.regime.kind is not b.regime.kind or a.params != b.params:
        raise RegimeError("overlap needs two states of the same potential")
    lo = a.r_start
    hi = max(a.r_end, b.r_end)
    scale = 1.0 / a.params.b_h

    def integrand(x):
        return evaluate(a, x) * evaluate(b, x)

    return _integrate(integrand, lo, hi, _panels(lo, hi, scale))


def norm(spec: WavefunctionSpec) -> float:
    return overlap(spec, spec)


def sample(spec: WavefunctionSpec, n: int = 4000, r_stop: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """chi on n uniformly spaced interior points of (r_start, r_stop)."""
    hi = spec.r_end if r_stop is None else r_stop
    r = np.linspace(spec.r_start, hi, n + 2)[1:-1]
    return r, evaluate(spec, r)


def node_count(spec: WavefunctionSpec, n: int = 4000) -> int:
    """Sign changes of chi on a fine grid, ignoring points below 1e-9 of peak."""
    _, chi = sample(spec, n)
    keep = chi[np.abs(chi) > 1e-9 * np.max(np.abs(chi))]
    return int(np.count_nonzero(keep[:-1] * keep[1:] < 0))


def edge_ratios(spec: WavefunctionSpec) -> tuple[float, float]:
    """|chi| at the left wall and at the right truncation point, relative to the peak."""
    _, chi = sample(spec)
    peak = np.max(np.abs(chi))
    start = spec.r_start
    if spec.regime.kind is RegimeKind.CASE1_MR:
        start += 1e-9 * (spec.r_end - start)
    return abs(evaluate(spec, start)) / peak, abs(evaluate(spec, spec.r_end)) / peak


def schrodinger_residual(spec: WavefunctionSpec, n: int = 8001) -> float:
    """RMS of -h chi'' + (V_eff - E) chi over the domain, divided by D * peak|chi|.

    chi'' uses the five-point central difference.  Case1 uses the
    approximated effective potential the closed form solves exactly.
    """
    p = spec.params
    lo, hi = spec.r_start, spec.r_end
    margin = 1e-3 * (hi - lo)
    r = np.linspace(lo + margin, hi, n)
    dx = r[1] - r[0]
    chi = evaluate(spec, r)
    d2 = (-chi[4:] + 16.0 * chi[3:-1] - 30.0 * chi[2:-2] + 16.0 * chi[1:-3] - chi[:-4]) / (12.0 * dx * dx)
    rr = r[2:-2]
    l = spec.level.l
    mode = "approximated" if l > 0 else "none"
    v = effective_potential(p, l, rr, mode=mode, approx=spec.approx)
    res = -p.hbar2_over_2mu * d2 + (v - spec.level.energy) * chi[2:-2]
    return float(np.sqrt(np.mean(res**2)) / (p.D * np.max(np.abs(chi))))
