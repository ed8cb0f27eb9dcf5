"""Bound-state energies for the four regimes of the Tietz-Wei potential.

Case1 has a closed-form spectrum; Case2 and Case3 are s-wave problems whose
energies are zeros of a Gauss hypergeometric function of E; c_h = 0 is the
Morse oscillator.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (BracketError, DomainError, LevelIndexError, MissedRootWarning,
                     PoleError, RegimeError)
from .model import (CentrifugalApprox, PotentialParams, RegimeKind, classify_regime,
                    effective_mr_constants, fit_centrifugal_approx, mr_constants,
                    rm_constants)
from .specfun import SeriesControl, gauss_2f1_log, is_nonpositive_integer, log_gamma_signed

# root scans must see the quantization function as a continuous function of E
SCAN_CONTROL = SeriesControl(snap_tolerance=0.0)


class Method(str, enum.Enum):
    CLOSED_FORM_CASE1 = "closed_form_case1"
    TRANSCENDENTAL_CASE2 = "transcendental_case2"
    TRANSCENDENTAL_CASE3 = "transcendental_case3"
    MORSE = "morse"
    ORACLE = "oracle"


@dataclass(frozen=True)
class BoundLevel:
    n_r: int
    l: int
    energy: float
    method: Method
    residual: float = 0.0


@dataclass(frozen=True)
class Case1Auxiliaries:
    delta_l: float
    lambda_l: float
    N_r: float
    L_E: Optional[float] = None
    M1: Optional[float] = None
    M2: Optional[float] = None


@dataclass(frozen=True)
class RootScanConfig:
    """Energy bracket and grid for the transcendental scans.  A missing
    bracket end defaults to eps*D or D*(1 - eps) with eps = 1e-9."""

    e_min: Optional[float] = None
    e_max: Optional[float] = None
    grid_points: int = 2000
    bisect_rel_tol: float = 1e-12

    def __post_init__(self):
        if self.grid_points < 16:
            raise DomainError("grid_points must be >= 16")
        if not self.bisect_rel_tol > 0:
            raise DomainError("bisect_rel_tol must be > 0")
        if self.e_min is not None and self.e_max is not None and not self.e_min < self.e_max:
            raise BracketError("e_min must be < e_max")

    def bracket(self, D: float) -> tuple[float, float]:
        eps = 1e-9
        lo = eps * D if self.e_min is None else self.e_min
        hi = D * (1.0 - eps) if self.e_max is None else self.e_max
        if hi > D:
            raise BracketError("e_max above the dissociation limit D")
        if not lo < hi:
            raise BracketError("empty energy bracket")
        return lo, hi


# ---------------------------------------------------------------- Case1

def _require(p: PotentialParams, kind: RegimeKind):
    got = classify_regime(p).kind
    if got is not kind:
        raise RegimeError(f"expected regime {kind.value}, got {got.value}")


def case1_auxiliaries(p: PotentialParams, l: int, n_r: int, approx: CentrifugalApprox,
                      E: float | None = None) -> Case1Auxiliaries:
    """delta_l, lambda_l and N_r; with an energy also L_E, M1 and M2."""
    _require(p, RegimeKind.CASE1_MR)
    if l < 0 or n_r < 0:
        raise DomainError("quantum numbers must be >= 0")
    h, b, c = p.hbar2_over_2mu, p.b_h, p.c_h
    mr = mr_constants(p)
    ll = l * (l + 1)
    delta = math.sqrt(0.25 + 4.0 * mr.V2 / (h * b * b * c) + ll * approx.A0 / (b * b * c * c))
    lam = 2.0 * mr.V1 / (h * b * b) + ll * (approx.A0 / c - approx.B0) / (b * b * c)
    N = n_r + delta + 0.5
    if E is None:
        return Case1Auxiliaries(delta, lam, N)
    eff = effective_mr_constants(p, l, approx)
    if E > eff.V0 - eff.V1:
        raise DomainError("energy above the continuum threshold")
    L_E = -0.5 + math.sqrt((eff.V0 + eff.V1 - E) / h) / b
    k = math.sqrt((eff.V0 - eff.V1 - E) / h) / b
    d = math.sqrt(0.25 + 4.0 * eff.V2 / (h * b * b * c))
    return Case1Auxiliaries(delta, lam, N, L_E=L_E, M1=d + k, M2=d - k)


def _count_below(bound: float) -> int:
    """Number of integers n >= 0 with n < bound."""
    if not bound > 0:
        return 0
    return int(math.ceil(bound))


def case1_level_count(p: PotentialParams, l: int, approx: CentrifugalApprox) -> int:
    aux = case1_auxiliaries(p, l, 0, approx)
    if aux.lambda_l <= 0:
        return 0
    return _count_below(math.sqrt(aux.lambda_l) - aux.delta_l - 0.5)


def _case1_energy_value(p, l, aux, approx) -> float:
    h, b, c = p.hbar2_over_2mu, p.b_h, p.c_h
    mr = mr_constants(p)
    shift = h * l * (l + 1) * (approx.C0 + (approx.A0 / c - approx.B0) / (2.0 * c))
    N, lam = aux.N_r, aux.lambda_l
    return mr.V0 + shift - 0.25 * h * b * b * (N * N + lam * lam / (N * N))


def case1_energy(p: PotentialParams, l: int, n_r: int, approx: CentrifugalApprox) -> BoundLevel:
    count = case1_level_count(p, l, approx)
    if not 0 <= n_r < count:
        raise LevelIndexError(f"n_r = {n_r} outside 0..{count - 1} (n_r,max = {count - 1})")
    aux = case1_auxiliaries(p, l, n_r, approx)
    E = _case1_energy_value(p, l, aux, approx)
    residual = case1_pole_residual_at(p, l, n_r, E, approx)
    return BoundLevel(n_r, l, E, Method.CLOSED_FORM_CASE1, residual)


def case1_levels(p: PotentialParams, l: int, approx: CentrifugalApprox) -> list[BoundLevel]:
    return [case1_energy(p, l, n, approx) for n in range(case1_level_count(p, l, approx))]


def case1_pole_residual_at(p: PotentialParams, l: int, n_r: int, E: float,
                           approx: CentrifugalApprox) -> float:
    """|M1 - L_E + n_r| at an arbitrary energy E."""
    aux = case1_auxiliaries(p, l, n_r, approx, E)
    return abs(aux.M1 - aux.L_E + n_r)


def case1_pole_residual(p: PotentialParams, l: int, n_r: int, approx: CentrifugalApprox) -> float:
    return case1_energy(p, l, n_r, approx).residual


def case1_green_scale(p: PotentialParams) -> float:
    """Modulus 2 mu / (hbar b_h) of the constant prefactor left out of
    :func:`case1_green_function`."""
    return 2.0 * p.mu / (p.hbar * p.b_h)


def case1_green_function(p: PotentialParams, l: int, r1: float, r2: float, E: float,
                         approx: CentrifugalApprox) -> float:
    """Radial Green's function of the approximated Case1 problem, without the
    constant -2i mu/(hbar b_h) factor.

    Gamma(M1 - L_E) carries the bound-state poles.  Gamma ratios and the two
    hypergeometric factors are combined in log space.
    """
    reg = classify_regime(p)
    if reg.kind is not RegimeKind.CASE1_MR:
        raise RegimeError("the Green's function is evaluated in Case1 only")
    if min(r1, r2) <= reg.r0:
        raise DomainError("r1, r2 must lie beyond r0")
    aux = case1_auxiliaries(p, l, 0, approx, E)
    M1, M2, L = aux.M1, aux.M2, aux.L_E
    a = M1 - L
    if is_nonpositive_integer(a, 1e-9):
        raise PoleError(f"energy sits on the bound-state pole n_r = {-round(a)}")
    k = M1 - (M1 + M2) / 2.0
    delta = (M1 + M2) / 2.0
    z1 = p.c_h * math.exp(-p.b_h * (r1 - p.r_e))
    z2 = p.c_h * math.exp(-p.b_h * (r2 - p.r_e))
    z_gt, z_lt = min(z1, z2), max(z1, z2)  # larger r means smaller z
    bb = L + M1 + 1.0
    lg1, s1 = log_gamma_signed(a)
    lg2, s2 = log_gamma_signed(bb)
    lg3, s3 = log_gamma_signed(2.0 * k + 1.0)
    lg4, s4 = log_gamma_signed(2.0 * delta + 1.0)
    f1, t1 = gauss_2f1_log(a, bb, 2.0 * k + 1.0, z_gt, SCAN_CONTROL)
    f2, t2 = gauss_2f1_log(a, bb, 2.0 * delta + 1.0, 1.0 - z_lt, SCAN_CONTROL)
    sign = s1 * s2 * s3 * s4 * t1 * t2
    if sign == 0:
        return 0.0
    log_mag = (lg1 + lg2 - lg3 - lg4
               + 0.5 * (M1 + M2 + 1.0) * (math.log1p(-z1) + math.log1p(-z2))
               + 0.5 * (M1 - M2) * (math.log(z1) + math.log(z2))
               + f1 + f2)
    return sign * math.exp(log_mag)


# ---------------------------------------------------------------- Case2, Case3

def _case2_args(p: PotentialParams, E: float):
    h, b, c = p.hbar2_over_2mu, p.b_h, p.c_h
    mr = mr_constants(p)
    d0 = math.sqrt(0.25 + 4.0 * mr.V2 / (h * b * b * c))
    k = math.sqrt((p.D - E) / h) / b
    kappa = math.sqrt((p.D / (c * c) - E) / h) / b
    M1, M2, L = d0 + k, d0 - k, -0.5 + kappa
    return M1 - L, L + M1 + 1.0, M1 - M2 + 1.0


def _case3_args(p: PotentialParams, E: float):
    h, b, q = p.hbar2_over_2mu, p.b_h, -p.c_h
    rm = rm_constants(p)
    L = -0.5 + math.sqrt(0.25 + 4.0 * rm.U2 / (h * b * b * q))
    k = math.sqrt((p.D - E) / h) / b
    kappa = math.sqrt((p.D / (q * q) - E) / h) / b
    M1, M2 = k + kappa, k - kappa
    return M1 - L, L + M1 + 1.0, M1 + M2 + 1.0


def case2_argument(p: PotentialParams) -> float:
    return p.c_h * math.exp(p.b_h * p.r_e)


def case3_argument(p: PotentialParams) -> float:
    q = -p.c_h
    return q / (math.exp(-p.b_h * p.r_e) + q)


def quantization_log(p: PotentialParams, E: float) -> tuple[float, int]:
    """(ln|F|, sign F) of the Case2 or Case3 quantization function at E."""
    kind = classify_regime(p).kind
    if not 0 <= E <= p.D:
        raise BracketError("energy outside [0, D]")
    if kind is RegimeKind.CASE2_HALFSPACE_MR:
        a, b, c = _case2_args(p, E)
        z = case2_argument(p)
    elif kind is RegimeKind.CASE3_RM:
        a, b, c = _case3_args(p, E)
        z = case3_argument(p)
    else:
        raise RegimeError("transcendental quantization exists in Case2 and Case3 only")
    return gauss_2f1_log(a, b, c, z, SCAN_CONTROL)


def quantization_function(p: PotentialParams, E: float) -> float:
    lf, s = quantization_log(p, E)
    return s * math.exp(lf) if s else 0.0


def _scan_roots(fn: Callable[[float], tuple[float, int]], lo: float, hi: float,
                scan: RootScanConfig) -> tuple[list[tuple[float, float]], float]:
    """Sign-change scan plus bisection.  Returns (energy, ln|F|) pairs and the
    largest ln|F| on the grid."""
    grid = np.linspace(lo, hi, scan.grid_points)
    vals = [fn(float(e)) for e in grid]
    logs = np.array([v[0] for v in vals])
    signs = [v[1] for v in vals]
    log_max = float(np.max(logs[np.isfinite(logs)])) if np.any(np.isfinite(logs)) else 0.0
    roots = []
    crossings = []
    for i in range(len(grid) - 1):
        if signs[i] == 0:
            roots.append((float(grid[i]), -math.inf))
            crossings.append(i)
            continue
        if signs[i] * signs[i + 1] < 0:
            crossings.append(i)
            roots.append(_bisect(fn, float(grid[i]), float(grid[i + 1]), signs[i], vals[i][0],
                                 vals[i + 1][0], scan.bisect_rel_tol))
    if signs[-1] == 0:
        roots.append((float(grid[-1]), -math.inf))
    for i, j in zip(crossings, crossings[1:]):
        if j - i <= 1:
            warnings.warn(f"sign changes in adjacent grid cells near E = {grid[j]:.6g}; "
                          "a close root pair may hide further roots", MissedRootWarning)
    # a deep local dip of |F| without a sign change hints at a near-double root
    crossing_cells = set(crossings)
    for i in range(1, len(grid) - 1):
        if signs[i - 1] == signs[i] == signs[i + 1] != 0 and \
                logs[i] < logs[i - 1] - 7.0 and logs[i] < logs[i + 1] - 7.0 and \
                not crossing_cells.intersection({i - 1, i}):
            warnings.warn(f"|F| dips sharply without a sign change near E = {grid[i]:.6g}",
                          MissedRootWarning)
    return roots, log_max


def _bisect(fn, a, b, sa, la, lb, rel_tol):
    for _ in range(300):
        if b - a <= rel_tol * max(abs(a), abs(b)):
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        lm, sm = fn(m)
        if sm == 0:
            return m, -math.inf
        if sm == sa:
            a, la = m, lm
        else:
            b, lb = m, lm
    return (a, la) if la <= lb else (b, lb)


def _transcendental_levels(p: PotentialParams, kind: RegimeKind, method: Method,
                           scan: RootScanConfig | None) -> list[BoundLevel]:
    _require(p, kind)
    scan = scan or RootScanConfig()
    lo, hi = scan.bracket(p.D)
    roots, log_max = _scan_roots(lambda e: quantization_log(p, e), lo, hi, scan)
    out = []
    for n, (E, lf) in enumerate(sorted(roots)):
        residual = math.exp(lf - log_max) if math.isfinite(lf) else 0.0
        out.append(BoundLevel(n, 0, E, method, residual))
    return out


def transcendental_case2_levels(p: PotentialParams, scan: RootScanConfig | None = None) -> list[BoundLevel]:
    """s-wave levels of the Case2 problem (Dirichlet wall at r = 0).

    ``residual`` is |F(E)| relative to the largest |F| on the scan grid.
    """
    return _transcendental_levels(p, RegimeKind.CASE2_HALFSPACE_MR, Method.TRANSCENDENTAL_CASE2, scan)


def transcendental_case3_levels(p: PotentialParams, scan: RootScanConfig | None = None) -> list[BoundLevel]:
    """s-wave levels of the Case3 (Rosen-Morse) problem with a wall at r = 0."""
    return _transcendental_levels(p, RegimeKind.CASE3_RM, Method.TRANSCENDENTAL_CASE3, scan)


# ---------------------------------------------------------------- Morse

def morse_s(p: PotentialParams) -> float:
    """sqrt(2 mu D)/(hbar beta)."""
    return math.sqrt(p.D / p.hbar2_over_2mu) / p.beta


def morse_level_count(p: PotentialParams) -> int:
    return _count_below(morse_s(p) - 0.5)


def morse_levels(p: PotentialParams) -> list[BoundLevel]:
    """E_n = (hbar^2 beta^2/2mu)[2(n+1/2)s - (n+1/2)^2] while n + 1/2 < s."""
    _require(p, RegimeKind.MORSE)
    s = morse_s(p)
    h, beta = p.hbar2_over_2mu, p.beta
    out = []
    for n in range(morse_level_count(p)):
        x = n + 0.5
        E = h * beta * beta * (2.0 * x * s - x * x)
        residual = abs(0.5 - s + math.sqrt(max(p.D - E, 0.0) / h) / beta + n)
        out.append(BoundLevel(n, 0, E, Method.MORSE, residual))
    return out


def levels_for(p: PotentialParams, l: int = 0, approx: CentrifugalApprox | None = None,
               scan: RootScanConfig | None = None) -> list[BoundLevel]:
    """Dispatch on the regime.  Only Case1 accepts l > 0."""
    kind = classify_regime(p).kind
    if kind is RegimeKind.CASE1_MR:
        return case1_levels(p, l, approx or fit_centrifugal_approx(p))
    if l != 0:
        raise RegimeError(f"{kind.value} is solved for l = 0 only")
    if kind is RegimeKind.CASE2_HALFSPACE_MR:
        return transcendental_case2_levels(p, scan)
    if kind is RegimeKind.CASE3_RM:
        return transcendental_case3_levels(p, scan)
    return morse_levels(p)
