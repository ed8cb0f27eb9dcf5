"""Numerov shooting solver for the radial equation, used as an independent
check on every analytic energy.

Levels are bracketed by Sturm node counting on outward integrations and then
refined with Brent's method on the Wronskian mismatch at a matching point.
Nothing here touches the hypergeometric machinery; the only shared code is
the potential itself.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import brentq

from .errors import ConvergenceError, DomainError, GridWarning
from .model import (CentrifugalApprox, PotentialParams, RegimeKind, classify_regime,
                    effective_potential, fit_centrifugal_approx)
from .spectra import BoundLevel, Method

_RESCALE = 1e150


@dataclass(frozen=True)
class NumerovConfig:
    """Grid and tolerances.  ``r_min``/``r_max`` left as None take the
    regime defaults: r0 + 1e-6 (Case1) or 1e-6, and r_e + 30/b_h."""

    r_min: Optional[float] = None
    r_max: Optional[float] = None
    n_points: int = 20001
    match_fraction: float = 0.5
    centrifugal_mode: str = "exact"
    e_tol_rel: float = 1e-10

    def __post_init__(self):
        if self.n_points < 1001:
            raise DomainError("n_points must be >= 1001")
        if not 0 < self.match_fraction < 1:
            raise DomainError("match_fraction must lie in (0, 1)")
        if self.centrifugal_mode not in ("exact", "approximated", "none"):
            raise DomainError(f"unknown centrifugal mode {self.centrifugal_mode!r}")
        if not self.e_tol_rel > 0:
            raise DomainError("e_tol_rel must be > 0")
        if self.r_min is not None and self.r_max is not None and not self.r_min < self.r_max:
            raise DomainError("r_min must be < r_max")


def resolve_config(p: PotentialParams, cfg: NumerovConfig) -> NumerovConfig:
    reg = classify_regime(p)
    r_min = cfg.r_min
    if r_min is None:
        r_min = reg.r0 + 1e-6 if reg.kind is RegimeKind.CASE1_MR else 1e-6
    elif reg.kind is RegimeKind.CASE1_MR and r_min <= reg.r0:
        raise DomainError("r_min must exceed r0 in Case1")
    r_max = cfg.r_max if cfg.r_max is not None else p.r_e + 30.0 / p.b_h
    if not r_min < r_max:
        raise DomainError("r_min must be < r_max")
    return replace(cfg, r_min=r_min, r_max=r_max)


class RadialProblem:
    """-h2m chi'' + V chi = E chi on a uniform grid, chi = 0 at both ends."""

    def __init__(self, r: np.ndarray, v: np.ndarray, h2m: float, match_fraction: float = 0.5):
        self.r = np.asarray(r, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.h2m = h2m
        self.dx = float(self.r[1] - self.r[0])
        self.match_fraction = match_fraction
        self.n = len(self.r)

    def _f(self, E: float) -> list:
        return (1.0 + self.dx**2 * (E - self.v) / (12.0 * self.h2m)).tolist()

    def _start(self, f: list) -> int:
        # where the potential is very large, Numerov's f goes negative; the
        # solution is negligibly small there and is held at zero
        i = 0
        while i < self.n - 3 and f[i] < 0.5:
            i += 1
        return i

    def _outward(self, f, i0, stop):
        """Integrate from i0 to ``stop`` inclusive; returns (chi list, nodes)."""
        chi = [0.0] * (stop + 1)
        if i0 + 1 > stop:
            return chi, 0
        chi[i0 + 1] = 1e-30
        nodes = 0
        for i in range(i0 + 1, stop):
            nxt = ((12.0 - 10.0 * f[i]) * chi[i] - f[i - 1] * chi[i - 1]) / f[i + 1]
            if nxt * chi[i] < 0.0:
                nodes += 1
            chi[i + 1] = nxt
            if abs(nxt) > _RESCALE:
                for j in range(i0, i + 2):
                    chi[j] /= _RESCALE
        return chi, nodes

    def _inward(self, f, stop):
        """Integrate from the right wall down to ``stop``."""
        n = self.n
        chi = [0.0] * n
        chi[n - 2] = 1e-30
        for i in range(n - 2, stop, -1):
            prev = ((12.0 - 10.0 * f[i]) * chi[i] - f[i + 1] * chi[i + 1]) / f[i - 1]
            chi[i - 1] = prev
            if abs(prev) > _RESCALE:
                for j in range(i - 1, n):
                    chi[j] /= _RESCALE
        return chi

    def node_count(self, E: float) -> int:
        f = self._f(E)
        i0 = self._start(f)
        prev, cur = 0.0, 1e-30
        nodes = 0
        for i in range(i0 + 1, self.n - 1):
            nxt = ((12.0 - 10.0 * f[i]) * cur - f[i - 1] * prev) / f[i + 1]
            if nxt * cur < 0.0:
                nodes += 1
            prev, cur = cur, nxt
            if abs(cur) > _RESCALE:
                prev, cur = prev / _RESCALE, cur / _RESCALE
        return nodes

    def _match_index(self, E: float, i0: int) -> int:
        target = int(self.match_fraction * (self.n - 1))
        d = self.v - E
        turning = np.nonzero(d[:-1] * d[1:] < 0)[0]
        m = int(turning[np.argmin(np.abs(turning - target))]) if len(turning) else target
        return min(max(m, i0 + 2), self.n - 4)

    def mismatch(self, E: float, m: int) -> float:
        f = self._f(E)
        i0 = self._start(f)
        out, _ = self._outward(f, i0, m + 1)
        inn = self._inward(f, m)
        so = abs(out[m]) + abs(out[m + 1])
        si = abs(inn[m]) + abs(inn[m + 1])
        if so == 0 or si == 0:
            return 0.0
        return (out[m] * inn[m + 1] - out[m + 1] * inn[m]) / (so * si)

    def eigenvalues(self, e_lo: float, e_hi: float, max_levels: int, e_tol_rel: float) -> list[float]:
        counts = {}

        def count(E):
            if E not in counts:
                counts[E] = self.node_count(E)
            return counts[E]

        n_lo, n_hi = count(e_lo), count(e_hi)
        levels = []
        for k in range(n_lo, min(n_hi, n_lo + max_levels)):
            a, b = e_lo, e_hi
            # shrink to a bracket that holds exactly level k
            for _ in range(200):
                lower = max((e for e, c in counts.items() if c <= k and e >= a), default=a)
                upper = min((e for e, c in counts.items() if c >= k + 1 and e <= b), default=b)
                a, b = lower, upper
                if count(a) == k and count(b) == k + 1:
                    break
                mid = 0.5 * (a + b)
                count(mid)
            else:
                raise ConvergenceError(f"could not isolate level {k}")
            m = self._match_index(0.5 * (a + b), 0)
            fa, fb = self.mismatch(a, m), self.mismatch(b, m)
            if fa * fb > 0:
                # matching point too close to a node at one end; try others
                for frac in (0.3, 0.7, 0.2, 0.8, 0.4, 0.6):
                    m = min(max(int(frac * (self.n - 1)), 2), self.n - 4)
                    fa, fb = self.mismatch(a, m), self.mismatch(b, m)
                    if fa * fb <= 0:
                        break
                else:
                    raise ConvergenceError(f"no mismatch sign change for level {k}")
            scale = max(abs(a), abs(b), 1e-300)
            E = brentq(self.mismatch, a, b, args=(m,), xtol=1e-3 * e_tol_rel * scale,
                       rtol=max(0.1 * e_tol_rel, 4.5e-16), maxiter=500)
            levels.append(E)
        return levels

    def wavefunction(self, E: float) -> np.ndarray:
        """Normalized chi on the grid, glued at the matching point."""
        f = self._f(E)
        i0 = self._start(f)
        m = self._match_index(E, i0)
        out, _ = self._outward(f, i0, m)
        inn = self._inward(f, m - 1)
        chi = np.zeros(self.n)
        chi[: m + 1] = out[: m + 1]
        scale = out[m] / inn[m] if inn[m] != 0 else 1.0
        chi[m + 1:] = np.asarray(inn[m + 1:]) * scale
        norm = math.sqrt(trapezoid(chi**2, self.r))
        sign = 1.0
        first = np.nonzero(np.abs(chi) > 1e-3 * np.max(np.abs(chi)))[0]
        if len(first) and chi[first[0]] < 0:
            sign = -1.0
        return sign * chi / norm


def _problem(p: PotentialParams, l: int, cfg: NumerovConfig,
             approx: CentrifugalApprox | None) -> tuple[RadialProblem, NumerovConfig]:
    cfg = resolve_config(p, cfg)
    r = np.linspace(cfg.r_min, cfg.r_max, cfg.n_points)
    mode = cfg.centrifugal_mode
    if mode == "approximated" and approx is None:
        approx = fit_centrifugal_approx(p)
    v = effective_potential(p, l, r, mode=mode, approx=approx)
    return RadialProblem(r, v, p.hbar2_over_2mu, cfg.match_fraction), cfg


def default_e_max(p: PotentialParams, l: int, cfg: NumerovConfig,
                  approx: CentrifugalApprox | None = None) -> float:
    """Continuum threshold of the effective potential."""
    if l > 0 and cfg.centrifugal_mode == "approximated":
        approx = approx or fit_centrifugal_approx(p)
        return p.D + p.hbar2_over_2mu * l * (l + 1) * approx.C0
    return p.D


def numerov_levels(p: PotentialParams, l: int = 0, cfg: NumerovConfig | None = None,
                   max_levels: int = 100, approx: CentrifugalApprox | None = None,
                   e_max: float | None = None) -> list[BoundLevel]:
    """Bound levels below ``e_max`` (default: the effective continuum threshold,
    lowered by 1e-9 relative) with Dirichlet walls at r_min and r_max."""
    cfg = cfg or NumerovConfig()
    prob, cfg = _problem(p, l, cfg, approx)
    if e_max is None:
        e_max = default_e_max(p, l, cfg, approx) * (1.0 - 1e-9)
    e_min = float(np.min(prob.v))
    if not e_min < e_max:
        return []
    energies = prob.eigenvalues(e_min, e_max, max_levels, cfg.e_tol_rel)
    return [BoundLevel(n, l, E, Method.ORACLE, cfg.e_tol_rel) for n, E in enumerate(energies)]


def numerov_wavefunction(p: PotentialParams, l: int, E: float, cfg: NumerovConfig | None = None,
                         approx: CentrifugalApprox | None = None) -> tuple[np.ndarray, np.ndarray]:
    cfg = cfg or NumerovConfig()
    prob, _ = _problem(p, l, cfg, approx)
    return prob.r, prob.wavefunction(E)


def solve_potential(r: Sequence[float], v: Sequence[float], h2m: float, e_min: float, e_max: float,
                    max_levels: int = 100, e_tol_rel: float = 1e-10) -> list[float]:
    """Levels of an arbitrary tabulated potential (used for self-tests)."""
    return RadialProblem(np.asarray(r), np.asarray(v), h2m).eigenvalues(e_min, e_max, max_levels, e_tol_rel)


def level_shift(coarse: Sequence[BoundLevel], fine: Sequence[BoundLevel], e_tol_rel: float,
                n_points: int | None = None) -> float:
    """Largest relative difference between two level lists; warns with
    :class:`GridWarning` above 10 e_tol_rel.  A count mismatch counts as
    an infinite shift."""
    shift = 0.0
    for a, b in zip(coarse, fine):
        shift = max(shift, abs(a.energy - b.energy) / abs(b.energy))
    if len(coarse) != len(fine):
        shift = math.inf
    if shift > 10.0 * e_tol_rel:
        where = f"grid of {n_points} points" if n_points else "grid"
        warnings.warn(f"{where} not converged: relative level shift {shift:.3g} on refinement",
                      GridWarning)
    return shift


def richardson_check(p: PotentialParams, l: int = 0, cfg: NumerovConfig | None = None,
                     max_levels: int = 100, approx: CentrifugalApprox | None = None) -> float:
    """Largest relative level shift between n_points and 2 n_points - 1 grids.

    Warns with :class:`GridWarning` if it exceeds 10 e_tol_rel.
    """
    cfg = cfg or NumerovConfig()
    coarse = numerov_levels(p, l, cfg, max_levels, approx)
    fine = numerov_levels(p, l, refined(cfg), max_levels, approx)
    return level_shift(coarse, fine, cfg.e_tol_rel, cfg.n_points)


def refined(cfg: NumerovConfig) -> NumerovConfig:
    """Same domain with the step halved."""
    return replace(cfg, n_points=2 * cfg.n_points - 1)
