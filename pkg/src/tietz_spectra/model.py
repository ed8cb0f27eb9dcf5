"""Tietz-Wei potential, its Manning-Rosen / Rosen-Morse rewritings, and the
exponential-type replacement for the centrifugal 1/r^2 term.

Two unit systems are supported.  In ``natural`` units the caller supplies
hbar^2/2mu directly and every quantity is dimensionless.  In ``molecular``
units D is in eV, lengths in Angstrom and mu in amu.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, RegimeError, SingularityError

HBAR_C_EV_ANGSTROM = 1973.269804
AMU_EV = 931.49410242e6


def molecular_hbar2_over_2mu(mu_amu: float) -> float:
    """hbar^2/2mu in eV * Angstrom^2 for a reduced mass in amu."""
    return HBAR_C_EV_ANGSTROM**2 / (2.0 * mu_amu * AMU_EV)


@dataclass(frozen=True)
class PotentialParams:
    """One Tietz-Wei problem instance.

    ``b_h = beta * (1 - c_h)``; the Morse constant beta is not stored but
    available as :attr:`beta`.
    """

    D: float
    r_e: float
    b_h: float
    c_h: float
    mu: float = 1.0
    hbar2_over_2mu: float = 1.0
    units: str = "natural"

    def __post_init__(self):
        checks = [
            (self.D > 0, "D must be > 0"),
            (self.r_e > 0, "r_e must be > 0"),
            (self.b_h > 0, "b_h must be > 0"),
            (abs(self.c_h) < 1, "|c_h| must be < 1"),
            (self.mu > 0, "mu must be > 0"),
            (self.hbar2_over_2mu > 0, "hbar2_over_2mu must be > 0"),
            (self.units in ("natural", "molecular"), f"unknown unit system {self.units!r}"),
        ]
        for ok, msg in checks:
            if not ok:
                raise DomainError(msg)
        if self.units == "molecular":
            expected = molecular_hbar2_over_2mu(self.mu)
            if not math.isclose(self.hbar2_over_2mu, expected, rel_tol=1e-12):
                raise DomainError("hbar2_over_2mu inconsistent with mu in molecular units")

    @classmethod
    def natural(cls, D, r_e, b_h, c_h, hbar2_over_2mu=1.0, mu=1.0) -> "PotentialParams":
        return cls(D, r_e, b_h, c_h, mu=mu, hbar2_over_2mu=hbar2_over_2mu, units="natural")

    @classmethod
    def molecular(cls, D, r_e, b_h, c_h, mu) -> "PotentialParams":
        """D in eV, r_e in Angstrom, b_h in 1/Angstrom, mu in amu."""
        return cls(D, r_e, b_h, c_h, mu=mu, hbar2_over_2mu=molecular_hbar2_over_2mu(mu),
                   units="molecular")

    @property
    def beta(self) -> float:
        return self.b_h / (1.0 - self.c_h)

    @property
    def hbar(self) -> float:
        """hbar in the active unit system, recovered from mu and hbar^2/2mu."""
        return math.sqrt(2.0 * self.mu * self.hbar2_over_2mu)

    def with_c_h(self, c_h: float) -> "PotentialParams":
        return PotentialParams(self.D, self.r_e, self.b_h, c_h, self.mu,
                               self.hbar2_over_2mu, self.units)


class RegimeKind(str, enum.Enum):
    CASE1_MR = "Case1"
    CASE2_HALFSPACE_MR = "Case2"
    CASE3_RM = "Case3"
    MORSE = "Morse"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    c_h_min: float
    r0: Optional[float] = None
    xi0: Optional[float] = None
    x0: Optional[float] = None

    @property
    def domain_start(self) -> float:
        """Left end of the physical domain: r0 in Case1, 0 otherwise."""
        return self.r0 if self.kind is RegimeKind.CASE1_MR else 0.0


@dataclass(frozen=True)
class MRConstants:
    V0: float
    V1: float
    V2: float


@dataclass(frozen=True)
class RMConstants:
    U0: float
    U1: float
    U2: float


@dataclass(frozen=True)
class CentrifugalApprox:
    """Coefficients of 1/r^2 ~ C0 + B0/(e^{b(r-re)} - c) + A0/(e^{b(r-re)} - c)^2."""

    C0: float
    B0: float
    A0: float


ZERO_APPROX = CentrifugalApprox(0.0, 0.0, 0.0)


def deformed_hyperbolic(kind: str, q: float, x):
    """Arai's q-deformed sinh, cosh, tanh or coth.

    sinh_q x = (e^x - q e^-x)/2 and cosh_q x = (e^x + q e^-x)/2; tanh and coth
    are their ratios.  ``coth`` raises :class:`SingularityError` at the zero
    x = ln(q)/2 of sinh_q.
    """
    if not q > 0:
        raise DomainError("deformation q must be > 0")
    ep = np.exp(x)
    em = q * np.exp(-x)
    sinh = (ep - em) / 2.0
    cosh = (ep + em) / 2.0
    if kind == "sinh":
        return sinh
    if kind == "cosh":
        return cosh
    if kind == "tanh":
        return sinh / cosh
    if kind == "coth":
        if np.any(np.abs(sinh) <= 1e-14 * cosh):
            raise SingularityError("coth_q evaluated at the zero of sinh_q")
        return cosh / sinh
    raise ValueError(f"unknown deformed hyperbolic function {kind!r}")


def classify_regime(p: PotentialParams) -> Regime:
    """Split on c_h: Case1 for c_h >= e^{-b_h r_e}, Case2 below that down to 0,
    Case3 for negative c_h, Morse at c_h = 0."""
    c = p.c_h
    if abs(c) >= 1:
        raise DomainError("|c_h| must be < 1")
    c_min = math.exp(-p.b_h * p.r_e)
    if c == 0:
        return Regime(RegimeKind.MORSE, c_min)
    if c >= c_min:
        r0 = p.r_e + math.log(c) / p.b_h
        return Regime(RegimeKind.CASE1_MR, c_min, r0=max(r0, 0.0))
    if c > 0:
        return Regime(RegimeKind.CASE2_HALFSPACE_MR, c_min, xi0=-0.5 * (p.b_h * p.r_e + math.log(c)))
    return Regime(RegimeKind.CASE3_RM, c_min, x0=-0.5 * (p.b_h * p.r_e + math.log(-c)))


def mr_constants(p: PotentialParams) -> MRConstants:
    c = p.c_h
    if not 0 < c < 1:
        raise RegimeError("Manning-Rosen constants need 0 < c_h < 1")
    D = p.D
    return MRConstants(
        V0=0.5 * D * (1.0 + 1.0 / c**2),
        V1=0.5 * D * (1.0 / c + 1.0) * (1.0 / c - 1.0),
        V2=0.25 * D * c * (1.0 / c - 1.0) ** 2,
    )


def rm_constants(p: PotentialParams) -> RMConstants:
    c = p.c_h
    if not -1 < c < 0:
        raise RegimeError("Rosen-Morse constants need -1 < c_h < 0")
    q = -c
    D = p.D
    return RMConstants(
        U0=0.5 * D * (1.0 + 1.0 / q**2),
        U1=0.5 * D * (1.0 - 1.0 / q) * (1.0 + 1.0 / q),
        U2=0.25 * D * q * (1.0 / q + 1.0) ** 2,
    )


def _check_r(p: PotentialParams, r):
    if np.any(np.asarray(r) <= 0):
        raise DomainError("r must be > 0")


def potential_eval(p: PotentialParams, r):
    """V_TW(r) = D [(1 - e^{-b(r-re)}) / (1 - c e^{-b(r-re)})]^2.

    Accepts a float or an array.  Raises :class:`SingularityError` at r0 in
    Case1, where the denominator vanishes.
    """
    _check_r(p, r)
    u = np.exp(-p.b_h * (np.asarray(r, dtype=float) - p.r_e))
    den = 1.0 - p.c_h * u
    if np.any(np.abs(den) <= 1e-15):
        raise SingularityError("Tietz-Wei potential is singular at r0")
    v = p.D * ((1.0 - u) / den) ** 2
    return float(v) if np.ndim(v) == 0 else v


def _deformed_value(D: Fraction, c: Fraction, u: Fraction) -> Fraction:
    """Eq. form with deformed functions written through u = e^{-2y} = e^{-b(r-re)}:
    sinh_q y = e^y (1 - q u)/2 and cosh_q y = e^y (1 + q u)/2."""
    if c > 0:
        V0 = D / 2 * (1 + 1 / c**2)
        V1 = D / 2 * (1 / c + 1) * (1 / c - 1)
        V2 = D / 4 * c * (1 / c - 1) ** 2
        coth = (1 + c * u) / (1 - c * u)
        inv_sinh2 = 4 * u / (1 - c * u) ** 2
        return V0 - V1 * coth + V2 * inv_sinh2
    q = -c
    U0 = D / 2 * (1 + 1 / q**2)
    U1 = D / 2 * (1 - 1 / q) * (1 + 1 / q)
    U2 = D / 4 * q * (1 / q + 1) ** 2
    tanh = (1 - q * u) / (1 + q * u)
    inv_cosh2 = 4 * u / (1 + q * u) ** 2
    return U0 + U1 * tanh - U2 * inv_cosh2


def potential_eval_deformed(p: PotentialParams, r):
    """The same potential written with c_h-deformed hyperbolic functions:
    V0 - V1 coth_c(y) + V2/sinh_c(y)^2 for c_h > 0 and
    U0 + U1 tanh_|c|(y) - U2/cosh_|c|(y)^2 for c_h < 0, y = b_h(r - r_e)/2.

    The constants grow like D/c_h^2 and cancel down to O(D), so the sum is
    formed in exact rational arithmetic on the rounded exponential; the
    result then agrees with :func:`potential_eval` to a few ulp.
    """
    _check_r(p, r)
    r = np.asarray(r, dtype=float)
    c = p.c_h
    if c == 0:
        v = p.D * (1.0 - np.exp(-p.beta * (r - p.r_e))) ** 2
        return float(v) if np.ndim(v) == 0 else v
    if c > 0:
        mr_constants(p)  # regime check
    else:
        rm_constants(p)
    u = np.exp(-p.b_h * (r - p.r_e))
    if c > 0 and np.any(np.abs(1.0 - c * u) <= 1e-15):
        raise SingularityError("Tietz-Wei potential is singular at r0")
    D, cf = Fraction(p.D), Fraction(c)
    v = np.array([float(_deformed_value(D, cf, Fraction(float(x)))) for x in np.ravel(u)])
    return float(v[0]) if np.ndim(r) == 0 else v.reshape(r.shape)


def fit_centrifugal_approx(p: PotentialParams, *, C0: float | None = None,
                           B0: float | None = None, A0: float | None = None) -> CentrifugalApprox:
    """Coefficients of the exponential-type stand-in for 1/r^2.

    C0 defaults to b_h^2/12.  B0 and A0 are chosen so the approximation and
    its first derivative equal 1/r^2 and -2/r^3 at r = r_e; explicit values
    override the fit.  If only one of B0, A0 is given the other is fitted to
    the value condition alone.
    """
    if classify_regime(p).kind is not RegimeKind.CASE1_MR:
        raise RegimeError("the centrifugal approximation is used in Case1 only")
    b, re, c = p.b_h, p.r_e, p.c_h
    C0 = b * b / 12.0 if C0 is None else C0
    t = 1.0 - c  # e^{b(r-re)} - c at r = re
    value = 1.0 / re**2 - C0
    slope = 2.0 / (b * re**3)
    if B0 is None and A0 is None:
        A0 = t**3 * slope - t**2 * value
        B0 = 2.0 * t * value - t**2 * slope
    elif B0 is None:
        B0 = t * (value - A0 / t**2)
    elif A0 is None:
        A0 = t**2 * (value - B0 / t)
    return CentrifugalApprox(C0=C0, B0=B0, A0=A0)


def approx_inverse_r2(approx: CentrifugalApprox, b_h: float, r_e: float, c_h: float, r):
    """Evaluate C0 + B0/(e^{b(r-re)} - c) + A0/(e^{b(r-re)} - c)^2."""
    t = np.exp(b_h * (np.asarray(r, dtype=float) - r_e)) - c_h
    v = approx.C0 + approx.B0 / t + approx.A0 / t**2
    return float(v) if np.ndim(v) == 0 else v


def effective_mr_constants(p: PotentialParams, l: int, approx: CentrifugalApprox) -> MRConstants:
    """Manning-Rosen constants with the approximated centrifugal term folded in."""
    if classify_regime(p).kind is not RegimeKind.CASE1_MR:
        raise RegimeError("l-dependent Manning-Rosen constants exist in Case1 only")
    if l < 0:
        raise DomainError("l must be >= 0")
    mr = mr_constants(p)
    c = p.c_h
    cent = p.hbar2_over_2mu * l * (l + 1)
    skew = approx.A0 / c - approx.B0
    return MRConstants(
        V0=mr.V0 + cent * (approx.C0 + skew / (2.0 * c)),
        V1=mr.V1 + cent * skew / (2.0 * c),
        V2=mr.V2 + cent * approx.A0 / (4.0 * c),
    )


def effective_potential(p: PotentialParams, l: int, r, mode: str = "exact",
                        approx: CentrifugalApprox | None = None):
    """V_TW plus the centrifugal term: ``exact`` hbar^2 l(l+1)/2mu r^2,
    ``approximated`` with the exponential-type form, or ``none``."""
    v = potential_eval(p, r)
    if l == 0 or mode == "none":
        return v
    cent = p.hbar2_over_2mu * l * (l + 1)
    if mode == "exact":
        return v + cent / np.asarray(r, dtype=float) ** 2
    if mode == "approximated":
        approx = approx or fit_centrifugal_approx(p)
        return v + cent * approx_inverse_r2(approx, p.b_h, p.r_e, p.c_h, r)
    raise ValueError(f"unknown centrifugal mode {mode!r}")
