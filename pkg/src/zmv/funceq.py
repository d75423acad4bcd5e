"""Term-wise sine integrals, the chi factor, and the step-by-step chain check.

Each check produces a :class:`VerificationRecord` comparing a left side with
a right side at one point s:

    EQ1          ∫ x^(-s-1) rho(x) dx             vs  -zeta(s)/s
    TELESCOPE    ∫ x^(-s-1) (rho(x) - rho(2x)) dx vs  (2^s - 1) zeta(s)/s
    INTERCHANGE  sine transform, quadrature       vs  closed form
    SERIES_SUM   term-wise series, summed         vs  (2^s - 1) zeta(s)/s
    FUNC_EQ      zeta(s)                          vs  chi(s) zeta(1-s)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from zmv.errors import NonConvergence, PoleError, VerificationError
from zmv.mellin_engine import (
    STRIP_MARGIN,
    TruncationConfig,
    _require_strip,
    mellin_rho,
    mellin_sin_numeric,
    mellin_telescoped,
)
from zmv.specfun import (
    BERNOULLI_EVEN,
    GAMMA_POLE_RADIUS,
    gamma,
    pow_real_complex,
    rgamma,
    sinpi,
    zeta,
)

UNFACTORED_TERMS = 64
DEFAULT_EXCLUSION_RADIUS = 0.1
ETA_HAZARD_RANGE = 5
_LN2 = math.log(2.0)


class Step(str, Enum):
    EQ1 = "EQ1"
    TELESCOPE = "TELESCOPE"
    INTERCHANGE = "INTERCHANGE"
    SERIES_SUM = "SERIES_SUM"
    FUNC_EQ = "FUNC_EQ"


@dataclass(frozen=True)
class TolerancePolicy:
    """A record passes when either tolerance is met."""

    abs_tol: float = 1e-8
    rel_tol: float = 1e-9

    def accepts(self, abs_err: float, rel_err: float) -> bool:
        return abs_err <= self.abs_tol or rel_err <= self.rel_tol


DEFAULT_POLICY = TolerancePolicy()


@dataclass(frozen=True)
class VerificationRecord:
    step: Step
    s: complex
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    n_terms: int
    passed: bool
    converged: bool = True
    note: str = ""

    @classmethod
    def compare(cls, step: Step, s: complex, lhs: complex, rhs: complex, n_terms: int,
                policy: TolerancePolicy = DEFAULT_POLICY, converged: bool = True,
                note: str = "") -> VerificationRecord:
        abs_err = abs(lhs - rhs)
        rel_err = abs_err / max(abs(lhs), abs(rhs), 1.0)
        return cls(step, complex(s), complex(lhs), complex(rhs), abs_err, rel_err, n_terms,
                   converged and policy.accepts(abs_err, rel_err), converged, note)

    @classmethod
    def failed(cls, step: Step, s: complex, exc: Exception, converged: bool = False) -> VerificationRecord:
        nan = complex(math.nan, math.nan)
        return cls(step, complex(s), nan, nan, math.inf, math.inf, 0, False, converged,
                   f"{type(exc).__name__}: {exc}")


@dataclass(frozen=True)
class GridSpec:
    """Rectangle of sample points; row-major with the real axis outer."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    re_steps: int = 1
    im_steps: int = 1
    exclusion_radius: float = DEFAULT_EXCLUSION_RADIUS

    def __post_init__(self) -> None:
        if self.re_steps < 1 or self.im_steps < 1:
            raise ValueError("steps must be >= 1")
        # a degenerate axis is allowed only when it carries a single point
        if self.re_min > self.re_max or (self.re_min == self.re_max and self.re_steps > 1):
            raise ValueError("need re_min < re_max (or equal with one step)")
        if self.im_min > self.im_max or (self.im_min == self.im_max and self.im_steps > 1):
            raise ValueError("need im_min < im_max (or equal with one step)")
        if self.exclusion_radius < 0:
            raise ValueError("exclusion_radius must be non-negative")

    def points(self) -> Iterator[complex]:
        for x in np.linspace(self.re_min, self.re_max, self.re_steps):
            for y in np.linspace(self.im_min, self.im_max, self.im_steps):
                yield complex(float(x), float(y))

    def __len__(self) -> int:
        return self.re_steps * self.im_steps


def in_strip(s: complex, lo: float, hi: float) -> bool:
    return lo + STRIP_MARGIN <= s.real <= hi - STRIP_MARGIN


def hazards(s: complex) -> list[complex]:
    """Singular or ill-conditioned points near s that verification steers around.

    s = 1 (zeta pole), s = 0 (pole of zeta(1-s)), zeros 2 pi i k / ln 2 of
    2^s - 1, and zeros 1 + 2 pi i k / ln 2 of the eta prefactor (k != 0,
    |k| <= 5).  Positive odd integers are poles of chi, and zeta(1-s) has a
    trivial zero there; both forms of chi break down.
    """
    pts = [1.0 + 0j, 0j]
    for k in range(1, ETA_HAZARD_RANGE + 1):
        for sign in (1, -1):
            y = sign * 2.0 * math.pi * k / _LN2
            pts.append(complex(0.0, y))
            pts.append(complex(1.0, y))
    nearest_odd = 2 * round((s.real - 1.0) / 2.0) + 1
    if nearest_odd >= 1:
        pts.append(complex(nearest_odd, 0.0))
    return pts


def excluded(s: complex, radius: float) -> bool:
    return any(abs(s - h) < radius for h in hazards(s))


# --- closed forms ---------------------------------------------------------


def mellin_sin_closed(s: complex, a: float) -> complex:
    """∫_0^inf x^(-s-1) sin(a x) dx = -Gamma(-s) sin(pi s/2) a^s, for -1 < Re s < 0."""
    s = complex(s)
    _require_strip(s, -1.0, 0.0)
    if not a > 0:
        raise ValueError("a must be positive")
    return -gamma(-s) * sinpi(s / 2.0) * pow_real_complex(a, s)


def chi_product(s: complex) -> complex:
    """2^s pi^(s-1) sin(pi s/2) Gamma(1-s); singular at s = 1, 2, 3, ..."""
    s = complex(s)
    return (pow_real_complex(2.0, s) * pow_real_complex(math.pi, s - 1.0)
            * sinpi(s / 2.0) * gamma(1.0 - s))


def chi(s: complex) -> complex:
    """chi(s) with zeta(s) = chi(s) zeta(1-s), via pi^(s-1/2) Gamma((1-s)/2) / Gamma(s/2).

    The symmetric form is finite at the even integers where the product form
    meets 0 * inf; both forms are singular at the positive odd integers.
    """
    s = complex(s)
    k = round(s.real)
    if k >= 1 and k % 2 == 1 and abs(s - k) <= GAMMA_POLE_RADIUS:
        raise PoleError(f"chi has a pole at s={k}")
    return pow_real_complex(math.pi, s - 0.5) * gamma((1.0 - s) / 2.0) * rgamma(s / 2.0)


def telescoped_target(s: complex) -> complex:
    """(2^s - 1) zeta(s) / s from the oracle."""
    s = complex(s)
    return (pow_real_complex(2.0, s) - 1.0) * zeta(s) / s


def series_constant(s: complex) -> complex:
    """-Gamma(-s) sin(pi s/2) pi^(s-1) (4^s - 2^s): the factor multiplying sum n^(s-1)."""
    return (-gamma(-s) * sinpi(s / 2.0) * pow_real_complex(math.pi, s - 1.0)
            * (pow_real_complex(4.0, s) - pow_real_complex(2.0, s)))


def _power_sum(s: complex, lo: int, hi: int, block: int = 1 << 16) -> complex:
    """sum_{n=lo}^{hi} n^(s-1), ascending, fsum per block then fsum of blocks."""
    w = s - 1.0
    re_blocks, im_blocks = [], []
    for start in range(lo, hi + 1, block):
        n = np.arange(start, min(start + block, hi + 1), dtype=np.float64)
        mag = np.power(n, w.real)
        ph = w.imag * np.log(n)
        re_blocks.append(math.fsum((mag * np.cos(ph)).tolist()))
        im_blocks.append(math.fsum((mag * np.sin(ph)).tolist()))
    return complex(math.fsum(re_blocks), math.fsum(im_blocks))


def series_rhs_partial(s: complex, n_terms: int) -> complex:
    """sum_{n<=N} (1/(n pi)) [I(s, 4 n pi) - I(s, 2 n pi)], I the closed sine transform.

    The first 64 terms call :func:`mellin_sin_closed` directly; beyond that the
    identical factored form constant * n^(s-1) is used.
    """
    s = complex(s)
    _require_strip(s, -1.0, 0.0)
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    head_n = min(n_terms, UNFACTORED_TERMS)
    re_parts, im_parts = [], []
    for n in range(1, head_n + 1):
        t = (mellin_sin_closed(s, 4.0 * n * math.pi)
             - mellin_sin_closed(s, 2.0 * n * math.pi)) / (n * math.pi)
        re_parts.append(t.real)
        im_parts.append(t.imag)
    total = complex(math.fsum(re_parts), math.fsum(im_parts))
    if n_terms > UNFACTORED_TERMS:
        total += series_constant(s) * _power_sum(s, UNFACTORED_TERMS + 1, n_terms)
    return total


def power_sum_tail(s: complex, n_terms: int, corrections: int = 4) -> complex:
    """Asymptotic value of sum_{n>N} n^(s-1) for Re s < 0 (Euler-Maclaurin on the tail).

    -N^s/s - N^(s-1)/2 - sum_k B_2k/(2k)! (s-1)(s-2)...(s-2k+1) N^(s-2k).
    """
    s = complex(s)
    big_n = float(n_terms)
    n_s = pow_real_complex(big_n, s)
    total = -n_s / s - 0.5 * n_s / big_n
    poch = s - 1.0
    power = n_s / (big_n * big_n)
    for k in range(corrections):
        c = float(BERNOULLI_EVEN[k] / math.factorial(2 * k + 2))
        total -= c * poch * power
        poch *= (s - 2 * k - 2) * (s - 2 * k - 3)
        power /= big_n * big_n
    return total


def series_rhs_limit(s: complex, n_terms: int) -> complex:
    """series_rhs_partial plus the factored constant times the analytic tail past N."""
    s = complex(s)
    return series_rhs_partial(s, n_terms) + series_constant(s) * power_sum_tail(s, n_terms)


# --- records --------------------------------------------------------------


def fe_residual(s: complex, policy: TolerancePolicy = DEFAULT_POLICY) -> VerificationRecord:
    """zeta(s) against chi(s) zeta(1-s), both from the Euler-Maclaurin oracle."""
    s = complex(s)
    lhs = zeta(s)
    rhs = chi(s) * zeta(1.0 - s)
    return VerificationRecord.compare(Step.FUNC_EQ, s, lhs, rhs, 0, policy)


def eq1_record(s: complex, cfg: TruncationConfig, policy: TolerancePolicy = DEFAULT_POLICY) -> VerificationRecord:
    out = mellin_rho(s, cfg, strict=False)
    return VerificationRecord.compare(Step.EQ1, s, out.value, -zeta(s) / s, out.work, policy,
                                      out.converged)


def telescope_record(s: complex, cfg: TruncationConfig,
                     policy: TolerancePolicy = DEFAULT_POLICY) -> VerificationRecord:
    out = mellin_telescoped(s, cfg, strict=False)
    return VerificationRecord.compare(Step.TELESCOPE, s, out.value, telescoped_target(s), out.work,
                                      policy, out.converged)


def interchange_records(s: complex, cfg: TruncationConfig,
                        policy: TolerancePolicy = DEFAULT_POLICY,
                        freqs: tuple[float, ...] = (2.0 * math.pi, 4.0 * math.pi)) -> list[VerificationRecord]:
    out = []
    for a in freqs:
        num = mellin_sin_numeric(s, a, cfg, strict=False)
        out.append(VerificationRecord.compare(
            Step.INTERCHANGE, s, num.value, mellin_sin_closed(s, a), num.work, policy,
            num.converged, note=f"a={a!r}"))
    return out


def series_record(s: complex, n_terms: int, policy: TolerancePolicy = DEFAULT_POLICY) -> VerificationRecord:
    return VerificationRecord.compare(Step.SERIES_SUM, s, series_rhs_limit(s, n_terms),
                                      telescoped_target(s), n_terms, policy)


def guarded(step: Step, s: complex, fn) -> list[VerificationRecord]:
    """Run a check; numerical failures become failed records."""
    try:
        res = fn()
    except VerificationError as exc:
        return [VerificationRecord.failed(step, s, exc, converged=not isinstance(exc, NonConvergence))]
    return res if isinstance(res, list) else [res]


def verify_chain(s: complex, cfg: TruncationConfig | None = None,
                 grid_policy: GridSpec | None = None,
                 policy: TolerancePolicy = DEFAULT_POLICY,
                 n_terms: int = 10_000) -> list[VerificationRecord]:
    """All proof-chain checks that apply at s.

    In 0 < Re s < 1: EQ1, TELESCOPE, FUNC_EQ.  In -1 < Re s < 0: INTERCHANGE
    (a = 2 pi and 4 pi), SERIES_SUM, FUNC_EQ.  Failures become records with
    pass = False instead of aborting.
    """
    s = complex(s)
    cfg = cfg or TruncationConfig()
    radius = grid_policy.exclusion_radius if grid_policy else DEFAULT_EXCLUSION_RADIUS
    if excluded(s, radius):
        raise ValueError(f"s={s} lies inside an exclusion disk")
    records: list[VerificationRecord] = []
    if in_strip(s, 0.0, 1.0):
        records += guarded(Step.EQ1, s, lambda: eq1_record(s, cfg, policy))
        records += guarded(Step.TELESCOPE, s, lambda: telescope_record(s, cfg, policy))
    elif in_strip(s, -1.0, 0.0):
        records += guarded(Step.INTERCHANGE, s, lambda: interchange_records(s, cfg, policy))
        records += guarded(Step.SERIES_SUM, s, lambda: series_record(s, n_terms, policy))
    else:
        raise ValueError(f"Re s = {s.real:g} is in neither strip (with margin {STRIP_MARGIN})")
    records += guarded(Step.FUNC_EQ, s, lambda: fe_residual(s, policy))
    return records
