"""Complex special functions used as references by the rest of the package.

Everything here works on plain Python ``complex`` values in double precision.
The zeta oracle is an Euler-Maclaurin summation so that it is valid on the
whole plane minus ``s = 1`` without appealing to the functional equation; a
second oracle goes through the alternating (eta) series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from zmv.errors import DivisionHazard, NonConvergence, PoleError

EPS = 2.220446049250313e-16

# Pole guard radii; module-level constants, treat as read-only.
GAMMA_POLE_RADIUS = 1e-9
ZETA_POLE_RADIUS = 1e-3
ETA_FACTOR_RADIUS = 1e-6

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficient set, as printed
# in Numerical Recipes 3rd ed. and Wikipedia "Lanczos approximation").
LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Even-index Bernoulli numbers B_2 .. B_60 as exact rationals (numerator,
# denominator), from the standard table (OEIS A000367 / A002445).
_BERNOULLI_EVEN = (
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
    (2577687858367, 6),
    (-26315271553053477373, 1919190),
    (2929993913841559, 6),
    (-261082718496449122051, 13530),
    (1520097643918070802691, 1806),
    (-27833269579301024235023, 690),
    (596451111593912163277961, 282),
    (-5609403368997817686249127547, 46410),
    (495057205241079648212477525, 66),
    (-801165718135489957347924991853, 1590),
    (29149963634884862421418123812691, 798),
    (-2479392929313226753685415739663229, 870),
    (84483613348880041862046775994036021, 354),
    (-1215233140483755572040304994079820246041491, 56786730),
)
BERNOULLI_EVEN = tuple(Fraction(p, q) for p, q in _BERNOULLI_EVEN)
# B_2k / (2k)!, converted once.
_EM_COEFFS = tuple(
    float(b / math.factorial(2 * (k + 1))) for k, b in enumerate(BERNOULLI_EVEN)
)
_LOG_EM_COEFFS = tuple(math.log(abs(c)) for c in _EM_COEFFS)


@dataclass(frozen=True)
class OracleConfig:
    """Euler-Maclaurin settings.

    ``pivot_terms`` is the direct-sum cutoff N; ``None`` picks N per point by
    balancing the predicted truncation error against the rounding error of
    the direct sum.  ``target_tol`` is measured against ``max(1, |zeta(s)|)``.
    """

    pivot_terms: int | None = None
    correction_terms: int = len(BERNOULLI_EVEN) - 1
    target_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.pivot_terms is not None and self.pivot_terms < 2:
            raise ValueError("pivot_terms must be >= 2")
        if not 0 <= self.correction_terms < len(BERNOULLI_EVEN):
            raise ValueError(
                f"correction_terms must be in [0, {len(BERNOULLI_EVEN) - 1}]"
            )
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")


DEFAULT_ORACLE = OracleConfig()


def _check_finite(z: complex, what: str) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise OverflowError(f"{what} is not finite")
    return z


def sincospi(x: float) -> tuple[float, float]:
    """Return ``(sin(pi x), cos(pi x))`` with exact zeros at integers and half-integers."""
    r = math.fmod(x, 2.0)  # exact
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    sign = 1.0
    if r < 0.0:
        r, sign = -r, -1.0
    # r in [0, 1]; fold onto [0, 1/2] so the argument stays exact near zeros
    if r > 0.5:
        q = 1.0 - r
        s, c = math.sin(math.pi * q), -math.cos(math.pi * q)
    else:
        s, c = math.sin(math.pi * r), math.cos(math.pi * r)
    if r == 0.5:
        c = 0.0
    elif r == 0.0 or r == 1.0:
        s = 0.0
    return sign * s, c


def sinpi(z: complex) -> complex:
    """sin(pi z) for complex z, with the real argument reduced exactly."""
    z = complex(z)
    s, c = sincospi(z.real)
    y = math.pi * z.imag
    return complex(s * math.cosh(y), c * math.sinh(y))


def _near_nonpositive_integer(z: complex, radius: float) -> bool:
    k = round(z.real)
    return k <= 0 and abs(z - k) <= radius


def _lanczos(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    x = LANCZOS_COEFFS[0]
    for i in range(1, len(LANCZOS_COEFFS)):
        x += LANCZOS_COEFFS[i] / (z + i)
    t = z + LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def gamma(z: complex) -> complex:
    """Gamma function, Lanczos approximation plus reflection for Re z < 1/2.

    >>> round(gamma(5).real, 10)
    24.0
    """
    z = complex(z)
    if _near_nonpositive_integer(z, GAMMA_POLE_RADIUS):
        raise PoleError(f"gamma has a pole near {z}")
    if z.real < 0.5:
        return _check_finite(math.pi / (sinpi(z) * _lanczos(1.0 - z)), "gamma")
    return _check_finite(_lanczos(z), "gamma")


def rgamma(z: complex) -> complex:
    """1/Gamma(z); entire, exactly zero at the non-positive integers."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        return 0j
    if z.real < 0.5:
        return sinpi(z) * _lanczos(1.0 - z) / math.pi
    return 1.0 / _lanczos(z)


def pow_real_complex(x: float, w: complex) -> complex:
    """exp(w ln x) on the principal branch, for x > 0."""
    if not x > 0:
        raise ValueError("x must be positive")
    w = complex(w)
    mag = math.pow(x, w.real)
    if w.imag == 0.0:
        return complex(mag, 0.0)
    ph = w.imag * math.log(x)
    return complex(mag * math.cos(ph), mag * math.sin(ph))


def _log_correction_magnitudes(s: complex, n: int, count: int) -> list[float]:
    """log of |B_2k/(2k)! * s(s+1)...(s+2k-2) * n^(1-s-2k)| for k = 1..count."""
    sig = s.real
    ln_n = math.log(n)
    out = []
    a = abs(s)
    lp = math.log(a) if a > 0 else -math.inf
    for k in range(count):
        out.append(_LOG_EM_COEFFS[k] + lp + (-sig - 2 * k - 1) * ln_n)
        a1, a2 = abs(s + 2 * k + 1), abs(s + 2 * k + 2)
        if a1 == 0.0 or a2 == 0.0:
            # rising factorial hits zero: the series terminates
            out.extend([-math.inf] * (count - k - 1))
            break
        lp += math.log(a1) + math.log(a2)
    return out


def choose_pivot(s: complex, correction_terms: int = DEFAULT_ORACLE.correction_terms) -> int:
    """Direct-sum cutoff minimising predicted truncation plus rounding error."""
    sig = s.real
    best_n, best_est = 2, math.inf
    direct = 1.0  # running sum of |n^-s| for n < N
    for n in range(2, 160):
        logs = _log_correction_magnitudes(s, n, correction_terms + 1)
        trunc = math.exp(min(logs))
        scale = (
            direct
            + n ** (1.0 - sig) / max(abs(s - 1.0), ZETA_POLE_RADIUS)
            + n ** (-sig)
        )
        est = trunc + 0.5 * EPS * scale
        if est < best_est:
            best_n, best_est = n, est
        direct += n ** (-sig)
    return best_n


def zeta_with_error(s: complex, cfg: OracleConfig | None = None) -> tuple[complex, float]:
    """Euler-Maclaurin zeta(s) and its error estimate (first omitted correction)."""
    s = complex(s)
    if abs(s - 1.0) <= ZETA_POLE_RADIUS:
        raise PoleError(f"zeta has a pole at s=1 (s={s})")
    cfg = DEFAULT_ORACLE if cfg is None else cfg
    n_piv = cfg.pivot_terms or choose_pivot(s, cfg.correction_terms)

    re_parts, im_parts = [], []
    for n in range(1, n_piv):
        t = pow_real_complex(n, -s)
        re_parts.append(t.real)
        im_parts.append(t.imag)
    n_s = pow_real_complex(n_piv, -s)
    head = n_piv * n_s / (s - 1.0) + 0.5 * n_s
    re_parts.append(head.real)
    im_parts.append(head.imag)
    base = complex(math.fsum(re_parts), math.fsum(im_parts))

    # corrections B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(1-s-2k)
    poch = s
    power = n_s / n_piv
    inv_n2 = 1.0 / (n_piv * n_piv)
    corr = 0j
    prev = math.inf
    omitted = 0.0
    for k in range(cfg.correction_terms + 1):
        term = _EM_COEFFS[k] * poch * power
        mag = abs(term)
        if k == cfg.correction_terms or mag >= prev:
            omitted = mag
            break
        corr += term
        prev = mag
        if mag <= EPS * max(1.0, abs(base)) * 1e-2:
            omitted = 0.0
            break
        poch *= (s + 2 * k + 1) * (s + 2 * k + 2)
        power *= inv_n2
    value = base + corr
    if omitted > cfg.target_tol * max(1.0, abs(value)):
        raise NonConvergence(
            f"Euler-Maclaurin correction series did not reach {cfg.target_tol:g} "
            f"at s={s} (last term {omitted:.3g}, N={n_piv})"
        )
    return _check_finite(value, "zeta"), omitted


def zeta(s: complex, cfg: OracleConfig | None = None) -> complex:
    """Riemann zeta by Euler-Maclaurin summation, valid for all s != 1."""
    return zeta_with_error(s, cfg)[0]


def _cvz_weights(n: int) -> list[float]:
    # Cohen-Villegas-Zagier, Algorithm 1: Chebyshev-based weights
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b, c = -1.0, -d
    out = []
    for k in range(n):
        c = b - c
        out.append(c)
        b = b * (k + n) * (k - n) / ((k + 0.5) * (k + 1))
    return [w / d for w in out]


def _eta_terms(s: complex, n: int) -> complex:
    weights = _cvz_weights(n)
    re_parts, im_parts = [], []
    for k, w in enumerate(weights):
        # w already carries the alternating sign
        t = w * pow_real_complex(k + 1, -s)
        re_parts.append(t.real)
        im_parts.append(t.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def eta(s: complex) -> complex:
    """Dirichlet eta, sum (-1)^(n-1) n^-s, by accelerated alternating summation.

    Valid for Re s > -2.  The number of accelerated terms grows with |Im s|
    to absorb the exp(pi |t| / 2) growth in the acceleration error bound.
    """
    s = complex(s)
    if not s.real > -2.0:
        raise ValueError("eta requires Re s > -2")
    n = 24 + int(math.ceil(abs(s.imag) * math.pi / 2.0 / math.log(3.0 + math.sqrt(8.0))))
    a = _eta_terms(s, n)
    b = _eta_terms(s, n + 8)
    if abs(a - b) > 1e-11 * max(1.0, abs(b)):
        raise NonConvergence(f"eta acceleration stalled at s={s} (|diff|={abs(a - b):.3g})")
    return _check_finite(b, "eta")


def zeta_via_eta(s: complex) -> complex:
    """zeta(s) = eta(s) / (1 - 2^(1-s)), the second oracle."""
    s = complex(s)
    if abs(s - 1.0) <= ZETA_POLE_RADIUS:
        raise PoleError(f"zeta has a pole at s=1 (s={s})")
    k = round(s.imag * math.log(2.0) / (2.0 * math.pi))
    zero = complex(1.0, 2.0 * math.pi * k / math.log(2.0))
    if abs(s - zero) <= ETA_FACTOR_RADIUS:
        raise DivisionHazard(f"1 - 2^(1-s) vanishes near s={zero}")
    return eta(s) / (1.0 - pow_real_complex(2.0, 1.0 - s))
