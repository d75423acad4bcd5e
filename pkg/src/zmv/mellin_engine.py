"""Mellin transforms on (0, inf) of the sawtooth and of sin(a x).

``mellin_rho`` and ``mellin_telescoped`` integrate piecewise-linear sawtooth
integrands exactly on each unit (or half-unit) interval and close the
remaining tail with the periodic-Bernoulli expansion of the zero-mean part.
``mellin_sin_numeric`` is genuine quadrature: a double-exponential head over
the first half period (where the integrand behaves like x^(-s)) followed by
Gauss-Legendre lobes summed with iterated averaging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from zmv.errors import NonConvergence
from zmv.specfun import BERNOULLI_EVEN, EPS, pow_real_complex

STRIP_MARGIN = 0.02

_BERN_OVER_FACT = tuple(
    float(b / math.factorial(2 * (k + 1))) for k, b in enumerate(BERNOULLI_EVEN)
)


class TailStrategy(str, Enum):
    MEAN_SUBTRACTION = "mean_subtraction"
    RAW_CUTOFF = "raw_cutoff"


@dataclass(frozen=True)
class TruncationConfig:
    """How far the interval sums and lobe sums may run.

    ``max_intervals`` is the point N* past which the sawtooth integrals switch
    to the tail formula; for the sine transform it caps the number of
    half-period lobes.
    """

    max_intervals: int = 64
    target_tol: float = 1e-10
    tail_strategy: TailStrategy = TailStrategy.MEAN_SUBTRACTION

    def __post_init__(self) -> None:
        if self.max_intervals < 10:
            raise ValueError("max_intervals must be >= 10")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        object.__setattr__(self, "tail_strategy", TailStrategy(self.tail_strategy))


@dataclass(frozen=True)
class QuadratureOutcome:
    value: complex
    abs_error_estimate: float
    work: int
    converged: bool


def _require_strip(s: complex, lo: float, hi: float) -> None:
    if not (lo + STRIP_MARGIN <= s.real <= hi - STRIP_MARGIN):
        raise ValueError(
            f"Re s = {s.real:g} outside ({lo:g}, {hi:g}) with margin {STRIP_MARGIN}"
        )


def _finish(value: complex, est: float, work: int, cfg: TruncationConfig,
            strict: bool, what: str) -> QuadratureOutcome:
    out = QuadratureOutcome(value, est, work, est <= cfg.target_tol)
    if strict and not out.converged:
        exc = NonConvergence(
            f"{what}: error estimate {est:.3g} above target {cfg.target_tol:g} "
            f"after {work} steps"
        )
        exc.outcome = out
        raise exc
    return out


class _Acc:
    """fsum-backed complex accumulator that also tracks summand magnitudes."""

    def __init__(self) -> None:
        self.re: list[float] = []
        self.im: list[float] = []
        self.scale = 0.0

    def add(self, z: complex) -> None:
        self.re.append(z.real)
        self.im.append(z.imag)
        self.scale += abs(z)

    @property
    def value(self) -> complex:
        return complex(math.fsum(self.re), math.fsum(self.im))


def _sawtooth_tail(s: complex, start: int, tol: float) -> tuple[complex, float]:
    """∫_start^inf (rho(x) - 1/2) x^(-s-1) dx by the periodic-Bernoulli expansion.

    Returns (value, first omitted term).  Terms are
    -B_2j/(2j)! (s+1)(s+2)...(s+2j-2) start^(1-s-2j).
    """
    power = pow_real_complex(start, -s - 1.0)
    inv2 = 1.0 / (start * start)
    poch = 1.0 + 0j
    total = 0j
    prev = math.inf
    for j, c in enumerate(_BERN_OVER_FACT):
        term = -c * poch * power
        mag = abs(term)
        if mag >= prev:
            return total, prev
        total += term
        if mag <= tol * 1e-3:
            return total, mag
        prev = mag
        poch *= (s + 2 * j + 1) * (s + 2 * j + 2)
        power *= inv2
    return total, prev


def _sawtooth_piece(s: complex, a: float, b: float, c: float, acc: _Acc) -> None:
    """Add ∫_a^b (x - c) x^(-s-1) dx in closed form (a > 0)."""
    pa, pb = pow_real_complex(a, -s), pow_real_complex(b, -s)
    acc.add((b * pb - a * pa) / (1.0 - s))
    acc.add(c * (pb - pa) / s)


def _tail_and_estimate(s: complex, acc: _Acc, n_star: int, cfg: TruncationConfig,
                       mean_coeff: float, dilations: tuple[tuple[float, int], ...]) -> float:
    """Add the tail beyond n_star to acc; return the truncation estimate."""
    if cfg.tail_strategy is TailStrategy.RAW_CUTOFF:
        # dropped: mean part plus oscillating part
        dropped = abs(mean_coeff * pow_real_complex(n_star, -s) / s)
        return dropped + abs(s + 1.0) * n_star ** (-s.real - 1.0) / 12.0
    if mean_coeff:
        acc.add(mean_coeff * pow_real_complex(n_star, -s) / s)
    est = 0.0
    for weight, start in dilations:
        w = complex(weight)
        tail, omitted = _sawtooth_tail(s, start, cfg.target_tol)
        acc.add(w * tail)
        est += abs(w) * omitted
    return est


def _rounding(acc: _Acc) -> float:
    return 8.0 * EPS * acc.scale


def mellin_rho(s: complex, cfg: TruncationConfig | None = None, *,
               strict: bool = True) -> QuadratureOutcome:
    """∫_0^inf x^(-s-1) rho(x) dx for 0 < Re s < 1, which equals -zeta(s)/s."""
    s = complex(s)
    cfg = cfg or TruncationConfig()
    _require_strip(s, 0.0, 1.0)
    n_star = cfg.max_intervals
    acc = _Acc()
    acc.add(1.0 / (1.0 - s))  # [0, 1]: rho(x) = x
    for n in range(1, n_star):
        _sawtooth_piece(s, n, n + 1, n, acc)
    trunc = _tail_and_estimate(s, acc, n_star, cfg, 0.5, ((1.0, n_star),))
    return _finish(acc.value, trunc + _rounding(acc), n_star, cfg, strict, "mellin_rho")


def mellin_telescoped(s: complex, cfg: TruncationConfig | None = None, *,
                      strict: bool = True) -> QuadratureOutcome:
    """∫_0^inf x^(-s-1) (rho(x) - rho(2x)) dx for 0 < Re s < 1.

    On [k/2, (k+1)/2] the integrand is (ceil(k/2) - x) x^(-s-1).  Past N*
    the two sawtooth tails combine as R(N*) - 2^s R(2N*).
    """
    s = complex(s)
    cfg = cfg or TruncationConfig()
    _require_strip(s, 0.0, 1.0)
    n_star = cfg.max_intervals
    acc = _Acc()
    acc.add(-pow_real_complex(0.5, 1.0 - s) / (1.0 - s))  # [0, 1/2]: -x
    for k in range(1, 2 * n_star):
        c = float((k + 1) // 2)
        # the piece integrates (c - x): flip the sign of (x - c)
        piece = _Acc()
        _sawtooth_piece(s, k / 2.0, (k + 1) / 2.0, c, piece)
        for z in (complex(r, i) for r, i in zip(piece.re, piece.im)):
            acc.add(-z)
    two_s = pow_real_complex(2.0, s)
    trunc = _tail_and_estimate(
        s, acc, n_star, cfg, 0.0, ((1.0, n_star), (-two_s, 2 * n_star))
    )
    return _finish(acc.value, trunc + _rounding(acc), 2 * n_star, cfg, strict,
                   "mellin_telescoped")


# --- oscillatory sine transform -------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)
_GL_U = 0.5 * (_GL_NODES + 1.0)
_GL_W = 0.5 * _GL_WEIGHTS
_GL_NODES_LO, _GL_WEIGHTS_LO = np.polynomial.legendre.leggauss(32)
_GL_U_LO = 0.5 * (_GL_NODES_LO + 1.0)
_GL_W_LO = 0.5 * _GL_WEIGHTS_LO


def _cpow(x: np.ndarray, w: complex) -> np.ndarray:
    return np.exp(w * np.log(x))


def _head_integral(p: complex, tol: float) -> tuple[complex, float, int]:
    """∫_0^1 u^p sin(pi u) du by tanh-sinh quadrature with step halving.

    The map u = 1/(1 + exp(-pi sinh t)) keeps nodes near 0 exact, which is
    where the integrand carries its u^(p+1) branch behaviour.
    """
    t_max = 4.0
    prev = None
    h = 0.5
    evals = 0
    while True:
        t = np.arange(-t_max, t_max + h / 2, h)
        e = np.exp(-math.pi * np.sinh(t))
        u = 1.0 / (1.0 + e)
        one_minus_u = e / (1.0 + e)
        du = math.pi * np.cosh(t) * e / (1.0 + e) ** 2
        f = _cpow(u, p) * np.sin(math.pi * np.minimum(u, one_minus_u))
        val = complex(h * np.sum(f * du))
        evals = t.size
        if prev is not None:
            err = abs(val - prev)
            if err < tol * 1e-2 or h < 1e-3:
                return val, max(err, 4.0 * EPS * abs(val)), evals
        prev = val
        h /= 2.0


def _lobe_integrals(p: complex, k0: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """∫_0^1 (k+u)^p sin(pi u) du for k = k0 .. k0+count-1 (two node counts)."""
    k = np.arange(k0, k0 + count, dtype=np.float64)[:, None]
    hi = (np.exp(p * np.log(k + _GL_U)) * np.sin(math.pi * _GL_U)) @ _GL_W
    lo = (np.exp(p * np.log(k + _GL_U_LO)) * np.sin(math.pi * _GL_U_LO)) @ _GL_W_LO
    return hi, lo


def _binomial_average(sums: list[complex], depth: int) -> complex:
    """``depth``-fold iterated pairwise averaging of the last depth+1 partial sums."""
    row = sums[-(depth + 1):]
    for _ in range(depth):
        row = [(row[i] + row[i + 1]) / 2.0 for i in range(len(row) - 1)]
    return row[0]


def mellin_sin_numeric(s: complex, a: float, cfg: TruncationConfig | None = None, *,
                       strict: bool = True) -> QuadratureOutcome:
    """∫_0^inf x^(-s-1) sin(a x) dx for -1 < Re s < 0, by quadrature.

    With x = (k + u) pi / a the integral becomes
    (pi/a)^(-s) [∫_0^1 u^p sin(pi u) du + sum_k (-1)^k ∫_0^1 (k+u)^p sin(pi u) du],
    p = -s - 1.  The alternating lobe series is accelerated by iterated
    averaging; stop once successive estimates differ by < tol/2 twice.
    """
    s = complex(s)
    cfg = cfg or TruncationConfig()
    _require_strip(s, -1.0, 0.0)
    if not a > 0:
        raise ValueError("a must be positive")
    p = -s - 1.0
    scale = pow_real_complex(math.pi / a, -s)
    tol = cfg.target_tol / max(abs(scale), 1e-300)

    head, head_err, _ = _head_integral(p, tol)
    max_lobes = max(cfg.max_intervals, 16)
    hi, lo = _lobe_integrals(p, 1, max_lobes)
    signs = np.where(np.arange(1, max_lobes + 1) % 2 == 1, -1.0, 1.0)
    lobes = signs * hi
    lobe_err = np.abs(hi - lo)

    sums = []
    running = head
    estimates = []
    hits = 0
    delta = math.inf
    used = max_lobes
    for k in range(max_lobes):
        running += complex(lobes[k])
        sums.append(running)
        if len(sums) < 4:
            continue
        depth = len(sums) // 2
        estimates.append(_binomial_average(sums, depth))
        if len(estimates) >= 2:
            delta = abs(estimates[-1] - estimates[-2])
            hits = hits + 1 if delta < tol / 2.0 else 0
            if hits >= 2:
                used = k + 1
                break
    best = estimates[-1]
    quad_err = head_err + float(np.sum(lobe_err[:used]))
    est = abs(scale) * (delta + quad_err + 8.0 * EPS * (abs(head) + abs(best)))
    return _finish(scale * best, est, used, cfg, strict, "mellin_sin_numeric")


def with_tolerance(cfg: TruncationConfig, target_tol: float) -> TruncationConfig:
    return replace(cfg, target_tol=target_tol)
