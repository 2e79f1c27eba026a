"""Log-domain evidence that a flat 1-form has no flat antiderivative.

The function phi(x) = sin^2(1/x) e^{-1/x^2} vanishes to infinite order
at 0 and on the null sequence 1/(k*pi).  Any antiderivative T of
tau = e^{-1/phi} with T(0) = 0 that lived in the ideal of functions
flat on the zero set would vanish at every 1/n; but tau > 0 off the
zeros, so T(1/n) is a strictly positive integral.  This module
computes certified-positive lower bounds for those integrals.

Near 1/3 the integrand is of order e^{-400000}: no fixed-exponent
binary format can represent it, which is why everything here is a
(sign, log magnitude) pair at 200-bit-or-better precision.  The bounds
are numerical evidence with a wide margin, not a formal proof: the
per-cell minimum is taken over sampled points and discounted by the
observed local variation, and floating-point rounding is tracked as an
operation count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

DEFAULT_PRECISION = 200
DEFAULT_GRID = 1024
MARGIN_FACTOR = 10


@dataclass(frozen=True)
class LogValue:
    """A nonnegative real held as (sign, log magnitude, operation count).

    ``ops`` counts the floating operations that produced the value;
    each is correct to about one unit in the last place, so the
    accumulated relative error is bounded by ``ops * 2^(1-bits)``.
    """

    sign: str  # "zero" | "positive"
    log: object = None  # mpf when positive
    ops: int = 0

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(sign="zero")

    @classmethod
    def from_log(cls, log, ops: int = 1) -> "LogValue":
        return cls(sign="positive", log=log, ops=ops)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.sign == "zero":
            return other
        if other.sign == "zero":
            return self
        hi, lo = (self, other) if self.log >= other.log else (other, self)
        log = hi.log + mpmath.log1p(mpmath.exp(lo.log - hi.log))
        return LogValue(sign="positive", log=log, ops=self.ops + other.ops + 1)

    def scaled(self, log_factor) -> "LogValue":
        """Multiply by e^log_factor (exact sign, one tracked operation)."""
        if self.sign == "zero":
            return self
        return LogValue(
            sign="positive", log=self.log + log_factor, ops=self.ops + 1
        )

    def relative_error_bound(self, bits: int):
        return self.ops * mpmath.mpf(2) ** (1 - bits)


def phi_eval(x, precision_bits: int = DEFAULT_PRECISION):
    """sin^2(1/x) e^{-1/x^2}, extended by zero at x = 0.

    An input indistinguishable from a null point 1/(k*pi) — closer
    than half the coarser of the calling and working precisions —
    returns exactly zero; this only ever lowers the computed integral
    bounds.
    """
    tol_bits = min(precision_bits, mpmath.mp.prec) // 2
    with mpmath.workprec(precision_bits):
        x = mpmath.mpf(x)
        if x == 0:
            return mpmath.mpf(0)
        u = 1 / (mpmath.pi * abs(x))
        k = mpmath.nint(u)
        if k >= 1 and abs(u - k) < mpmath.mpf(2) ** (-tol_bits):
            return mpmath.mpf(0)
        s = mpmath.sin(1 / x)
        return s * s * mpmath.exp(-1 / (x * x))


def tau_log_eval(x, precision_bits: int = DEFAULT_PRECISION) -> LogValue:
    """tau = e^{-1/phi} as a log-domain value; zero where phi vanishes."""
    with mpmath.workprec(precision_bits):
        p = phi_eval(x, precision_bits)
        if p == 0:
            return LogValue.zero()
        return LogValue.from_log(-1 / p, ops=8)


def _cell_bound(a, b, precision_bits) -> LogValue:
    """min sampled tau, discounted by the observed log variation, * width.

    If log tau swings by s across the samples, the conservative guess
    is that it can swing by s again inside the cell, so the sampled
    minimum is scaled by e^{-s}.  Any zero sample voids the cell.
    """
    samples = [
        tau_log_eval(t, precision_bits) for t in (a, (a + b) / 2, b)
    ]
    if any(s.sign == "zero" for s in samples):
        return LogValue.zero()
    logs = [s.log for s in samples]
    spread = max(logs) - min(logs)
    ops = sum(s.ops for s in samples) + 4
    return LogValue(
        sign="positive",
        log=min(logs) - spread + mpmath.log(b - a),
        ops=ops,
    )


def log_integral_lower_bound(
    a, b, grid: int = DEFAULT_GRID, precision_bits: int = DEFAULT_PRECISION
) -> LogValue:
    """A positive lower bound for the integral of tau over [a, b].

    The bound at the requested grid is compared with its dyadic
    coarsenings and the best is reported, so doubling the grid never
    loses ground.  A result of zero is valid but says nothing.
    """
    if not 0 <= a < b:
        raise ValueError("need 0 <= a < b")
    with mpmath.workprec(precision_bits):
        a = mpmath.mpf(a)
        b = mpmath.mpf(b)
        best = LogValue.zero()
        g = max(int(grid), 1)
        while True:
            total = LogValue.zero()
            width = (b - a) / g
            for i in range(g):
                total = total + _cell_bound(
                    a + i * width, a + (i + 1) * width, precision_bits
                )
            if total.sign == "positive" and (
                best.sign == "zero" or total.log > best.log
            ):
                best = total
            if g == 1:
                return best
            g //= 2


def zero_free_window(n: int):
    """An interval inside (0, 1/n] bounded away from the zeros of tau.

    The window runs from the largest null point 1/(k*pi) below 1/n up
    to 1/n itself, stepping a tenth of its length off the null end.
    1/n is never a null point, so only that end needs a margin.
    """
    k = 1
    while 1.0 / (k * math.pi) >= 1.0 / n:
        k += 1
    lo = 1.0 / (k * math.pi)
    hi = 1.0 / n
    return lo + (hi - lo) / 10, hi


@dataclass(frozen=True)
class WitnessEntry:
    n: int
    bound: LogValue
    verdict: str  # "positive" | "indeterminate"

    def format(self) -> str:
        if self.bound.sign == "positive":
            value = mpmath.nstr(self.bound.log, 10)
        else:
            value = "-inf"
        return f"n={self.n} logT_lower={value} verdict={self.verdict}"


@dataclass(frozen=True)
class WitnessReport:
    entries: tuple
    precision_bits: int
    grid: int

    def format(self) -> str:
        return "\n".join(e.format() for e in self.entries)

    def all_positive(self) -> bool:
        return all(e.verdict == "positive" for e in self.entries)


def nonexactness_witness(
    n_max: int,
    grid: int = DEFAULT_GRID,
    precision_bits: int = DEFAULT_PRECISION,
) -> WitnessReport:
    """Positive lower bounds for T(1/n) = integral of tau over (0, 1/n].

    The verdict is positive only when the bound is nonzero and exceeds
    its accumulated rounding error by a factor of at least ten.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    entries = []
    for n in range(1, n_max + 1):
        a, b = zero_free_window(n)
        bound = log_integral_lower_bound(a, b, grid, precision_bits)
        if (
            bound.sign == "positive"
            and bound.relative_error_bound(precision_bits) * MARGIN_FACTOR < 1
        ):
            verdict = "positive"
        else:
            verdict = "indeterminate"
        entries.append(WitnessEntry(n=n, bound=bound, verdict=verdict))
    return WitnessReport(
        entries=tuple(entries), precision_bits=precision_bits, grid=grid
    )


def float64_lower_bound(a: float, b: float, grid: int = DEFAULT_GRID) -> float:
    """The same cell scheme in plain binary64, for contrast.

    Past n = 2 the integrand is far below the smallest subnormal and
    every cell collapses to zero — the reason LogValue exists.
    """

    def tau(x):
        if x == 0:
            return 0.0
        s = math.sin(1 / x)
        p = s * s * math.exp(-1 / (x * x))
        if p == 0.0:
            return 0.0
        try:
            return math.exp(-1 / p)
        except OverflowError:
            return 0.0

    total = 0.0
    width = (b - a) / grid
    for i in range(grid):
        left = a + i * width
        right = left + width
        samples = [tau(left), tau((left + right) / 2), tau(right)]
        if 0.0 in samples:
            continue
        lo = min(samples)
        hi = max(samples)
        total += lo * (lo / hi) * width
    return total
