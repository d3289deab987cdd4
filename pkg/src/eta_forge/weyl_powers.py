"""Complex powers of the generators via the binomial series, and the
scalar machinery attached to them.

The power a^s is renormalized around the unit, a^s = (1 + (a-1))^s =
sum_k C(s, k) (a-1)^k with the generalized binomial coefficient
C(s, k) = s (s-1) ... (s-k+1) / k!.  Truncations of that series are exact
symbolic objects (WeylPoly with coefficients polynomial in s); the scalar
coherence functional collapses the operator part and leaves

    pi(s) = sum_k C(s, k),

which converges for Re(s) > 0 with |C(s,k)| ~ k^(-1-Re s) and equals 2^s
there.  The region where the operator series converges in the coherence
sense is the Clifford domain of ``clifford_contains``.

The equilibrium identity multiplies the K=1 truncations of b^s and a^s,
normal-orders at u = 1, and reduces modulo the observer submodule; the
surviving scalar is exactly 1 + 2s(s-1).
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

import mpmath as mp

from .errors import DomainError, VerificationError
from .hasse_global import GlobalEvalResult
from .numerics import ComplexPoint, PrecisionContext, _coerce_complex
from .weyl_algebra import SPoly, WeylPoly, mod_observer

__all__ = [
    "Generator",
    "CliffordSide",
    "binom_coeff",
    "pi_s",
    "clifford_contains",
    "binom_spoly",
    "operator_power_truncated",
    "equilibrium_identity_check",
]


class Generator(enum.Enum):
    A = "a"
    B = "b"


class CliffordSide(enum.Enum):
    A_SIDE = "a"
    B_SIDE = "b"


def _coerce_generator(base) -> Generator:
    if isinstance(base, Generator):
        return base
    if isinstance(base, str) and base.lower() in ("a", "b"):
        return Generator(base.lower())
    raise DomainError(f"base must be generator a or b, got {base!r}")


def binom_coeff(s, k: int, ctx: PrecisionContext = PrecisionContext()) -> ComplexPoint:
    """Generalized binomial coefficient s(s-1)...(s-k+1)/k!.

    A product of k exact-integer-shifted factors; relative error grows at
    most linearly in k.
    """
    if not isinstance(k, int) or k < 0:
        raise DomainError(f"k must be a non-negative integer, got {k!r}")
    if ctx.is_fast:
        sc = _coerce_complex(s)
        acc = 1.0 + 0.0j
        for j in range(k):
            acc *= (sc - j) / (j + 1)
        return ComplexPoint(acc.real, acc.imag)
    with mp.workprec(ctx.working_bits):
        sm = mp.mpc(s.to_mpc() if isinstance(s, ComplexPoint) else s)
        acc = mp.mpc(1)
        for j in range(k):
            acc *= (sm - j) / (j + 1)
        return ComplexPoint(mp.mpf(acc.real), mp.mpf(acc.imag))


_HEAD = 48   # directly summed leading terms
_COLS = 44   # averaging columns applied to the tail partial sums


def pi_s(s, ctx: PrecisionContext = PrecisionContext()) -> GlobalEvalResult:
    """The scalar series sum_k C(s, k); analytically 2^s for Re(s) > 0.

    Refuses Re(s) <= 0 (the terms decay like k^(-1-Re s), so the series
    risks divergence there).  The eventually alternating tail is summed
    with iterated averaging of partial sums; the reported tail bound is
    eight times the last averaging correction plus a rounding floor.
    """
    sc = _coerce_complex(s)
    if not sc.real > 0:
        raise DomainError(
            f"Re(s) = {sc.real} <= 0: the coefficient series risks divergence; refusing")
    if sc.imag == 0.0 and sc.real == int(sc.real):
        n = int(sc.real)
        if n <= 1023:
            # terminating binomial sum: exactly 2^n
            return GlobalEvalResult(ComplexPoint(float(2 ** n), 0.0), n + 1, 0.0)
    total_terms = _HEAD + _COLS + 2
    c = 1.0 + 0.0j
    partials = []
    acc = 0.0 + 0.0j
    scale = 0.0
    for k in range(total_terms):
        acc += c
        partials.append(acc)
        scale = max(scale, abs(acc))
        c *= (sc - k) / (k + 1)
    row = partials[_HEAD:]
    prev_top = row[0]
    last_change = math.inf
    while len(row) > 1:
        row = [(row[i] + row[i + 1]) / 2.0 for i in range(len(row) - 1)]
        last_change = abs(row[0] - prev_top)
        prev_top = row[0]
    value = row[0]
    tail = 8.0 * last_change + scale * total_terms * 2.0 ** -52
    return GlobalEvalResult(ComplexPoint(value.real, value.imag), total_terms, tail)


def clifford_contains(s, side=CliffordSide.A_SIDE) -> bool:
    """Membership in the convergence domain of the operator power series.

    A side: (sigma-1)^2 + t^2 < 1,  1/4 <= sigma <= 3/4,  0 <= t <= 1/2.
    B side is the mirror image under sigma -> 1 - sigma.  The disk
    inequality is strict, the band inequalities inclusive, exactly as the
    domain is defined.
    """
    if isinstance(side, str):
        side = CliffordSide(side.lower())
    sc = _coerce_complex(s)
    sigma, t = sc.real, sc.imag
    if side is CliffordSide.B_SIDE:
        sigma = 1.0 - sigma
    return ((sigma - 1.0) ** 2 + t * t < 1.0
            and 0.25 <= sigma <= 0.75
            and 0.0 <= t <= 0.5)


def binom_spoly(k: int) -> SPoly:
    """C(s, k) expanded as an exact polynomial in the formal symbol s."""
    if k < 0:
        raise DomainError("k must be >= 0")
    poly = SPoly.one()
    for j in range(k):
        poly = poly * SPoly({1: Fraction(1), 0: Fraction(-j)})
    inv = Fraction(1, math.factorial(k))
    return SPoly({deg: c * inv for deg, c in poly.coeffs.items()})


def operator_power_truncated(base, K: int) -> WeylPoly:
    """Truncated binomial power sum_{k<=K} C(s,k) (base - 1)^k.

    Returns the canonical WeylPoly with SPoly coefficients (the phase u
    is normalized to 1 in this symbolic-s setting).
    """
    base = _coerce_generator(base)
    if K < 0:
        raise DomainError("truncation order K must be >= 0")
    out = WeylPoly.zero(SPoly)
    for k in range(K + 1):
        ck = binom_spoly(k)
        # (X - 1)^k for a single generator X expands commutatively
        for j in range(k + 1):
            coef = math.comb(k, j) * (-1) ** (k - j)
            ij = (j, 0) if base is Generator.A else (0, j)
            out = out + WeylPoly({ij: ck * coef}, SPoly)
    return out


def equilibrium_identity_check() -> SPoly:
    """Scalar part of the K=1 truncated product b^s a^s modulo the
    observer submodule; asserts it equals 1 - 2s + 2s^2 = 1 + 2s(s-1).

    The product (1 + s(b-1))(1 + s(a-1)) is normal-ordered with u = 1;
    dropping the monomials with a trailing b or leading a leaves the
    returned polynomial.
    """
    pb = operator_power_truncated(Generator.B, 1)
    pa = operator_power_truncated(Generator.A, 1)
    scalar = mod_observer(pb * pa).scalar_part()
    expected = SPoly({0: Fraction(1), 1: Fraction(-2), 2: Fraction(2)})
    if scalar != expected:
        raise VerificationError(
            f"equilibrium identity fails: got {scalar}, expected {expected}")
    return scalar
