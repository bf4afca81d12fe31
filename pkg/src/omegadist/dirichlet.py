"""Truncated Dirichlet series and Euler products for the unit-root twists
of Omega, with numeric checks of the identities they satisfy.

All evaluations are plain sums and products in the half-plane Re s > 1;
there is no analytic continuation here.  Reference zeta values come from a
truncated sum plus the integral tail, which is accurate to roughly
0.5 * terms^(-Re s) relative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .residues import root_table
from .sieve import (
    DEFAULT_SEGMENT_SIZE,
    OmegaSegment,
    PrimeTable,
    iter_segments,
    primes_up_to,
)

#: Default truncation for reference zeta values; tail error ~ 5e-11 at s = 2.
DEFAULT_ZETA_TERMS = 100_000


@dataclass(frozen=True)
class DirichletEvaluation:
    """One numeric evaluation of L_{m,k}(s), tagged with how it was made."""

    m: int
    k: int
    s: complex
    method: str  # "truncated-sum" or "euler-product"
    cutoff: int  # n_max or p_max
    value: complex


@dataclass(frozen=True)
class GFactorEvaluation:
    """Partial product of the regular (zeta-compensated) Euler factors."""

    m: int
    k: int
    s: complex
    cutoff: int
    value: complex


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of one identity check plus their absolute deviation."""

    check: str
    params: dict
    lhs: complex
    rhs: complex

    @property
    def deviation(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_json_obj(self) -> dict:
        return {
            "check": self.check,
            "params": dict(self.params),
            "lhs": {"re": self.lhs.real, "im": self.lhs.imag},
            "rhs": {"re": self.rhs.real, "im": self.rhs.imag},
            "deviation": self.deviation,
        }


def _plain_s(s: complex):
    """JSON-friendly rendering of s for report params."""
    s = complex(s)
    return s.real if s.imag == 0.0 else {"re": s.real, "im": s.imag}


def zeta_ref(s: complex, terms: int) -> complex:
    """Reference zeta(s) for Re s > 1: truncated sum plus integral tail.

    zeta(s) ~ sum_{n<=terms} n^(-s) + terms^(1-s)/(s-1); the second term is
    the integral comparison of the discarded tail, leaving an error of about
    half the last term.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise ValueError(f"zeta_ref needs Re s > 1, got {s}")
    if terms < 10:
        raise ValueError(f"terms must be >= 10, got {terms}")
    n = np.arange(1, terms + 1, dtype=np.float64)
    head = complex(np.sum(n ** (-s)))
    tail = terms ** (1.0 - s) / (s - 1.0)
    return head + tail


def truncated_L(
    m: int,
    k: int,
    s: complex,
    n_max: int,
    omega_source: Iterable[OmegaSegment] | None = None,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> DirichletEvaluation:
    """Partial sum over n <= n_max of zeta_m^(k*Omega(n)) / n^s.

    Omega values come from the segmented sieve (or any supplied source
    covering 1..n_max contiguously); no per-n factoring happens here.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise ValueError(f"truncation is only trusted for Re s > 1, got {s}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if not 0 <= k < m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={m}")
    weights = root_table(m).powers[(np.arange(64) * k) % m]
    total = 0j
    expected_lo = 1
    source = omega_source if omega_source is not None else iter_segments(
        n_max, segment_size=segment_size
    )
    for segment in source:
        if segment.lo != expected_lo:
            raise ValueError(
                f"omega source skipped to {segment.lo}, expected {expected_lo}"
            )
        hi = min(segment.hi, n_max + 1)
        values = segment.values[: hi - segment.lo]
        n = np.arange(segment.lo, hi, dtype=np.float64)
        total += complex(np.sum(weights[values] * n ** (-s)))
        expected_lo = hi
        if hi > n_max:
            break
    if expected_lo <= n_max:
        raise ValueError(f"omega source ended at {expected_lo - 1}, need {n_max}")
    return DirichletEvaluation(
        m=m, k=k, s=s, method="truncated-sum", cutoff=n_max, value=total
    )


def _primes_below(p_max: int, table: PrimeTable | None) -> np.ndarray:
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    if table is None:
        table = primes_up_to(p_max)
    elif table.limit < p_max:
        raise ValueError(f"prime table covers {table.limit} but p_max = {p_max}")
    return table.primes[table.primes <= p_max].astype(np.float64)


def euler_L(
    m: int,
    k: int,
    s: complex,
    p_max: int,
    table: PrimeTable | None = None,
) -> DirichletEvaluation:
    """Euler product over p <= p_max of (1 - zeta_m^k * p^(-s))^(-1).

    Factors are multiplied in ascending prime order so the rounding is
    reproducible.
    """
    s = complex(s)
    if s.real <= 1.0:
        raise ValueError(f"Euler product needs Re s > 1, got {s}")
    if not 0 <= k < m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={m}")
    primes = _primes_below(p_max, table)
    w = complex(root_table(m).powers[k])
    factors = 1.0 / (1.0 - w * primes ** (-s))
    value = 1.0 + 0j
    for factor in factors:
        value *= complex(factor)
    return DirichletEvaluation(
        m=m, k=k, s=s, method="euler-product", cutoff=int(p_max), value=value
    )


def euler_G(
    m: int,
    k: int,
    s: complex,
    p_max: int,
    table: PrimeTable | None = None,
) -> GFactorEvaluation:
    """Partial product of (1 - zeta_m^k p^(-s))^(-1) * (1 - p^(-s))^(zeta_m^k).

    The second factor strips the zeta_m^k-th power of the zeta factor, which
    makes each term 1 + O(p^(-2s)) and the product rapidly convergent.  Only
    real s > 1 is supported: the complex power uses the principal log of the
    positive real base 1 - p^(-s), which is unambiguous there.
    """
    s = complex(s)
    if s.imag != 0.0:
        raise ValueError(f"only real s is supported, got {s}")
    s_real = s.real
    if s_real <= 1.0:
        raise ValueError(f"need s > 1, got {s_real}")
    if not 0 < k < m:
        raise ValueError(f"need 0 < k < m, got k={k}, m={m}")
    primes = _primes_below(p_max, table)
    w = complex(root_table(m).powers[k])
    z = primes ** (-s_real)
    factors = np.exp(w * np.log1p(-z)) / (1.0 - w * z)
    value = 1.0 + 0j
    for factor in factors:
        value *= complex(factor)
    return GFactorEvaluation(m=m, k=k, s=s_real, cutoff=int(p_max), value=value)


def check_lquo(
    s: complex,
    n_max: int,
    zeta_terms: int = DEFAULT_ZETA_TERMS,
) -> IdentityReport:
    """Check sum_{n<=n_max} lambda(n)/n^s against zeta(2s)/zeta(s).

    lambda is the m = 2, k = 1 twist: (-1)^Omega(n).
    """
    s = complex(s)
    lhs = truncated_L(2, 1, s, n_max).value
    rhs = zeta_ref(2.0 * s, zeta_terms) / zeta_ref(s, zeta_terms)
    return IdentityReport(
        check="lambda-quotient",
        params={"s": _plain_s(s), "n_max": int(n_max), "zeta_terms": int(zeta_terms)},
        lhs=lhs,
        rhs=rhs,
    )


def check_identity_product(
    m: int,
    s: complex,
    p_max: int,
    table: PrimeTable | None = None,
    zeta_terms: int = DEFAULT_ZETA_TERMS,
) -> IdentityReport:
    """Check prod_{k=0}^{m-1} L_{m,k}(s) against zeta(m*s).

    Per prime the factors multiply to (1 - p^(-ms))^(-1), because the m-th
    roots of unity are exactly the roots of z^m - 1.
    """
    s = complex(s)
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    lhs = 1.0 + 0j
    for k in range(m):
        lhs *= euler_L(m, k, s, p_max, table).value
    rhs = zeta_ref(m * s, zeta_terms)
    return IdentityReport(
        check="full-product",
        params={"m": m, "s": _plain_s(s), "p_max": int(p_max), "zeta_terms": int(zeta_terms)},
        lhs=lhs,
        rhs=rhs,
    )


def check_g_product(
    m: int,
    s: float,
    p_max: int,
    table: PrimeTable | None = None,
    zeta_terms: int = DEFAULT_ZETA_TERMS,
) -> IdentityReport:
    """Check prod_{k=1}^{m-1} G_{m,k}(s) against zeta(m*s).

    The zeta powers stripped from the nontrivial factors carry total
    exponent sum_{k=1}^{m-1} zeta_m^k = -1, which cancels the missing k = 0
    factor exactly.
    """
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}: the product is over 0 < k < m")
    lhs = 1.0 + 0j
    for k in range(1, m):
        lhs *= euler_G(m, k, s, p_max, table).value
    rhs = zeta_ref(m * complex(s).real, zeta_terms)
    return IdentityReport(
        check="g-product",
        params={"m": m, "s": _plain_s(complex(s).real), "p_max": int(p_max), "zeta_terms": int(zeta_terms)},
        lhs=lhs,
        rhs=rhs,
    )
