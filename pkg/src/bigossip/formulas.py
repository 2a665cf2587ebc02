"""Closed-form and asymptotic expressions for the rumor chain.

Scalar formulas for the small-mobile-count cases (exact series, boundary
laws, decompositions into first-contact / first-collision / coupon-
collection pieces), the equal-population bounds, and the continuous-time
rescaling.  Everything is a pure function of the population size; the
dynamic-programming solver in :mod:`bigossip.chain` serves as the
independent cross-check in the test suite.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import chain
from .errors import DomainError

#: Euler-Mascheroni constant, 20 significant digits.
EULER_GAMMA = 0.57721566490153286061

#: Largest argument for which harmonic numbers are summed directly.
HARMONIC_DIRECT_LIMIT = 10**6


class AsymptoticEstimate(NamedTuple):
    value: float
    order_of_neglected_term: str


class BoundPair(NamedTuple):
    lower: float
    upper: float


class DecompositionPair(NamedTuple):
    corrected: float  # exact identity; equals the series value
    nominal: float    # widely quoted variant, off by harmonic(n - 1)


def harmonic(k: int) -> float:
    """k-th harmonic number; direct summation up to 10**6, expansion beyond."""
    if k < 0:
        raise DomainError(f"harmonic number undefined for k={k}")
    if k <= HARMONIC_DIRECT_LIMIT:
        return math.fsum(1.0 / i for i in range(1, k + 1))
    x = float(k)
    return math.log(x) + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x)


def _harmonic_prefix(n: int) -> np.ndarray:
    """Array ``H`` with ``H[k]`` the k-th harmonic number, k = 0..n."""
    out = np.zeros(n + 1)
    if n >= 1:
        np.cumsum(1.0 / np.arange(1, n + 1), out=out[1:])
    return out


def first_boundary_pmf(n: int, a: int) -> float:
    """P[first mobile increment of the two-mobile chain occurs at static count a].

    Equals ``(a/n) * prod_{k<a} (1 - k/n)``; also the law of the number of
    occupied urns just before the first collision when throwing balls into
    ``n`` urns.
    """
    if not 1 <= a <= n:
        raise DomainError(f"need 1 <= a <= n, got a={a}, n={n}")
    acc = a / n
    for k in range(1, a):
        acc *= 1.0 - k / n
    return acc


def first_boundary_pmf_all(n: int) -> np.ndarray:
    """Vector of :func:`first_boundary_pmf` values, indexed by ``a`` (0 unused)."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    survival = np.ones(n)  # survival[a-1] = prod_{k<a} (1 - k/n)
    if n > 1:
        survival[1:] = np.cumprod(1.0 - np.arange(1, n) / n)
    out = np.zeros(n + 1)
    out[1:] = survival * (np.arange(1, n + 1) / n)
    return out


def joint_boundary_pmf(n: int, a: int, b: int) -> float:
    """P[three-mobile chain increments its mobile count at static counts a then b]."""
    if not 1 <= a <= b <= n:
        raise DomainError(f"need 1 <= a <= b <= n, got a={a}, b={b}, n={n}")
    acc = (2.0 * a / (n + a)) * (b / (2.0 * n - b))
    for k in range(1, a):
        acc *= (n - k) / (n + k)
    for k in range(a, b):
        acc *= 2.0 * (n - k) / (2.0 * n - k)
    return acc


def joint_boundary_pmf_all(n: int) -> np.ndarray:
    """Matrix ``J[a, b]`` of :func:`joint_boundary_pmf` values (upper triangle)."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    joint = np.zeros((n + 1, n + 1))
    ks = np.arange(1, n)
    lead_prefix = np.concatenate(([1.0], np.cumprod((n - ks) / (n + ks))))
    for a in range(1, n + 1):
        lead = (2.0 * a / (n + a)) * lead_prefix[a - 1]
        bs = np.arange(a, n + 1)
        ks2 = np.arange(a, n)
        cum = np.concatenate(
            ([1.0], np.cumprod(2.0 * (n - ks2) / (2.0 * n - ks2)))
        )
        joint[a, a:] = lead * (bs / (2.0 * n - bs)) * cum
    return joint


def birthday_expectation_exact(n: int) -> float:
    """Mean index of the first collision when throwing balls into ``n`` urns.

    ``E = 1 + sum_{k=1..n} prod_{i<k} (1 - i/n)``; satisfies
    ``E = 1 + sum_a a * first_boundary_pmf(n, a)``.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    survival = np.ones(n)
    if n > 1:
        survival[1:] = np.cumprod(1.0 - np.arange(1, n) / n)
    return 1.0 + float(survival.sum())


def birthday_expectation_asymptotic(n: int) -> AsymptoticEstimate:
    """Expansion of the first-collision moment, remainder ``O(n**-1.5)``."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    value = (
        math.sqrt(math.pi * n / 2.0)
        + 2.0 / 3.0
        + math.sqrt(math.pi / (2.0 * n)) / 12.0
        - 4.0 / (135.0 * n)
    )
    return AsymptoticEstimate(value, "n^(-3/2)")


def coupon_expectation(n: int) -> float:
    """Mean throws to occupy all ``n`` urns: ``n * harmonic(n)``."""
    if n < 0:
        raise DomainError(f"need n >= 0, got {n}")
    return n * harmonic(n)


def factorial_ratio(n: int) -> float:
    """``n! / n**n`` as an underflow-safe iterative product of ``k/n``."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    acc = 1.0
    for k in range(1, n + 1):
        acc *= k / n
    return acc


def two_mobile_time_exact(n: int) -> float:
    """Exact expected rounds to inform everything with two mobile nodes.

    Conditions on the static count at the single mobile-increment boundary:
    ``n + 2 * sum_a a p_a + n * sum_{a<n} p_a * harmonic(n - a)`` with
    ``p_a`` the first-boundary law.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    pmf = first_boundary_pmf_all(n)
    total = n + 2.0 * float(np.dot(np.arange(n + 1), pmf))
    if n > 1:
        hs = _harmonic_prefix(n)
        total += n * float(np.dot(pmf[1:n], hs[n - 1:0:-1]))
    return total


def two_mobile_time_asymptotic(n: int) -> AsymptoticEstimate:
    """Expansion of the two-mobile expected time, remainder ``O(n**-4/3)``."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    value = (
        n * harmonic(n)
        + n
        + math.sqrt(math.pi * n / 2.0)
        - 4.0 / 3.0
        + math.sqrt(math.pi / (2.0 * n)) / 12.0
        - 4.0 / (135.0 * n)
    )
    return AsymptoticEstimate(value, "n^(-4/3)")


def two_mobile_decomposition(n: int) -> DecompositionPair:
    """Two-mobile expected time rebuilt from classic sub-problems.

    Both variants combine the mean first-contact time ``n``, the
    first-collision moment, a coupon-collection term and ``n!/n**n``.  The
    ``corrected`` form,

        ``n + birthday - 2 + coupon(n) + n!/n**n``,

    is an exact identity and must reproduce :func:`two_mobile_time_exact`.
    The ``nominal`` form uses ``coupon(n - 1) - 1`` instead and misses the
    exact value by ``harmonic(n - 1)``; it is kept so reports can show the
    discrepancy explicitly.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    first_contact = float(n)
    birthday = birthday_expectation_exact(n)
    tail = factorial_ratio(n)
    corrected = first_contact + birthday - 2.0 + coupon_expectation(n) + tail
    nominal = first_contact + birthday - 1.0 + coupon_expectation(n - 1) + tail
    return DecompositionPair(corrected, nominal)


def three_mobile_time_exact(n: int) -> float:
    """Exact expected rounds to inform everything with three mobile nodes.

    Conditions on the pair of boundary static counts ``(a, b)``; the inner
    sums are shared through prefix tables so the whole evaluation is
    ``O(n**2)``.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    joint = joint_boundary_pmf_all(n)
    hs = _harmonic_prefix(n)
    ks = np.arange(1, n + 1, dtype=float)
    sum_row1 = np.concatenate(([0.0], np.cumsum(3.0 * n / (n + ks))))
    sum_row2 = np.concatenate(([0.0], np.cumsum(3.0 * n / (2.0 * n - ks))))
    hs_rev = hs[::-1]  # hs_rev[b] = harmonic(n - b)
    total = float(n)
    for a in range(1, n + 1):
        inner = sum_row1[a] - sum_row2[a - 1] + sum_row2[a:] + n * hs_rev[a:]
        total += float(np.dot(joint[a, a:], inner))
    return total


def three_mobile_time_asymptotic(n: int) -> AsymptoticEstimate:
    """Expansion of the three-mobile expected time, remainder ``O(n**-5/2)``."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    value = (
        n * harmonic(n)
        + n
        + (4.0 / 3.0) * math.sqrt(math.pi * n)
        - 5.0 / 3.0
        + math.sqrt(math.pi / n) / 6.0
        + math.sqrt(math.pi / n**3) / 96.0
    )
    return AsymptoticEstimate(value, "n^(-5/2)")


def three_mobile_decomposition_term(n: int) -> float:
    """Correction term ``(2**(n+3) - 1) / (3 * binom(2n, n))`` of the
    three-mobile decomposition, evaluated in log space so it stays finite
    for ``n`` up to 10**4 and beyond."""
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    log_main = (
        (n + 3) * math.log(2.0)
        - math.log(3.0)
        - (math.lgamma(2 * n + 1) - 2.0 * math.lgamma(n + 1))
    )
    return math.exp(log_main) * (1.0 - 2.0 ** -(n + 3))


def equal_population_bounds(n: int) -> BoundPair:
    """Lower/upper envelopes for the equal-population expected time.

    ``lower = 2n*harmonic(n) + 2 ln n`` and
    ``upper = 2n*harmonic(n) + ln(4) n``; each is tight up to an additive
    constant, so callers compare against the solver with a small slack.
    """
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    base = 2.0 * n * harmonic(n)
    return BoundPair(base + 2.0 * math.log(n), base + math.log(4.0) * n)


def distributed_expectation(n_static: int, n_mobile: int, rate: float) -> float:
    """Mean completion time when each mobile node activates at Poisson rate ``rate``.

    The superposed activation stream is Poisson with rate
    ``n_mobile * rate`` and each activation picks a uniform mobile node,
    so the time is the round count divided by ``n_mobile * rate``.
    """
    if rate <= 0.0:
        raise DomainError(f"activation rate must be positive, got {rate}")
    steps = chain.expected_total_time(chain.ChainParams(n_static, n_mobile))
    return steps / (n_mobile * rate)
