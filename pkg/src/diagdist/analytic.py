"""Closed-form quantities for the diagonal distance of random and general graphs.

Entropy exponents, the plateau constant ``lambda0`` and the pair-regime
threshold ``p0``, first-moment sums, the Gilbert-Varshamov style counting
bound and the covering-radius inequality behind the ``0.382 n`` upper bound.

Logarithms without a base are natural; ``H`` is in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Tuple

LOG2 = math.log(2.0)
LOG2_3 = math.log2(3.0)

REGIME_MINDEG = "min-degree"
REGIME_PLATEAU = "plateau"
REGIME_PAIR = "pair"


class DomainError(ValueError):
    pass


# --- entropy and the exponent functions -----------------------------------


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy undefined at {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


H = binary_entropy


def binary_entropy_prime(x: float) -> float:
    if not 0.0 < x < 1.0:
        raise DomainError(f"entropy derivative undefined at {x}")
    return math.log2((1.0 - x) / x)


def _check_lambda_alpha(lam: float, alpha: float) -> None:
    if not (0.0 <= alpha <= lam <= 1.0 and alpha < 1.0):
        raise DomainError(f"need 0 <= alpha <= lambda <= 1, alpha < 1; got lambda={lam}, alpha={alpha}")


def g(lam: float, alpha: float) -> float:
    """Exponent (bits per vertex) of one summand of the first-moment sum at p = 1/2.

    ``g(lam, 0) = H(lam) - 1`` by continuity.
    """
    _check_lambda_alpha(lam, alpha)
    inner = min(1.0, max(0.0, (lam - alpha) / (1.0 - alpha)))
    return H(alpha) + (1.0 - alpha) * (H(inner) - 1.0)


def g_prime(lam: float, alpha: float) -> float:
    """``d g(lam, alpha) / d alpha = log2(2 (lam - alpha) / alpha)``."""
    if not 0.0 < alpha < lam <= 1.0:
        raise DomainError(f"need 0 < alpha < lambda <= 1; got lambda={lam}, alpha={alpha}")
    return math.log2(2.0 * (lam - alpha) / alpha)


@dataclass(frozen=True)
class ExponentPoint:
    lam: float
    alpha: float
    value: float

    @classmethod
    def at(cls, lam: float, alpha: float) -> "ExponentPoint":
        return cls(lam, alpha, g(lam, alpha))

    def consistent(self, tol: float = 1e-15) -> bool:
        return abs(g(self.lam, self.alpha) - self.value) <= tol


def h(lam: float) -> float:
    """``g`` at its maximiser ``alpha = 2 lam / 3``; ``h(0) = -1``, ``h(1) = H(2/3) - 1/3``."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"h undefined at {lam}")
    if lam == 0.0:
        return -1.0
    return g(lam, 2.0 * lam / 3.0)


def h_closed(lam: float) -> float:
    """``H(lam) + lam log2 3 - 1``, algebraically equal to :func:`h`."""
    return H(lam) + lam * LOG2_3 - 1.0


def h_prime(lam: float) -> float:
    return binary_entropy_prime(lam) + LOG2_3


def h_second(lam: float) -> float:
    if not 0.0 < lam < 1.0:
        raise DomainError(f"h'' undefined at {lam}")
    return 1.0 / ((lam - 1.0) * lam * LOG2)


# --- constants ------------------------------------------------------------


@dataclass(frozen=True)
class Constants:
    lambda0: float
    p0: float
    p0_minor: float
    alpha_half: float
    tolerance: float

    def check(self) -> None:
        tol = max(self.tolerance, 1e-12)
        assert abs(h(self.lambda0)) <= tol
        assert abs(2 * self.p0 * (1 - self.p0) - self.lambda0) <= tol
        assert abs(2 * self.p0_minor * (1 - self.p0_minor) - self.lambda0) <= tol
        assert self.p0_minor < self.p0
        assert abs(H(self.alpha_half) - 0.5) <= tol


def _bisect(fn, lo: float, hi: float, tol: float) -> float:
    flo = fn(lo)
    if flo == 0.0:
        return lo
    if (flo > 0) == (fn(hi) > 0):
        raise DomainError("root is not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _polish(fn, dfn, x: float, steps: int = 2) -> float:
    for _ in range(steps):
        d = dfn(x)
        if d == 0.0:
            break
        x -= fn(x) / d
    return x


def solve_constants(tolerance: float = 1e-14) -> Constants:
    """Locate ``lambda0`` (root of ``h``), the two roots of ``2p - 2p^2 = lambda0``
    and the smaller root of ``H(x) = 1/2``.

    ``h`` is strictly concave with ``h(0) = -1 < 0 < h(1)``, and ``H - 1/2``
    changes sign on ``(0, 1/2)``, so bisection brackets are always valid.
    """
    if tolerance < 1e-14:
        raise DomainError("tolerance below 1e-14 is not attainable in double precision")
    step = min(tolerance, 1e-13)
    lam0 = _polish(h_closed, h_prime, _bisect(h_closed, 1e-12, 1.0 - 1e-12, step))
    disc = math.sqrt(1.0 - 2.0 * lam0)
    p0 = 0.5 * (1.0 + disc)
    p0_minor = lam0 / (2.0 * p0)  # product of the roots is lam0 / 2
    half = lambda x: H(x) - 0.5
    alpha_half = _polish(half, binary_entropy_prime, _bisect(half, 1e-12, 0.5, step))
    return Constants(lam0, p0, p0_minor, alpha_half, tolerance)


@lru_cache(maxsize=1)
def constants() -> Constants:
    return solve_constants()


# --- probabilities and first-moment sums ----------------------------------


def odd_parity_prob(p: float, a: int) -> float:
    """Probability that a vertex outside an ``a``-set has an odd number of neighbours in it."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability {p} outside [0, 1]")
    if a < 1:
        raise DomainError("set size must be positive")
    return (1.0 - (1.0 - 2.0 * p) ** a) / 2.0


def odd_parity_prob_exact(p: Fraction, a: int) -> Fraction:
    p = Fraction(p)
    return (1 - (1 - 2 * p) ** a) / 2


def _logsumexp(logs) -> float:
    logs = [x for x in logs if x != -math.inf]
    if not logs:
        return -math.inf
    top = max(logs)
    return top + math.log(math.fsum(math.exp(x - top) for x in logs))


def log_binomial_tail_le(N: int, rho: float, k: int) -> float:
    """``log Pr(Bin(N, rho) <= k)``."""
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"probability {rho} outside [0, 1]")
    if N < 0:
        raise DomainError("N must be nonnegative")
    if k < 0:
        return -math.inf
    if k >= N:
        return 0.0
    if rho == 0.0:
        return 0.0
    if rho == 1.0:
        return -math.inf
    lr, lq = math.log(rho), math.log1p(-rho)
    lgN = math.lgamma(N + 1)
    terms = [lgN - math.lgamma(i + 1) - math.lgamma(N - i + 1) + i * lr + (N - i) * lq for i in range(k + 1)]
    return min(0.0, _logsumexp(terms))


def binomial_tail_le(N: int, rho: float, k: int) -> float:
    """``Pr(Bin(N, rho) <= k)``; 0 for ``k < 0`` and 1 for ``k >= N``."""
    return math.exp(log_binomial_tail_le(N, rho, k))


def binomial_tail_le_exact(N: int, rho: Fraction, k: int) -> Fraction:
    rho = Fraction(rho)
    if k < 0:
        return Fraction(0)
    k = min(k, N)
    return sum((math.comb(N, i) * rho**i * (1 - rho) ** (N - i) for i in range(k + 1)), Fraction(0))


class FirstMoment(NamedTuple):
    value: float
    log_value: float


def first_moment_sum(n: int, p: float, l: int, a_range: Optional[Tuple[int, int]] = None) -> FirstMoment:
    """``sum_a C(n, a) Pr(Bin(n - a, p(a)) <= l - 1 - a)`` over ``a_range`` (inclusive).

    This is the expected number of nonempty sets ``A`` with ``|A| + |B(A)| < l``
    in G(n, p).  The default range is ``1 .. l - 1``.
    """
    if not 1 <= l <= n:
        raise DomainError(f"need 1 <= l <= n; got l={l}, n={n}")
    lo, hi = a_range if a_range is not None else (1, l - 1)
    if not (1 <= lo and hi <= n):
        raise DomainError(f"a range [{lo}, {hi}] not inside [1, {n}]")
    logs = []
    for a in range(lo, hi + 1):
        lt = log_binomial_tail_le(n - a, odd_parity_prob(p, a), l - 1 - a)
        if lt != -math.inf:
            logs.append(log_comb(n, a) + lt)
    lv = _logsumexp(logs)
    try:
        value = math.exp(lv)
    except OverflowError:
        value = math.inf
    return FirstMoment(value, lv)


def first_moment_sum_exact(n: int, p: Fraction, l: int, a_range: Optional[Tuple[int, int]] = None) -> Fraction:
    lo, hi = a_range if a_range is not None else (1, l - 1)
    p = Fraction(p)
    return sum(
        (math.comb(n, a) * binomial_tail_le_exact(n - a, odd_parity_prob_exact(p, a), l - 1 - a) for a in range(lo, hi + 1)),
        Fraction(0),
    )


def first_moment_crossover(n: int, p: float) -> int:
    """Least ``l`` whose first-moment sum reaches 1, or ``n + 1`` if none does."""
    for l in range(1, n + 1):
        if first_moment_sum(n, p, l).log_value >= 0.0:
            return l
    return n + 1


def log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def summand_exponent(n: int, lam: float, alpha: float) -> float:
    """Leading-order natural log of one first-moment summand: ``n log 2 g(lam, alpha)``."""
    if not 0.0 < alpha < lam < 1.0:
        raise DomainError(f"need 0 < alpha < lambda < 1; got lambda={lam}, alpha={alpha}")
    return n * LOG2 * g(lam, alpha)


def log_summand(n: int, l: int, a: int, p: float = 0.5) -> float:
    """Exact natural log of ``C(n, a) Pr(Bin(n - a, p(a)) <= l - a)``."""
    return log_comb(n, a) + log_binomial_tail_le(n - a, odd_parity_prob(p, a), l - a)


# --- counting bounds on f(n) ----------------------------------------------


def gv_bound_holds(n: int, l: int) -> bool:
    """Exact test of ``sum_{i=1}^{l-1} C(n, i) 3^i < 2^n``; true certifies ``f(n) >= l``."""
    if not 1 <= l <= n:
        raise DomainError(f"need 1 <= l <= n; got l={l}, n={n}")
    return sum(math.comb(n, i) * 3**i for i in range(1, l)) < 2**n


def best_gv_bound(n: int) -> int:
    """Largest ``l <= n`` certified by :func:`gv_bound_holds` (the sum is monotone in ``l``)."""
    total, target, best = 0, 2**n, 1
    for l in range(2, n + 1):
        total += math.comb(n, l - 1) * 3 ** (l - 1)
        if total >= target:
            break
        best = l
    return best


def predicted_fhat(p: float) -> Tuple[float, str]:
    """Limit of ``f(G(n, p)) / n`` and the branch attaining it.

    ``min(p, lambda0, 2p(1-p))``; for ``p`` in ``[lambda0, p0]`` the value is
    exactly ``lambda0``.
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must lie in (0, 1); got {p}")
    c = constants()
    if p < c.lambda0:
        return p, REGIME_MINDEG
    if p <= c.p0:
        return c.lambda0, REGIME_PLATEAU
    return 2.0 * p * (1.0 - p), REGIME_PAIR


def _g_cov(x: float) -> float:
    return H((1.0 - math.sqrt(1.0 - x)) / 2.0)


def covering_bound_rhs(delta: float, u: float) -> float:
    """``1 + G(u^2) - G(u^2 + 2 delta u + 2 delta)`` with ``G(x) = H((1 - sqrt(1 - x)) / 2)``.

    Upper bound on the rate of a binary code with minimum relative distance
    ``delta``; minimised over ``0 <= u <= 1 - 2 delta``.
    """
    if delta < 0.0 or not 0.0 <= u <= 1.0 - 2.0 * delta + 1e-12:
        raise DomainError(f"need 0 <= u <= 1 - 2 delta; got delta={delta}, u={u}")
    outer = u * u + 2.0 * delta * u + 2.0 * delta
    if outer > 1.0 + 1e-12:
        raise DomainError(f"u^2 + 2 delta u + 2 delta = {outer} exceeds 1")
    return 1.0 + _g_cov(u * u) - _g_cov(min(outer, 1.0))


def covering_bound_min(delta: float, grid: int = 2001) -> Tuple[float, float]:
    """Minimum of :func:`covering_bound_rhs` over ``u``; returns ``(u, value)``."""
    from scipy.optimize import minimize_scalar

    top = 1.0 - 2.0 * delta
    us = [top * k / (grid - 1) for k in range(grid)]
    vals = [covering_bound_rhs(delta, u) for u in us]
    k = min(range(grid), key=vals.__getitem__)
    lo, hi = us[max(k - 1, 0)], us[min(k + 1, grid - 1)]
    if hi > lo:
        res = minimize_scalar(lambda u: covering_bound_rhs(delta, u), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if res.fun < vals[k]:
            return float(res.x), float(res.fun)
    return us[k], vals[k]


class CoveringCheck(NamedTuple):
    lhs: float
    rhs: float
    contradiction: bool


def covering_contradiction(alpha: float, delta: float, u: float) -> CoveringCheck:
    """Compare ``H(alpha)`` with the rate bound; ``lhs > rhs`` means the ``C(n, alpha n)``
    images ``B(A)`` cannot all be pairwise more than ``delta n`` apart."""
    lhs = H(alpha)
    rhs = covering_bound_rhs(delta, u)
    return CoveringCheck(lhs, rhs, lhs > rhs)


def covering_upper_constant(alpha, delta) -> Decimal:
    """``2 alpha + delta`` in decimal arithmetic: the coefficient of ``n`` in the bound on ``f(n)``."""
    return (2 * Decimal(str(alpha)) + Decimal(str(delta))).normalize()


def optimize_simple_bound() -> Tuple[float, float]:
    """Minimise ``alpha + rho`` subject to ``H(alpha) + H(rho) >= 1``.

    By strict concavity of ``H`` the optimum is symmetric, so ``alpha = rho`` is
    the smaller root of ``H(x) = 1/2`` and ``f(n) <= 2n(alpha + rho) = 4 alpha n``.
    """
    a = constants().alpha_half
    return a, 4.0 * a


def volume_condition_holds(n: int, a: int, r: int) -> bool:
    """Exact ``C(n, a) * sum_{i <= r} C(n, i) > 2^n``: two Hamming balls of radius ``r``
    around distinct images ``B(A)`` must meet."""
    return math.comb(n, a) * sum(math.comb(n, i) for i in range(r + 1)) > 2**n
