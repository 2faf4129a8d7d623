"""Symmetric Markov sources observed through a binary symmetric channel.

Closed-form MMSE terms and the dyadic-order series bound live alongside two
comparison baselines, the exact finite-window conditional entropy, and the
stationary belief machinery with its Monte Carlo entropy-rate oracle.

Conventions: q is the source flip rate and alpha the channel flip rate, both
at most 1/2. The belief analysis tracks W_i, the log odds of the current
source bit given all outputs seen so far; eta = (1 - alpha)/alpha is the
likelihood ratio of a single observation, and F = exp(f(W)) is the odds
carried forward through one Markov step, where f is the one-step log-odds
map propagate_llr.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bounds import BoundResult
from .errors import DimensionError, DomainError, check_open, check_range
from .scalar import _entropy_vec, binary_convolve, binary_entropy

__all__ = [
    "MarkovHmmParams",
    "McEstimate",
    "QuarticCoefficients",
    "disagreement_prob",
    "mmse_two_sided",
    "dyadic_permutation",
    "series_mmse",
    "markov_series_bound",
    "crossing_q",
    "small_q_ratio",
    "cover_thomas_ceiling",
    "rare_transition_baseline",
    "propagate_llr",
    "odds_cap",
    "mmse_given_odds",
    "quartic_coefficients",
    "stationary_odds",
    "minimizing_odds",
    "belief_bound",
    "entropy_rate_mc",
    "exact_conditional_entropy",
]

# flip rates below this are routed to their exact zero-rate limits
_TINY_RATE = 1e-8

_ROOT_CELLS = 4096
_RESIDUAL_TOL = 1e-9
_MAX_WINDOW = 20


@dataclass(frozen=True)
class MarkovHmmParams:
    """Source flip rate q and channel flip rate alpha, each in [0, 1/2]."""

    q: float
    alpha: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", check_range("q", self.q, 0.0, 0.5))
        object.__setattr__(self, "alpha", check_range("alpha", self.alpha, 0.0, 0.5))


class McEstimate(NamedTuple):
    estimate: float
    stderr: float


def disagreement_prob(k: int, q: float) -> float:
    """Pr(X_{m+k} != X_m) after k Markov steps: (1 - (1-2q)^k) / 2."""
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    q = check_range("q", q, 0.0, 0.5)
    return 0.5 * (1.0 - (1.0 - 2.0 * q) ** int(k))


def mmse_two_sided(gap: int, q: float) -> float:
    """MMSE of a source bit given both neighbors `gap` steps away.

    Closed form (1/4)(1 - r)/(1 + r) with r = (1-2q)^(2 gap), cross-checked
    on every call against the posterior-ratio form
    (P_gap (1-P_gap))^2 / (P_{2 gap} (1-P_{2 gap})) built from
    disagreement_prob.
    """
    if not isinstance(gap, (int, np.integer)) or gap < 1:
        raise DomainError(f"gap must be a positive integer, got {gap!r}")
    gap = int(gap)
    q = check_range("q", q, 0.0, 0.5)
    if q == 0.0:
        return 0.0
    r = 0.0 if q == 0.5 else math.exp(2.0 * gap * math.log1p(-2.0 * q))
    value = 0.25 * (1.0 - r) / (1.0 + r)
    pg = disagreement_prob(gap, q)
    p2 = disagreement_prob(2 * gap, q)
    ratio_form = (pg * (1.0 - pg)) ** 2 / (p2 * (1.0 - p2))
    if abs(value - ratio_form) > 1e-12:
        raise AssertionError(
            f"two-sided MMSE forms disagree at gap={gap}, q={q}: "
            f"{value!r} vs {ratio_form!r}"
        )
    return value


def dyadic_permutation(n: int) -> tuple[int, ...]:
    """Prediction order that keeps halving the gaps: n first, then the odd
    multiples of each refinement step, so every later bit sees neighbors at
    equal distance on both sides."""
    if not isinstance(n, (int, np.integer)) or n < 1 or n & (n - 1):
        raise DomainError(f"n must be a power of two, got {n!r}")
    n = int(n)
    order = [n]
    step = n
    while step > 1:
        step >>= 1
        order.extend(range(step, n, 2 * step))
    return tuple(order)


def series_mmse(q: float, tol: float = 1e-12) -> float:
    """Per-symbol limit of four times the dyadic-order MMSE:

        sum_{t>=1} 2^(-t) (1 - (1-2q)^(2^t)) / (1 + (1-2q)^(2^t)).

    Summation stops once the exact geometric tail bound drops below tol.
    When the bracket saturates to 1 the remaining tail is added in closed
    form, which makes q = 1/2 return exactly 1; powers go through
    log1p/expm1 so small q keeps full precision.
    """
    q = check_range("q", q, 0.0, 0.5)
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    if q == 0.0:
        return 0.0
    log_r = math.log1p(-2.0 * q) if q < 0.5 else -math.inf
    total = 0.0
    weight = 0.5
    t = 1
    while weight >= tol:
        a = (1 << t) * log_r
        e = math.exp(a)
        bracket = -math.expm1(a) / (1.0 + e)
        if bracket == 1.0:
            # every remaining term equals its weight; add the tail exactly
            total += 2.0 * weight
            return total
        total += weight * bracket
        weight *= 0.5
        t += 1
    return total


def markov_series_bound(params: MarkovHmmParams) -> BoundResult:
    """Entropy-rate lower bound h(alpha) + (1 - h(alpha)) * series_mmse(q)."""
    ha = binary_entropy(params.alpha)
    value = ha + (1.0 - ha) * series_mmse(params.q)
    return BoundResult("theorem5", value, {"alpha": params.alpha, "q": params.q})


def crossing_q(alpha: float, tol: float = 1e-6) -> float:
    """Smallest source flip rate at which the series bound stops beating the
    classical convolution bound h(alpha * q).

    The gap is prescanned on 512 points of [1e-6, 1/2 - 1e-6]; more than one
    sign change raises a RuntimeWarning and the first is used. The bracket
    is then bisected down to width tol.
    """
    alpha = check_open("alpha", alpha, 0.0, 0.5)
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    ha = binary_entropy(alpha)

    def gap(q: float) -> float:
        return ha + (1.0 - ha) * series_mmse(q) - binary_entropy(binary_convolve(alpha, q))

    grid = np.linspace(1e-6, 0.5 - 1e-6, 512)
    vals = [gap(float(q)) for q in grid]
    brackets = [
        i for i in range(len(grid) - 1) if (vals[i] > 0.0) != (vals[i + 1] > 0.0)
    ]
    if not brackets:
        raise DomainError(f"no sign change of the bound gap for alpha={alpha}")
    if len(brackets) > 1:
        warnings.warn(
            f"bound gap changes sign {len(brackets)} times for alpha={alpha}; "
            "returning the first crossing",
            RuntimeWarning,
        )
    i = brackets[0]
    lo, hi = float(grid[i]), float(grid[i + 1])
    glo = vals[i]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = gap(mid)
        if (gm > 0.0) == (glo > 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def small_q_ratio(q: float) -> float:
    """series_mmse(q) / h(q), the fraction of the source entropy the series
    retains; tends to 1 as q -> 0 and equals 1 at q = 1/2."""
    q = check_range("q", q, 0.0, 0.5)
    if q == 0.0:
        raise DomainError("q must be positive, the ratio is 0/0 at q=0")
    return series_mmse(q) / binary_entropy(q)


def cover_thomas_ceiling(params: MarkovHmmParams, m: int = 1) -> float:
    """h(q^(*m) * alpha) where q^(*m) is the m-step disagreement probability.

    This is the ceiling under which the order-m block upper bounds sit, not
    itself an upper bound on the entropy rate: it grows with m toward 1.
    """
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    return binary_entropy(binary_convolve(disagreement_prob(int(m), params.q), params.alpha))


def rare_transition_baseline(params: MarkovHmmParams) -> float:
    """Comparison baseline h(alpha) - ((1-2 alpha)^2 / (1-alpha)) q log2(q),
    accurate in the rare-transition regime; continuous value h(alpha) at q=0."""
    q, alpha = params.q, params.alpha
    ha = binary_entropy(alpha)
    if q == 0.0:
        return ha
    return ha - ((1.0 - 2.0 * alpha) ** 2 / (1.0 - alpha)) * q * math.log2(q)


def propagate_llr(t: float, q: float) -> float:
    """Log odds surviving one Markov step:

        f(t) = ln((e^t (1-q) + q) / (q e^t + (1-q))).

    Odd in t and saturating at ln((1-q)/q); evaluated through exp(-|t|) so
    arbitrarily large inputs stay finite.
    """
    q = check_range("q", q, 0.0, 0.5)
    if q == 0.0:
        raise DomainError("q must be positive, the map is unbounded at q=0")
    try:
        t = float(t)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"t must be a real number, got {t!r}") from exc
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t!r}")
    if q == 0.5 or t == 0.0:
        return 0.0
    e = math.exp(-abs(t))
    val = math.log(((1.0 - q) + q * e) / (q + (1.0 - q) * e))
    return -val if t < 0.0 else val


def _positive_rates(params: MarkovHmmParams) -> tuple[float, float]:
    q, alpha = params.q, params.alpha
    if q <= 0.0 or alpha <= 0.0:
        raise DomainError("q and alpha must both be positive for the belief recursion")
    return q, alpha


def odds_cap(params: MarkovHmmParams) -> float:
    """Largest odds ratio exp(f(W)) the stationary recursion can reach,

        ((eta-1)(1-q) + sqrt(4 eta q^2 + (eta-1)^2 (1-q)^2)) / (2 eta q),

    the fixed point of one observation followed by one Markov step. Equals 1
    when either rate is 1/2.
    """
    q, alpha = _positive_rates(params)
    eta = (1.0 - alpha) / alpha
    disc = math.sqrt(4.0 * eta * q * q + ((eta - 1.0) * (1.0 - q)) ** 2)
    return ((eta - 1.0) * (1.0 - q) + disc) / (2.0 * eta * q)


def mmse_given_odds(odds: float, params: MarkovHmmParams) -> float:
    """Conditional variance of the current source bit when the carried belief
    has odds ratio `odds`: a (1-m, m) mixture of x/(1+x)^2 evaluated at
    eta * odds and odds/eta, with m = alpha * q convolved."""
    q, alpha = _positive_rates(params)
    try:
        odds = float(odds)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"odds must be a real number, got {odds!r}") from exc
    if not (math.isfinite(odds) and odds > 0.0):
        raise DomainError(f"odds must be positive and finite, got {odds!r}")
    eta = (1.0 - alpha) / alpha
    m = binary_convolve(alpha, q)
    hi = eta * odds
    lo = odds / eta
    return (1.0 - m) * hi / (1.0 + hi) ** 2 + m * lo / (1.0 + lo) ** 2


@dataclass(frozen=True)
class QuarticCoefficients:
    """Coefficients (descending degree) of the sign polynomial for the slope
    of the odds-conditioned MMSE, with eta kept for consistency checks."""

    c4: float
    c3: float
    c2: float
    c1: float
    c0: float
    eta: float

    def __call__(self, s: float) -> float:
        return (((self.c4 * s + self.c3) * s + self.c2) * s + self.c1) * s + self.c0

    def derivative(self, s: float) -> float:
        return ((4.0 * self.c4 * s + 3.0 * self.c3) * s + 2.0 * self.c2) * s + self.c1

    def scaled_residual(self, s: float) -> float:
        """|p(s)| over the norm of the term vector (c4 s^4, ..., c0), a
        scale-free backward error for a claimed root."""
        terms = (self.c4 * s**4, self.c3 * s**3, self.c2 * s**2, self.c1 * s, self.c0)
        return abs(self(s)) / math.sqrt(sum(v * v for v in terms))


def quartic_coefficients(params: MarkovHmmParams) -> QuarticCoefficients:
    """Expand the slope sign of the odds-conditioned MMSE.

    With beta = (1-m)/m and m = alpha * q,

        sign(g'(s)) = sign((eta - s)(1 + eta s)^3 - beta (eta s - 1)(eta + s)^3),

    negated and collected so the returned quartic has positive leading
    coefficient and its sign is the opposite of the slope's:

        c4 = eta (beta + eta^2)
        c3 = 3 eta^2 / m - eta^4 - beta
        c2 = 3 eta (1 - 2m)/m (eta^2 - 1)
        c1 = beta eta^4 + 1 - 3 eta^2 / m
        c0 = -eta (1 + beta eta^2)
    """
    q, alpha = _positive_rates(params)
    m = binary_convolve(alpha, q)
    eta = (1.0 - alpha) / alpha
    beta = (1.0 - m) / m
    c4 = eta * (beta + eta**2)
    c3 = 3.0 * eta**2 / m - eta**4 - beta
    c2 = 3.0 * eta * (1.0 - 2.0 * m) / m * (eta**2 - 1.0)
    c1 = beta * eta**4 + 1.0 - 3.0 * eta**2 / m
    c0 = -eta * (1.0 + beta * eta**2)
    return QuarticCoefficients(c4, c3, c2, c1, c0, eta)


def stationary_odds(params: MarkovHmmParams) -> tuple[float, ...]:
    """Roots of the slope quartic inside [1, odds_cap), ascending: the odds
    values where the conditioned MMSE turns around.

    Sign changes are bracketed on a uniform 4096-cell split of the interval,
    bisected to 1e-12 relative width, and polished with guarded Newton steps.
    Every returned root must pass the scaled-residual check at 1e-9, and the
    quartic must be positive at s = 1 (the MMSE always slopes down there).
    """
    cap = odds_cap(params)
    if not cap > 1.0:
        return ()
    poly = quartic_coefficients(params)
    if not poly(1.0) > 0.0:
        raise AssertionError(f"expected a positive quartic at s=1 for {params!r}")
    xs = np.linspace(1.0, cap, _ROOT_CELLS + 1)
    vals = (((poly.c4 * xs + poly.c3) * xs + poly.c2) * xs + poly.c1) * xs + poly.c0
    roots: list[float] = []
    for i in range(_ROOT_CELLS):
        va, vb = float(vals[i]), float(vals[i + 1])
        if va == 0.0:
            roots.append(float(xs[i]))
            continue
        if vb == 0.0 or (va > 0.0) == (vb > 0.0):
            # an exact zero at the right edge belongs to the next cell
            continue
        cell_lo, cell_hi = float(xs[i]), float(xs[i + 1])
        lo, hi, vlo = cell_lo, cell_hi, va
        while hi - lo > 1e-12 * max(1.0, lo):
            mid = 0.5 * (lo + hi)
            vm = poly(mid)
            if vm == 0.0:
                lo = hi = mid
                break
            if (vm > 0.0) == (vlo > 0.0):
                lo, vlo = mid, vm
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        for _ in range(3):
            d = poly.derivative(root)
            if d == 0.0:
                break
            nxt = root - poly(root) / d
            if not cell_lo <= nxt <= cell_hi or nxt == root:
                break
            root = nxt
        if root < cap:
            roots.append(root)
    for r in roots:
        if poly.scaled_residual(r) > _RESIDUAL_TOL:
            raise AssertionError(f"root {r!r} fails the residual check for {params!r}")
    return tuple(roots)


def minimizing_odds(params: MarkovHmmParams) -> float:
    """Admissible odds value minimizing the conditioned MMSE: the best of the
    interior turning points and the cap itself."""
    cap = odds_cap(params)
    candidates = list(stationary_odds(params))
    candidates.append(cap)
    return min(candidates, key=lambda s: mmse_given_odds(s, params))


def belief_bound(params: MarkovHmmParams, variant: str = "factor4") -> BoundResult:
    """Entropy-rate lower bound from the stationary belief recursion.

    The MMSE of the current source bit given the carried belief never falls
    below the conditioned MMSE at the least favorable admissible odds value,
    so with m = alpha * q the rate is at least

        h(m) + (1 - h(m)) * 4 * mmse_given_odds(minimizing_odds, params).

    variant="printed" drops the factor 4 and is kept for comparison only; it
    is strictly weaker everywhere. Zero rates take their continuity limits,
    h(alpha) as q -> 0 and h(q) as alpha -> 0.
    """
    if variant not in ("factor4", "printed"):
        raise DomainError(f"variant must be 'factor4' or 'printed', got {variant!r}")
    q, alpha = params.q, params.alpha
    if q == 0.0 or alpha == 0.0:
        value = binary_entropy(alpha) if q == 0.0 else binary_entropy(q)
        return BoundResult(
            "theorem6",
            value,
            {"alpha": alpha, "q": q, "odds": None, "mmse_floor": 0.0},
            variant=variant,
        )
    star = minimizing_odds(params)
    floor = mmse_given_odds(star, params)
    hm = binary_entropy(binary_convolve(alpha, q))
    factor = 4.0 if variant == "factor4" else 1.0
    value = hm + (1.0 - hm) * factor * floor
    return BoundResult(
        "theorem6",
        value,
        {"alpha": alpha, "q": q, "odds": star, "mmse_floor": floor},
        variant=variant,
    )


def entropy_rate_mc(
    params: MarkovHmmParams, samples: int, burnin: int = 100_000, seed=0
) -> McEstimate:
    """Monte Carlo estimate of the output entropy rate via the belief
    recursion W_i = R_i ln(eta) + S_i f(W_{i-1}).

    One sequential stream starts at W_0 = 0; R flips sign with probability
    alpha and S with probability q, the R draws taken from the generator
    before the S draws. After `burnin` discarded steps the estimate averages
    h(logistic(W) * q * alpha) over `samples` kept steps. `seed` is anything
    numpy's default_rng accepts.

    The reported stderr uses the i.i.d. formula; consecutive W values are
    correlated, so it understates the true uncertainty and consumers should
    pad their margins. Rates at or below 1e-8 shortcut to the exact limits
    h(q) and h(alpha) with zero stderr.
    """
    q, alpha = params.q, params.alpha
    if not isinstance(samples, (int, np.integer)) or samples < 1:
        raise DomainError(f"samples must be a positive integer, got {samples!r}")
    if not isinstance(burnin, (int, np.integer)) or burnin < 0:
        raise DomainError(f"burnin must be a nonnegative integer, got {burnin!r}")
    if alpha <= _TINY_RATE:
        return McEstimate(binary_entropy(q), 0.0)
    if q <= _TINY_RATE:
        return McEstimate(binary_entropy(alpha), 0.0)

    rng = np.random.default_rng(seed)
    total = int(burnin) + int(samples)
    ln_eta = math.log((1.0 - alpha) / alpha)
    r_step = np.where(rng.random(total) < alpha, -ln_eta, ln_eta).tolist()
    s_sign = np.where(rng.random(total) < q, -1.0, 1.0).tolist()

    exp_, log_ = math.exp, math.log
    cq = 1.0 - q
    w = 0.0
    kept = [0.0] * int(samples)
    base = int(burnin)
    for i in range(total):
        # inline odd/stable form of propagate_llr, this loop dominates runtime
        if w >= 0.0:
            e = exp_(-w)
            fv = log_((cq + q * e) / (q + cq * e))
        else:
            e = exp_(w)
            fv = -log_((cq + q * e) / (q + cq * e))
        w = r_step[i] + s_sign[i] * fv
        if i >= base:
            kept[i - base] = w

    ws = np.asarray(kept)
    ez = np.exp(-np.abs(ws))
    p = np.where(ws >= 0.0, 1.0 / (1.0 + ez), ez / (1.0 + ez))
    pq = p * cq + (1.0 - p) * q
    out = pq * (1.0 - alpha) + (1.0 - pq) * alpha
    hv = _entropy_vec(out)
    est = float(hv.mean())
    se = 0.0 if samples < 2 else float(hv.std(ddof=1) / math.sqrt(samples))
    return McEstimate(est, se)


def exact_conditional_entropy(params: MarkovHmmParams, n: int) -> float:
    """Exact H(Y_n | Y_1..Y_{n-1}) by a forward pass over all output prefixes.

    Two arrays carry the joint weight of each prefix with the current source
    bit; each extension doubles them, so n is capped at 20. n = 1 returns the
    marginal output entropy, exactly 1 for this symmetric source.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= _MAX_WINDOW:
        raise DimensionError(f"n must be an integer in 1..{_MAX_WINDOW}, got {n!r}")
    n = int(n)
    if n == 1:
        return 1.0
    q, alpha = params.q, params.alpha
    # a0/a1: joint weight of (observed prefix, current source bit = 0 or 1),
    # newest output bit in the highest index position
    a0 = np.array([0.5 * (1.0 - alpha), 0.5 * alpha])
    a1 = np.array([0.5 * alpha, 0.5 * (1.0 - alpha)])
    for _ in range(n - 2):
        s0 = a0 * (1.0 - q) + a1 * q
        s1 = a0 * q + a1 * (1.0 - q)
        a0 = np.concatenate([s0 * (1.0 - alpha), s0 * alpha])
        a1 = np.concatenate([s1 * alpha, s1 * (1.0 - alpha)])
    s0 = a0 * (1.0 - q) + a1 * q
    s1 = a0 * q + a1 * (1.0 - q)
    prefix = a0 + a1
    next_one = s0 * alpha + s1 * (1.0 - alpha)
    mask = prefix > 0.0
    cond = next_one[mask] / prefix[mask]
    return float((prefix[mask] * _entropy_vec(cond)).sum())
