"""Exact joint distributions on {0,1}^n and permutation-ordered MMSE search.

Everything here is computed directly from an explicit table of 2**n weights,
so results are exact up to float rounding and serve as the brute-force oracle
for the bound modules. Bit k of a weight index (bit 0 least significant)
stores coordinate x_{k+1}; coordinates are numbered 1..n throughout.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, check_range

__all__ = [
    "MAX_COORDS",
    "EXHAUSTIVE_CAP",
    "ExplicitPmf",
    "entropy",
    "conditional_mmse",
    "noisy_conditional_mmse",
    "mmse_along_permutation",
    "worst_case_mmse",
    "best_case_mmse_given_output",
    "apply_bsc",
    "markov_joint_pmf",
    "greedy_permutation",
    "counterexample_pmf",
    "random_pmf",
    "read_pmf",
    "write_pmf",
]

MAX_COORDS = 16
EXHAUSTIVE_CAP = 8

# weight vectors further than this from unit mass are rejected, closer ones
# are renormalized
_SUM_TOL = 1e-9


class ExplicitPmf:
    """Immutable pmf over {0,1}^n stored as a flat table of 2**n weights.

    The coordinate count n is inferred from the table length. Negative,
    non-finite, or badly normalized weights are rejected at construction.
    """

    __slots__ = ("n", "weights")

    def __init__(self, weights: Iterable[float]) -> None:
        arr = np.array(np.asarray(weights, dtype=float).ravel(), dtype=float)
        size = int(arr.size)
        if size < 2 or size & (size - 1):
            raise DomainError(f"need a power-of-two number of weights >= 2, got {size}")
        n = size.bit_length() - 1
        if n > MAX_COORDS:
            raise DimensionError(f"n={n} exceeds the {MAX_COORDS}-coordinate cap")
        if not np.all(np.isfinite(arr)):
            raise DomainError("weights must all be finite")
        if np.any(arr < 0.0):
            raise DomainError("weights must be nonnegative")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise DomainError(f"weights sum to {total!r}, further than {_SUM_TOL} from 1")
        arr /= total
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weights", arr)

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("ExplicitPmf is immutable")

    def __repr__(self) -> str:
        return f"ExplicitPmf(n={self.n})"


def _check_coords(pmf: ExplicitPmf, coords: Iterable[int], what: str = "coordinate") -> None:
    for j in coords:
        if not isinstance(j, (int, np.integer)) or not 1 <= int(j) <= pmf.n:
            raise DomainError(f"{what} {j!r} outside 1..{pmf.n}")


def _check_permutation(pmf: ExplicitPmf, order: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(j) for j in order)
    if sorted(out) != list(range(1, pmf.n + 1)):
        raise DomainError(f"order {tuple(order)!r} is not a permutation of 1..{pmf.n}")
    return out


def _marginal(weights: np.ndarray, n: int, coords: Sequence[int]) -> np.ndarray:
    """Flat marginal over ascending `coords`; bit k of the result indexes coords[k]."""
    keep = set(coords)
    drop = tuple(n - j for j in range(1, n + 1) if j not in keep)
    t = weights.reshape((2,) * n)
    if drop:
        t = t.sum(axis=drop)
    return t.reshape(-1)


def _split_mmse(m: np.ndarray, t: int) -> float:
    """E[P(1-P)] for bit t of a flat joint table; zero-mass contexts drop out."""
    m3 = m.reshape(-1, 2, 1 << t)
    a = m3[:, 0, :]
    b = m3[:, 1, :]
    tot = a + b
    mask = tot > 0.0
    if not mask.any():
        return 0.0
    return float((a[mask] * b[mask] / tot[mask]).sum())


def _channel_mix(m: np.ndarray, t: int, alpha: float) -> np.ndarray:
    """Replace bit t of a flat joint table by its symmetric-flip output."""
    m3 = m.reshape(-1, 2, 1 << t)
    return ((1.0 - alpha) * m3 + alpha * m3[:, ::-1, :]).reshape(-1)


def entropy(pmf: ExplicitPmf) -> float:
    """Shannon entropy of the joint law, in bits."""
    w = pmf.weights
    pos = w[w > 0.0]
    return float(-(pos * np.log2(pos)).sum())


def conditional_mmse(pmf: ExplicitPmf, target: int, given: Sequence[int] = ()) -> float:
    """Exact E[Var(X_target | X_given)] under the stored joint law.

    `given` may be empty; the target must not appear in it.
    """
    _check_coords(pmf, (target,), "target")
    given = tuple(sorted({int(j) for j in given}))
    _check_coords(pmf, given, "conditioning coordinate")
    target = int(target)
    if target in given:
        raise DomainError(f"target {target} also appears in the conditioning set")
    coords = tuple(sorted(given + (target,)))
    m = _marginal(pmf.weights, pmf.n, coords)
    return _split_mmse(m, coords.index(target))


def noisy_conditional_mmse(
    pmf: ExplicitPmf, target: int, given: Sequence[int], alpha: float
) -> float:
    """E[Var(X_target | noisy versions of X_given)], each conditioning bit
    observed through an independent symmetric channel with flip rate alpha."""
    _check_coords(pmf, (target,), "target")
    given = tuple(sorted({int(j) for j in given}))
    _check_coords(pmf, given, "conditioning coordinate")
    target = int(target)
    if target in given:
        raise DomainError(f"target {target} also appears in the conditioning set")
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    coords = tuple(sorted(given + (target,)))
    m = _marginal(pmf.weights, pmf.n, coords)
    t = coords.index(target)
    for s in range(len(coords)):
        if s != t:
            m = _channel_mix(m, s, alpha)
    return _split_mmse(m, t)


def mmse_along_permutation(pmf: ExplicitPmf, order: Sequence[int]) -> float:
    """Sum of conditional bit variances taken in the given prediction order."""
    order = _check_permutation(pmf, order)
    total = 0.0
    for i, j in enumerate(order):
        total += conditional_mmse(pmf, j, order[:i])
    return total


def _mask_coords(mask: int, n: int) -> tuple[int, ...]:
    return tuple(j for j in range(1, n + 1) if mask & (1 << (j - 1)))


def _chain_cost_table(pmf: ExplicitPmf) -> dict[tuple[int, int], float]:
    """cost[(prefix_mask, j)] = MMSE(X_j | coordinates in prefix_mask).

    Built one marginal per nonempty coordinate subset, so every permutation
    enumeration reuses the same floats as conditional_mmse would produce.
    """
    n, w = pmf.n, pmf.weights
    cost: dict[tuple[int, int], float] = {}
    for tmask in range(1, 1 << n):
        coords = _mask_coords(tmask, n)
        m = _marginal(w, n, coords)
        for t, j in enumerate(coords):
            cost[(tmask ^ (1 << (j - 1)), j)] = _split_mmse(m, t)
    return cost


def _noisy_cost_table(pmf: ExplicitPmf, alpha: float) -> dict[tuple[int, int], float]:
    """cost[(prefix_mask, j)] = MMSE(X_j | noisy outputs of the prefix_mask bits)."""
    n, w = pmf.n, pmf.weights
    cost: dict[tuple[int, int], float] = {}
    for tmask in range(1, 1 << n):
        coords = _mask_coords(tmask, n)
        base = _marginal(w, n, coords)
        for t, j in enumerate(coords):
            m = base
            for s in range(len(coords)):
                if s != t:
                    m = _channel_mix(m, s, alpha)
            cost[(tmask ^ (1 << (j - 1)), j)] = _split_mmse(m, t)
    return cost


def _enumerate_orders(
    n: int, cost: dict[tuple[int, int], float], pick_max: bool
) -> tuple[float, tuple[int, ...]]:
    # strict comparison keeps the lexicographically first optimum
    best = -math.inf if pick_max else math.inf
    best_order: tuple[int, ...] = ()
    for perm in itertools.permutations(range(1, n + 1)):
        mask = 0
        tot = 0.0
        for j in perm:
            tot += cost[(mask, j)]
            mask |= 1 << (j - 1)
        if (tot > best) if pick_max else (tot < best):
            best, best_order = tot, perm
    return best, best_order


def worst_case_mmse(pmf: ExplicitPmf, cap: int = EXHAUSTIVE_CAP) -> tuple[float, tuple[int, ...]]:
    """Exhaustive max of mmse_along_permutation over all n! orders.

    Returns (value, order), the order being the lexicographically first
    maximizer. Refuses n above `cap` since the search is factorial.
    """
    if pmf.n > cap:
        raise DimensionError(f"n={pmf.n} above the exhaustive-search cap {cap}")
    return _enumerate_orders(pmf.n, _chain_cost_table(pmf), pick_max=True)


def best_case_mmse_given_output(
    pmf: ExplicitPmf, alpha: float, cap: int = EXHAUSTIVE_CAP
) -> tuple[float, tuple[int, ...]]:
    """Exhaustive min over prediction orders of the chained MMSE of each bit
    given noisy observations of the bits ordered before it."""
    if pmf.n > cap:
        raise DimensionError(f"n={pmf.n} above the exhaustive-search cap {cap}")
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    return _enumerate_orders(pmf.n, _noisy_cost_table(pmf, alpha), pick_max=False)


def apply_bsc(pmf: ExplicitPmf, alpha: float) -> ExplicitPmf:
    """Law of the output when every coordinate passes through an independent
    symmetric channel with flip rate alpha."""
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    w = pmf.weights
    for t in range(pmf.n):
        w = _channel_mix(w, t, alpha)
    return ExplicitPmf(w)


def markov_joint_pmf(n: int, q: float) -> ExplicitPmf:
    """Joint law of n steps of the stationary symmetric Markov chain that
    flips with probability q, started from a fair bit."""
    q = check_range("q", q, 0.0, 0.5)
    if not isinstance(n, (int, np.integer)) or not 1 <= int(n) <= MAX_COORDS:
        raise DimensionError(f"n must be an integer in 1..{MAX_COORDS}, got {n!r}")
    n = int(n)
    w = np.array([0.5, 0.5])
    for m in range(2, n + 1):
        top = (np.arange(w.size) >> (m - 2)) & 1
        stay = np.where(top == 0, 1.0 - q, q)
        move = np.where(top == 0, q, 1.0 - q)
        w = np.concatenate([w * stay, w * move])
    return ExplicitPmf(w)


def greedy_permutation(pmf: ExplicitPmf) -> tuple[int, ...]:
    """Order the coordinates by repeatedly taking the hardest one to predict
    from those already chosen. Ties go to the smallest index."""
    chosen: list[int] = []
    remaining = list(range(1, pmf.n + 1))
    while remaining:
        best_j = remaining[0]
        best_v = -1.0
        for j in remaining:
            v = conditional_mmse(pmf, j, chosen)
            if v > best_v:
                best_j, best_v = j, v
        chosen.append(best_j)
        remaining.remove(best_j)
    return tuple(chosen)


def counterexample_pmf(eps: float) -> ExplicitPmf:
    """Two-bit family P(0,0) = 1/2, P(1,0) = eps, P(0,1) = 0, P(1,1) = 1/2 - eps
    used to probe whether higher single-bit variance should be predicted first."""
    eps = float(eps)
    if not 0.0 < eps < 0.5:
        raise DomainError(f"eps must lie strictly inside (0, 1/2), got {eps!r}")
    return ExplicitPmf([0.5, eps, 0.0, 0.5 - eps])


def random_pmf(n: int, seed: int) -> ExplicitPmf:
    """Deterministic random pmf: 2**n uniform draws, normalized."""
    if not isinstance(n, (int, np.integer)) or not 1 <= int(n) <= MAX_COORDS:
        raise DimensionError(f"n must be an integer in 1..{MAX_COORDS}, got {n!r}")
    rng = np.random.default_rng(seed)
    w = rng.random(1 << int(n))
    return ExplicitPmf(w / w.sum())


def write_pmf(pmf: ExplicitPmf, path) -> None:
    """Write the text format read_pmf expects: n on the first line, then one
    weight per line in round-trippable precision."""
    lines = [str(pmf.n)]
    lines.extend(repr(float(v)) for v in pmf.weights)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_pmf(path) -> ExplicitPmf:
    """Parse a pmf file: first token n, then 2**n weights, whitespace-separated."""
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise DomainError(f"{path}: empty pmf file")
    try:
        n = int(tokens[0])
        vals = [float(tok) for tok in tokens[1:]]
    except ValueError as exc:
        raise DomainError(f"{path}: malformed pmf file ({exc})") from exc
    if n < 1 or n > MAX_COORDS:
        raise DomainError(f"{path}: coordinate count {n} outside 1..{MAX_COORDS}")
    if len(vals) != 1 << n:
        raise DomainError(f"{path}: expected {1 << n} weights for n={n}, got {len(vals)}")
    return ExplicitPmf(vals)
