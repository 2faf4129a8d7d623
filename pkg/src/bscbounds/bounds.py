"""Entropy bounds driven by MMSE predictability.

The scalar evaluators take already-computed summary quantities (a flip rate,
an entropy, an MMSE level) and apply the bound formulas. The vector
evaluators take an explicit joint law, run the exhaustive permutation
searches from the dist module, and report per-symbol values, with one
exception: the memory-noise bound reports total bits, because that is the
quantity the ordered sum actually bounds.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .dist import (
    EXHAUSTIVE_CAP,
    ExplicitPmf,
    _chain_cost_table,
    _check_permutation,
    _marginal,
    _mask_coords,
    best_case_mmse_given_output,
    worst_case_mmse,
)
from .errors import DimensionError, DomainError, check_range
from .scalar import binary_convolve, binary_entropy, inv_binary_entropy

__all__ = [
    "BoundResult",
    "mgl_scalar",
    "scalar_mmse_gerber",
    "scalar_memory_noise",
    "scalar_upper",
    "vector_mmse_gerber",
    "vector_upper",
    "conditional_vector_mmse_gerber",
    "noise_profile",
    "memory_noise_term",
    "vector_memory_noise",
    "sandwich_mgl",
    "sandwich_new",
]

_MMSE_SLACK = 1e-12


@dataclass(frozen=True)
class BoundResult:
    """A named bound value plus the inputs that produced it.

    `value` is bits per symbol except for name "memory-noise", which is a
    total over all symbols. `inputs` records the search outcome (optimizing
    order, MMSE level) next to the parameters, so results are reproducible
    without rerunning the search.
    """

    name: str
    value: float
    inputs: dict
    variant: str | None = None


def _check_mmse(name: str, mmse: float, scale: float = 0.25) -> float:
    mmse = float(mmse)
    if not (math.isfinite(mmse) and -_MMSE_SLACK <= mmse <= scale + _MMSE_SLACK):
        raise DomainError(f"{name} must lie in [0, {scale}], got {mmse!r}")
    return min(max(mmse, 0.0), scale)


def mgl_scalar(alpha: float, entropy_in: float) -> float:
    """Classical convolution bound h(alpha * h^{-1}(H)) on the noisy entropy."""
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    entropy_in = check_range("entropy", entropy_in, 0.0, 1.0)
    return binary_entropy(binary_convolve(alpha, inv_binary_entropy(entropy_in)))


def scalar_mmse_gerber(alpha: float, mmse: float) -> float:
    """Lower bound h(alpha) + (1 - h(alpha)) * 4 * mmse on the conditional
    entropy of a noisy bit whose prediction error is `mmse`."""
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    mmse = _check_mmse("mmse", mmse)
    ha = binary_entropy(alpha)
    return ha + (1.0 - ha) * 4.0 * mmse


def scalar_memory_noise(noise_entropy: float, mmse: float) -> float:
    """One term of the memory-noise bound: H + (1 - H) * 4 * mmse where H is
    the noise bit's conditional entropy given the earlier noise bits."""
    noise_entropy = check_range("noise_entropy", noise_entropy, 0.0, 1.0)
    mmse = _check_mmse("mmse", mmse)
    return noise_entropy + (1.0 - noise_entropy) * 4.0 * mmse


def scalar_upper(alpha: float, mmse: float) -> float:
    """Matching upper bound h(1/2 + (1 - 2 alpha)/2 * sqrt(1 - 4 * mmse))."""
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    mmse = _check_mmse("mmse", mmse)
    arg = 1.0 - 4.0 * mmse
    # rounding guard: mmse within 1e-12 of 1/4 may push the radicand negative
    arg = min(max(arg, 0.0), 1.0)
    return binary_entropy(0.5 + (0.5 - alpha) * math.sqrt(arg))


def vector_mmse_gerber(pmf: ExplicitPmf, alpha: float, cap: int = EXHAUSTIVE_CAP) -> BoundResult:
    """Per-symbol lower bound on the noisy output entropy H(Y)/n, maximized
    over prediction orders of the clean source."""
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    worst, order = worst_case_mmse(pmf, cap=cap)
    value = scalar_mmse_gerber(alpha, worst / pmf.n)
    return BoundResult(
        "mmse-gerber",
        value,
        {"alpha": alpha, "n": pmf.n, "mmse": worst, "order": order},
    )


def vector_upper(pmf: ExplicitPmf, alpha: float, cap: int = EXHAUSTIVE_CAP) -> BoundResult:
    """Per-symbol upper bound on H(Y)/n from the best prediction order that
    sees only noisy observations of the earlier bits."""
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    best, order = best_case_mmse_given_output(pmf, alpha, cap=cap)
    value = scalar_upper(alpha, best / pmf.n)
    return BoundResult(
        "upper",
        value,
        {"alpha": alpha, "n": pmf.n, "mmse": best, "order": order},
    )


def conditional_vector_mmse_gerber(
    family,
    alpha: float,
    cap: int = EXHAUSTIVE_CAP,
    per_component: bool = False,
) -> BoundResult:
    """Lower bound on the conditional noisy entropy H(Y | W)/n when the source
    law is a labeled mixture given as (weight, pmf) pairs.

    By default one shared prediction order maximizes the weighted MMSE sum,
    which is what the chain-rule argument supports. per_component=True lets
    every member use its own worst-case order instead; that variant is
    reported for comparison and is not claimed as a bound.
    """
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    members = [(float(wt), pmf) for wt, pmf in family]
    if not members:
        raise DomainError("the mixture family must be nonempty")
    n = members[0][1].n
    if any(pmf.n != n for _, pmf in members):
        raise DomainError("all mixture members must share one coordinate count")
    if n > cap:
        raise DimensionError(f"n={n} above the exhaustive-search cap {cap}")
    wts = [wt for wt, _ in members]
    if any(wt < 0.0 for wt in wts) or abs(sum(wts) - 1.0) > 1e-9:
        raise DomainError("mixture weights must form a probability vector")

    ha = binary_entropy(alpha)
    if per_component:
        mix = sum(wt * worst_case_mmse(pmf, cap=cap)[0] for wt, pmf in members)
        value = ha + (1.0 - ha) * 4.0 * mix / n
        return BoundResult(
            "conditional-mmse-gerber",
            value,
            {"alpha": alpha, "n": n, "mmse": mix, "order": None},
            variant="per-component",
        )

    tables = [(wt, _chain_cost_table(pmf)) for wt, pmf in members]
    best = -math.inf
    best_order: tuple[int, ...] = ()
    for perm in itertools.permutations(range(1, n + 1)):
        tot = 0.0
        for wt, cost in tables:
            mask = 0
            acc = 0.0
            for j in perm:
                acc += cost[(mask, j)]
                mask |= 1 << (j - 1)
            tot += wt * acc
        if tot > best:
            best, best_order = tot, perm
    value = ha + (1.0 - ha) * 4.0 * best / n
    return BoundResult(
        "conditional-mmse-gerber",
        value,
        {"alpha": alpha, "n": n, "mmse": best, "order": best_order},
        variant="shared",
    )


def _subset_entropies(pmf: ExplicitPmf) -> list[float]:
    """Entropy of every coordinate-subset marginal, indexed by mask."""
    n, w = pmf.n, pmf.weights
    ent = [0.0] * (1 << n)
    for mask in range(1, 1 << n):
        m = _marginal(w, n, _mask_coords(mask, n))
        pos = m[m > 0.0]
        ent[mask] = float(-(pos * np.log2(pos)).sum())
    return ent


def _profile_step(ent: list[float], mask: int, nxt: int) -> float:
    # chain-rule difference, clamped against float drift outside [0, 1]
    return min(max(ent[nxt] - ent[mask], 0.0), 1.0)


def noise_profile(pmf_z: ExplicitPmf, order) -> list[float]:
    """Per-step conditional entropies H(Z_{order[i]} | earlier ordered bits)."""
    order = _check_permutation(pmf_z, order)
    ent = _subset_entropies(pmf_z)
    out: list[float] = []
    mask = 0
    for j in order:
        nxt = mask | (1 << (j - 1))
        out.append(_profile_step(ent, mask, nxt))
        mask = nxt
    return out


def _same_dimension(pmf_x: ExplicitPmf, pmf_z: ExplicitPmf) -> None:
    if pmf_x.n != pmf_z.n:
        raise DomainError(f"source has n={pmf_x.n} but noise has n={pmf_z.n}")


def _memory_noise_total(
    order: Sequence[int], cost: dict, ent: list[float], n: int
) -> float:
    hz = ent[(1 << n) - 1]
    mask = 0
    msum = 0.0
    cross = 0.0
    for j in order:
        nxt = mask | (1 << (j - 1))
        c = cost[(mask, j)]
        msum += c
        cross += _profile_step(ent, mask, nxt) * c
        mask = nxt
    return hz + 4.0 * msum - 4.0 * cross


def memory_noise_term(pmf_x: ExplicitPmf, pmf_z: ExplicitPmf, order) -> float:
    """Value of the ordered memory-noise bound for one specific order:

        H(Z) + 4 * sum_i M_i - 4 * sum_i H_i * M_i

    in total bits, where M_i is the clean MMSE of source bit order[i] given
    the earlier ordered source bits and H_i the matching noise entropy step.
    """
    _same_dimension(pmf_x, pmf_z)
    order = _check_permutation(pmf_x, order)
    cost = _chain_cost_table(pmf_x)
    ent = _subset_entropies(pmf_z)
    return _memory_noise_total(order, cost, ent, pmf_x.n)


def vector_memory_noise(
    pmf_x: ExplicitPmf, pmf_z: ExplicitPmf, cap: int = EXHAUSTIVE_CAP
) -> BoundResult:
    """Lower bound on the total output entropy H(Y) for Y = X xor Z with the
    noise Z allowed its own memory, maximized over prediction orders.

    Reports total bits over all n symbols, not a per-symbol rate.
    """
    _same_dimension(pmf_x, pmf_z)
    if pmf_x.n > cap:
        raise DimensionError(f"n={pmf_x.n} above the exhaustive-search cap {cap}")
    cost = _chain_cost_table(pmf_x)
    ent = _subset_entropies(pmf_z)
    best = -math.inf
    best_order: tuple[int, ...] = ()
    for perm in itertools.permutations(range(1, pmf_x.n + 1)):
        tot = _memory_noise_total(perm, cost, ent, pmf_x.n)
        if tot > best:
            best, best_order = tot, perm
    return BoundResult(
        "memory-noise",
        best,
        {"n": pmf_x.n, "order": best_order, "noise_entropy": ent[(1 << pmf_x.n) - 1]},
    )


def sandwich_mgl(alpha: float, x: float) -> tuple[float, float]:
    """Bracketing pair for the classical bound at normalized MMSE level x:

        h(alpha * h^{-1}(x)) <= classical value <= h(alpha * (1/2 + sqrt(1-x)/2)).
    """
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    x = check_range("x", x, 0.0, 1.0)
    lower = binary_entropy(binary_convolve(alpha, inv_binary_entropy(x)))
    upper = binary_entropy(binary_convolve(alpha, 0.5 + 0.5 * math.sqrt(1.0 - x)))
    return lower, upper


def sandwich_new(alpha: float, u: float) -> tuple[float, float]:
    """Bracketing pair for the MMSE bound at per-symbol input entropy u:

        h(a) + (1-h(a)) * 4 p (1-p) <= bound <= h(a) + (1-h(a)) * u,  p = h^{-1}(u).
    """
    alpha = check_range("alpha", alpha, 0.0, 0.5)
    u = check_range("u", u, 0.0, 1.0)
    ha = binary_entropy(alpha)
    p = inv_binary_entropy(u)
    return ha + (1.0 - ha) * 4.0 * p * (1.0 - p), ha + (1.0 - ha) * u
