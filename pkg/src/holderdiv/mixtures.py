"""Two-sided bounds on Hölder divergences between univariate mixtures.

A product of mixtures is again a mixture of same-family products, so
the cross term ``integral m m'`` is exact in ``O(k k')`` evaluations of
the log-normalizer.  The power terms ``integral m^alpha`` have no
closed form; they are bracketed by a log-sum-exp argument: on any
interval where one weighted component dominates pointwise
(``delta = argmax_i w_i p_i``) and one is dominated
(``eps = argmin_i w_i p_i``),

    max( k^a integral (w_eps p_eps)^a, integral (w_delta p_delta)^a )
        <= integral m^a <= k^a integral (w_delta p_delta)^a

because ``w_delta p_delta <= m <= k w_delta p_delta`` and
``m >= k w_eps p_eps`` pointwise.  Each one-component power integral is
exact through the family's log-normalizer and an interval mass of the
power-scaled member.

The support is partitioned into such elementary intervals by locating
the crossings of the weighted log-densities (bisection on pairwise
differences), with infinite tails truncated where the residual mixture
mass drops below 1e-12; the truncated mass is folded into the upper
bound's slack so the bracket stays valid.  Only univariate families
(1D Gaussian, Laplace) are supported: the interval machinery is
inherently one-dimensional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfcinv

from .exponents import ConjugatePair, as_pair
from .families import Family, Gaussian, Laplace, NaturalParameter

__all__ = [
    "Mixture",
    "ElementaryPartition",
    "Bounds",
    "product_integral",
    "build_partition",
    "power_integral_bounds",
    "hpd_mixture_bounds",
    "component_interval_mass",
]

_TAIL_MASS = 1e-12
_CROSSING_DEPTH = 60
_SPLIT_DEPTH = 40
_PROBE_FRACTIONS = (0.05, 0.275, 0.5, 0.725, 0.95)


def _is_univariate(spec: Family) -> bool:
    return isinstance(spec, Laplace) or (
        isinstance(spec, Gaussian) and spec.d == 1
    )


@dataclass(frozen=True, eq=False)
class Mixture:
    """Finite mixture of same-family univariate members.

    Weights must be strictly positive and sum to one (tolerance 1e-12).
    """

    spec: Family
    weights: np.ndarray
    components: tuple[NaturalParameter, ...]

    def __post_init__(self) -> None:
        if not _is_univariate(self.spec):
            raise ValueError(
                "mixtures support univariate families only (1D gaussian, laplace)"
            )
        components = tuple(self.components)
        if not components:
            raise ValueError("a mixture needs at least one component")
        for theta in components:
            self.spec.check_domain(theta, "mixture component")
        w = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if w.shape != (len(components),):
            raise ValueError("one weight per component required")
        if np.any(w <= 0.0):
            raise ValueError("weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 (tolerance 1e-12)")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", components)

    @property
    def k(self) -> int:
        return len(self.components)

    def pdf(self, x: float) -> float:
        """Mixture density at a point."""
        return float(sum(
            w * self.spec.density_at(theta, x)
            for w, theta in zip(self.weights, self.components)
        ))

    def _weighted_log_densities(self, x: float) -> np.ndarray:
        """``log(w_i p_i(x))`` per component."""
        values = np.empty(self.k)
        for i, (w, theta) in enumerate(zip(self.weights, self.components)):
            density = self.spec.density_at(theta, x)
            values[i] = math.log(w) + (
                math.log(density) if density > 0.0 else -math.inf)
        return values


@dataclass(frozen=True, eq=False)
class ElementaryPartition:
    """Intervals on which the dominating and dominated component indices
    are constant (validated at interior probe points)."""

    breakpoints: np.ndarray
    dominant: np.ndarray
    dominated: np.ndarray

    @property
    def intervals(self) -> int:
        return self.dominant.shape[0]

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])


@dataclass(frozen=True)
class Bounds:
    lower: float
    upper: float


# ---------------------------------------------------------------------------
# exact product of mixtures
# ---------------------------------------------------------------------------


def product_integral(m: Mixture, m2: Mixture) -> float:
    """Exact ``integral m(x) m'(x) dx`` via the product-mixture expansion.

    ``sum_ij w_i w'_j exp(F(theta_i + theta'_j) - F(theta_i) -
    F(theta'_j))``; every cross sum of parameters must lie in the
    domain (automatic for cone families).
    """
    if m.spec.family_id != m2.spec.family_id:
        raise ValueError("mixtures must share a family")
    spec = m.spec
    f_i = np.array([spec.log_normalizer(t) for t in m.components])
    f_j = np.array([spec.log_normalizer(t) for t in m2.components])
    total = 0.0
    for i, ti in enumerate(m.components):
        for j, tj in enumerate(m2.components):
            cross = ti + tj
            spec.check_domain(cross, f"theta_{i} + theta'_{j}")
            total += m.weights[i] * m2.weights[j] * math.exp(
                spec.log_normalizer(cross) - f_i[i] - f_j[j])
    return total


# ---------------------------------------------------------------------------
# partition construction
# ---------------------------------------------------------------------------


def component_interval_mass(
    spec: Family, theta: NaturalParameter, interval: tuple[float, float]
) -> float:
    """Probability mass of a family member on an interval, via its CDF."""
    spec.check_domain(theta, "theta")
    lo, hi = interval
    if not lo <= hi:
        raise ValueError("interval endpoints out of order")
    if isinstance(spec, Gaussian):
        mu, cov = spec.from_natural(theta)
        mean, sd = float(mu[0]), math.sqrt(float(cov[0, 0]))

        def cdf(x: float) -> float:
            if math.isinf(x):
                return 0.0 if x < 0 else 1.0
            return 0.5 * (1.0 + math.erf((x - mean) / (sd * math.sqrt(2.0))))

    elif isinstance(spec, Laplace):
        sigma = spec.from_natural(theta)

        def cdf(x: float) -> float:
            if math.isinf(x):
                return 0.0 if x < 0 else 1.0
            if x < 0.0:
                return 0.5 * math.exp(x / sigma)
            return 1.0 - 0.5 * math.exp(-x / sigma)

    else:
        raise ValueError("interval mass supports 1D gaussian and laplace only")
    return min(max(cdf(hi) - cdf(lo), 0.0), 1.0)


def _component_tail_bounds(
    spec: Family, theta: NaturalParameter, tail: float
) -> tuple[float, float]:
    """Points beyond which a member's one-sided mass is below ``tail``."""
    if isinstance(spec, Gaussian):
        mu, cov = spec.from_natural(theta)
        mean, sd = float(mu[0]), math.sqrt(float(cov[0, 0]))
        z = math.sqrt(2.0) * float(erfcinv(2.0 * tail))
        return mean - z * sd, mean + z * sd
    sigma = spec.from_natural(theta)
    x = -sigma * math.log(2.0 * tail)
    return -x, x


def build_partition(
    m: Mixture,
    resolution: int = 64,
    tail_mass: float = _TAIL_MASS,
) -> ElementaryPartition:
    """Partition the support into elementary intervals for ``m``.

    Starts from a uniform grid over the truncated support, inserts the
    crossings of the weighted log-densities found by bisection, then
    validates every interval at interior probe points (splitting further
    where the probes disagree).  The partition does not depend on the
    exponent used later; a single-component mixture keeps its full
    infinite support, making the bounds exact.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if m.k == 1:
        return ElementaryPartition(
            breakpoints=np.array([-math.inf, math.inf]),
            dominant=np.array([0]),
            dominated=np.array([0]),
        )
    per_tail = tail_mass / m.k
    los, his = zip(*(
        _component_tail_bounds(m.spec, theta, per_tail)
        for theta in m.components
    ))
    lo, hi = min(los), max(his)
    points = set(np.linspace(lo, hi, resolution + 1))
    if isinstance(m.spec, Laplace) and lo < 0.0 < hi:
        points.add(0.0)  # shared kink of the weighted log-densities
    breaks = sorted(points)

    def crossings(a: float, b: float) -> list[float]:
        la, lb = m._weighted_log_densities(a), m._weighted_log_densities(b)
        found = []
        for pick in (np.argmax, np.argmin):
            i, j = int(pick(la)), int(pick(lb))
            if i == j:
                continue
            fa, fb = la[i] - la[j], lb[i] - lb[j]
            if fa == 0.0 or fb == 0.0 or (fa > 0.0) == (fb > 0.0):
                continue
            x0, x1, f0 = a, b, fa
            for _ in range(_CROSSING_DEPTH):
                mid = 0.5 * (x0 + x1)
                lm = m._weighted_log_densities(mid)
                fm = lm[i] - lm[j]
                if fm == 0.0:
                    break
                if (fm > 0.0) == (f0 > 0.0):
                    x0, f0 = mid, fm
                else:
                    x1 = mid
            found.append(0.5 * (x0 + x1))
        return found

    refined = []
    for a, b in zip(breaks[:-1], breaks[1:]):
        refined.append(a)
        refined.extend(sorted(crossings(a, b)))
    refined.append(breaks[-1])

    def probe_indices(a: float, b: float) -> tuple[int, int] | None:
        deltas, epsilons = set(), set()
        for frac in _PROBE_FRACTIONS:
            logs = m._weighted_log_densities(a + frac * (b - a))
            deltas.add(int(np.argmax(logs)))
            epsilons.add(int(np.argmin(logs)))
        if len(deltas) == 1 and len(epsilons) == 1:
            return deltas.pop(), epsilons.pop()
        return None

    final_breaks = [refined[0]]
    dominant, dominated = [], []
    stack = [(a, b, 0) for a, b in zip(refined[:-1], refined[1:])][::-1]
    while stack:
        a, b, depth = stack.pop()
        if b - a <= 0.0:
            continue
        indices = probe_indices(a, b)
        if indices is None:
            if depth >= _SPLIT_DEPTH:
                raise RuntimeError(
                    f"could not separate component crossings on "
                    f"[{a}, {b}] after {depth} splits"
                )
            mid = 0.5 * (a + b)
            stack.append((mid, b, depth + 1))
            stack.append((a, mid, depth + 1))
            continue
        final_breaks.append(b)
        dominant.append(indices[0])
        dominated.append(indices[1])
    return ElementaryPartition(
        breakpoints=np.array(final_breaks),
        dominant=np.array(dominant, dtype=int),
        dominated=np.array(dominated, dtype=int),
    )


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def power_integral_bounds(
    m: Mixture, alpha: float, partition: ElementaryPartition
) -> Bounds:
    """Deterministic bracket of ``integral m(x)^alpha dx``.

    Requires ``alpha * theta_i`` in the domain for every component.
    Mass outside the truncated support is added to the upper bound,
    bounded pointwise by ``m^alpha <= k^alpha sum_i (w_i p_i)^alpha``.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    spec = m.spec
    scaled = []
    amplitudes = np.empty(m.k)
    for i, theta in enumerate(m.components):
        s = alpha * theta
        spec.check_domain(s, f"alpha * theta_{i}")
        amplitudes[i] = math.exp(
            spec.log_normalizer(s) - alpha * spec.log_normalizer(theta))
        scaled.append(s)
    k_pow = float(m.k) ** alpha
    w_pow = m.weights**alpha
    lower = 0.0
    upper = 0.0
    for l in range(partition.intervals):
        a, b = partition.breakpoints[l], partition.breakpoints[l + 1]
        d, e = int(partition.dominant[l]), int(partition.dominated[l])
        mass_d = component_interval_mass(spec, scaled[d], (a, b))
        term_d = w_pow[d] * amplitudes[d] * mass_d
        mass_e = component_interval_mass(spec, scaled[e], (a, b))
        term_e = k_pow * w_pow[e] * amplitudes[e] * mass_e
        lower += max(term_e, term_d)
        upper += k_pow * term_d
    lo_support, hi_support = partition.support
    if math.isfinite(lo_support) or math.isfinite(hi_support):
        tail = 0.0
        for i in range(m.k):
            outside = 1.0 - component_interval_mass(
                spec, scaled[i], (lo_support, hi_support))
            tail += k_pow * w_pow[i] * amplitudes[i] * outside
        upper += tail
    return Bounds(lower=lower, upper=upper)


def hpd_mixture_bounds(
    m: Mixture,
    m2: Mixture,
    pair: ConjugatePair | float,
    resolution: int = 64,
) -> Bounds:
    """Two-sided bounds on the Hölder pseudo-divergence of two mixtures.

    The cross term is exact; the two power norms are bracketed per
    mixture, and the brackets combine monotonically::

        lower = -log int mm' + log(lower_alpha)/alpha + log(lower_beta)/beta
        upper = -log int mm' + log(upper_alpha)/alpha + log(upper_beta)/beta
    """
    pair = as_pair(pair)
    if not pair.is_forward:
        raise ValueError("mixture bounds require the forward regime alpha > 1")
    cross = product_integral(m, m2)
    bounds_p = power_integral_bounds(m, pair.alpha, build_partition(
        m, resolution=resolution))
    bounds_q = power_integral_bounds(m2, pair.beta, build_partition(
        m2, resolution=resolution))
    log_cross = math.log(cross)
    lower = (-log_cross + math.log(bounds_p.lower) / pair.alpha
             + math.log(bounds_q.lower) / pair.beta)
    upper = (-log_cross + math.log(bounds_p.upper) / pair.alpha
             + math.log(bounds_q.upper) / pair.beta)
    return Bounds(lower=lower, upper=upper)
