"""Closed-form Hölder divergences for same-family pairs.

When two densities belong to the same exponential family whose natural
parameter space is a cone or affine, every integral in the divergence
definitions collapses to evaluations of the log-normalizer ``F``::

    hpd_closed:  F(a tp)/a + F(b tq)/b - F(tp + tq)
    hd_closed:   F(g tp)/a + F(g tq)/b - F(g/a tp + g/b tq)

with ``(a, b)`` a forward conjugate pair and ``g > 0``.  Each formula
lists the natural-parameter combinations it needs and validates them
before any evaluation (important near the boundary of cone domains);
a violated combination raises :class:`~.families.OutOfDomainError`
naming the offending combination.

Tiny negative results (floating-point noise above ``-1e-10``) are
clamped to zero; anything more negative signals formula misuse and
raises.  Only the forward regime ``alpha > 1`` is exposed here; the
reverse Hölder inequality is covered by the definition-level checks in
:mod:`~.oracle`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exponents import ConjugatePair, as_pair
from .families import Family, NaturalParameter

__all__ = [
    "hpd_closed",
    "hd_closed",
    "cs_closed",
    "kl_closed",
    "sym_hpd_closed",
    "sym_hd_closed",
    "skew_bhattacharyya_closed",
    "escort_divergence",
    "pre_aim_check",
    "PreAimCheck",
    "hpd_minimizer_categorical",
    "hpd_bisector_residual",
    "hpd_closed_batch",
    "hd_closed_batch",
    "sym_hpd_closed_batch",
    "sym_hd_closed_batch",
]

_NEGATIVE_FLOOR = -1e-10


def _clamp(value: float) -> float:
    if value < _NEGATIVE_FLOOR:
        raise ValueError(
            f"divergence evaluated to {value}, beyond floating-point noise; "
            "check the parameter combinations"
        )
    return max(value, 0.0)


def _forward(pair: ConjugatePair | float) -> ConjugatePair:
    pair = as_pair(pair)
    if not pair.is_forward:
        raise ValueError(
            f"closed forms require the forward regime alpha > 1, "
            f"got alpha = {pair.alpha}"
        )
    return pair


def _checked(spec: Family, combos: list[tuple[str, NaturalParameter]]) -> list[float]:
    """Validate each named combination, then evaluate F on it."""
    for name, theta in combos:
        spec.check_domain(theta, name)
    return [spec.log_normalizer(theta) for _, theta in combos]


def hpd_closed(
    spec: Family,
    theta_p: NaturalParameter,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
) -> float:
    """Hölder pseudo-divergence between same-family members.

    Needs ``alpha*theta_p``, ``beta*theta_q`` and ``theta_p + theta_q``
    in the natural parameter space.  Vanishes exactly on the zero set
    ``theta_q = (alpha - 1) theta_p``.
    """
    pair = _forward(pair)
    a, b = pair.alpha, pair.beta
    fa, fb, fs = _checked(spec, [
        ("alpha * theta_p", a * theta_p),
        ("beta * theta_q", b * theta_q),
        ("theta_p + theta_q", theta_p + theta_q),
    ])
    return _clamp(fa / a + fb / b - fs)


def hd_closed(
    spec: Family,
    theta_p: NaturalParameter,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
    gamma: float,
) -> float:
    """Proper Hölder divergence between same-family members.

    Needs ``gamma*theta_p``, ``gamma*theta_q`` and the mixture point
    ``gamma/alpha theta_p + gamma/beta theta_q`` in the domain.  Zero
    iff ``theta_p = theta_q``.
    """
    pair = _forward(pair)
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    a, b = pair.alpha, pair.beta
    fp, fq, fm = _checked(spec, [
        ("gamma * theta_p", gamma * theta_p),
        ("gamma * theta_q", gamma * theta_q),
        ("gamma/alpha theta_p + gamma/beta theta_q",
         (gamma / a) * theta_p + (gamma / b) * theta_q),
    ])
    return _clamp(fp / a + fq / b - fm)


def cs_closed(
    spec: Family, theta_p: NaturalParameter, theta_q: NaturalParameter
) -> float:
    """Cauchy-Schwarz divergence: the unique member of both the
    pseudo-divergence and proper-divergence classes
    (``alpha = beta = gamma = 2``).  Shares the arithmetic path of
    :func:`hpd_closed`, hence equals it exactly at ``alpha = 2``."""
    return hpd_closed(spec, theta_p, theta_q, ConjugatePair(2.0, 2.0))


def kl_closed(
    spec: Family, theta_p: NaturalParameter, theta_q: NaturalParameter
) -> float:
    """Kullback-Leibler divergence between same-family members.

    Uses the Bregman identity on the log-normalizer::

        KL(p : q) = F(theta_q) - F(theta_p)
                    - <theta_q - theta_p, grad F(theta_p)>.

    Provided for side-by-side comparison with the Hölder values (it is
    not a projective divergence).
    """
    fq, fp = _checked(spec, [("theta_q", theta_q), ("theta_p", theta_p)])
    grad_p = spec.grad_log_normalizer(theta_p)
    return _clamp(fq - fp - float((theta_q.coords - theta_p.coords) @ grad_p))


def sym_hpd_closed(
    spec: Family,
    theta_p: NaturalParameter,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
) -> float:
    """Arithmetic symmetrization of the Hölder pseudo-divergence.

    Symmetric in its arguments and invariant under
    ``alpha <-> alpha/(alpha-1)``.
    """
    pair = _forward(pair)
    a, b = pair.alpha, pair.beta
    fap, fbp, faq, fbq, fs = _checked(spec, [
        ("alpha * theta_p", a * theta_p),
        ("beta * theta_p", b * theta_p),
        ("alpha * theta_q", a * theta_q),
        ("beta * theta_q", b * theta_q),
        ("theta_p + theta_q", theta_p + theta_q),
    ])
    return _clamp(0.5 * (fap / a + fbp / b + faq / a + fbq / b) - fs)


def sym_hd_closed(
    spec: Family,
    theta_p: NaturalParameter,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
    gamma: float,
) -> float:
    """Arithmetic symmetrization of the proper Hölder divergence."""
    pair = _forward(pair)
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    a, b = pair.alpha, pair.beta
    fp, fq, fm1, fm2 = _checked(spec, [
        ("gamma * theta_p", gamma * theta_p),
        ("gamma * theta_q", gamma * theta_q),
        ("gamma/alpha theta_p + gamma/beta theta_q",
         (gamma / a) * theta_p + (gamma / b) * theta_q),
        ("gamma/beta theta_p + gamma/alpha theta_q",
         (gamma / b) * theta_p + (gamma / a) * theta_q),
    ])
    return _clamp(0.5 * (fp + fq - fm1 - fm2))


def skew_bhattacharyya_closed(
    spec: Family,
    theta_p: NaturalParameter,
    theta_q: NaturalParameter,
    lam: float,
) -> float:
    """Skew Bhattacharyya divergence in closed form.

    ``lam F(theta_p) + (1 - lam) F(theta_q) - F(lam theta_p +
    (1-lam) theta_q)``; nonnegative by convexity of ``F``.  The convex
    combination is automatically in the domain.
    """
    if not 0.0 < lam < 1.0:
        raise ValueError("lambda must lie in (0, 1)")
    fp, fq, fm = _checked(spec, [
        ("theta_p", theta_p),
        ("theta_q", theta_q),
        ("lam theta_p + (1-lam) theta_q",
         lam * theta_p + (1.0 - lam) * theta_q),
    ])
    return _clamp(lam * fp + (1.0 - lam) * fq - fm)


def escort_divergence(
    spec: Family,
    theta_p: NaturalParameter,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
) -> float:
    """Hölder pseudo-divergence between the escort distributions.

    The escorts live at ``theta_p/alpha`` and ``theta_q/beta``, and the
    resulting value coincides with the skew Bhattacharyya divergence of
    order ``1/alpha`` between the original members.
    """
    pair = _forward(pair)
    return hpd_closed(spec, theta_p / pair.alpha, theta_q / pair.beta, pair)


@dataclass(frozen=True)
class PreAimCheck:
    """Both sides of the two pre-aim identities.

    ``power_first`` compares the pseudo-divergence taken from the
    ``1/(alpha-1)``-powered first argument against the proper
    divergence with ``gamma = beta``; ``power_second`` compares
    aiming at the ``(alpha-1)``-powered argument against the proper
    divergence with the exponent roles swapped and ``gamma = alpha``.
    """

    power_first: tuple[float, float]
    power_second: tuple[float, float]


def pre_aim_check(
    spec: Family,
    theta_p: NaturalParameter,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
) -> PreAimCheck:
    """Evaluate both sides of the pre-aim identities.

    Replacing an argument by its pseudo-divergence zero-set partner
    turns the improper pseudo-divergence into a proper divergence::

        hpd(p^(1/(alpha-1)) : q, alpha) = hd(p : q, alpha, gamma=beta)
        hpd(q : p^(alpha-1), alpha)     = hd(p : q, beta,  gamma=alpha)

    Powering a density maps ``theta`` to the correspondingly scaled
    natural parameter (projectivity disposes of the normalization).
    """
    pair = _forward(pair)
    a, b = pair.alpha, pair.beta
    lhs1 = hpd_closed(spec, theta_p / (a - 1.0), theta_q, pair)
    rhs1 = hd_closed(spec, theta_p, theta_q, pair, gamma=b)
    lhs2 = hpd_closed(spec, theta_q, (a - 1.0) * theta_p, pair)
    rhs2 = hd_closed(spec, theta_p, theta_q, pair.swapped(), gamma=a)
    return PreAimCheck(power_first=(lhs1, rhs1), power_second=(lhs2, rhs2))


def hpd_minimizer_categorical(c: np.ndarray, alpha: float) -> np.ndarray:
    """Displaced minimizer of ``p -> hpd(c : p)`` on the simplex.

    The pseudo-divergence vanishes on ``q`` proportional to
    ``c^(alpha-1)``; projecting that ray back onto the simplex gives the
    elementwise power, renormalized.  At ``alpha = 2`` the minimizer is
    ``c`` itself.
    """
    if alpha <= 1.0:
        raise ValueError("alpha must exceed 1")
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0.0):
        raise ValueError("c must lie strictly inside the simplex")
    if abs(c.sum() - 1.0) > 1e-12:
        raise ValueError("c must sum to 1")
    powered = c ** (alpha - 1.0)
    return powered / powered.sum()


def hpd_bisector_residual(
    spec: Family,
    theta1: NaturalParameter,
    theta2: NaturalParameter,
    theta: NaturalParameter,
    pair: ConjugatePair | float,
) -> float:
    """Signed residual of the pseudo-divergence bisector equation.

    Zero iff ``theta`` is equidistant from ``theta1`` and ``theta2``;
    equals ``hpd_closed(theta1, theta) - hpd_closed(theta2, theta)`` and
    flips sign when the first two arguments are swapped.
    """
    pair = _forward(pair)
    a = pair.alpha
    f1, f2, g2, g1 = _checked(spec, [
        ("alpha * theta1", a * theta1),
        ("alpha * theta2", a * theta2),
        ("theta2 + theta", theta2 + theta),
        ("theta1 + theta", theta1 + theta),
    ])
    return (f1 - f2) / a - (g2 - g1)


# ---------------------------------------------------------------------------
# batched variants (one fixed argument against many), used by the
# centroid and clustering iterations
# ---------------------------------------------------------------------------


def _clamp_array(values: np.ndarray) -> np.ndarray:
    if np.any(values < _NEGATIVE_FLOOR):
        worst = float(values.min())
        raise ValueError(f"divergence evaluated to {worst}, beyond noise")
    return np.maximum(values, 0.0)


def hpd_closed_batch(
    spec: Family,
    thetas: np.ndarray,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
) -> np.ndarray:
    """``hpd_closed(theta_i, theta_q)`` over rows of ``(n, dim)`` coords."""
    pair = _forward(pair)
    a, b = pair.alpha, pair.beta
    thetas = np.asarray(thetas, dtype=float)
    fa = spec.log_normalizer_batch(a * thetas)
    fb = spec.log_normalizer(b * theta_q)
    fs = spec.log_normalizer_batch(thetas + theta_q.coords)
    return _clamp_array(fa / a + fb / b - fs)


def hd_closed_batch(
    spec: Family,
    thetas: np.ndarray,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
    gamma: float,
) -> np.ndarray:
    """``hd_closed(theta_i, theta_q)`` over rows of ``(n, dim)`` coords."""
    pair = _forward(pair)
    a, b = pair.alpha, pair.beta
    thetas = np.asarray(thetas, dtype=float)
    fp = spec.log_normalizer_batch(gamma * thetas)
    fq = spec.log_normalizer(gamma * theta_q)
    fm = spec.log_normalizer_batch(
        (gamma / a) * thetas + (gamma / b) * theta_q.coords
    )
    return _clamp_array(fp / a + fq / b - fm)


def sym_hpd_closed_batch(
    spec: Family,
    thetas: np.ndarray,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
) -> np.ndarray:
    """``sym_hpd_closed(theta_i, theta_q)`` over rows of ``(n, dim)`` coords."""
    pair = _forward(pair)
    a, b = pair.alpha, pair.beta
    thetas = np.asarray(thetas, dtype=float)
    fap = spec.log_normalizer_batch(a * thetas)
    fbp = spec.log_normalizer_batch(b * thetas)
    faq = spec.log_normalizer(a * theta_q)
    fbq = spec.log_normalizer(b * theta_q)
    fs = spec.log_normalizer_batch(thetas + theta_q.coords)
    return _clamp_array(0.5 * (fap / a + fbp / b + faq / a + fbq / b) - fs)


def sym_hd_closed_batch(
    spec: Family,
    thetas: np.ndarray,
    theta_q: NaturalParameter,
    pair: ConjugatePair | float,
    gamma: float,
    f_gamma_thetas: np.ndarray | None = None,
) -> np.ndarray:
    """``sym_hd_closed(theta_i, theta_q)`` over rows of ``(n, dim)`` coords.

    ``f_gamma_thetas`` may carry precomputed ``F(gamma theta_i)`` values
    (they do not depend on ``theta_q``, so callers that sweep the second
    argument can reuse them).
    """
    pair = _forward(pair)
    a, b = pair.alpha, pair.beta
    thetas = np.asarray(thetas, dtype=float)
    if f_gamma_thetas is None:
        f_gamma_thetas = spec.log_normalizer_batch(gamma * thetas)
    fq = spec.log_normalizer(gamma * theta_q)
    fm1 = spec.log_normalizer_batch(
        (gamma / a) * thetas + (gamma / b) * theta_q.coords
    )
    fm2 = spec.log_normalizer_batch(
        (gamma / b) * thetas + (gamma / a) * theta_q.coords
    )
    return _clamp_array(0.5 * (f_gamma_thetas + fq - fm1 - fm2))
