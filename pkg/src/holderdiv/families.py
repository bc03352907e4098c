"""Conic and affine exponential families and their Legendre calculus.

Each family is described by its log-normalizer ``F`` (the cumulant
generating function), which is strictly convex on the natural parameter
space ``Theta``.  Densities have the canonical form::

    p(x; theta) = exp(<theta, t(x)> - F(theta))

with no auxiliary carrier term, so that for any ``a > 0`` with
``a * theta`` in ``Theta``::

    integral p(x; theta)^a dx = exp(F(a*theta) - a*F(theta)).

Implemented families (natural-parameter conventions):

- ``categorical`` over ``m+1`` outcomes: ``theta_i = log(p_i / p_0)``
  for ``i = 1..m``; ``F(theta) = log(1 + sum_i exp(theta_i))``.
  ``Theta = R^m`` (affine).
- ``bernoulli``: the ``m = 1`` special case, ``F = log(1 + e^theta)``.
- ``gaussian`` (multivariate normal, dimension ``d``):
  ``theta = (v, M) = (Sigma^-1 mu, -Sigma^-1 / 2)`` with ``M`` negative
  definite; ``F = log((2 pi)^d |Sigma|) / 2 + mu' Sigma^-1 mu / 2``.
  Coordinates are packed as ``v`` followed by the lower triangle of
  ``M`` (row-wise).  ``Theta`` is a cone.
- ``laplace`` (zero-centered, scale ``sigma``): ``theta = -1/sigma < 0``;
  ``F = log(-2 / theta)``.
- ``wishart`` on the ``d x d`` positive definite cone:
  ``theta = (theta1, theta2) = (-S^-1 / 2, (n - d - 1)/2)`` with
  ``theta1`` negative definite and ``n > d - 1``;
  ``F = -(n/2) log|-theta1| + log Gamma_d(n/2)``.
  Coordinates: lower triangle of ``theta1`` followed by ``theta2``.

Domain checks are strict (open sets); boundary parameters raise
:class:`OutOfDomainError` instead of being clamped, because the
divergence formulas downstream would otherwise fail silently.

For symmetric-matrix blocks the packed gradient doubles off-diagonal
entries so that ``grad_log_normalizer`` agrees with finite differences
of ``log_normalizer`` taken in the packed coordinates;
``inv_grad_log_normalizer`` undoes the doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.special import digamma, gammaln, logsumexp, multigammaln, polygamma

__all__ = [
    "NaturalParameter",
    "OutOfDomainError",
    "Family",
    "Categorical",
    "Bernoulli",
    "Gaussian",
    "Laplace",
    "Wishart",
    "power_integral",
    "escort_natural",
    "distribution_from_dict",
    "distribution_to_dict",
]

_SIMPLEX_TOL = 1e-12
_ROUNDTRIP_TOL = 1e-10
_MAX_CONDITION = 1e12


class OutOfDomainError(ValueError):
    """A natural parameter (or combination) left the family's domain."""

    def __init__(self, family_id: str, detail: str):
        self.family_id = family_id
        self.detail = detail
        super().__init__(f"[{family_id}] {detail}")


@dataclass(frozen=True, eq=False)
class NaturalParameter:
    """A point in a family's natural parameter space, flat-encoded.

    Supports the linear operations needed to form the parameter
    combinations of the Hölder formulas: ``a * theta`` and
    ``theta + theta'`` (same family only).  No domain check is applied
    by the arithmetic itself; combinations are validated explicitly by
    the callers that require them to lie in ``Theta``.
    """

    family_id: str
    coords: np.ndarray

    def __post_init__(self) -> None:
        coords = np.atleast_1d(np.asarray(self.coords, dtype=float))
        if coords.ndim != 1:
            raise ValueError("natural coordinates must be a flat vector")
        coords = coords.copy()
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    def __mul__(self, scalar: float) -> "NaturalParameter":
        return NaturalParameter(self.family_id, self.coords * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "NaturalParameter":
        return NaturalParameter(self.family_id, self.coords / float(scalar))

    def __add__(self, other: "NaturalParameter") -> "NaturalParameter":
        if self.family_id != other.family_id:
            raise ValueError(
                f"cannot combine parameters of families "
                f"{self.family_id!r} and {other.family_id!r}"
            )
        return NaturalParameter(self.family_id, self.coords + other.coords)

    def __neg__(self) -> "NaturalParameter":
        return NaturalParameter(self.family_id, -self.coords)


# ---------------------------------------------------------------------------
# symmetric-matrix packing helpers
# ---------------------------------------------------------------------------


def _pack_sym(mat: np.ndarray) -> np.ndarray:
    """Lower triangle of a symmetric matrix, row-wise."""
    d = mat.shape[0]
    return mat[np.tril_indices(d)]


def _unpack_sym(vec: np.ndarray, d: int) -> np.ndarray:
    mat = np.zeros((d, d))
    mat[np.tril_indices(d)] = vec
    return mat + mat.T - np.diag(np.diag(mat))


def _pack_sym_grad(full_grad: np.ndarray) -> np.ndarray:
    """Pack a full-matrix gradient; off-diagonals doubled.

    Perturbing one packed off-diagonal coordinate moves two symmetric
    matrix entries, so the packed partial derivative is twice the
    full-matrix one.
    """
    d = full_grad.shape[0]
    scale = 2.0 * np.ones((d, d)) - np.eye(d)
    return (full_grad * scale)[np.tril_indices(d)]


def _unpack_sym_grad(vec: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`_pack_sym_grad`."""
    mat = np.zeros((d, d))
    mat[np.tril_indices(d)] = vec
    mat = mat + mat.T - np.diag(np.diag(mat))
    off = 2.0 * np.ones((d, d)) - np.eye(d)
    return mat / off


def _is_pos_def(mat: np.ndarray, max_condition: float = _MAX_CONDITION) -> bool:
    eigs = np.linalg.eigvalsh(0.5 * (mat + mat.T))
    if eigs[0] <= 0.0:
        return False
    return eigs[-1] / eigs[0] <= max_condition


# ---------------------------------------------------------------------------
# family base class
# ---------------------------------------------------------------------------


class Family:
    """An exponential family: log-normalizer, gradients, conversions.

    Instances are immutable after construction and safe to share across
    threads; every operation is a pure function of its arguments.
    """

    family_id: str = ""
    dim: int = 0

    # -- parameter plumbing -------------------------------------------------

    def natural(self, coords: Any) -> NaturalParameter:
        """Wrap flat coordinates, validating length and finiteness."""
        theta = NaturalParameter(self.family_id, coords)
        if theta.coords.shape != (self.dim,):
            raise ValueError(
                f"{self.family_id} expects {self.dim} natural coordinates, "
                f"got {theta.coords.shape[0]}"
            )
        if not np.all(np.isfinite(theta.coords)):
            raise OutOfDomainError(self.family_id, "non-finite natural coordinates")
        return theta

    def _check(self, theta: NaturalParameter) -> np.ndarray:
        if theta.family_id != self.family_id:
            raise ValueError(
                f"parameter belongs to {theta.family_id!r}, not {self.family_id!r}"
            )
        if theta.coords.shape != (self.dim,):
            raise ValueError(
                f"{self.family_id} expects {self.dim} coordinates, "
                f"got {theta.coords.shape[0]}"
            )
        return theta.coords

    def in_domain(self, theta: NaturalParameter) -> bool:
        """Whether ``theta`` lies in the open natural parameter space."""
        try:
            self.check_domain(theta)
        except OutOfDomainError:
            return False
        return True

    def check_domain(self, theta: NaturalParameter, context: str = "") -> None:
        """Raise :class:`OutOfDomainError` if ``theta`` is outside ``Theta``."""
        raise NotImplementedError

    def _domain_error(self, detail: str, context: str) -> OutOfDomainError:
        if context:
            detail = f"{context}: {detail}"
        return OutOfDomainError(self.family_id, detail)

    # -- Legendre calculus --------------------------------------------------

    def log_normalizer(self, theta: NaturalParameter) -> float:
        """Evaluate ``F(theta)``."""
        raise NotImplementedError

    def grad_log_normalizer(self, theta: NaturalParameter) -> np.ndarray:
        """Evaluate the expectation parameters ``eta = grad F(theta)``."""
        raise NotImplementedError

    def inv_grad_log_normalizer(self, eta: Any) -> NaturalParameter:
        """Invert the Legendre map: return ``theta`` with ``grad F(theta) = eta``."""
        raise NotImplementedError

    def log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        """``F`` over rows of an ``(n, dim)`` coordinate matrix."""
        coords = np.asarray(coords, dtype=float)
        return np.array([self.log_normalizer(self.natural(row)) for row in coords])

    def grad_log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        """``grad F`` over rows of an ``(n, dim)`` coordinate matrix."""
        coords = np.asarray(coords, dtype=float)
        return np.stack(
            [self.grad_log_normalizer(self.natural(row)) for row in coords]
        )

    # -- densities ----------------------------------------------------------

    def density_at(self, theta: NaturalParameter, x: Any) -> float:
        """Density (or pmf) of the family member ``theta`` at a support point."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# categorical / Bernoulli
# ---------------------------------------------------------------------------


class Categorical(Family):
    """Categorical distribution over ``m + 1`` outcomes.

    The first simplex coordinate ``p_0`` is the redundant one dropped
    from the natural parametrization: ``theta_i = log(p_i / p_0)``.
    Public constructors take the full simplex vector.
    """

    family_id = "categorical"

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("categorical needs at least two outcomes (m >= 1)")
        self.m = int(m)
        self.dim = self.m

    def check_domain(self, theta: NaturalParameter, context: str = "") -> None:
        coords = self._check(theta)
        if not np.all(np.isfinite(coords)):
            raise self._domain_error("non-finite natural coordinates", context)

    def log_normalizer(self, theta: NaturalParameter) -> float:
        coords = self._check(theta)
        return float(logsumexp(np.concatenate(([0.0], coords))))

    def log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        padded = np.concatenate([np.zeros((coords.shape[0], 1)), coords], axis=1)
        return logsumexp(padded, axis=1)

    def grad_log_normalizer(self, theta: NaturalParameter) -> np.ndarray:
        coords = self._check(theta)
        return np.exp(coords - self.log_normalizer(theta))

    def grad_log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return np.exp(coords - self.log_normalizer_batch(coords)[:, None])

    def inv_grad_log_normalizer(self, eta: Any) -> NaturalParameter:
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (self.m,):
            raise ValueError(f"expected {self.m} expectation coordinates")
        rest = 1.0 - eta.sum()
        if np.any(eta <= 0.0) or rest <= 0.0:
            raise self._domain_error(
                "expectation parameters must lie in the open simplex interior", ""
            )
        return self.natural(np.log(eta) - math.log(rest))

    def to_natural(self, probs: Any) -> NaturalParameter:
        """Natural parameters of a full simplex vector ``(p_0, ..., p_m)``."""
        probs = np.asarray(probs, dtype=float)
        if probs.shape != (self.m + 1,):
            raise ValueError(f"expected {self.m + 1} probabilities")
        if abs(probs.sum() - 1.0) > _SIMPLEX_TOL:
            raise ValueError("probabilities must sum to 1 (tolerance 1e-12)")
        if np.any(probs <= 0.0):
            raise self._domain_error(
                "zero or negative probability: boundary of the simplex is excluded",
                "",
            )
        return self.natural(np.log(probs[1:]) - math.log(probs[0]))

    def from_natural(self, theta: NaturalParameter) -> np.ndarray:
        """Full simplex vector ``(p_0, ..., p_m)`` of ``theta``."""
        coords = self._check(theta)
        lognorm = self.log_normalizer(theta)
        return np.exp(np.concatenate(([0.0], coords)) - lognorm)

    def density_at(self, theta: NaturalParameter, x: Any) -> float:
        i = int(x)
        if not 0 <= i <= self.m:
            raise ValueError(f"outcome index {i} outside 0..{self.m}")
        return float(self.from_natural(theta)[i])


class Bernoulli(Family):
    """Bernoulli distribution: categorical with two outcomes.

    ``theta = log(p_1 / p_0)`` and ``F(theta) = log(1 + e^theta)``.
    """

    family_id = "bernoulli"
    dim = 1

    def check_domain(self, theta: NaturalParameter, context: str = "") -> None:
        coords = self._check(theta)
        if not np.all(np.isfinite(coords)):
            raise self._domain_error("non-finite natural coordinate", context)

    def log_normalizer(self, theta: NaturalParameter) -> float:
        (t,) = self._check(theta)
        return float(np.logaddexp(0.0, t))

    def log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return np.logaddexp(0.0, coords[:, 0])

    def grad_log_normalizer(self, theta: NaturalParameter) -> np.ndarray:
        (t,) = self._check(theta)
        return np.array([math.exp(t - np.logaddexp(0.0, t))])

    def grad_log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return np.exp(coords - np.logaddexp(0.0, coords))

    def inv_grad_log_normalizer(self, eta: Any) -> NaturalParameter:
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        (e,) = eta
        if not 0.0 < e < 1.0:
            raise self._domain_error("expectation parameter must lie in (0, 1)", "")
        return self.natural([math.log(e) - math.log1p(-e)])

    def to_natural(self, p1: float) -> NaturalParameter:
        """Natural parameter of success probability ``p1``."""
        p1 = float(p1)
        if not 0.0 < p1 < 1.0:
            raise self._domain_error("p1 must lie strictly inside (0, 1)", "")
        return self.natural([math.log(p1) - math.log1p(-p1)])

    def from_natural(self, theta: NaturalParameter) -> float:
        """Success probability ``p1`` of ``theta``."""
        (t,) = self._check(theta)
        return float(math.exp(t - np.logaddexp(0.0, t)))

    def density_at(self, theta: NaturalParameter, x: Any) -> float:
        i = int(x)
        if i not in (0, 1):
            raise ValueError("Bernoulli outcomes are 0 and 1")
        p1 = self.from_natural(theta)
        return p1 if i == 1 else 1.0 - p1


# ---------------------------------------------------------------------------
# multivariate normal
# ---------------------------------------------------------------------------


class Gaussian(Family):
    """Multivariate normal in natural coordinates ``(v, M)``.

    ``v = Sigma^-1 mu`` and ``M = -Sigma^-1 / 2`` (negative definite).
    Flat encoding: ``v`` (length ``d``) followed by the packed lower
    triangle of ``M``.  With ``P = -2M = Sigma^-1``::

        F(theta) = d/2 log(2 pi) - log|P| / 2 + v' P^-1 v / 2.
    """

    family_id = "gaussian"

    def __init__(self, d: int = 1):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.d = int(d)
        self.dim = self.d + self.d * (self.d + 1) // 2

    def split(self, theta: NaturalParameter) -> tuple[np.ndarray, np.ndarray]:
        """Unpack flat coordinates into ``(v, M)``."""
        coords = self._check(theta)
        return coords[: self.d], _unpack_sym(coords[self.d :], self.d)

    def join(self, v: np.ndarray, M: np.ndarray) -> NaturalParameter:
        """Pack ``(v, M)`` into flat coordinates."""
        return self.natural(np.concatenate([np.asarray(v, float), _pack_sym(M)]))

    def _precision(self, theta: NaturalParameter, context: str = "") -> np.ndarray:
        v, M = self.split(theta)
        P = -2.0 * M
        if not _is_pos_def(P):
            raise self._domain_error(
                "M must be negative definite with condition number <= 1e12",
                context,
            )
        return P

    def check_domain(self, theta: NaturalParameter, context: str = "") -> None:
        self._precision(theta, context)

    def log_normalizer(self, theta: NaturalParameter) -> float:
        v, M = self.split(theta)
        P = -2.0 * M
        try:
            L = np.linalg.cholesky(P)
        except np.linalg.LinAlgError:
            raise self._domain_error("M must be negative definite", "") from None
        logdet = 2.0 * np.log(np.diag(L)).sum()
        x = np.linalg.solve(P, v)
        return float(0.5 * self.d * math.log(2.0 * math.pi) - 0.5 * logdet
                     + 0.5 * v @ x)

    def log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        n = coords.shape[0]
        d = self.d
        v = coords[:, :d]
        M = np.zeros((n, d, d))
        idx = np.tril_indices(d)
        M[:, idx[0], idx[1]] = coords[:, d:]
        M = M + np.transpose(M, (0, 2, 1))
        diag = np.arange(d)
        M[:, diag, diag] /= 2.0
        P = -2.0 * M
        L = np.linalg.cholesky(P)
        logdet = 2.0 * np.log(L[:, diag, diag]).sum(axis=1)
        x = np.linalg.solve(P, v[..., None])[..., 0]
        return (0.5 * d * math.log(2.0 * math.pi) - 0.5 * logdet
                + 0.5 * np.einsum("ni,ni->n", v, x))

    def grad_log_normalizer(self, theta: NaturalParameter) -> np.ndarray:
        v, M = self.split(theta)
        P = -2.0 * M
        sigma = np.linalg.inv(P)
        mu = sigma @ v
        second = sigma + np.outer(mu, mu)
        return np.concatenate([mu, _pack_sym_grad(second)])

    def grad_log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        n = coords.shape[0]
        d = self.d
        v = coords[:, :d]
        M = np.zeros((n, d, d))
        idx = np.tril_indices(d)
        M[:, idx[0], idx[1]] = coords[:, d:]
        M = M + np.transpose(M, (0, 2, 1))
        diag = np.arange(d)
        M[:, diag, diag] /= 2.0
        sigma = np.linalg.inv(-2.0 * M)
        mu = np.einsum("nij,nj->ni", sigma, v)
        second = sigma + np.einsum("ni,nj->nij", mu, mu)
        scale = 2.0 * np.ones((d, d)) - np.eye(d)
        packed = (second * scale)[:, idx[0], idx[1]]
        return np.concatenate([mu, packed], axis=1)

    def inv_grad_log_normalizer(self, eta: Any) -> NaturalParameter:
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} expectation coordinates")
        mu = eta[: self.d]
        second = _unpack_sym_grad(eta[self.d :], self.d)
        sigma = second - np.outer(mu, mu)
        if not _is_pos_def(sigma):
            raise self._domain_error(
                "expectation parameters do not define a positive definite"
                " covariance",
                "",
            )
        prec = np.linalg.inv(sigma)
        return self.join(prec @ mu, -0.5 * prec)

    def to_natural(self, mu: Any, cov: Any) -> NaturalParameter:
        """Natural parameters of a normal with mean ``mu``, covariance ``cov``."""
        mu = np.atleast_1d(np.asarray(mu, dtype=float))
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        if mu.shape != (self.d,) or cov.shape != (self.d, self.d):
            raise ValueError(f"expected mean of length {self.d} and "
                             f"{self.d}x{self.d} covariance")
        if not _is_pos_def(cov):
            raise ValueError("covariance must be symmetric positive definite"
                             " (condition number <= 1e12)")
        prec = np.linalg.inv(cov)
        return self.join(prec @ mu, -0.5 * prec)

    def from_natural(self, theta: NaturalParameter) -> tuple[np.ndarray, np.ndarray]:
        """Source parameters ``(mu, cov)`` of ``theta``."""
        v, M = self.split(theta)
        P = self._precision(theta)
        sigma = np.linalg.inv(P)
        return sigma @ v, sigma

    def density_at(self, theta: NaturalParameter, x: Any) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        v, M = self.split(theta)
        return float(math.exp(v @ x + x @ M @ x - self.log_normalizer(theta)))


# ---------------------------------------------------------------------------
# zero-centered Laplace
# ---------------------------------------------------------------------------


class Laplace(Family):
    """Zero-centered Laplace distribution ``p(x) = exp(-|x|/sigma) / (2 sigma)``.

    ``theta = -1/sigma < 0`` and ``F(theta) = log(-2/theta)``.
    """

    family_id = "laplace"
    dim = 1

    def check_domain(self, theta: NaturalParameter, context: str = "") -> None:
        (t,) = self._check(theta)
        if not (math.isfinite(t) and t < 0.0):
            raise self._domain_error(f"theta must be negative, got {t}", context)

    def log_normalizer(self, theta: NaturalParameter) -> float:
        self.check_domain(theta)
        (t,) = theta.coords
        return math.log(2.0) - math.log(-t)

    def log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return math.log(2.0) - np.log(-coords[:, 0])

    def grad_log_normalizer(self, theta: NaturalParameter) -> np.ndarray:
        self.check_domain(theta)
        (t,) = theta.coords
        return np.array([-1.0 / t])

    def grad_log_normalizer_batch(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return -1.0 / coords

    def inv_grad_log_normalizer(self, eta: Any) -> NaturalParameter:
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        (e,) = eta
        if e <= 0.0:
            raise self._domain_error("expectation parameter must be positive", "")
        return self.natural([-1.0 / e])

    def to_natural(self, sigma: float) -> NaturalParameter:
        """Natural parameter of scale ``sigma > 0``."""
        sigma = float(sigma)
        if sigma <= 0.0:
            raise ValueError("scale sigma must be positive")
        return self.natural([-1.0 / sigma])

    def from_natural(self, theta: NaturalParameter) -> float:
        """Scale ``sigma`` of ``theta``."""
        self.check_domain(theta)
        return float(-1.0 / theta.coords[0])

    def density_at(self, theta: NaturalParameter, x: Any) -> float:
        self.check_domain(theta)
        (t,) = theta.coords
        return float(math.exp(t * abs(float(x)) - self.log_normalizer(theta)))


# ---------------------------------------------------------------------------
# Wishart
# ---------------------------------------------------------------------------


class Wishart(Family):
    """Wishart distribution on the ``d x d`` positive definite cone.

    Source parameters: degrees of freedom ``n > d - 1`` and scale matrix
    ``S`` (positive definite).  Natural parameters
    ``theta1 = -S^-1 / 2`` (negative definite) and
    ``theta2 = (n - d - 1) / 2 > -1``.  With ``a = n/2``::

        F(theta) = -a log|-theta1| + log Gamma_d(a),

    where ``Gamma_d`` is the multivariate gamma function.  The inverse
    Legendre map has no simple closed form; it reduces to a scalar root
    find in ``n`` (the matrix block is eliminated exactly via
    ``S = E[X]/n``), solved by damped, bracketed Newton iteration.
    """

    family_id = "wishart"

    def __init__(self, d: int = 1):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.d = int(d)
        self.k = self.d * (self.d + 1) // 2
        self.dim = self.k + 1

    def split(self, theta: NaturalParameter) -> tuple[np.ndarray, float]:
        """Unpack flat coordinates into ``(theta1, theta2)``."""
        coords = self._check(theta)
        return _unpack_sym(coords[: self.k], self.d), float(coords[self.k])

    def join(self, theta1: np.ndarray, theta2: float) -> NaturalParameter:
        """Pack ``(theta1, theta2)`` into flat coordinates."""
        return self.natural(np.concatenate([_pack_sym(theta1), [theta2]]))

    def check_domain(self, theta: NaturalParameter, context: str = "") -> None:
        theta1, theta2 = self.split(theta)
        if not _is_pos_def(-theta1):
            raise self._domain_error("theta1 must be negative definite", context)
        if not theta2 > -1.0:
            raise self._domain_error(
                f"theta2 must exceed -1 (degrees of freedom n > d - 1), "
                f"got {theta2}",
                context,
            )

    def _dof(self, theta2: float) -> float:
        return 2.0 * theta2 + self.d + 1.0

    def log_normalizer(self, theta: NaturalParameter) -> float:
        self.check_domain(theta)
        theta1, theta2 = self.split(theta)
        a = 0.5 * self._dof(theta2)
        sign, logdet = np.linalg.slogdet(-theta1)
        return float(-a * logdet + multigammaln(a, self.d))

    def grad_log_normalizer(self, theta: NaturalParameter) -> np.ndarray:
        self.check_domain(theta)
        theta1, theta2 = self.split(theta)
        a = 0.5 * self._dof(theta2)
        neg_inv = np.linalg.inv(-theta1)
        g1 = a * neg_inv
        _, logdet = np.linalg.slogdet(-theta1)
        g2 = -logdet + self._multidigamma(a)
        return np.concatenate([_pack_sym_grad(g1), [g2]])

    def _multidigamma(self, a: float) -> float:
        js = np.arange(self.d)
        return float(digamma(a - 0.5 * js).sum())

    def _multitrigamma(self, a: float) -> float:
        js = np.arange(self.d)
        return float(polygamma(1, a - 0.5 * js).sum())

    def inv_grad_log_normalizer(
        self, eta: Any, max_iterations: int = 200, tol: float = 1e-10
    ) -> NaturalParameter:
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} expectation coordinates")
        mean_x = _unpack_sym_grad(eta[: self.k], self.d)
        mean_logdet = float(eta[self.k])
        if not _is_pos_def(mean_x):
            raise self._domain_error(
                "expected sufficient statistic E[X] must be positive definite", ""
            )
        _, logdet_mean = np.linalg.slogdet(mean_x)
        # Residual in the scalar dof equation; strictly increasing in n.
        d = self.d

        def resid(n: float) -> float:
            return (self._multidigamma(0.5 * n) + d * math.log(2.0)
                    - d * math.log(n) + logdet_mean - mean_logdet)

        def dresid(n: float) -> float:
            return 0.5 * self._multitrigamma(0.5 * n) - d / n

        lo, hi = None, None
        n = float(d + 1)
        for k in range(80):
            lo_try = (d - 1.0) + 2.0 ** (-k)
            if resid(lo_try) < 0.0:
                lo = lo_try
                break
        for k in range(80):
            hi_try = (d - 1.0) + 2.0**k
            if resid(hi_try) > 0.0:
                hi = hi_try
                break
        if lo is None or hi is None:
            raise self._domain_error(
                "expectation parameters outside the realizable range "
                "(need E[log|X|] < log|E[X]|)",
                "",
            )
        n = 0.5 * (lo + hi)
        r = resid(n)
        for _ in range(max_iterations):
            if abs(r) < tol:
                break
            step = -r / dresid(n)
            candidate = n + step
            for _ in range(60):
                if lo < candidate < hi:
                    r_new = resid(candidate)
                    if abs(r_new) < abs(r):
                        break
                step *= 0.5
                candidate = n + step
            else:
                candidate = 0.5 * (lo + hi)
                r_new = resid(candidate)
            n, r = candidate, r_new
            if r < 0.0:
                lo = n
            else:
                hi = n
        else:
            raise RuntimeError(
                f"Wishart inverse-gradient Newton did not converge: "
                f"residual {r:.3e} after {max_iterations} iterations"
            )
        scale = mean_x / n
        theta1 = -0.5 * np.linalg.inv(scale)
        return self.join(theta1, 0.5 * (n - d - 1.0))

    def to_natural(self, n: float, scale: Any) -> NaturalParameter:
        """Natural parameters for degrees of freedom ``n`` and scale ``S``."""
        n = float(n)
        scale = np.atleast_2d(np.asarray(scale, dtype=float))
        if scale.shape != (self.d, self.d):
            raise ValueError(f"expected {self.d}x{self.d} scale matrix")
        if n <= self.d - 1:
            raise ValueError(f"degrees of freedom must exceed d - 1 = {self.d - 1}")
        if not _is_pos_def(scale):
            raise ValueError("scale matrix must be symmetric positive definite")
        return self.join(-0.5 * np.linalg.inv(scale), 0.5 * (n - self.d - 1.0))

    def from_natural(self, theta: NaturalParameter) -> tuple[float, np.ndarray]:
        """Source parameters ``(n, S)`` of ``theta``."""
        self.check_domain(theta)
        theta1, theta2 = self.split(theta)
        return self._dof(theta2), -0.5 * np.linalg.inv(theta1)

    def density_at(self, theta: NaturalParameter, x: Any) -> float:
        self.check_domain(theta)
        theta1, theta2 = self.split(theta)
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if x.shape != (self.d, self.d):
            raise ValueError(f"support points are {self.d}x{self.d} matrices")
        sign, logdet_x = np.linalg.slogdet(x)
        if sign <= 0.0:
            return 0.0
        value = (np.trace(theta1 @ x) + theta2 * logdet_x
                 - self.log_normalizer(theta))
        return float(math.exp(value))


# ---------------------------------------------------------------------------
# generic operations
# ---------------------------------------------------------------------------


def power_integral(spec: Family, theta: NaturalParameter, gamma: float) -> float:
    """Integral of the density raised to the power ``gamma``.

    ``integral p(x; theta)^gamma dx = exp(F(gamma theta) - gamma F(theta))``,
    valid whenever ``gamma * theta`` lies in the natural parameter space.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    spec.check_domain(theta, "theta")
    scaled = gamma * theta
    spec.check_domain(scaled, f"{gamma} * theta")
    return math.exp(
        spec.log_normalizer(scaled) - gamma * spec.log_normalizer(theta)
    )


def escort_natural(
    spec: Family, theta: NaturalParameter, alpha: float
) -> NaturalParameter:
    """Natural parameter of the escort distribution of order ``alpha``.

    The escort density is proportional to ``p(x; theta)^(1/alpha)``;
    within the family it is simply the member at ``theta / alpha``.
    """
    if alpha <= 0.0:
        raise ValueError("alpha must be positive")
    spec.check_domain(theta, "theta")
    scaled = theta / alpha
    spec.check_domain(scaled, f"theta / {alpha}")
    return scaled


# ---------------------------------------------------------------------------
# JSON encoding of distributions
# ---------------------------------------------------------------------------
#
# {"family": "categorical", "params": {"p": [p0, ..., pm]}}
# {"family": "bernoulli",   "params": {"p1": 0.25}}
# {"family": "gaussian",    "params": {"mu": [..] | x, "cov": [[..]] | x}}
# {"family": "laplace",     "params": {"sigma": 2.0}}
# {"family": "wishart",     "params": {"n": 3.0, "S": [[..]] | x}}


def distribution_from_dict(obj: dict) -> tuple[Family, NaturalParameter]:
    """Decode ``{"family": ..., "params": {...}}`` into a family and parameter."""
    try:
        family_id = obj["family"]
        params = obj["params"]
    except (KeyError, TypeError) as exc:
        raise ValueError("distribution object needs 'family' and 'params'") from exc
    if family_id == "categorical":
        probs = np.asarray(params["p"], dtype=float)
        spec = Categorical(probs.size - 1)
        return spec, spec.to_natural(probs)
    if family_id == "bernoulli":
        spec = Bernoulli()
        return spec, spec.to_natural(params["p1"])
    if family_id == "gaussian":
        mu = np.atleast_1d(np.asarray(params["mu"], dtype=float))
        spec = Gaussian(mu.size)
        return spec, spec.to_natural(mu, params["cov"])
    if family_id == "laplace":
        spec = Laplace()
        return spec, spec.to_natural(params["sigma"])
    if family_id == "wishart":
        scale = np.atleast_2d(np.asarray(params["S"], dtype=float))
        spec = Wishart(scale.shape[0])
        return spec, spec.to_natural(params["n"], scale)
    raise ValueError(f"unknown family {family_id!r}")


def distribution_to_dict(spec: Family, theta: NaturalParameter) -> dict:
    """Encode a family member as ``{"family": ..., "params": {...}}``."""
    if isinstance(spec, Categorical):
        return {"family": "categorical",
                "params": {"p": spec.from_natural(theta).tolist()}}
    if isinstance(spec, Bernoulli):
        return {"family": "bernoulli", "params": {"p1": spec.from_natural(theta)}}
    if isinstance(spec, Gaussian):
        mu, cov = spec.from_natural(theta)
        return {"family": "gaussian",
                "params": {"mu": mu.tolist(), "cov": cov.tolist()}}
    if isinstance(spec, Laplace):
        return {"family": "laplace", "params": {"sigma": spec.from_natural(theta)}}
    if isinstance(spec, Wishart):
        n, scale = spec.from_natural(theta)
        return {"family": "wishart", "params": {"n": n, "S": scale.tolist()}}
    raise ValueError(f"unknown family specification {type(spec).__name__}")
