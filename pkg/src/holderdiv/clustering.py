"""Variational k-means over distributions under the symmetric Hölder
divergence, plus the two-cluster 2D-Gaussian toy benchmark.

The clustering loop alternates center updates and reassignments.
Center updates are *variational*: the CCCP iteration for a cluster's
centroid runs only until the cluster's Hölder information improves on
its previous value — there is no need to solve the centroid problem to
convergence before reassigning, and the total energy

    E = sum_i sym_hd(p_i : O_{l_i})

still never increases.  With ``alpha = gamma = 2`` the procedure is
exactly Cauchy-Schwarz clustering.

The toy generator draws an even split of 2D Gaussians around the two
cluster centers ``(-2, 0)`` and ``(+2, 0)``: means are unit-covariance
Gaussian around each center, and each covariance is built from gamma-
distributed eigenvalues, rotated so that the first eigenvalue's axis
points along the mean's offset from its cluster center (a radial
orientation).  All randomness flows through explicitly seeded PCG64
generators; experiment runs derive child streams from the master seed,
so runs are reproducible and independently parallelizable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import closed_form
from .centroids import WeightedSet, sym_hd_centroid
from .exponents import ConjugatePair, as_pair
from .families import Family, Gaussian, NaturalParameter

__all__ = [
    "ToyDatasetConfig",
    "ToyDataset",
    "generate_toy_dataset",
    "ClusteringState",
    "kmeans",
    "accuracy",
    "ExperimentResult",
    "run_experiment",
]


@dataclass(frozen=True)
class ToyDatasetConfig:
    """Configuration of the two-cluster 2D-Gaussian toy generator.

    ``n`` Gaussians are split evenly across the two clusters.  The first
    eigenvalue prior is the wider one, so the blobs stretch radially.
    """

    n: int
    seed: "int | np.random.SeedSequence | np.random.Generator"
    centers: tuple[tuple[float, float], tuple[float, float]] = (
        (-2.0, 0.0),
        (2.0, 0.0),
    )
    eigen_shape: float = 7.0
    eigen_scales: tuple[float, float] = (0.01, 0.003)

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("n must be an even count >= 2")


@dataclass(frozen=True)
class ToyDataset:
    gaussians: tuple[tuple[np.ndarray, np.ndarray], ...]
    true_labels: np.ndarray


def generate_toy_dataset(config: ToyDatasetConfig) -> ToyDataset:
    """Draw the toy set of 2D Gaussians; deterministic for a fixed seed.

    Each covariance is ``R diag(s1, s2) R^T`` where the column of ``R``
    carrying ``s1`` is the unit vector from the cluster center to the
    sampled mean (resampled in the degenerate zero-offset case), making
    that direction an exact eigenvector.
    """
    rng = np.random.default_rng(config.seed)
    gaussians: list[tuple[np.ndarray, np.ndarray]] = []
    labels: list[int] = []
    per_cluster = config.n // 2
    for cluster, center in enumerate(config.centers):
        center = np.asarray(center, dtype=float)
        for _ in range(per_cluster):
            while True:
                mu = rng.normal(loc=center, scale=1.0, size=2)
                offset = mu - center
                length = float(np.linalg.norm(offset))
                if length > 1e-12:
                    break
            radial = offset / length
            s1 = rng.gamma(config.eigen_shape, config.eigen_scales[0])
            s2 = rng.gamma(config.eigen_shape, config.eigen_scales[1])
            rot = np.column_stack([radial, [-radial[1], radial[0]]])
            cov = rot @ np.diag([s1, s2]) @ rot.T
            gaussians.append((mu, cov))
            labels.append(cluster)
    return ToyDataset(tuple(gaussians), np.array(labels, dtype=int))


@dataclass(frozen=True, eq=False)
class ClusteringState:
    """Outcome of one variational k-means run.

    ``energy_trace`` holds the total energy after every half-step
    (center updates, then reassignment); it is non-increasing.
    """

    centers: tuple[NaturalParameter, ...]
    labels: np.ndarray
    energy: float
    iterations: int
    energy_trace: tuple[float, ...] = field(default=())


def _divergences_to_center(
    spec: Family,
    coords: np.ndarray,
    center: NaturalParameter,
    pair: ConjugatePair,
    gamma: float,
    f_gamma: np.ndarray,
) -> np.ndarray:
    return closed_form.sym_hd_closed_batch(
        spec, coords, center, pair, gamma, f_gamma_thetas=f_gamma
    )


def kmeans(
    spec: Family,
    thetas: "list[NaturalParameter]",
    n_clusters: int,
    pair: ConjugatePair | float,
    gamma: float,
    seed: "int | np.random.SeedSequence | np.random.Generator",
    max_rounds: int = 100,
) -> ClusteringState:
    """Variational k-means under the symmetric proper Hölder divergence.

    Starts from a uniformly random assignment, then alternates
    variational center updates (CCCP until the cluster information
    improves) with nearest-center reassignment (ties broken toward the
    lowest cluster index) until the labels stop changing.
    """
    pair = as_pair(pair)
    if not pair.is_forward:
        raise ValueError("clustering requires alpha > 1")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if n_clusters < 1:
        raise ValueError("need at least one cluster")
    n = len(thetas)
    if n < n_clusters:
        raise ValueError("need at least one distribution per cluster")
    coords = np.stack([t.coords for t in thetas])
    f_gamma = spec.log_normalizer_batch(gamma * coords)
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, n_clusters, size=n)
    centers: list[NaturalParameter | None] = [None] * n_clusters
    energy_trace: list[float] = []

    def cluster_divergences() -> np.ndarray:
        values = np.empty((n_clusters, n))
        for l, center in enumerate(centers):
            values[l] = _divergences_to_center(
                spec, coords, center, pair, gamma, f_gamma)
        return values

    def own_divergences() -> np.ndarray:
        values = np.empty(n)
        for l in range(n_clusters):
            members = labels == l
            if members.any():
                values[members] = _divergences_to_center(
                    spec, coords[members], centers[l], pair, gamma,
                    f_gamma[members])
        return values

    rounds = 0
    for rounds in range(1, max_rounds + 1):
        # Variational center updates.
        for l in range(n_clusters):
            members = np.flatnonzero(labels == l)
            if members.size == 0:
                continue
            subset = WeightedSet.uniform(spec, [thetas[i] for i in members])
            previous = centers[l]
            if previous is None:
                result = sym_hd_centroid(subset, pair, gamma)
            else:
                current_info = float(np.mean(_divergences_to_center(
                    spec, coords[members], previous, pair, gamma,
                    f_gamma[members])))
                result = sym_hd_centroid(
                    subset, pair, gamma, init=previous,
                    stop_energy=current_info)
            centers[l] = result.centroid
        # Reseed empty clusters with the worst-fit point.
        for l in range(n_clusters):
            if np.any(labels == l):
                continue
            own = own_divergences()
            counts = np.bincount(labels, minlength=n_clusters)
            own[counts[labels] <= 1] = -np.inf
            worst = int(np.argmax(own))
            centers[l] = thetas[worst]
            labels[worst] = l
        per_point = cluster_divergences()
        energy_trace.append(float(per_point[labels, np.arange(n)].sum()))
        # Reassignment.
        new_labels = np.argmin(per_point, axis=0)
        energy_trace.append(float(per_point[new_labels, np.arange(n)].sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return ClusteringState(
        centers=tuple(centers),
        labels=labels,
        energy=energy_trace[-1],
        iterations=rounds,
        energy_trace=tuple(energy_trace),
    )


def accuracy(labels: np.ndarray, true_labels: np.ndarray) -> float:
    """Fraction of correctly clustered items, two-cluster case.

    Cluster identities are arbitrary, so the best of the two label
    permutations counts.
    """
    labels = np.asarray(labels)
    true_labels = np.asarray(true_labels)
    if labels.shape != true_labels.shape:
        raise ValueError("label vectors must have matching lengths")
    if np.unique(labels).size > 2 or np.unique(true_labels).size > 2:
        raise ValueError("accuracy is defined for two clusters")
    match = float(np.mean(labels == true_labels))
    return max(match, 1.0 - match)


@dataclass(frozen=True)
class ExperimentResult:
    mean_accuracy: float
    std_accuracy: float
    accuracies: np.ndarray


def run_experiment(
    n: int,
    pair: ConjugatePair | float,
    gamma: float,
    runs: int,
    seed: "int | np.random.SeedSequence",
) -> ExperimentResult:
    """Mean and standard deviation of clustering accuracy over
    independent runs.

    Each run draws a fresh toy dataset and a fresh random assignment
    from its own child stream of the master seed, so the result is
    deterministic for a fixed seed and the runs are independent.
    """
    if runs < 1:
        raise ValueError("need at least one run")
    master = (seed if isinstance(seed, np.random.SeedSequence)
              else np.random.SeedSequence(seed))
    spec = Gaussian(2)
    accuracies = np.empty(runs)
    for r, child in enumerate(master.spawn(runs)):
        data_seed, init_seed = child.spawn(2)
        dataset = generate_toy_dataset(ToyDatasetConfig(n=n, seed=data_seed))
        thetas = [spec.to_natural(mu, cov) for mu, cov in dataset.gaussians]
        state = kmeans(spec, thetas, 2, pair, gamma, seed=init_seed)
        accuracies[r] = accuracy(state.labels, dataset.true_labels)
    return ExperimentResult(
        mean_accuracy=float(accuracies.mean()),
        std_accuracy=float(accuracies.std(ddof=1)) if runs > 1 else 0.0,
        accuracies=accuracies,
    )
