"""Command-line interface.

Subcommands: ``div`` (divergence between two distributions), ``centroid``
(CCCP centroid of a set), ``cluster`` (variational k-means), ``table1``
(clustering-accuracy table), ``grid`` (figure grids as CSV), ``bounds``
(mixture divergence bounds).  Outputs go to stdout as JSON or CSV; CSV
uses '.' decimals, ',' separators and 17 significant digits.  Infinity
is emitted as the token "inf".  Failures print a machine-readable error
JSON and exit nonzero.  Every randomized command takes an explicit
--seed, and repeated invocations are byte-identical.
"""

from __future__ import annotations

import functools
import json
import math
import sys

import click
import numpy as np

from . import closed_form, oracle
from .centroids import (
    WeightedSet,
    hd_centroid,
    hd_centroid_left,
    hpd_centroid,
    hpd_centroid_left,
    sym_hd_centroid,
    sym_hpd_centroid,
)
from .clustering import kmeans, run_experiment
from .exponents import ConjugatePair
from .families import (
    Bernoulli,
    Categorical,
    Family,
    Gaussian,
    Laplace,
    NaturalParameter,
    Wishart,
    distribution_from_dict,
    distribution_to_dict,
)
from .mixtures import Mixture, hpd_mixture_bounds

INF_TOKEN = "inf"


def _fmt(x: float) -> str:
    if math.isinf(x):
        return INF_TOKEN if x > 0 else "-" + INF_TOKEN
    return format(x, ".17g")


def _jsonable(obj):
    if isinstance(obj, float):
        return INF_TOKEN if math.isinf(obj) and obj > 0 else obj
    if isinstance(obj, np.floating):
        return _jsonable(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit_json(payload: dict) -> None:
    click.echo(json.dumps(_jsonable(payload), indent=2, sort_keys=True))


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _guarded(func):
    """Convert exceptions into an error JSON and a nonzero exit."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except Exception as exc:  # noqa: BLE001 - single reporting point
            click.echo(json.dumps({
                "error": {"type": type(exc).__name__, "message": str(exc)}
            }))
            sys.exit(1)

    return wrapper


def _floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


@click.group()
def main() -> None:
    """Hölder divergences, centroids, clustering and mixture bounds."""


# ---------------------------------------------------------------------------
# div
# ---------------------------------------------------------------------------


def _oracle_densities(spec: Family, theta: NaturalParameter):
    if isinstance(spec, (Categorical, Bernoulli)):
        if isinstance(spec, Bernoulli):
            p1 = spec.from_natural(theta)
            return oracle.DiscreteDensity(np.array([1.0 - p1, p1]))
        return oracle.DiscreteDensity(spec.from_natural(theta))
    if isinstance(spec, Gaussian) and spec.d == 1:
        return oracle.Density1D(
            lambda x: spec.density_at(theta, x), (-math.inf, math.inf))
    if isinstance(spec, Laplace):
        return oracle.Density1D(
            lambda x: spec.density_at(theta, x), (-math.inf, math.inf))
    if isinstance(spec, Wishart) and spec.d == 1:
        return oracle.Density1D(
            lambda x: spec.density_at(theta, x), (0.0, math.inf))
    raise ValueError(
        "the definition-level oracle covers discrete and univariate families"
    )


@main.command("div")
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--variant", required=True, type=click.Choice(
    ["hpd", "hd", "sym-hpd", "sym-hd", "cs", "escort", "bhat"]))
@click.option("--alpha", type=float, default=None,
              help="Hölder exponent (> 1); required except for cs.")
@click.option("--gamma", type=float, default=None,
              help="Power parameter for hd/sym-hd (> 0).")
@click.option("--oracle", "with_oracle", is_flag=True,
              help="Cross-check by definition-level sums/quadrature.")
@_guarded
def cmd_div(input_file, variant, alpha, gamma, with_oracle):
    """Divergence between the two distributions in INPUT_FILE.

    The file holds {"p": {...}, "q": {...}} with same-family
    distribution objects.  ``bhat`` is the skew Bhattacharyya divergence
    of order 1/alpha.
    """
    payload = _load_json(input_file)
    spec_p, theta_p = distribution_from_dict(payload["p"])
    spec_q, theta_q = distribution_from_dict(payload["q"])
    if spec_p.family_id != spec_q.family_id or spec_p.dim != spec_q.dim:
        raise ValueError("p and q must belong to the same family")
    spec = spec_p

    needs_alpha = variant != "cs"
    if needs_alpha and alpha is None:
        raise ValueError(f"--alpha is required for variant {variant}")
    if variant in ("hd", "sym-hd") and gamma is None:
        raise ValueError(f"--gamma is required for variant {variant}")
    pair = ConjugatePair.from_alpha(alpha) if needs_alpha else None
    if pair is not None and variant != "bhat" and not pair.is_forward:
        raise ValueError("alpha must exceed 1")

    if variant == "hpd":
        value = closed_form.hpd_closed(spec, theta_p, theta_q, pair)
    elif variant == "hd":
        value = closed_form.hd_closed(spec, theta_p, theta_q, pair, gamma)
    elif variant == "sym-hpd":
        value = closed_form.sym_hpd_closed(spec, theta_p, theta_q, pair)
    elif variant == "sym-hd":
        value = closed_form.sym_hd_closed(spec, theta_p, theta_q, pair, gamma)
    elif variant == "cs":
        value = closed_form.cs_closed(spec, theta_p, theta_q)
    elif variant == "escort":
        value = closed_form.escort_divergence(spec, theta_p, theta_q, pair)
    else:  # bhat
        value = closed_form.skew_bhattacharyya_closed(
            spec, theta_p, theta_q, 1.0 / alpha)

    result = {
        "variant": variant,
        "alpha": alpha if needs_alpha else 2.0,
        "gamma": gamma,
        "value": value,
    }
    if with_oracle:
        dp = _oracle_densities(spec, theta_p)
        dq = _oracle_densities(spec, theta_q)
        if variant == "hpd":
            ref = oracle.hpd_direct(dp, dq, pair)
        elif variant == "hd":
            ref = oracle.hd_direct(dp, dq, pair, gamma)
        elif variant == "sym-hpd":
            ref = 0.5 * (oracle.hpd_direct(dp, dq, pair)
                         + oracle.hpd_direct(dq, dp, pair))
        elif variant == "sym-hd":
            ref = 0.5 * (oracle.hd_direct(dp, dq, pair, gamma)
                         + oracle.hd_direct(dq, dp, pair, gamma))
        elif variant == "cs":
            ref = oracle.cs_direct(dp, dq)
        else:  # escort and bhat both reduce to the skew Bhattacharyya value
            ref = oracle.skew_bhattacharyya_direct(dp, dq, 1.0 / alpha)
        result["oracle_value"] = ref
    _emit_json(result)


# ---------------------------------------------------------------------------
# centroid
# ---------------------------------------------------------------------------


def _load_weighted_set(path: str) -> WeightedSet:
    payload = _load_json(path)
    entries = payload["distributions"]
    if not entries:
        raise ValueError("distribution set is empty")
    specs_thetas = [distribution_from_dict(entry) for entry in entries]
    spec = specs_thetas[0][0]
    for other, _ in specs_thetas[1:]:
        if other.family_id != spec.family_id or other.dim != spec.dim:
            raise ValueError("all distributions must share one family")
    thetas = [theta for _, theta in specs_thetas]
    weights = payload.get("weights")
    if weights is None:
        weights = np.full(len(thetas), 1.0 / len(thetas))
    return WeightedSet(spec, tuple(thetas), np.asarray(weights, dtype=float))


@main.command("centroid")
@click.option("--input", "input_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON distribution set: {distributions: [...], weights?}.")
@click.option("--variant", required=True, type=click.Choice(
    ["hpd", "hd", "sym-hpd", "sym-hd", "left-hpd", "left-hd"]))
@click.option("--alpha", type=float, required=True)
@click.option("--gamma", type=float, default=None)
@_guarded
def cmd_centroid(input_file, variant, alpha, gamma):
    """CCCP centroid of a weighted distribution set."""
    wset = _load_weighted_set(input_file)
    pair = ConjugatePair.from_alpha(alpha)
    needs_gamma = variant in ("hd", "sym-hd", "left-hd")
    if needs_gamma and gamma is None:
        raise ValueError(f"--gamma is required for variant {variant}")
    solver = {
        "hpd": lambda: hpd_centroid(wset, pair),
        "hd": lambda: hd_centroid(wset, pair, gamma),
        "sym-hpd": lambda: sym_hpd_centroid(wset, pair),
        "sym-hd": lambda: sym_hd_centroid(wset, pair, gamma),
        "left-hpd": lambda: hpd_centroid_left(wset, pair),
        "left-hd": lambda: hd_centroid_left(wset, pair, gamma),
    }[variant]
    result = solver()
    _emit_json({
        "variant": variant,
        "alpha": alpha,
        "gamma": gamma,
        "centroid": distribution_to_dict(wset.spec, result.centroid),
        "natural_coordinates": result.centroid.coords,
        "trace": {
            "energies": list(result.trace.energies),
            "iterations": result.trace.iterations,
            "converged": result.trace.converged,
        },
    })


# ---------------------------------------------------------------------------
# cluster
# ---------------------------------------------------------------------------


@main.command("cluster")
@click.option("--input", "input_file", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--clusters", "n_clusters", type=int, default=2,
              show_default=True)
@click.option("--alpha", type=float, required=True)
@click.option("--gamma", type=float, required=True)
@click.option("--seed", type=int, required=True)
@_guarded
def cmd_cluster(input_file, n_clusters, alpha, gamma, seed):
    """Variational k-means over a distribution set."""
    wset = _load_weighted_set(input_file)
    state = kmeans(wset.spec, list(wset.thetas), n_clusters,
                   ConjugatePair.from_alpha(alpha), gamma, seed)
    _emit_json({
        "labels": state.labels,
        "energy": state.energy,
        "iterations": state.iterations,
        "energy_trace": list(state.energy_trace),
        "centers": [distribution_to_dict(wset.spec, c) for c in state.centers],
    })


# ---------------------------------------------------------------------------
# table1
# ---------------------------------------------------------------------------


@main.command("table1")
@click.option("--runs", type=int, default=500, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--n-list", default="50,100", show_default=True)
@click.option("--alpha-list", default="1.1,1.5,2,10", show_default=True,
              help="alpha = gamma values, one column each.")
@_guarded
def cmd_table1(runs, seed, n_list, alpha_list):
    """Clustering-accuracy table (mean±std percent per cell) as CSV."""
    ns = [int(x) for x in _floats(n_list)]
    alphas = _floats(alpha_list)
    header = ["n"] + [f"alpha=gamma={_fmt(a)}" for a in alphas]
    click.echo(",".join(header))
    master = np.random.SeedSequence(seed)
    for n, row_seed in zip(ns, master.spawn(len(ns))):
        cells = [str(n)]
        for a, cell_seed in zip(alphas, row_seed.spawn(len(alphas))):
            result = run_experiment(n, a, a, runs, cell_seed)
            cells.append(f"{100.0 * result.mean_accuracy:.1f}%"
                         f"±{100.0 * result.std_accuracy:.1f}%")
        click.echo(",".join(cells))


# ---------------------------------------------------------------------------
# grid
# ---------------------------------------------------------------------------


def _simplex_grid(reference, alphas, gammas, resolution):
    ref = np.asarray(reference, dtype=float)
    ref = ref / ref.sum()
    if ref.size != 3 or np.any(ref <= 0.0):
        raise ValueError("simplex reference needs three positive weights")
    spec = Categorical(2)
    theta_ref = spec.to_natural(ref)
    ref_dd = oracle.DiscreteDensity(ref)
    header = (["p0", "p1", "p2"]
              + [f"hpd_alpha={_fmt(a)}" for a in alphas]
              + [f"hd_alpha=2_gamma={_fmt(g)}" for g in gammas]
              + ["kl"])
    yield header
    pair2 = ConjugatePair(2.0, 2.0)
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            k = resolution - i - j
            p = np.array([i, j, k], dtype=float) / resolution
            row = list(p)
            interior = bool(np.all(p > 0.0))
            p_dd = oracle.DiscreteDensity(p)
            if interior:
                theta = spec.to_natural(p)
                row += [closed_form.hpd_closed(spec, theta_ref, theta, a)
                        for a in alphas]
                row += [closed_form.hd_closed(spec, theta_ref, theta, pair2, g)
                        for g in gammas]
            else:
                # Boundary cells: the closed form is undefined at zero
                # entries, the definition-level sums are not.
                row += [oracle.hpd_direct(ref_dd, p_dd, a) for a in alphas]
                row += [oracle.hd_direct(ref_dd, p_dd, pair2, g)
                        for g in gammas]
            row.append(oracle.kl_direct(ref_dd, p_dd))
            yield row


def _gaussian_grid(reference, alphas, gammas, resolution,
                   mu_range, sigma_range):
    mu0, sigma0 = reference
    if sigma0 <= 0.0:
        raise ValueError("reference sigma must be positive")
    spec = Gaussian(1)
    theta_ref = spec.to_natural([mu0], [[sigma0**2]])
    header = (["mu", "sigma"]
              + [f"hpd_alpha={_fmt(a)}" for a in alphas]
              + [f"hd_alpha=2_gamma={_fmt(g)}" for g in gammas]
              + ["kl"])
    yield header
    pair2 = ConjugatePair(2.0, 2.0)
    mus = np.linspace(mu_range[0], mu_range[1], resolution)
    sigmas = np.linspace(sigma_range[0], sigma_range[1], resolution)
    for mu in mus:
        for sigma in sigmas:
            theta = spec.to_natural([mu], [[sigma**2]])
            row = [float(mu), float(sigma)]
            row += [closed_form.hpd_closed(spec, theta_ref, theta, a)
                    for a in alphas]
            row += [closed_form.hd_closed(spec, theta_ref, theta, pair2, g)
                    for g in gammas]
            row.append(closed_form.kl_closed(spec, theta_ref, theta))
            yield row


@main.command("grid")
@click.option("--figure", required=True, type=click.Choice(
    ["simplex", "gaussian"]))
@click.option("--reference", default=None,
              help="simplex: 'p0,p1,p2' (default uniform); "
                   "gaussian: 'mu,sigma' (default standard).")
@click.option("--alpha-list", default="4,2,1.3333333333333333",
              show_default=True)
@click.option("--gamma-list", default="0.5,1,2,5,10", show_default=True)
@click.option("--resolution", type=int, default=60, show_default=True)
@click.option("--mu-range", default="-3,3", show_default=True)
@click.option("--sigma-range", default="0.2,3", show_default=True)
@_guarded
def cmd_grid(figure, reference, alpha_list, gamma_list, resolution,
             mu_range, sigma_range):
    """Divergence values on a parameter grid, as CSV.

    Columns: grid coordinates, one pseudo-divergence column per alpha,
    one proper-divergence (alpha = 2) column per gamma, and a KL column
    for comparison; KL is infinite on simplex boundary cells.
    """
    if resolution < 8:
        raise ValueError("resolution must be at least 8")
    alphas = _floats(alpha_list)
    gammas = _floats(gamma_list)
    if figure == "simplex":
        ref = (_floats(reference) if reference
               else [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
        rows = _simplex_grid(ref, alphas, gammas, resolution)
    else:
        ref = _floats(reference) if reference else [0.0, 1.0]
        if len(ref) != 2:
            raise ValueError("gaussian reference is 'mu,sigma'")
        rows = _gaussian_grid(tuple(ref), alphas, gammas, resolution,
                              _floats(mu_range), _floats(sigma_range))
    header = next(rows)
    click.echo(",".join(header))
    for row in rows:
        click.echo(",".join(_fmt(x) if isinstance(x, float) else str(x)
                            for x in row))


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def _load_mixture(path: str) -> Mixture:
    payload = _load_json(path)
    family = payload["family"]
    weights = np.asarray(payload["weights"], dtype=float)
    if family == "gaussian":
        spec = Gaussian(1)
        components = tuple(
            spec.to_natural([entry["mu"]], [[entry["cov"]]])
            for entry in payload["components"])
    elif family == "laplace":
        spec = Laplace()
        components = tuple(
            spec.to_natural(entry["sigma"]) for entry in payload["components"])
    else:
        raise ValueError("mixture families: gaussian (1D) or laplace")
    return Mixture(spec, weights, components)


@main.command("bounds")
@click.argument("mixture_p", type=click.Path(exists=True, dir_okay=False))
@click.argument("mixture_q", type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha", type=float, required=True)
@click.option("--resolution", type=int, default=64, show_default=True)
@_guarded
def cmd_bounds(mixture_p, mixture_q, alpha, resolution):
    """Lower/upper bounds on the pseudo-divergence of two mixtures,
    with a quadrature reference value."""
    m = _load_mixture(mixture_p)
    m2 = _load_mixture(mixture_q)
    pair = ConjugatePair.from_alpha(alpha)
    bounds = hpd_mixture_bounds(m, m2, pair, resolution=resolution)
    reference = oracle.hpd_direct(
        oracle.Density1D(m.pdf, (-math.inf, math.inf)),
        oracle.Density1D(m2.pdf, (-math.inf, math.inf)),
        pair,
    )
    _emit_json({
        "alpha": alpha,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "quadrature_reference": reference,
    })


if __name__ == "__main__":
    main()
