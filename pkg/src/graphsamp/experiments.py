"""Desk-scale experiment drivers.

Each experiment is a pure function of (id, seed, overrides) producing a JSON
report plus CSV-ready series, so a rerun with the same config reproduces the
same bytes. Experiment ids:

* ``bandlimited-recovery``: direct node sampling of a bandlimited signal on a
  random sensor graph, greedy E-optimal set, pseudoinverse recovery.
* ``pgs-recovery``: full-band periodic-spectrum signal recovered through both
  frequency-domain and prefiltered vertex-domain sampling, including the
  diagonal correction-filter route.
* ``community-selection``: sampling-set strategies compared by how many
  clusters of a community graph they cover.
* ``completion-demo``: graph-regularized completion error versus budget for
  the two active sampling strategies.
* ``dft-folding``: the classical decimation / spectrum-folding identity that
  the frequency sampler's folding convention is modeled on.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .completion import CompletionProblem, active_sample_greedy, bl_cross_sample, dglr_solve
from .errors import InvalidSpec
from .filters import exp_decay_kernel, filter_matrix, ideal_lowpass_kernel, linear_decay_kernel
from .generators import Community, Path, RandomSensor, community_labels, gen_graph
from .graphs import (
    Graph,
    VariationOperatorKind,
    connected_components,
    decompose_graph,
)
from .recovery import (
    PeriodicSpectrum,
    build_generator,
    periodic_generator,
    recover,
    recover_periodic_frequency,
)
from .sampling import (
    FrequencySampler,
    SamplingMatrixView,
    VertexSampler,
    frequency_sampler_view,
    vertex_sampler_view,
)
from .selection import Criterion, coherence_distribution, greedy_rows, greedy_select, greedy_select_localized, random_select

DEFAULT_SEED = 7

_KNOWN_OVERRIDES = {
    "bandlimited-recovery": {"node_count", "bandwidth", "budget", "k_neighbors"},
    "pgs-recovery": {"node_count", "period", "exact_period", "k_neighbors", "tau"},
    "community-selection": {"cluster_sizes", "p_in", "p_out", "budget", "bandwidth", "random_trials"},
    "completion-demo": {"n_rows", "n_cols", "row_bandwidth", "col_bandwidth", "alpha", "beta", "max_design"},
    "dft-folding": {"length", "trials"},
}

EXPERIMENT_IDS = tuple(sorted(_KNOWN_OVERRIDES))


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int = DEFAULT_SEED
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in _KNOWN_OVERRIDES:
            raise InvalidSpec(f"unknown experiment '{self.experiment}'; known: {', '.join(EXPERIMENT_IDS)}")
        unknown = set(self.overrides) - _KNOWN_OVERRIDES[self.experiment]
        if unknown:
            raise InvalidSpec(f"unknown overrides for {self.experiment}: {sorted(unknown)}")

    def value(self, key: str, default):
        return self.overrides.get(key, default)


@dataclass(frozen=True)
class ExperimentResult:
    experiment: str
    seed: int
    report: dict
    series: dict[str, list[dict]]


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    runner = {
        "bandlimited-recovery": _run_bandlimited_recovery,
        "pgs-recovery": _run_pgs_recovery,
        "community-selection": _run_community_selection,
        "completion-demo": _run_completion_demo,
        "dft-folding": _run_dft_folding,
    }[cfg.experiment]
    report, series = runner(cfg)
    report["assertions"] = _experiment_assertions(cfg.experiment, report)
    report["passed"] = all(report["assertions"].values())
    return ExperimentResult(cfg.experiment, cfg.seed, report, series)


def _experiment_assertions(experiment: str, report: dict) -> dict[str, bool]:
    """Pass/fail conditions each experiment is expected to meet."""
    if experiment == "bandlimited-recovery":
        return {
            "ds_condition_held": bool(report["ds_condition_held"]),
            "perfect_recovery": report["relative_error"] < 1e-8,
        }
    if experiment == "pgs-recovery":
        primary = report["primary"]
        checks = {
            "frequency_perfect": primary["frequency_error"] < 1e-8,
            "vertex_perfect": primary["vertex_error"] < 1e-8,
        }
        if "correction_filter_error" in primary:
            checks["correction_filter_perfect"] = primary["correction_filter_error"] < 1e-8
            checks["paths_agree"] = primary["path_agreement"] < 1e-8
        return checks
    if experiment == "community-selection":
        needed = len(report["cluster_sizes"]) - 1
        deterministic_floor = min(report["eopt_coverage"], report["localized_coverage"])
        return {
            "eopt_covers_most_clusters": report["eopt_coverage"] >= needed,
            "localized_covers_most_clusters": report["localized_coverage"] >= needed,
            "uniform_average_strictly_lower": report["uniform_mean_coverage"] < deterministic_floor,
        }
    if experiment == "completion-demo":
        curve = report["curve"]
        return {
            "blcross_improves_with_budget": curve[-1]["rmse_blcross"] < curve[0]["rmse_blcross"],
            "greedy_improves_with_budget": curve[-1]["rmse_greedy"] < curve[0]["rmse_greedy"],
        }
    if experiment == "dft-folding":
        return {"identity_holds": bool(report["identity_holds"])}
    return {}


def _relative_error(reconstruction: np.ndarray, truth: np.ndarray) -> float:
    return float(np.linalg.norm(reconstruction - truth) / np.linalg.norm(truth))


def _run_bandlimited_recovery(cfg: ExperimentConfig):
    n = int(cfg.value("node_count", 64))
    bandwidth = int(cfg.value("bandwidth", 15))
    budget = int(cfg.value("budget", 15))
    k_neighbors = int(cfg.value("k_neighbors", 6))

    graph = gen_graph(RandomSensor(n, k_neighbors, seed=cfg.seed))
    dec = decompose_graph(graph, VariationOperatorKind.COMBINATORIAL)
    rng = np.random.default_rng([cfg.seed, 1])
    coefficients = rng.standard_normal(bandwidth)
    signal = dec.eigenvectors[:, :bandwidth] @ coefficients

    selection = greedy_select(dec, bandwidth, budget, Criterion.E_OPT)
    sampler = VertexSampler(nodes=selection.ordered_nodes)
    view = vertex_sampler_view(graph, dec, sampler)
    samples = view.apply(signal)

    generator = dec.eigenvectors[:, :bandwidth]
    result = recover(generator, view, samples)

    report = {
        "node_count": n,
        "bandwidth": bandwidth,
        "budget": budget,
        "sampling_set": list(selection.ordered_nodes),
        "ds_condition_held": result.ds_condition_held,
        "smallest_singular_value": result.conditioning,
        "relative_error": _relative_error(result.reconstruction, signal),
        "graph_connected": len(connected_components(graph)) == 1,
    }
    series = {
        "reconstruction": [
            {"node": i, "signal": float(signal[i]), "recovered": float(result.reconstruction[i])}
            for i in range(n)
        ],
        "samples": [
            {"index": j, "value": float(samples[j])} for j in range(budget)
        ],
    }
    return report, series


def _generalized_frequency_view(dec, kernel, period: int) -> SamplingMatrixView:
    """Frequency sampling with the fold pattern j = i (mod K), any N.

    Extends the divisible-case sampler to budgets that do not divide the node
    count: the trailing frequencies simply join their residue-class fold.
    """
    n = dec.node_count
    response = kernel.table(dec.eigenvalues)
    folding = np.zeros((period, n))
    for j in range(n):
        folding[j % period, j] += 1.0
    st = folding @ (response[:, None] * dec.eigenvectors.T)
    return SamplingMatrixView(
        rows=period,
        cols=n,
        apply=lambda x: st @ np.asarray(x, dtype=float),
        apply_transpose=lambda c: st.T @ np.asarray(c, dtype=float),
    )


def _run_pgs_recovery(cfg: ExperimentConfig):
    n = int(cfg.value("node_count", 64))
    period = int(cfg.value("period", 16))
    exact_period = int(cfg.value("exact_period", 15))
    k_neighbors = int(cfg.value("k_neighbors", 6))
    tau = float(cfg.value("tau", 2.0))

    graph = gen_graph(RandomSensor(n, k_neighbors, seed=cfg.seed))
    dec = decompose_graph(graph, VariationOperatorKind.COMBINATORIAL)
    generator_kernel = linear_decay_kernel(dec.lambda_max)
    sampling_kernel = exp_decay_kernel(tau)
    prefilter = filter_matrix(dec, sampling_kernel)
    rng = np.random.default_rng([cfg.seed, 2])

    def run_paths(k: int, divisible: bool) -> dict:
        coefficients = 1.0 + rng.standard_normal(k)
        if divisible:
            generator = build_generator(dec, PeriodicSpectrum(generator_kernel, k))
            freq_view = frequency_sampler_view(dec, FrequencySampler(sampling_kernel, k))
        else:
            generator = periodic_generator(dec, generator_kernel, k, allow_remainder=True)
            freq_view = _generalized_frequency_view(dec, sampling_kernel, k)
        signal = generator @ coefficients

        freq_samples = freq_view.apply(signal)
        freq_result = recover(generator, freq_view, freq_samples)
        out = {
            "period": k,
            "frequency_error": _relative_error(freq_result.reconstruction, signal),
            "frequency_ds_held": freq_result.ds_condition_held,
        }
        if divisible:
            filtered = recover_periodic_frequency(dec, generator_kernel, sampling_kernel, k, freq_samples)
            out["correction_filter_error"] = _relative_error(filtered, signal)
            out["path_agreement"] = float(
                np.linalg.norm(filtered - freq_result.reconstruction) / np.linalg.norm(signal)
            )

        observed = prefilter @ generator
        nodes = greedy_rows(observed, k, Criterion.E_OPT).ordered_nodes
        vertex_view = vertex_sampler_view(graph, dec, VertexSampler(nodes, prefilter=sampling_kernel))
        vertex_result = recover(generator, vertex_view, vertex_view.apply(signal))
        out["vertex_error"] = _relative_error(vertex_result.reconstruction, signal)
        out["vertex_ds_held"] = vertex_result.ds_condition_held
        out["vertex_nodes"] = list(nodes)
        return out, signal, freq_result.reconstruction

    primary, signal, reconstruction = run_paths(period, divisible=(n % period == 0))
    secondary, _, _ = run_paths(exact_period, divisible=(n % exact_period == 0))

    report = {
        "node_count": n,
        "primary": primary,
        "exact_configuration": secondary,
    }
    series = {
        "reconstruction": [
            {"node": i, "signal": float(signal[i]), "recovered": float(reconstruction[i])}
            for i in range(n)
        ],
    }
    return report, series


def _coverage(nodes, labels: np.ndarray) -> int:
    return len({int(labels[v]) for v in nodes})


def _run_community_selection(cfg: ExperimentConfig):
    sizes = tuple(int(s) for s in cfg.value("cluster_sizes", (4, 4, 8, 16, 32, 64)))
    p_in = float(cfg.value("p_in", 0.8))
    p_out = float(cfg.value("p_out", 0.01))
    budget = int(cfg.value("budget", 10))
    bandwidth = int(cfg.value("bandwidth", 10))
    random_trials = int(cfg.value("random_trials", 100))

    graph = gen_graph(Community(sizes, p_in, p_out, seed=cfg.seed))
    labels = community_labels(sizes)
    # The normalized operator keeps the low eigenvectors spread across the
    # clusters; the combinatorial one buries small sparse clusters under
    # their own internal modes and selection piles up there.
    dec = decompose_graph(graph, VariationOperatorKind.SYMMETRIC_NORMALIZED)

    eopt = greedy_select(dec, bandwidth, budget, Criterion.E_OPT)
    localized = greedy_select_localized(dec, ideal_lowpass_kernel(dec.eigenvalues, bandwidth), budget)

    coherence = coherence_distribution(dec, bandwidth)
    uniform = np.full(graph.node_count, 1.0 / graph.node_count)
    coherence_cov = []
    uniform_cov = []
    for trial in range(random_trials):
        trial_seed = cfg.seed * 100_003 + trial
        coherence_cov.append(_coverage(random_select(coherence, budget, trial_seed).ordered_nodes, labels))
        uniform_cov.append(_coverage(random_select(uniform, budget, trial_seed).ordered_nodes, labels))

    report = {
        "node_count": graph.node_count,
        "cluster_sizes": list(sizes),
        "budget": budget,
        "graph_connected": len(connected_components(graph)) == 1,
        "eopt_nodes": list(eopt.ordered_nodes),
        "eopt_coverage": _coverage(eopt.ordered_nodes, labels),
        "localized_nodes": list(localized.ordered_nodes),
        "localized_coverage": _coverage(localized.ordered_nodes, labels),
        "coherence_mean_coverage": float(np.mean(coherence_cov)),
        "uniform_mean_coverage": float(np.mean(uniform_cov)),
        "random_trials": random_trials,
    }
    series = {
        "selections": (
            [{"strategy": "eopt", "order": i, "node": int(v)} for i, v in enumerate(eopt.ordered_nodes)]
            + [{"strategy": "localized", "order": i, "node": int(v)} for i, v in enumerate(localized.ordered_nodes)]
        ),
    }
    return report, series


def _run_completion_demo(cfg: ExperimentConfig):
    n_rows = int(cfg.value("n_rows", 8))
    n_cols = int(cfg.value("n_cols", 8))
    row_bandwidth = int(cfg.value("row_bandwidth", 3))
    col_bandwidth = int(cfg.value("col_bandwidth", 3))
    alpha = float(cfg.value("alpha", 1e-3))
    beta = float(cfg.value("beta", 1e-3))
    max_design = int(cfg.value("max_design", 5))

    row_graph = gen_graph(Path(n_rows))
    half = n_cols // 2
    col_graph = gen_graph(Community((half, n_cols - half), 0.9, 0.15, seed=cfg.seed))
    dec_r = decompose_graph(row_graph, VariationOperatorKind.COMBINATORIAL)
    dec_c = decompose_graph(col_graph, VariationOperatorKind.COMBINATORIAL)

    rng = np.random.default_rng([cfg.seed, 3])
    # Coefficients decay away from the lowest mode pair so the target is
    # genuinely smooth on both graphs.
    weights = np.array([
        [np.exp(-1.5 * (p + q)) for q in range(col_bandwidth)] for p in range(row_bandwidth)
    ])
    coefficients = weights * rng.standard_normal((row_bandwidth, col_bandwidth))
    truth = dec_r.eigenvectors[:, :row_bandwidth] @ coefficients @ dec_c.eigenvectors[:, :col_bandwidth].T

    def complete(mask) -> float:
        prob = CompletionProblem(truth, tuple(mask), row_graph, col_graph, alpha, beta)
        filled = dglr_solve(prob, tol=1e-10)
        return float(np.sqrt(np.mean((filled - truth) ** 2)))

    rows_series = []
    for design in range(1, max_design + 1):
        cross_mask = bl_cross_sample(row_graph, col_graph, design, design)
        budget = len(cross_mask)
        greedy_mask = active_sample_greedy(row_graph, col_graph, alpha, beta, budget)
        rows_series.append({
            "budget": budget,
            "rmse_blcross": complete(cross_mask),
            "rmse_greedy": complete(greedy_mask),
        })

    report = {
        "n_rows": n_rows,
        "n_cols": n_cols,
        "row_bandwidth": row_bandwidth,
        "col_bandwidth": col_bandwidth,
        "alpha": alpha,
        "beta": beta,
        "curve": rows_series,
    }
    return report, {"rmse_vs_budget": rows_series}


def _run_dft_folding(cfg: ExperimentConfig):
    length = int(cfg.value("length", 8))
    trials = int(cfg.value("trials", 16))
    if length % 2 != 0:
        raise InvalidSpec(f"length must be even, got {length}")
    rng = np.random.default_rng([cfg.seed, 4])
    half = length // 2
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(length)
        spectrum = np.fft.fft(x)
        decimated_spectrum = np.fft.fft(x[::2])
        folded = spectrum[:half] + spectrum[half:]
        worst = max(worst, float(np.max(np.abs(0.5 * folded - decimated_spectrum))))
    report = {
        "length": length,
        "trials": trials,
        "max_error": worst,
        "identity_holds": worst < 1e-12,
    }
    return report, {}
