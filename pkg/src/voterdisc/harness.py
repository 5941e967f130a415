"""Experiment layer: declarative specs, replica execution and summaries.

Each experiment kind maps to a runner that fans replicas out over a worker
pool, gathers the per-replica results keyed by replica index and reduces
them into an ``ExperimentSummary`` with named checks.  Replica ``i`` always
uses the random streams derived from ``(seed, i)``, so results do not
depend on the worker count or on completion order.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import __version__, analytic, diffusion, dual, graph, voter
from .rng import AUX, GRAPH, INIT, RUN, derive_seed, make_rng
from .stats import ks_statistic, log_linear_fit, mean_se, parse_grid

WORKERS_ENV = "VOTERDISC_WORKERS"

KINDS = (
    "curve-short", "plateau", "long-decay", "meeting-tail", "coalescence-scaling",
    "fvtl-returns", "distributional", "concentration-sweep", "figure1", "figure2",
)

DEFAULT_REPLICAS = {
    "curve-short": 200, "plateau": 200, "long-decay": 500, "meeting-tail": 2000,
    "coalescence-scaling": 300, "fvtl-returns": 100_000, "distributional": 500,
    "concentration-sweep": 200, "figure1": 100, "figure2": 10,
}


class ExperimentError(RuntimeError):
    pass


def default_workers():
    env = os.environ.get(WORKERS_ENV)
    return max(1, int(env)) if env else 1


@dataclass
class ExperimentSpec:
    kind: str
    n: int = 1000
    d: int = 3
    u: float = 0.5
    replicas: int | None = None
    grid: str | None = None
    seed: int = 1
    workers: int | None = None
    out: str | None = None
    fixed_graph: bool = False
    t_cap: float | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.replicas is None:
            self.replicas = DEFAULT_REPLICAS[self.kind]
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if self.workers is None:
            self.workers = default_workers()
        if not 0 <= self.u <= 1:
            raise ValueError("u must lie in [0, 1]")
        if self.d < 3 or self.n <= self.d or (self.n * self.d) % 2:
            raise ValueError(f"invalid graph parameters n={self.n}, d={self.d}")

    def echo(self):
        out = dataclasses.asdict(self)
        out.pop("workers")
        out.pop("out")
        return out

    def param(self, key, default):
        return self.params.get(key, default)


@dataclass
class Check:
    value: float
    lo: float
    hi: float

    @property
    def passed(self):
        return bool(self.lo <= self.value <= self.hi)


@dataclass
class ExperimentSummary:
    kind: str
    grid: list = field(default_factory=list)
    mean: list = field(default_factory=list)
    se: list = field(default_factory=list)
    count: int = 0
    stats: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict, repr=False)

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    def check(self, name, value, lo, hi):
        self.checks[name] = Check(float(value), float(lo), float(hi))

    def flat(self):
        """Flat key/value view written to ``<prefix>.summary.json``."""
        out = {"kind": self.kind, "count": self.count, "passed": self.passed}
        out["grid"] = [float(x) for x in self.grid]
        out["mean"] = [float(x) for x in self.mean]
        out["se"] = [float(x) for x in self.se]
        for k, v in self.stats.items():
            out[f"stat.{k}"] = _plain(v)
        for k, c in self.checks.items():
            out[f"check.{k}.value"] = c.value
            out[f"check.{k}.lo"] = c.lo
            out[f"check.{k}.hi"] = c.hi
            out[f"check.{k}.passed"] = c.passed
        for k, v in self.provenance.items():
            out[f"provenance.{k}"] = _plain(v)
        return out

    def report_lines(self):
        lines = []
        for name, c in self.checks.items():
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"{flag} {self.kind}:{name} value={c.value:.6g} range=[{c.lo:.6g}, {c.hi:.6g}]")
        return lines


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


# ---------------------------------------------------------------- execution

@lru_cache(maxsize=8)
def _cached_graph(n, d, seed):
    return graph.generate_regular(n, d, seed)


def replica_graph(spec: ExperimentSpec, i: int, n=None):
    """Fresh graph per replica, or one shared graph with ``fixed_graph``."""
    n = spec.n if n is None else n
    if spec.fixed_graph:
        return _cached_graph(n, spec.d, derive_seed(spec.seed, GRAPH, n))
    return graph.generate_regular(n, spec.d, derive_seed(spec.seed, GRAPH, n, i))


def run_replicas(fn, spec: ExperimentSpec, count: int, *args):
    """``[fn(spec, i, *args) for i in range(count)]``, possibly in parallel."""
    if spec.workers <= 1 or count < 2:
        return [fn(spec, i, *args) for i in range(count)]
    chunk = max(1, count // (spec.workers * 8))
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        futures = pool.map(fn, [spec] * count, range(count), *[[a] * count for a in args], chunksize=chunk)
        return list(futures)


def _voter_rng(spec, i, n=None):
    return make_rng(spec.seed, RUN, spec.n if n is None else n, i)


def _discordance_run(spec, i, times, n=None):
    g = replica_graph(spec, i, n)
    state = voter.init_bernoulli(g, spec.u, _voter_rng(spec, i, n))
    _, b, disc = voter.run_recorded_counts(state, times)
    return disc / g.m


def _discordance_matrix(spec, times, n=None, count=None):
    count = spec.replicas if count is None else count
    rows = run_replicas(_discordance_run, spec, count, np.asarray(times, dtype=float), n)
    return np.vstack(rows)


# ---------------------------------------------------------------- runners

def run_curve_short(spec: ExperimentSpec) -> ExperimentSummary:
    times = parse_grid(spec.grid or "lin:0:5:51")
    tol = spec.param("tol", 0.02)
    D = _discordance_matrix(spec, times)
    mean, se = mean_se(D)
    f = np.array([analytic.f_survival(spec.d, t) for t in times])
    pred = 2 * spec.u * (1 - spec.u) * f
    gap = np.abs(mean - pred)
    s = ExperimentSummary("curve-short", times.tolist(), mean.tolist(), se.tolist(), len(D))
    s.stats.update(sup_gap=float(gap.max()), argmax_t=float(times[gap.argmax()]), max_se=float(se.max()))
    s.check("sup_gap", gap.max(), 0.0, tol)
    s.tables["data"] = (["t", "mean", "se", "prediction"], np.column_stack([times, mean, se, pred]))
    return s


def run_plateau(spec: ExperimentSpec) -> ExperimentSummary:
    times = np.array(spec.param("times", [20.0, 30.0, 50.0]), dtype=float)
    t_check = spec.param("check_time", 30.0)
    tol = spec.param("tol", 0.02)
    D = _discordance_matrix(spec, times)
    mean, se = mean_se(D)
    target = analytic.plateau(spec.u, spec.d) if 0 < spec.u < 1 else 0.0
    s = ExperimentSummary("plateau", times.tolist(), mean.tolist(), se.tolist(), len(D))
    s.stats.update(target=target, deviation=(mean - target).tolist())
    k = int(np.argmin(np.abs(times - t_check)))
    s.check(f"deviation_t{times[k]:g}", abs(mean[k] - target), 0.0, tol)
    s.tables["data"] = (["t", "mean", "se", "target"], np.column_stack([times, mean, se, np.full_like(times, target)]))
    return s


def run_long_decay(spec: ExperimentSpec) -> ExperimentSummary:
    svals = np.array(spec.param("s", [0.25, 0.5, 1.0, 1.5, 2.0]), dtype=float)
    times = svals * spec.n
    D = _discordance_matrix(spec, times)
    mean, se = mean_se(D)
    if np.all(mean <= 0):
        raise ExperimentError("degenerate fit: every mean discordance is zero")
    slope, intercept, slope_se, icpt_se = log_linear_fit(svals, mean, se)
    th = analytic.theta(spec.d)
    target_slope = -2 * th
    target_icpt = math.log(analytic.plateau(spec.u, spec.d))
    s = ExperimentSummary("long-decay", svals.tolist(), mean.tolist(), se.tolist(), len(D))
    s.stats.update(slope=slope, intercept=intercept, slope_se=slope_se, intercept_se=icpt_se,
                   target_slope=target_slope, target_intercept=target_icpt)
    rel = spec.param("slope_rel_tol", 0.10)
    s.check("slope", slope, target_slope * (1 + rel), target_slope * (1 - rel))
    s.check("intercept", intercept, target_icpt - spec.param("intercept_tol", 0.05),
            target_icpt + spec.param("intercept_tol", 0.05))
    pred = [analytic.expected_discordance(spec.u, spec.d, t, spec.n) for t in times]
    s.tables["data"] = (["s", "mean", "se", "prediction"], np.column_stack([svals, mean, se, pred]))
    return s


def _stationary_meeting(spec, i):
    g = replica_graph(spec, i)
    return dual.meeting_time_stationary(g, spec.t_cap or 20.0 * spec.n, make_rng(spec.seed, AUX, i))


def _adjacent_meeting(spec, i):
    g = replica_graph(spec, i)
    rng = make_rng(spec.seed, AUX, i)
    radius = spec.param("radius", graph.default_radius(spec.n, spec.d))
    for _ in range(1000):
        e = int(rng.integers(g.m))
        if graph.is_ltle_edge(g, e, radius):
            break
    else:
        raise ExperimentError("could not find an LTLE edge")
    x, y = (int(v) for v in g.edges[e])
    if rng.random() < 0.5:
        x, y = y, x
    return dual.meeting_time_pair(g, x, y, spec.t_cap or float(spec.n), rng)


def _survival_fit(samples, grid, t_cap):
    curve = dual.survival_curve(samples, grid, t_cap)
    from .stats import exponential_rate

    rate, intercept, rate_se = exponential_rate([t for t, _ in curve], [p for _, p in curve])
    return curve, rate, intercept, rate_se


def run_meeting_tail(spec: ExperimentSpec) -> ExperimentSummary:
    mode = spec.param("mode", "stationary")
    n, th = spec.n, analytic.theta(spec.d)
    if mode == "stationary":
        t_cap = spec.t_cap or 20.0 * n
        samples = run_replicas(_stationary_meeting, spec, spec.replicas)
        grid = parse_grid(spec.grid or f"geo:{n / 2}:{3 * n}:20")
    elif mode == "adjacent":
        t_cap = spec.t_cap or float(n)
        samples = run_replicas(_adjacent_meeting, spec, spec.replicas)
        grid = parse_grid(spec.grid or f"geo:{n / 10}:{t_cap}:20")
    else:
        raise ValueError(f"unknown meeting-tail mode {mode!r}")
    met = np.array([x for x in samples if x is not None])
    censored = len(samples) - len(met)
    curve, rate, intercept, rate_se = _survival_fit(samples, grid, t_cap)
    s = ExperimentSummary("meeting-tail", [t for t, _ in curve], [p for _, p in curve],
                          [math.sqrt(p * (1 - p) / len(samples)) for _, p in curve], len(samples))
    s.stats.update(mode=mode, censored=censored, uncensored=len(met), fitted_rate=rate, rate_se=rate_se,
                   fitted_rate_over_target=rate / (2 * th / n), insufficient=len(met) < 100)
    s.check("uncensored_count", len(met), 100, math.inf)
    if mode == "stationary":
        s.stats["mean_over_n"] = float(met.mean() / n) if not censored else None
        s.stats["target_mean_over_n"] = 1 / (2 * th)
        if not censored:
            s.check("mean_over_n", met.mean() / n, 0.85 / (2 * th), 1.15 / (2 * th))
        s.check("rate_ratio", rate / (2 * th / n), 0.9, 1.1)
    else:
        t_short = spec.param("short_time", 50.0)
        s_short = dual.survival_curve(samples, [t_short], t_cap)[0][1]
        pred = [th * math.exp(-2 * th * t / n) for t, _ in curve]
        s.stats.update(plateau_time=t_short, plateau_estimate=s_short, target=th,
                       max_gap_vs_prediction=float(max(abs(p - q) for (_, p), q in zip(curve, pred))))
        s.check("plateau", s_short, th - 0.05, th + 0.05)
    s.tables["data"] = (["replica", "outcome", "time"], _outcome_rows(samples, "met"))
    s.tables["survival"] = (["t", "survival"], np.array(curve))
    return s


def _outcome_rows(samples, label):
    return [(i, label if x is not None else "censored", "" if x is None else repr(float(x)))
            for i, x in enumerate(samples)]


def _coalescence(spec, i):
    g = replica_graph(spec, i)
    return dual.coalescence_time(g, spec.t_cap or 50.0 * spec.n, make_rng(spec.seed, RUN, i))


def run_coalescence_scaling(spec: ExperimentSpec) -> ExperimentSummary:
    n, th = spec.n, analytic.theta(spec.d)
    coal = run_replicas(_coalescence, spec, spec.replicas)
    meet_spec = dataclasses.replace(spec, replicas=spec.param("meet_replicas", 2000))
    meet = run_replicas(_stationary_meeting, meet_spec, meet_spec.replicas)
    c = np.array([x for x in coal if x is not None])
    m = np.array([x for x in meet if x is not None])
    s = ExperimentSummary("coalescence-scaling", count=len(coal))
    cens_c, cens_m = len(coal) - len(c), len(meet) - len(m)
    s.stats.update(censored_coalescence=cens_c, censored_meeting=cens_m,
                   censored_dominated=bool(cens_c > len(coal) / 2 or cens_m > len(meet) / 2))
    if len(c) == 0 or len(m) == 0:
        raise ExperimentError("no uncensored samples")
    cm, cse = mean_se(c)
    mm, mse = mean_se(m)
    ratio = cm / mm
    ratio_se = ratio * math.sqrt((cse / cm) ** 2 + (mse / mm) ** 2)
    s.stats.update(coal_mean_over_n=cm / n, coal_se_over_n=cse / n, meet_mean_over_n=mm / n,
                   meet_se_over_n=mse / n, ratio=ratio, ratio_se=ratio_se,
                   target_coal_over_n=1 / th, target_ratio=2.0)
    s.check("coal_mean_over_n", cm / n, 0.85 / th, 1.15 / th)
    s.check("ratio", ratio, 1.7, 2.3)
    if cens_c or cens_m:
        s.check("censored", cens_c + cens_m, 0, 0)
    s.tables["data"] = (["replica", "outcome", "time"], _outcome_rows(coal, "coalesced"))
    return s


def _fvtl_chunk(spec, i, T, per):
    g = replica_graph(spec, i)
    v = dual.product_chain_visits(g, T, per, make_rng(spec.seed, RUN, i))
    return float(v.sum()), float((v.astype(float) ** 2).sum())


def run_fvtl_returns(spec: ExperimentSpec) -> ExperimentSummary:
    T = int(spec.param("T", math.ceil(math.log(spec.n) ** 2)))
    graphs = 1 if spec.fixed_graph else int(spec.param("graphs", 10))
    per = -(-spec.replicas // graphs)
    sums = np.array(run_replicas(_fvtl_chunk, spec, graphs, T, per))
    total = per * graphs
    mean_visits = sums[:, 0].sum() / total
    var = (sums[:, 1].sum() - total * mean_visits ** 2) / (total - 1)
    est = 1.0 + mean_visits
    se = math.sqrt(var / total)
    target = (spec.d - 1) / (spec.d - 2)
    s = ExperimentSummary("fvtl-returns", [T], [est], [se], total)
    s.stats.update(T=T, estimate=est, target=target, graphs=graphs,
                   per_graph=(1.0 + sums[:, 0] / per).tolist())
    s.check("returns", est, 0.95 * target, 1.05 * target)
    k4 = graph.RegularGraph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    from .oracles import expected_diagonal_visits

    exact = expected_diagonal_visits(k4, T)
    k4_est, k4_se = dual.product_chain_returns(k4, T, spec.param("k4_replicas", 100_000), make_rng(spec.seed, AUX, 1))
    s.stats.update(k4_estimate=k4_est, k4_se=k4_se, k4_exact=exact, k4_z=(k4_est - exact) / k4_se)
    s.check("k4_z", (k4_est - exact) / k4_se, -3, 3)
    s.tables["data"] = (["T", "estimate", "se", "target"], [(T, est, se, target)])
    return s


def diffusion_time(spec, s):
    """Diffusion clock for voter time ``s * n``.

    The default is ``s`` itself, which keeps the diffusion mean consistent
    with the ``exp(-2 theta s)`` decay of the expected discordance; the
    alternative ``2 theta s`` map is selectable with ``time_map``.
    """
    if spec.param("time_map", "identity") == "two-theta":
        return 2 * analytic.theta(spec.d) * s
    return s


def run_distributional(spec: ExperimentSpec) -> ExperimentSummary:
    sv = float(spec.param("s", 1.0))
    th = analytic.theta(spec.d)
    D = _discordance_matrix(spec, [sv * spec.n])[:, 0]
    dt = spec.param("dt", diffusion.DEFAULT_DT)
    sd = diffusion_time(spec, sv)
    B = diffusion.endpoint_samples(spec.u, spec.d, sd, dt, spec.replicas, make_rng(spec.seed, INIT, 0))
    F = 2 * th * B * (1 - B)
    ks = ks_statistic(D, F)
    zero_v, zero_d = float(np.mean(D == 0)), float(np.mean(F == 0))
    s = ExperimentSummary("distributional", [sv], [float(D.mean())], [float(F.mean())], len(D))
    s.stats.update(ks=ks, zero_mass_voter=zero_v, zero_mass_diffusion=zero_d, diffusion_time=sd,
                   mean_voter=float(D.mean()), mean_diffusion=float(F.mean()))
    s.check("ks", ks, 0.0, spec.param("ks_tol", 0.1))
    s.check("zero_mass_gap", abs(zero_v - zero_d), 0.0, 0.06)
    s.tables["data"] = (["voter", "diffusion"], np.column_stack([D, F]))
    return s


def _sup_deviation(spec, i, times, n, ref):
    D = _discordance_run(spec, i, times, n)
    return float(np.max(np.abs(D - ref)))


def _sum_block(spec, c, times, n, blocks):
    total = np.zeros_like(times)
    for i in range(c, spec.replicas, blocks):
        total += _discordance_run(spec, i, times, n)
    return total


def _sweep_one(spec, n, horizon, spacing):
    times = np.arange(0.0, horizon + spacing / 2, spacing)
    # first pass: mean curve; second pass reruns the same seeds against it
    blocks = max(1, min(spec.workers, spec.replicas))
    ref = sum(run_replicas(_sum_block, spec, blocks, times, n, blocks)) / spec.replicas
    sups = np.array(run_replicas(_sup_deviation, spec, spec.replicas, times, n, ref))
    return sups, ref


def run_concentration_sweep(spec: ExperimentSpec) -> ExperimentSummary:
    delta = float(spec.param("delta", 0.2))
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    eps_grid = [float(e) for e in spec.param("eps", [0.02, 0.05, 0.1])]
    eps_check = float(spec.param("eps_check", 0.05))
    sizes = [spec.n, spec.param("n2", 2 * spec.n)]
    s = ExperimentSummary("concentration-sweep", eps_grid, count=spec.replicas)
    fracs = {}
    rows = []
    for n in sizes:
        horizon = n ** (1 - delta)
        spacing = float(spec.param("spacing", 1.0 / n))
        sups, _ = _sweep_one(spec, n, horizon, spacing)
        fr = [float(np.mean(sups > e)) for e in eps_grid]
        fracs[n] = fr
        s.stats[f"n{n}.horizon"] = horizon
        s.stats[f"n{n}.exceedance"] = fr
        s.stats[f"n{n}.median_sup"] = float(np.median(sups))
        rows.extend((n, i, x) for i, x in enumerate(sups.tolist()))
    k = eps_grid.index(eps_check) if eps_check in eps_grid else None
    if k is None:
        raise ValueError("eps_check must be one of the eps grid values")
    R = spec.replicas
    p1, p2 = fracs[sizes[0]][k], fracs[sizes[1]][k]
    se = math.sqrt(p1 * (1 - p1) / R + p2 * (1 - p2) / R)
    s.mean = fracs[sizes[0]]
    s.se = [math.sqrt(p * (1 - p) / R) for p in fracs[sizes[0]]]
    s.stats.update(exceedance_n=p1, exceedance_2n=p2, trend_se=se)
    s.check("exceedance", p1, 0.0, spec.param("max_fraction", 0.1))
    s.check("trend", p2 - p1, -math.inf, 2 * se)
    s.tables["data"] = (["n", "replica", "sup_deviation"], rows)
    return s


def _figure_schedule(t_cap):
    fine = np.arange(0.0, 5.0 + 1e-9, 0.1)
    coarse = np.arange(6.0, t_cap + 1e-9, 1.0)
    return np.concatenate([fine, coarse])


def _consensus_time(spec, i):
    g = replica_graph(spec, i)
    state = voter.init_bernoulli(g, spec.u, _voter_rng(spec, i))
    return voter.run_until_consensus(state, spec.t_cap or 2e4)


def _trajectory(spec, i, times):
    g = replica_graph(spec, i)
    state = voter.init_bernoulli(g, spec.u, _voter_rng(spec, i))
    tr = voter.run_recorded(state, times)
    done = np.flatnonzero((tr.b_density == 0) | (tr.b_density == 1))
    stop = done[0] + 1 if done.size else len(tr)
    return tr.t[:stop], tr.b_density[:stop], tr.d_density[:stop]


def run_figure(spec: ExperimentSpec) -> ExperimentSummary:
    t_cap = spec.t_cap or 2e4
    times = _figure_schedule(t_cap)
    th = analytic.theta(spec.d)
    if spec.kind == "figure1":
        t, b, dd = _trajectory(spec, 0, times)
        cons = run_replicas(_consensus_time, spec, spec.replicas)
        reached = np.array([c is not None for c in cons])
        s = ExperimentSummary("figure1", count=spec.replicas)
        s.stats.update(single_run_consensus=cons[0],
                       median_consensus=float(np.median([c for c in cons if c is not None])) if reached.any() else None,
                       consensus_fraction=float(reached.mean()))
        s.check("consensus_fraction", reached.mean(), 0.95, 1.0)
        grid = np.linspace(0, 5, 51)
        f = np.array([analytic.f_survival(spec.d, x) for x in grid])
        s.tables["data"] = (["t", "b_density", "d_density"], np.column_stack([t, b, dd]))
        s.tables["overlay"] = (["t", "f_d", "prediction"], np.column_stack([grid, f, 2 * spec.u * (1 - spec.u) * f]))
        return s
    rows = []
    for i in range(spec.replicas):
        t, b, dd = _trajectory(spec, i, times)
        rows.append(np.column_stack([np.full_like(t, i), t, np.minimum(b, 1 - b), dd, b]))
    data = np.vstack(rows)
    late = (data[:, 1] >= spec.n / 4) & (data[:, 4] > 0) & (data[:, 4] < 1)
    x = data[late, 4]
    gap = float(np.mean(np.abs(data[late, 3] - 2 * th * x * (1 - x)))) if late.any() else math.nan
    s = ExperimentSummary("figure2", count=spec.replicas)
    s.stats.update(late_samples=int(late.sum()), homogenisation_gap=gap)
    s.check("homogenisation_gap", gap, 0.0, spec.param("tol", 0.03))
    s.tables["data"] = (["replica", "t", "minority", "d_density"], data[:, :4])
    xs = np.linspace(0, 0.5, 101)
    s.tables["reference"] = (["x", "x_times_one_minus_x"], np.column_stack([xs, xs * (1 - xs)]))
    return s


RUNNERS = {
    "curve-short": run_curve_short,
    "plateau": run_plateau,
    "long-decay": run_long_decay,
    "meeting-tail": run_meeting_tail,
    "coalescence-scaling": run_coalescence_scaling,
    "fvtl-returns": run_fvtl_returns,
    "distributional": run_distributional,
    "concentration-sweep": run_concentration_sweep,
    "figure1": run_figure,
    "figure2": run_figure,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentSummary:
    summary = RUNNERS[spec.kind](spec)
    summary.provenance = {"spec": spec.echo(), "seed": spec.seed, "version": __version__}
    if spec.out:
        write_outputs(summary, spec.out)
    return summary


# ---------------------------------------------------------------- output

def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_outputs(summary: ExperimentSummary, prefix: str):
    with open(f"{prefix}.summary.json", "w") as fh:
        json.dump(summary.flat(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    for name, (header, rows) in summary.tables.items():
        write_csv(f"{prefix}.{name}.csv", header, rows)
