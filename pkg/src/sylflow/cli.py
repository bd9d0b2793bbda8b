"""Command-line front end: run solves, rate sweeps, and fixture verifications.

Subcommands
-----------
solve
    Integrate one configured flow and emit the sampled trajectory as CSV
    (``t,e_total,consensus_residual,e_node_1,...``) plus a human-readable
    summary. With ``--out`` the CSV goes to the file and the summary to
    stdout; without it the CSV goes to stdout and the summary to stderr.
rate-sweep
    Repeat the configured run for each gain in ``--k-values`` (ascending)
    and emit one CSV row per gain:
    ``K,r_theory,r_measured,r0,bound_lower,bound_upper``. Fields that do not
    apply to the configured flow are left empty. Runs execute concurrently;
    rows are assembled in gain order.
verify
    Run one built-in fixture scenario (``example1`` .. ``example5``) and
    assert its acceptance checks, reporting PASS/FAIL per check.

Exit codes: 0 run completed; 1 usage or config error; 2 integration
divergence; 3 unsolvable equation under a flow that needs a solution;
4 verification failure.

Config files are JSON (UTF-8, matrices as row-major nested arrays)::

    {
      "problem": {"A": [[...]], "B": [[...]], "C": [[...]]},   // or {"file": "problem.json"}
      "flow": "cp",                          // cp | cps | ls | augmented | clustering
      "partition": "bc-column",              // or {"kind": "grouped", "groups": [[1,2],[3]]}
      "graph": {"kind": "cycle", "n": 5},    // path | cycle | complete | custom (+ "edges")
      "inner_graphs": [...],                 // clustering flow: one graph per cluster
      "K": 1.0,
      "Ks": 10.0,                            // cps flow only
      "integrator": {"dt": 0.01, "t_end": 100.0, "sample_stride": 1},
      "init": {"kind": "zero", "seed": 7}    // zero | random | equilibrium
    }

The environment variable SYLFLOW_SEED overrides the configured seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import fixtures
from .backend import kernel_backend
from .densela import unvec, vec
from .errors import (
    ConfigError,
    FlowDivergenceError,
    SylflowError,
    UnsolvableError,
)
from .flows import FLOWS, Trajectory, build_node_equations, simulate
from .netgraph import (
    DoubleLayerNetwork,
    NetworkGraph,
    laplacian,
    make_complete,
    make_cycle,
    make_path,
)
from .oracle import direct_solve, flow_limit, positive_definite_check
from .partition import (
    Case,
    SylvesterProblem,
    bc_column_partition,
    clustering_partition,
)
from .rates import (
    clustering_rate,
    measured_rate,
    r0_limit,
    r_of_K,
    remark2_bounds,
    rs_upper_bound,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGED = 2
EXIT_UNSOLVABLE = 3
EXIT_VERIFY_FAILED = 4

_PARTITION_NAMES = (
    "bc-column",
    "ac-row",
    "grouped",
    "high-res",
    "lyapunov-sym",
    "full-row-column",
    "clustering",
)

#: Partitions whose stacked rows reproduce the (possibly transposed)
#: vectorized operator, so the row-rank spectral bounds speak about them.
_BOUND_PARTITIONS = ("bc-column", "ac-row", "grouped", "high-res", "lyapunov-sym")

_CONVERGENCE_THRESHOLD = 1e-6


class _UsageError(ConfigError):
    """Bad command line (flags, missing arguments)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit codes under our control
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# Config parsing
# ---------------------------------------------------------------------------


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _matrix(node, field: str) -> np.ndarray:
    try:
        M = np.array(node, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{field}: not a numeric matrix ({exc})") from exc
    if M.ndim != 2 or M.size == 0:
        raise ConfigError(f"{field}: expected a nonempty 2-D array of numbers")
    if not np.all(np.isfinite(M)):
        raise ConfigError(f"{field}: entries must be finite")
    return M


def _parse_problem(node, base_dir: str) -> SylvesterProblem:
    if not isinstance(node, dict):
        raise ConfigError('problem: expected an object with "A","B","C" or "file"')
    if "file" in node:
        path = node["file"]
        if not isinstance(path, str):
            raise ConfigError("problem.file: expected a path string")
        if not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        node = _load_json(path)
        if not isinstance(node, dict):
            raise ConfigError(f'problem.file: {path} must hold an object with "A","B","C"')
    missing = [k for k in ("A", "B", "C") if k not in node]
    if missing:
        raise ConfigError(f"problem: missing field(s) {', '.join(missing)}")
    A = _matrix(node["A"], "problem.A")
    B = _matrix(node["B"], "problem.B")
    C = _matrix(node["C"], "problem.C")
    try:
        return SylvesterProblem(A=A, B=B, C=C)
    except SylflowError as exc:
        raise ConfigError(f"problem: {exc}") from exc


def _parse_graph(node, field: str) -> NetworkGraph:
    if not isinstance(node, dict) or "kind" not in node:
        raise ConfigError(f'{field}: expected an object with a "kind"')
    kind = node["kind"]
    n = node.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigError(f'{field}.n: expected an integer node count')
    try:
        if kind == "path":
            return make_path(n)
        if kind == "cycle":
            return make_cycle(n)
        if kind == "complete":
            return make_complete(n)
        if kind == "custom":
            edges = node.get("edges", [])
            if not isinstance(edges, list):
                raise ConfigError(f"{field}.edges: expected a list of [i,j] pairs")
            return NetworkGraph(n, [tuple(e) for e in edges])
    except ConfigError:
        raise
    except (SylflowError, TypeError, ValueError) as exc:
        raise ConfigError(f"{field}: {exc}") from exc
    raise ConfigError(
        f"{field}.kind: unknown kind {kind!r} (use path, cycle, complete, or custom)"
    )


def _parse_partition(cfg) -> tuple:
    """-> (partition name or None, groups or None)."""
    node = cfg.get("partition")
    groups = cfg.get("groups")
    if isinstance(node, dict):
        kind = node.get("kind")
        groups = node.get("groups", groups)
        node = kind
    if node is not None and node not in _PARTITION_NAMES:
        raise ConfigError(
            f"partition: unknown scheme {node!r} (expected one of {_PARTITION_NAMES})"
        )
    if groups is not None:
        if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
            raise ConfigError("partition.groups: expected a list of lists of column indices")
        groups = [[int(i) for i in g] for g in groups]
    if node == "grouped" and groups is None:
        raise ConfigError('partition: the "grouped" scheme needs "groups"')
    return node, groups


def _positive_number(node, field: str) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ConfigError(f"{field}: expected a number")
    x = float(node)
    if not np.isfinite(x) or x <= 0.0:
        raise ConfigError(f"{field}: must be positive and finite, got {node}")
    return x


def _parse_init(cfg) -> tuple:
    node = cfg.get("init", {"kind": "zero"})
    if isinstance(node, str):
        node = {"kind": node}
    if not isinstance(node, dict):
        raise ConfigError('init: expected {"kind": "zero"|"random"|"equilibrium", "seed": int}')
    kind = node.get("kind", "zero")
    if kind not in ("zero", "random", "equilibrium"):
        raise ConfigError(f"init.kind: unknown kind {kind!r}")
    seed = node.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise ConfigError("init.seed: expected an integer")
    env = os.environ.get("SYLFLOW_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ConfigError(f"SYLFLOW_SEED: expected an integer, got {env!r}") from None
    return kind, seed


_ALLOWED_KEYS = {
    "problem",
    "flow",
    "partition",
    "groups",
    "graph",
    "inner_graphs",
    "K",
    "Ks",
    "integrator",
    "init",
}


def parse_config(cfg: dict, base_dir: str = ".") -> dict:
    """Validate a config mapping and return keyword arguments for simulate()."""
    if not isinstance(cfg, dict):
        raise ConfigError("config: expected a JSON object at the top level")
    unknown = sorted(set(cfg) - _ALLOWED_KEYS)
    if unknown:
        raise ConfigError(
            f"config: unknown field(s) {', '.join(unknown)}; "
            f"allowed: {', '.join(sorted(_ALLOWED_KEYS))}"
        )
    if "problem" not in cfg:
        raise ConfigError("config: missing required field 'problem'")
    problem = _parse_problem(cfg["problem"], base_dir)

    flow = cfg.get("flow", "cp")
    if flow not in FLOWS:
        raise ConfigError(f"flow: unknown flow {flow!r} (expected one of {FLOWS})")
    partition, groups = _parse_partition(cfg)

    K = _positive_number(cfg.get("K", 1.0), "K")
    Ks = None
    if "Ks" in cfg and cfg["Ks"] is not None:
        Ks = _positive_number(cfg["Ks"], "Ks")

    integ = cfg.get("integrator")
    if not isinstance(integ, dict) or "t_end" not in integ:
        raise ConfigError('integrator: expected an object with at least "t_end"')
    t_end = _positive_number(integ["t_end"], "integrator.t_end")
    dt = None
    if integ.get("dt") is not None:
        dt = _positive_number(integ["dt"], "integrator.dt")
    stride = integ.get("sample_stride", 1)
    if isinstance(stride, bool) or not isinstance(stride, int) or stride < 1:
        raise ConfigError("integrator.sample_stride: expected an integer >= 1")

    init_kind, seed = _parse_init(cfg)

    graph = None
    network = None
    if flow == "clustering":
        if "graph" not in cfg:
            raise ConfigError("graph: the clustering flow needs an outer graph")
        outer = _parse_graph(cfg["graph"], "graph")
        inner_specs = cfg.get("inner_graphs")
        if not isinstance(inner_specs, list) or not inner_specs:
            raise ConfigError("inner_graphs: the clustering flow needs one graph per cluster")
        inner = tuple(
            _parse_graph(spec, f"inner_graphs[{i}]") for i, spec in enumerate(inner_specs)
        )
        try:
            network = DoubleLayerNetwork(outer=outer, inner=inner)
        except SylflowError as exc:
            raise ConfigError(f"inner_graphs: {exc}") from exc
    else:
        if "graph" not in cfg:
            raise ConfigError(f"graph: the {flow} flow needs a communication graph")
        graph = _parse_graph(cfg["graph"], "graph")
        if "inner_graphs" in cfg:
            raise ConfigError("inner_graphs: only meaningful for the clustering flow")

    return {
        "problem": problem,
        "flow": flow,
        "partition": partition,
        "groups": groups,
        "graph": graph,
        "network": network,
        "K": K,
        "Ks": Ks,
        "dt": dt,
        "t_end": t_end,
        "sample_stride": stride,
        "init": init_kind,
        "seed": seed,
    }


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_csv(traj: Trajectory) -> str:
    """Render a trajectory as CSV text (17 significant digits, LF newlines)."""
    n_nodes = traj.e_node.shape[1]
    lines = [
        "t,e_total,consensus_residual,"
        + ",".join(f"e_node_{i}" for i in range(1, n_nodes + 1))
    ]
    for k in range(traj.times.shape[0]):
        cells = [_fmt(traj.times[k]), _fmt(traj.e_total[k]), _fmt(traj.consensus[k])]
        cells.extend(_fmt(v) for v in traj.e_node[k])
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _write_text(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _theoretical_rate(kw: dict) -> tuple[str, float | None]:
    """(label, value) of the spectral rate prediction for a configured run."""
    flow = kw["flow"]
    try:
        if flow == "clustering":
            ops = clustering_partition(kw["problem"])
            L_outer = laplacian(kw["network"].outer)
            inner_Ls = [laplacian(g) for g in kw["network"].inner]
            rep = clustering_rate(ops, kw["K"], L_outer, inner_Ls)
            return "r*(K)", rep.r_star
        partition = kw["partition"] or ("full-row-column" if flow == "augmented" else "bc-column")
        eqs = build_node_equations(kw["problem"], partition, kw["graph"], groups=kw["groups"])
        L = laplacian(kw["graph"])
        if flow == "cps":
            return "rate upper bound", rs_upper_bound(kw["K"], kw["Ks"], L)
        value, _ = r_of_K(eqs, L, kw["K"])
        return "r(K)", value
    except SylflowError:
        return "r(K)", None


def _summary(traj: Trajectory, kw: dict) -> str:
    meta = traj.meta
    e0, ef = float(traj.e_total[0]), float(traj.e_total[-1])
    if e0 > 1e-12:
        converged = ef <= _CONVERGENCE_THRESHOLD * e0
        ratio = f"{ef / e0:.6g}"
    else:
        converged = ef <= 1e-12
        ratio = "n/a (started at the reference)"
    rate = measured_rate(traj)
    label, r_th = _theoretical_rate(kw)
    lines = [
        f"case: {meta['case']}",
        f"flow: {meta['flow']}   partition: {meta['partition']}   "
        f"nodes: {traj.e_node.shape[1]}   backend: {kernel_backend()}",
        f"K: {meta['K']:g}   Ks: {'-' if meta['Ks'] is None else format(meta['Ks'], 'g')}   "
        f"dt: {meta['dt']:.6g}   t_end: {meta['t_end']:g}   samples: {traj.times.shape[0]}",
        f"reference: {meta['reference']}",
        f"initial e_total: {e0:.6g}",
        f"final e_total:   {ef:.6g}",
        f"final/initial:   {ratio}",
        f"converged below {_CONVERGENCE_THRESHOLD:g} of initial: {'yes' if converged else 'no'}",
        f"measured rate: {'n/a (error floor or too few samples)' if rate is None else format(rate, '.6g')}",
        f"theoretical {label}: {'n/a' if r_th is None else format(r_th, '.6g')}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    cfg = _load_json(args.config)
    kw = parse_config(cfg, base_dir=os.path.dirname(os.path.abspath(args.config)))
    sim_kw = {k: v for k, v in kw.items() if k not in ("problem", "flow")}
    traj = simulate(kw["problem"], flow=kw["flow"], **sim_kw)
    csv_text = trajectory_csv(traj)
    summary = _summary(traj, kw)
    if args.out is None:
        sys.stdout.write(csv_text)
        sys.stderr.write(summary)
    else:
        _write_text(csv_text, args.out)
        sys.stdout.write(summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# rate-sweep
# ---------------------------------------------------------------------------


def _parse_k_values(text: str) -> list:
    try:
        ks = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"--k-values: {exc}") from exc
    if not ks:
        raise ConfigError("--k-values: expected at least one gain")
    if any(not np.isfinite(k) or k <= 0 for k in ks):
        raise ConfigError("--k-values: gains must be positive and finite")
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise ConfigError("--k-values: gains must be strictly ascending")
    return ks


def rate_sweep_rows(kw: dict, k_values: list) -> list:
    """One (K, r_theory, r_measured, r0, lo, hi) tuple per gain; None = empty."""
    problem = kw["problem"]
    flow = kw["flow"]
    theory = {}
    r0 = None
    bounds = None
    if flow == "clustering":
        ops = clustering_partition(problem)
        L_outer = laplacian(kw["network"].outer)
        inner_Ls = [laplacian(g) for g in kw["network"].inner]
        for k in k_values:
            theory[k] = clustering_rate(ops, k, L_outer, inner_Ls).r_star
    else:
        partition = kw["partition"] or ("full-row-column" if flow == "augmented" else "bc-column")
        eqs = build_node_equations(problem, partition, kw["graph"], groups=kw["groups"])
        L = laplacian(kw["graph"])
        r0 = r0_limit(eqs)
        if flow == "cps":
            for k in k_values:
                theory[k] = None  # no sharp prediction; the bound goes in bound_upper
        else:
            for k in k_values:
                theory[k], _ = r_of_K(eqs, L, k)
        if partition in _BOUND_PARTITIONS:
            p_eff = (
                SylvesterProblem(problem.B.T, problem.A.T, problem.C.T)
                if partition == "ac-row"
                else problem
            )
            bounds = remark2_bounds(p_eff, eqs)

    def _run(k: float):
        sim_kw = {key: val for key, val in kw.items() if key not in ("problem", "flow")}
        sim_kw["K"] = k
        return simulate(problem, flow=flow, **sim_kw)

    with ThreadPoolExecutor(max_workers=min(4, len(k_values))) as pool:
        trajs = list(pool.map(_run, k_values))

    rows = []
    for k, traj in zip(k_values, trajs):
        measured = measured_rate(traj)
        if flow == "cps":
            lo, hi = None, rs_upper_bound(k, kw["Ks"], L)
        elif bounds is not None:
            lo, hi = bounds
        else:
            lo, hi = None, None
        rows.append((k, theory[k], measured, r0, lo, hi))
    return rows


def sweep_csv(rows: list) -> str:
    lines = ["K,r_theory,r_measured,r0,bound_lower,bound_upper"]
    for row in rows:
        lines.append(",".join("" if v is None else _fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def cmd_rate_sweep(args) -> int:
    cfg = _load_json(args.config)
    kw = parse_config(cfg, base_dir=os.path.dirname(os.path.abspath(args.config)))
    ks = _parse_k_values(args.k_values)
    rows = rate_sweep_rows(kw, ks)
    _write_text(sweep_csv(rows), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_example1() -> list:
    checks = []
    p = fixtures.example1_problem()
    g = fixtures.example1_graph()
    eqs = bc_column_partition(p)
    L = laplacian(g)
    gains = [1.0, 5.0, 10.0, 50.0, 100.0, 1e3, 1e4]
    rs = [r_of_K(eqs, L, k)[0] for k in gains]
    r0 = r0_limit(eqs)
    mono = all(b >= a - 1e-9 for a, b in zip(rs, rs[1:]))
    checks.append(("rate-monotone", mono, f"r over K={gains}: {['%.6g' % r for r in rs]}"))
    checks.append(("rate-bounded", max(rs) <= 1.0 + 1e-9, f"max r = {max(rs):.6g} <= 1"))
    checks.append(
        ("rate-limit", rs[-1] >= 0.98 * r0, f"r(K=1e4) = {rs[-1]:.6g} vs r0 = {r0:.6g}")
    )
    lo_hi = remark2_bounds(p, eqs)
    ok = lo_hi is not None and lo_hi[0] <= r0 + 1e-9 and r0 <= lo_hi[1] + 1e-9
    detail = "inapplicable" if lo_hi is None else f"{lo_hi[0]:.6g} <= {r0:.6g} <= {lo_hi[1]:.6g}"
    checks.append(("rate-sandwich", ok, detail))
    traj = simulate(p, "cp", graph=g, K=1.0, dt=0.05, t_end=3000.0, sample_stride=20)
    e0, ef = float(traj.e_total[0]), float(traj.e_total[-1])
    m = measured_rate(traj)
    checks.append(
        (
            "exp-decay",
            ef <= 0.05 * e0 and m is not None,
            f"e(0)={e0:.6g} -> e({traj.times[-1]:g})={ef:.6g}, measured rate "
            f"{'n/a' if m is None else format(m, '.6g')}",
        )
    )
    return checks


def _verify_example2() -> list:
    checks = []
    for tag, p in zip(("set1", "set2"), fixtures.example2_problems()):
        sol = direct_solve(p)
        c_norm = float(np.linalg.norm(vec(p.C)))
        ok = sol.case is Case.I and sol.residual <= 1e-8 * (1.0 + c_norm)
        checks.append(
            (f"{tag}-unique", ok, f"case={sol.case.value}, residual={sol.residual:.3g}")
        )
        pt = SylvesterProblem(p.B.T, p.A.T, p.C.T)
        sol_t = direct_solve(pt)
        gap = float(np.linalg.norm(sol.X_star - sol_t.X_star.T))
        ok = gap <= 1e-8 * (1.0 + float(np.linalg.norm(sol.X_star)))
        checks.append((f"{tag}-transpose-match", ok, f"||X - (X')^T|| = {gap:.3g}"))
        eqs = bc_column_partition(p)
        limit = flow_limit(eqs, np.zeros((len(eqs), eqs[0].unknown_dim)))
        gap = float(np.linalg.norm(limit - vec(sol.X_star)))
        checks.append(
            (f"{tag}-limit-formula", gap <= 1e-6, f"||limit - vec(X*)|| = {gap:.3g}")
        )
    return checks


def _verify_example3() -> list:
    p = fixtures.example1_problem()
    t5 = simulate(
        p, "cp", partition="bc-column", graph=make_cycle(5), K=1.0, dt=0.05,
        t_end=1000.0, sample_stride=10,
    )
    t25 = simulate(
        p, "cp", partition="high-res", graph=make_cycle(25), K=1.0, dt=0.05,
        t_end=1000.0, sample_stride=10,
    )
    m5, m25 = measured_rate(t5), measured_rate(t25)
    ok = m5 is not None and m25 is not None and m5 > m25
    detail = (
        f"5-node rate {'n/a' if m5 is None else format(m5, '.6g')} vs "
        f"25-node rate {'n/a' if m25 is None else format(m25, '.6g')}"
    )
    return [("resolution-ordering", ok, detail)]


def _verify_example4() -> list:
    checks = []
    p = fixtures.example4_problem()
    g = fixtures.example4_graph()
    traj = simulate(
        p, "augmented", graph=g, K=10.0, dt=0.04, t_end=4000.0, sample_stride=25
    )
    A = p.A
    n = p.n
    blocks = [unvec(row[: n * n], n, n) for row in traj.final_state.node_states]
    pair_gap = max(
        float(np.linalg.norm(X - Y)) for X in blocks for Y in blocks
    )
    checks.append(("block-agreement", pair_gap <= 1e-5, f"max pairwise gap {pair_gap:.3g}"))
    res = max(float(np.linalg.norm(A @ X + X @ A.T + np.eye(n))) for X in blocks)
    checks.append(("equation-residual", res <= 1e-5, f"max residual {res:.3g}"))
    X_bar = sum(blocks) / len(blocks)
    gap = float(np.abs(X_bar - fixtures.example4_P_star()).max())
    checks.append(("printed-solution", gap <= 2e-3, f"max entry gap {gap:.3g}"))
    checks.append(("positive-definite", positive_definite_check(X_bar), "smallest eigenvalue > 0"))
    return checks


def _verify_example5() -> list:
    checks = []
    p = fixtures.example1_problem()
    net = fixtures.example5_network()
    ops = clustering_partition(p)
    L_outer = laplacian(net.outer)
    inner_Ls = [laplacian(g) for g in net.inner]
    reports = [clustering_rate(ops, k, L_outer, inner_Ls) for k in (1.0, 10.0, 100.0)]
    rs = [rep.r_star for rep in reports]
    mono = all(b >= a - 1e-9 for a, b in zip(rs, rs[1:]))
    checks.append(("cluster-rate-monotone", mono, f"r* over K=(1,10,100): {['%.6g' % r for r in rs]}"))
    rep = reports[-1]
    checks.append(
        (
            "rank-bound",
            rep.rank_G == rep.rank_bound,
            f"rank(G) = {rep.rank_G}, bound = {rep.rank_bound}",
        )
    )
    checks.append(
        (
            "spectrum-stability",
            rep.min_real_part >= -1e-8,
            f"min Re(eig G) = {rep.min_real_part:.3g}",
        )
    )
    traj = simulate(
        p, "clustering", network=net, K=100.0, dt=0.0016, t_end=3200.0, sample_stride=200
    )
    ef = float(traj.e_total[-1])
    checks.append(("cluster-convergence", ef <= 1e-6, f"final e_total = {ef:.3g}"))
    return checks


_VERIFIERS = {
    "example1": _verify_example1,
    "example2": _verify_example2,
    "example3": _verify_example3,
    "example4": _verify_example4,
    "example5": _verify_example5,
}


def cmd_verify(args) -> int:
    name = args.fixture
    if name not in _VERIFIERS:
        sys.stderr.write(
            f"unknown fixture {name!r} (choose from {', '.join(fixtures.FIXTURE_NAMES)})\n"
        )
        return EXIT_CONFIG
    checks = _VERIFIERS[name]()
    lines = []
    failed = [c for c in checks if not c[1]]
    for check_name, ok, detail in checks:
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}/{check_name}: {detail}")
    lines.append(
        f"{name}: {'PASS' if not failed else 'FAIL (' + ', '.join(c[0] for c in failed) + ')'}"
    )
    _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="sylflow",
        description="Distributed network flows for Sylvester matrix equations.",
    )
    sub = parser.add_subparsers(dest="command", metavar="{solve,rate-sweep,verify}")

    p_solve = sub.add_parser("solve", help="integrate one configured flow, emit trajectory CSV")
    p_solve.add_argument("--config", required=True, help="JSON experiment config")
    p_solve.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("rate-sweep", help="run the config once per gain, emit rate CSV")
    p_sweep.add_argument("--config", required=True, help="JSON experiment config")
    p_sweep.add_argument(
        "--k-values", required=True, help="comma-separated ascending positive gains, e.g. 1,10,100"
    )
    p_sweep.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p_sweep.set_defaults(func=cmd_rate_sweep)

    p_verify = sub.add_parser("verify", help="run a built-in fixture and assert its checks")
    p_verify.add_argument(
        "--fixture", required=True, help=f"one of: {', '.join(fixtures.FIXTURE_NAMES)}"
    )
    p_verify.add_argument("--out", default=None, help="report output path (default stdout)")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_usage(sys.stderr)
            sys.stderr.write("error: a subcommand is required\n")
            return EXIT_CONFIG
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_CONFIG
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except FlowDivergenceError as exc:
        sys.stderr.write(f"divergence: {exc}\n")
        return EXIT_DIVERGED
    except UnsolvableError as exc:
        sys.stderr.write(f"unsolvable: {exc}\n")
        return EXIT_UNSOLVABLE
    except SylflowError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
