"""Command-line front end.

    codesign solve|flow|equilibria|simulate|verify --problem <file.json> --out <dir>
             [--seed N] [--starts N]

Problem files are JSON with a dense system matrix ("A": [[...]]) or a named
generator ({"generator": "diag", "eigenvalues": [...]} or
{"generator": "laplacian", "n": N, "edges": [[i, j, w], ...]} which builds
A = -L from nonnegative undirected edge weights), gains "epsilon"/"delta",
and optional "placement" ({"b": [...], "c": [...]}, normalized on load),
"flow" options, "sim" config, "seed", and "n_starts".

Reports are JSON with floats printed to 17 significant digits (lossless
round-trip); flow traces are CSV with the fixed column schema
iter,phi,grad_norm,step,b0..b{n-1},c0..c{n-1}. Exit codes: 0 ok, 1 usage,
2 parse, 3 solver (or failed verification), 4 all starts failed,
5 dimension cap, 6 simulation divergence. CODESIGN_THREADS caps multi-start
parallelism (0 = sequential).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg as sla

from .cost import (
    cost_report,
    drive_matrices,
    phi,
    phi_bar,
    phi_gain_sensitivity,
)
from .equilibria import (
    KIND_COMMON,
    STABLE,
    EquilibriumCandidate,
    Spectrum,
    analytic_gains_at_v1,
    analytic_minimum,
    classify_candidates,
    classify_stability,
    enumerate_equilibria_zero,
    is_equilibrium,
)
from .errors import (
    AllStartsFailed,
    CodesignError,
    DimensionTooLarge,
    NotAnEquilibrium,
    ProblemFormatError,
    SimulationDiverged,
)
from .flow import FlowOptions, FlowTrace, default_workers, multi_start, random_placement
from .numdiff import richardson_derivative
from .plant import Placement, Plant
from .riccati import adjoint_pair, gain_pair, pbh_check
from .simulate import SimConfig, estimate_eta

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SOLVER = 3
EXIT_ALL_STARTS_FAILED = 4
EXIT_DIMENSION = 5
EXIT_DIVERGED = 6


# ---------------------------------------------------------------------------
# JSON emission with 17-significant-digit floats


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return "%.17g" % x


def dumps(obj, indent: int = 0) -> str:
    """Serialize nested dict/list/scalar data with %.17g floats."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 2)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{dumps(v, indent + 2)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, complex):
        return dumps({"re": obj.real, "im": obj.imag}, indent)
    return json.dumps(obj)


def _write_report(out_dir: Path, name: str, report: dict) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(dumps(report) + "\n")
    return path


# ---------------------------------------------------------------------------
# Problem files


@dataclass
class Problem:
    plant: Plant
    placement: Placement | None
    flow_options: FlowOptions
    sim_config_raw: dict
    seed: int
    n_starts: int


def _build_matrix(entry) -> np.ndarray:
    if isinstance(entry, list):
        return np.asarray(entry, dtype=float)
    if not isinstance(entry, dict):
        raise ProblemFormatError("'A' must be a matrix or a generator object")
    kind = entry.get("generator")
    if kind == "diag":
        eigenvalues = entry.get("eigenvalues")
        if not isinstance(eigenvalues, list) or not eigenvalues:
            raise ProblemFormatError("diag generator needs a nonempty 'eigenvalues' list")
        return np.diag(np.asarray(eigenvalues, dtype=float))
    if kind == "laplacian":
        n = entry.get("n")
        edges = entry.get("edges")
        if not isinstance(n, int) or n < 1:
            raise ProblemFormatError("laplacian generator needs an integer 'n' >= 1")
        if not isinstance(edges, list):
            raise ProblemFormatError("laplacian generator needs an 'edges' list")
        weights = np.zeros((n, n))
        for edge in edges:
            if len(edge) != 3:
                raise ProblemFormatError(f"edge {edge!r} is not [i, j, w]")
            i, j, w = int(edge[0]), int(edge[1]), float(edge[2])
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise ProblemFormatError(f"edge {edge!r} has invalid endpoints")
            if w < 0.0:
                raise ProblemFormatError(f"edge {edge!r} has a negative weight")
            weights[i, j] += w
            weights[j, i] += w
        laplacian = np.diag(weights.sum(axis=1)) - weights
        return -laplacian
    raise ProblemFormatError(f"unknown generator {kind!r}")


def load_problem(path: Path) -> Problem:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ProblemFormatError("problem file must hold a JSON object")
    if "A" not in raw:
        raise ProblemFormatError("problem file is missing 'A'")
    try:
        A = _build_matrix(raw["A"])
        plant = Plant(A, float(raw.get("epsilon", 0.0)), float(raw.get("delta", 0.0)))
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"invalid plant: {exc}") from exc

    placement = None
    if "placement" in raw:
        spot = raw["placement"]
        if not isinstance(spot, dict) or "b" not in spot or "c" not in spot:
            raise ProblemFormatError("'placement' must hold vectors 'b' and 'c'")
        try:
            placement = Placement.normalized(
                np.asarray(spot["b"], dtype=float), np.asarray(spot["c"], dtype=float)
            )
        except (TypeError, ValueError) as exc:
            raise ProblemFormatError(f"invalid placement: {exc}") from exc
        if placement.n != plant.n:
            raise ProblemFormatError("placement dimension does not match A")

    flow_raw = raw.get("flow", {})
    if not isinstance(flow_raw, dict):
        raise ProblemFormatError("'flow' must be an object")
    try:
        flow_options = FlowOptions(
            step_init=float(flow_raw.get("step_init", 1.0)),
            step_min=float(flow_raw.get("step_min", 1e-14)),
            grad_tol=float(flow_raw.get("grad_tol", 1e-9)),
            max_iters=int(flow_raw.get("max_iters", 100_000)),
            rescaled=bool(flow_raw.get("rescaled", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"invalid flow options: {exc}") from exc

    sim_raw = raw.get("sim", {})
    if not isinstance(sim_raw, dict):
        raise ProblemFormatError("'sim' must be an object")

    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ProblemFormatError("'seed' must be a nonnegative integer")
    n_starts = raw.get("n_starts", 8)
    if not isinstance(n_starts, int):
        raise ProblemFormatError("'n_starts' must be an integer")
    return Problem(
        plant=plant,
        placement=placement,
        flow_options=flow_options,
        sim_config_raw=dict(sim_raw),
        seed=seed,
        n_starts=n_starts,
    )


def _sim_config(problem: Problem) -> SimConfig:
    raw = problem.sim_config_raw
    try:
        return SimConfig(
            dt=float(raw.get("dt", 1e-3)),
            horizon_T=float(raw.get("horizon_T", 100.0)),
            n_paths=int(raw.get("n_paths", 32)),
            burn_in=float(raw.get("burn_in", 10.0)),
            seed=int(raw.get("seed", problem.seed)),
        )
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"invalid sim config: {exc}") from exc


def _require_placement(problem: Problem) -> Placement:
    if problem.placement is None:
        raise ProblemFormatError("this command requires a 'placement' in the problem file")
    return problem.placement


# ---------------------------------------------------------------------------
# Commands


def _pbh_report_dict(plant: Plant, placement: Placement) -> dict:
    out = {}
    for mode, vector in (
        ("stabilizability", placement.b_unit),
        ("detectability", placement.c_unit),
    ):
        rep = pbh_check(plant.A, vector, mode)
        out[mode] = {
            "ok": rep.ok,
            "min_margin": rep.min_margin,
            "tested": [
                {"eigenvalue_re": lam.real, "eigenvalue_im": lam.imag, "margin": margin}
                for lam, margin in rep.tested
            ],
        }
    return out


def cmd_solve(problem: Problem, args) -> dict:
    plant = problem.plant
    placement = _require_placement(problem)
    report = cost_report(plant, placement)
    return {
        "n": plant.n,
        "epsilon": plant.epsilon,
        "delta": plant.delta,
        "placement": {"b": placement.b_unit, "c": placement.c_unit},
        "phi": report.phi,
        "phi_bar": report.phi_bar,
        "K": report.gains.K,
        "Sigma": report.gains.Sigma,
        "M": report.adjoints.M,
        "N": report.adjoints.N,
        "residuals": {
            "K": report.gains.residual_K,
            "Sigma": report.gains.residual_Sigma,
        },
        "pbh": _pbh_report_dict(plant, placement),
    }


def _trace_csv_lines(trace: FlowTrace, n: int) -> list[str]:
    header = (
        ["iter", "phi", "grad_norm", "step"]
        + [f"b{i}" for i in range(n)]
        + [f"c{i}" for i in range(n)]
    )
    lines = [",".join(header)]
    for k, it in enumerate(trace.iterates):
        row = (
            [str(k), "%.17g" % it.phi, "%.17g" % it.grad_norm, "%.17g" % it.step]
            + ["%.17g" % x for x in it.placement.b_unit]
            + ["%.17g" % x for x in it.placement.c_unit]
        )
        lines.append(",".join(row))
    return lines


def _classify_or_none(plant: Plant, placement: Placement) -> dict:
    try:
        eigs, verdict = classify_stability(plant, placement, eq_tol=1e-6)
    except (NotAnEquilibrium, CodesignError) as exc:
        return {"stability": None, "note": str(exc)}
    return {"stability": verdict, "hessian_eigs": list(eigs)}


def cmd_flow(problem: Problem, args) -> dict:
    plant = problem.plant
    opts = problem.flow_options
    result = multi_start(
        plant,
        problem.n_starts,
        problem.seed,
        opts,
        max_workers=default_workers(),
    )
    best = result.best
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "flow_trace.csv").write_text(
        "\n".join(_trace_csv_lines(best, plant.n)) + "\n"
    )
    eq_flag, eq_res = is_equilibrium(plant, best.final, 10.0 * opts.grad_tol)
    summary = {
        "seed": problem.seed,
        "n_starts": problem.n_starts,
        "best": {
            "placement": {"b": best.final.b_unit, "c": best.final.c_unit},
            "phi": best.iterates[-1].phi,
            "status": best.status,
            "iterations": len(best.iterates) - 1,
            "grad_norm": best.iterates[-1].grad_norm,
            "equilibrium": {
                "within_10x_grad_tol": eq_flag,
                "residuals": list(eq_res),
            },
            **_classify_or_none(plant, best.final),
        },
        "starts": [
            {
                "status": tr.status,
                "phi": tr.iterates[-1].phi if tr.iterates else None,
                "iterations": max(len(tr.iterates) - 1, 0),
            }
            for tr in result.all
        ],
    }
    return summary


def cmd_equilibria(problem: Problem, args) -> dict:
    plant = problem.plant
    spectrum = Spectrum.from_matrix(plant.A)
    lam1 = spectrum.Lambda[0]
    candidates_out = []
    if lam1 < -1e-10:
        candidates = enumerate_equilibria_zero(spectrum)
        candidates = classify_candidates(spectrum, candidates)
        regime = "negative_definite_zero_gain"
    else:
        # Negative semidefinite spectrum (e.g. Laplacian): the zero-gain
        # enumeration is unavailable, but the cost-minimizing placement is
        # still the top-eigenvector pair; classify it at the problem's gains.
        if plant.epsilon <= 0.0 or plant.delta <= 0.0:
            raise ProblemFormatError(
                "semidefinite spectra need positive epsilon and delta"
            )
        v1 = spectrum.eigenvector(0)
        placement = Placement(v1, v1.copy())
        eigs, verdict = classify_stability(plant, placement)
        candidates = [
            EquilibriumCandidate(
                placement=placement,
                kind=KIND_COMMON,
                support=(0,),
                sign_s=(1,) + (0,) * (plant.n - 1),
                xi=None,
                hessian_eigs=tuple(float(e) for e in eigs),
                stability=verdict,
            )
        ]
        regime = "negative_semidefinite_v1_only"
    for cand in candidates:
        candidates_out.append(
            {
                "kind": cand.kind,
                "support": list(cand.support),
                "sign_s": list(cand.sign_s),
                "xi": None if cand.xi is None else list(cand.xi),
                "placement": {
                    "b": cand.placement.b_unit,
                    "c": cand.placement.c_unit,
                },
                "stability": cand.stability,
                "hessian_eigs": None
                if cand.hessian_eigs is None
                else list(cand.hessian_eigs),
            }
        )
    stable_idx = [i for i, c in enumerate(candidates) if c.stability == STABLE]
    report = {
        "regime": regime,
        "eigenvalues": spectrum.Lambda,
        "n_candidates": len(candidates),
        "stable_indices": stable_idx,
        "candidates": candidates_out,
    }
    try:
        report["analytic_minimum"] = analytic_minimum(
            spectrum, plant.epsilon, plant.delta
        )
    except (CodesignError, ValueError):
        report["analytic_minimum"] = None
    return report


def cmd_simulate(problem: Problem, args) -> dict:
    plant = problem.plant
    placement = _require_placement(problem)
    cfg = _sim_config(problem)
    result = estimate_eta(plant, placement, cfg)
    z_score = (
        (result.eta_hat - result.phi_reference) / result.stderr
        if result.stderr and not math.isnan(result.stderr)
        else None
    )
    return {
        "config": {
            "dt": cfg.dt,
            "horizon_T": cfg.horizon_T,
            "n_paths": cfg.n_paths,
            "burn_in": cfg.burn_in,
            "seed": cfg.seed,
        },
        "eta_hat": result.eta_hat,
        "stderr": result.stderr,
        "phi_reference": result.phi_reference,
        "z_score": z_score,
        "per_path": result.per_path,
        "flags": list(result.flags),
    }


def _verify_gradient_vs_fd(plant: Plant, seed: int, flip_sign: bool) -> dict:
    rng = np.random.default_rng(seed)
    rescaled = plant.epsilon * plant.delta < 1e-12
    worst = 0.0
    for _ in range(3):
        placement = random_placement(plant.n, rng)
        if not (
            pbh_check(plant.A, placement.b_unit, "stabilizability").ok
            and pbh_check(plant.A, placement.c_unit, "detectability").ok
        ):
            continue
        report = cost_report(plant, placement)
        S_b, S_c = drive_matrices(report.gains, report.adjoints)
        B, C = placement.B, placement.C
        comm_b = B @ S_b - S_b @ B
        comm_c = C @ S_c - S_c @ C
        for _ in range(4):
            W_b = rng.standard_normal((plant.n, plant.n))
            W_b = 0.5 * (W_b - W_b.T)
            W_c = rng.standard_normal((plant.n, plant.n))
            W_c = 0.5 * (W_c - W_c.T)
            pairing = float(np.trace(comm_b @ W_b) + np.trace(comm_c @ W_c))
            if not rescaled:
                pairing *= plant.epsilon * plant.delta
            if flip_sign:
                pairing = -pairing

            def value(t: float) -> float:
                rotated = Placement.normalized(
                    sla.expm(-t * W_b) @ placement.b_unit,
                    sla.expm(-t * W_c) @ placement.c_unit,
                )
                if rescaled:
                    return phi_bar(plant, rotated)
                return phi(plant, rotated)

            # Step 1e-2: large enough to dominate solver-level noise in the
            # cost (the derivative scale carries eps*delta), Richardson keeps
            # truncation at O(h^4).
            fd = richardson_derivative(value, 1e-2)
            err = abs(pairing - fd) / max(abs(pairing), abs(fd), 1e-10)
            worst = max(worst, err)
    return {
        "name": "gradient_vs_fd",
        "passed": bool(worst < 1e-5),
        "max_relative_error": worst,
    }


def _verify_gain_monotonicity(plant: Plant, seed: int) -> dict:
    rng = np.random.default_rng(seed + 1)
    worst_sign = -np.inf
    worst_fd = 0.0
    base_eps = max(plant.epsilon, 0.05)
    base_delta = max(plant.delta, 0.05)
    for _ in range(6):
        placement = random_placement(plant.n, rng)
        if not (
            pbh_check(plant.A, placement.b_unit, "stabilizability").ok
            and pbh_check(plant.A, placement.c_unit, "detectability").ok
        ):
            continue
        r = base_eps * rng.uniform(0.5, 2.0)
        s = base_delta * rng.uniform(0.5, 2.0)
        sampled = Plant(plant.A, r, s)
        dr, ds = phi_gain_sensitivity(sampled, placement)
        worst_sign = max(worst_sign, dr, ds)
        # Steps sized against noise, capped so the gain stays positive.
        h_r = min(1e-2 * (1.0 + r), 0.4 * r)
        h_s = min(1e-2 * (1.0 + s), 0.4 * s)
        fd_r = richardson_derivative(
            lambda h: phi(Plant(plant.A, r + h, s), placement), h_r
        )
        fd_s = richardson_derivative(
            lambda h: phi(Plant(plant.A, r, s + h), placement), h_s
        )
        scale = max(abs(dr), abs(ds), 1e-10)
        worst_fd = max(worst_fd, abs(dr - fd_r) / scale, abs(ds - fd_s) / scale)
    return {
        "name": "gain_monotonicity",
        "passed": bool(worst_sign <= 1e-10 and worst_fd < 1e-6),
        "max_partial": worst_sign,
        "max_fd_relative_error": worst_fd,
    }


def _verify_phi_bar_sign(plant: Plant, seed: int) -> dict:
    rng = np.random.default_rng(seed + 2)
    worst = -np.inf
    for _ in range(20):
        placement = random_placement(plant.n, rng)
        if not (
            pbh_check(plant.A, placement.b_unit, "stabilizability").ok
            and pbh_check(plant.A, placement.c_unit, "detectability").ok
        ):
            continue
        worst = max(worst, phi_bar(plant, placement))
    return {
        "name": "phi_bar_nonpositive",
        "passed": bool(worst <= 1e-10),
        "max_phi_bar": worst,
    }


def _verify_analytic_gains(plant: Plant) -> dict:
    A = plant.A
    if sla.norm(A - A.T, "fro") > 1e-10 * (1.0 + sla.norm(A, "fro")):
        return {"name": "analytic_gains_match", "passed": True, "skipped": "A not symmetric"}
    spectrum = Spectrum.from_matrix(A)
    lam = spectrum.Lambda
    if lam[0] > 0 or (lam.size > 1 and np.min(-np.diff(lam)) < 1e-8):
        return {
            "name": "analytic_gains_match",
            "passed": True,
            "skipped": "spectrum not negative with distinct eigenvalues",
        }
    if lam[0] == 0.0 and (plant.epsilon <= 0 or plant.delta <= 0):
        return {"name": "analytic_gains_match", "passed": True, "skipped": "zero mode at zero gain"}
    v1 = spectrum.eigenvector(0)
    placement = Placement(v1, v1.copy())
    gains = gain_pair(plant, placement)
    adjoints = adjoint_pair(plant, placement, gains)
    K_d, S_d, M_d, N_d = analytic_gains_at_v1(spectrum, plant.epsilon, plant.delta)
    Theta = spectrum.Theta
    err = max(
        float(np.max(np.abs(Theta.T @ gains.K @ Theta - np.diag(K_d)))),
        float(np.max(np.abs(Theta.T @ gains.Sigma @ Theta - np.diag(S_d)))),
        float(np.max(np.abs(Theta.T @ adjoints.M @ Theta - np.diag(M_d)))),
        float(np.max(np.abs(Theta.T @ adjoints.N @ Theta - np.diag(N_d)))),
    )
    return {
        "name": "analytic_gains_match",
        "passed": bool(err < 1e-9),
        "max_abs_error": err,
    }


def cmd_verify(problem: Problem, args) -> dict:
    plant = problem.plant
    flip = bool(getattr(args, "inject_wrong_sign_gradient", False))
    checks = [
        _verify_gradient_vs_fd(plant, problem.seed, flip),
        _verify_gain_monotonicity(plant, problem.seed),
        _verify_phi_bar_sign(plant, problem.seed),
        _verify_analytic_gains(plant),
    ]
    all_passed = all(c["passed"] for c in checks)
    return {"checks": checks, "all_passed": all_passed}


# ---------------------------------------------------------------------------
# Entry point


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D102 - argparse hook
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="codesign", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("solve", "flow", "equilibria", "simulate", "verify"):
        p = sub.add_parser(name)
        p.add_argument("--problem", required=True, type=Path)
        p.add_argument("--out", required=True, type=Path)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--starts", type=int, default=None)
        if name == "verify":
            p.add_argument(
                "--inject-wrong-sign-gradient",
                action="store_true",
                help=argparse.SUPPRESS,
            )
    return parser


_COMMANDS = {
    "solve": cmd_solve,
    "flow": cmd_flow,
    "equilibria": cmd_equilibria,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        problem = load_problem(args.problem)
    except (OSError, ProblemFormatError) as exc:
        print(f"problem error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    if args.seed is not None:
        if args.seed < 0:
            print("usage error: --seed must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
        problem.seed = args.seed
    if args.starts is not None:
        problem.n_starts = args.starts
    if args.command == "flow" and problem.n_starts < 1:
        print("usage error: need at least one start", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "simulate":
        if int(problem.sim_config_raw.get("n_paths", 32)) < 1:
            print("usage error: need at least one simulation path", file=sys.stderr)
            return EXIT_USAGE

    try:
        report = _COMMANDS[args.command](problem, args)
    except ProblemFormatError as exc:
        print(f"problem error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except AllStartsFailed as exc:
        print(f"flow error: {exc}", file=sys.stderr)
        return EXIT_ALL_STARTS_FAILED
    except DimensionTooLarge as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except SimulationDiverged as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (CodesignError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    path = _write_report(Path(args.out), f"{args.command}.json", report)
    print(f"wrote {path}")
    if args.command == "solve":
        print(f"phi = {report['phi']!r}, phi_bar = {report['phi_bar']!r}")
    elif args.command == "flow":
        print(
            f"best phi = {report['best']['phi']!r} ({report['best']['status']}, "
            f"{report['best']['iterations']} iterations)"
        )
    elif args.command == "equilibria":
        print(
            f"{report['n_candidates']} candidates, "
            f"stable: {report['stable_indices']}"
        )
    elif args.command == "simulate":
        print(
            f"eta_hat = {report['eta_hat']!r} +/- {report['stderr']!r} "
            f"(phi = {report['phi_reference']!r})"
        )
    elif args.command == "verify":
        for check in report["checks"]:
            status = "PASS" if check["passed"] else "FAIL"
            print(f"[{status}] {check['name']}")
        if not report["all_passed"]:
            return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
