"""Command-line front end: run trajectories, beta sweeps, the GHZ
entanglement benchmark, and MPS-vs-dense oracle checks.

Exit codes: 0 success, 1 failed check, 2 config/size error, 3 divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config
from .errors import ConfigError, DivergenceError
from .linalg import matrix_exponential
from .model import SIGMA_Z, SimilarityGenerator
from .mps import ghz_mps, seff_from_entropies
from .oracle import dense_hamiltonian, ghz_seff_closed_form, partial_trace_site, propagate_exact
from .trotter import TrajectoryRecord, initial_state, recover_density, run
from . import model

__all__ = ["main"]

RUN_COLUMNS = (
    "t",
    "norm_factor",
    "sz_fict",
    "sz_recovered",
    "re_rho01_recovered",
    "seff",
    "max_bond",
    "discarded_weight",
)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12e}"


def _write_csv(path: Path, header: tuple[str, ...], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _record_rows(rec: TrajectoryRecord):
    for i in range(rec.n_rows):
        yield (
            rec.t[i],
            rec.norm_factor[i],
            rec.sz_fict[i],
            rec.sz_recovered[i],
            rec.re_rho01_recovered[i],
            rec.seff[i],
            int(rec.max_bond[i]),
            rec.discarded_weight[i],
        )


def write_trajectory_csv(path: Path, rec: TrajectoryRecord) -> None:
    _write_csv(path, RUN_COLUMNS, _record_rows(rec))


def _out_prefix(args, cfg: RunConfig) -> Path:
    if args.out:
        return Path(args.out)
    if cfg.output_prefix:
        return Path(cfg.output_prefix)
    return Path(args.config).with_suffix("")


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    rec = run(cfg.model, cfg.generator, cfg.evolution)
    out = Path(f"{_out_prefix(args, cfg)}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(out, rec)
    print(f"wrote {out}")
    return 0


def _sweep_one(payload) -> TrajectoryRecord:
    cfg, beta = payload
    gen = replace(cfg.generator, beta=beta)
    return run(cfg.model, gen, cfg.evolution)


def _cmd_sweep_beta(args) -> int:
    cfg = load_config(args.config)
    if not cfg.sweep_betas:
        raise ConfigError("sweep-beta needs a [sweep] section with a betas list")
    prefix = _out_prefix(args, cfg)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    betas = cfg.sweep_betas
    payloads = [(cfg, b) for b in betas]
    results = []
    outcomes = []
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = [pool.submit(_sweep_one, p) for p in payloads]
            for (_, b), fut in zip(payloads, futures):
                try:
                    outcomes.append((b, fut.result(), None))
                except DivergenceError as exc:
                    outcomes.append((b, None, exc))
    else:
        for _, b in payloads:
            try:
                outcomes.append((b, _sweep_one((cfg, b)), None))
            except DivergenceError as exc:
                outcomes.append((b, None, exc))
    failed = False
    for beta, rec, exc in outcomes:
        entry = {"beta": beta}
        if rec is None:
            failed = True
            entry["status"] = "diverged"
            entry["error"] = str(exc)
            entry["step"] = exc.step
        else:
            csv_path = Path(f"{prefix}_beta_{beta:g}.csv")
            write_trajectory_csv(csv_path, rec)
            entry["status"] = "ok"
            entry["csv"] = csv_path.name
            entry["final_seff"] = float(rec.seff[-1])
            entry["final_sz_fict"] = float(rec.sz_fict[-1])
            entry["max_bond"] = int(rec.max_bond.max())
        results.append(entry)
    summary = {"betas": list(betas), "results": results}
    summary_path = Path(f"{prefix}_summary.json")
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"wrote {summary_path}")
    return 3 if failed else 0


def _cmd_ghz_bench(args) -> int:
    n = args.n_spins
    if n < 3:
        raise ConfigError(f"ghz-bench needs at least 3 spins, got {n}")
    gate = matrix_exponential(args.beta * SIGMA_Z)
    rows = []
    for k in range(n + 1):
        state = ghz_mps(n)
        for site in range(k):
            state.apply_single_site_gate(site, gate)
        state.canonicalize()
        seff = seff_from_entropies(state.bond_entropies().entropies)
        rows.append((k, seff, ghz_seff_closed_form(n, k, args.beta)))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(out, ("k", "seff_mps", "seff_closed_form"), rows)
    print(f"wrote {out}")
    return 0


def _cmd_oracle_check(args) -> int:
    cfg = load_config(args.config)
    bath = model.bath_from_config(cfg.model)
    instance = dense_hamiltonian(cfg.model, bath, cfg.generator)
    rec = run(cfg.model, cfg.generator, cfg.evolution)

    terms = model.build_star_terms(cfg.model, bath, cfg.generator)
    psi0 = initial_state(terms, cfg.generator).to_statevector()
    states, _ = propagate_exact(instance, psi0, rec.t)

    rows = []
    max_dev = 0.0
    for i in range(rec.n_rows):
        rho_f = partial_trace_site(states[i], list(instance.dims), 0)
        rho = recover_density(rho_f, cfg.generator)
        sz_dense = float(np.trace(SIGMA_Z @ rho).real)
        dev = abs(rec.sz_recovered[i] - sz_dense)
        max_dev = max(max_dev, dev)
        rows.append((rec.t[i], rec.sz_recovered[i], sz_dense, dev))
    out = _out_prefix(args, cfg)
    out.parent.mkdir(parents=True, exist_ok=True)
    csv_path = Path(f"{out}_oracle.csv")
    _write_csv(csv_path, ("t", "sz_recovered_mps", "sz_recovered_dense", "abs_dev"), rows)
    status = "PASS" if max_dev <= args.tolerance else "FAIL"
    print(f"{status}: max |sz_mps - sz_dense| = {max_dev:.3e} (tolerance {args.tolerance:g})")
    return 0 if max_dev <= args.tolerance else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="startebd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evolve one trajectory and write its CSV")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", help="output path prefix (default: config path stem)")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep-beta", help="run every beta in [sweep].betas")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", help="output path prefix")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel trajectories")
    p_sweep.set_defaults(func=_cmd_sweep_beta)

    p_ghz = sub.add_parser("ghz-bench", help="GHZ entanglement benchmark vs closed form")
    p_ghz.add_argument("--n-spins", type=int, default=10)
    p_ghz.add_argument("--beta", type=float, default=0.1)
    p_ghz.add_argument("--out", default="ghz_bench.csv")
    p_ghz.set_defaults(func=_cmd_ghz_bench)

    p_oracle = sub.add_parser("oracle-check", help="compare the MPS engine to dense propagation")
    p_oracle.add_argument("--config", required=True)
    p_oracle.add_argument("--out", help="output path prefix")
    p_oracle.add_argument("--tolerance", type=float, default=1e-3)
    p_oracle.set_defaults(func=_cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
