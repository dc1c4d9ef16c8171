"""Command-line front end: plot-ready tables, worked examples and fuzz campaigns.

Every command emits a plot-ready table (CSV or JSON). Rows carry the
provenance columns ``t, T, seed, tol, version``; identical arguments give
byte-identical files.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bounds import generalized_bound, violation_search
from .fuzz import run_all
from .qfi import qfi_pure
from .report import render
from .states import pm_basis, quadratic_mixed_family, single_qubit_family
from .thermo import (
    LOG2,
    AveragingSpec,
    average_state,
    averaged_probs,
    landauer_bound,
    memory_cycle,
    shannon_entropy,
    von_neumann_entropy,
)

COMMANDS = ("fig2", "fig3", "qubit-example", "nonsld-sweep", "cycle", "fuzz")
PROVENANCE = ("t", "T", "seed", "tol", "version")
DEFAULT_Q_GRID = (0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 0.999)
OUTPUT_DIR_ENV = "QFITHERM_OUTPUT_DIR"
NEAR_PURE = 1e-2


class RowCheckError(RuntimeError):
    """A row-wise inequality assertion failed."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    t: float = 1.0
    temperature: float = 300.0
    grid_start: Optional[float] = None
    grid_stop: Optional[float] = None
    grid_points: Optional[int] = None
    seed: int = 42
    out: Optional[str] = None
    format: str = "csv"
    tol: Optional[float] = None
    units: str = "nats"
    p: float = 0.25
    lam0: float = 0.0
    trials: Optional[int] = None
    witness: Optional[str] = None

    def grid(self, start, stop, points):
        a = start if self.grid_start is None else self.grid_start
        b = stop if self.grid_stop is None else self.grid_stop
        n = points if self.grid_points is None else self.grid_points
        return np.linspace(a, b, n)

    def tolerance(self, default):
        return default if self.tol is None else self.tol

    @property
    def entropy_scale(self):
        return 1.0 / LOG2 if self.units == "bits" else 1.0


def _provenance(cfg, tol):
    return (cfg.t, cfg.temperature, cfg.seed, tol, __version__)


def cmd_fig2(cfg):
    """Averaged outcome entropy, von Neumann entropy of rho_s and log2 F_Q / t^2 versus p."""
    tol = cfg.tolerance(1e-9)
    k = cfg.entropy_scale
    rows = []
    for p in cfg.grid(0.0, 1.0, 101):
        p = float(p)
        f = single_qubit_family(p, cfg.t)
        spec = AveragingSpec.for_family(f)
        s_mem = shannon_entropy(averaged_probs(f, pm_basis(p), spec))
        s_vn = von_neumann_entropy(average_state(f, spec))
        q_term = LOG2 * qfi_pure(f.initial, f.generator, f.time) / cfg.t**2
        if not (s_mem >= s_vn - tol and s_vn >= q_term - tol):
            raise RowCheckError(f"entropy chain violated at p={p!r}: {s_mem}, {s_vn}, {q_term}")
        rows.append((p, k * s_mem, k * s_vn, k * q_term) + _provenance(cfg, tol))
    return ("p", "S", "S_rho_s", "log2_FQ") + PROVENANCE, rows


def cmd_fig3(cfg):
    """SLD-measurement entropy and its QFI bound along the quadratic mixed qubit."""
    tol = cfg.tolerance(1e-8)
    k = cfg.entropy_scale
    f = quadratic_mixed_family()
    rows = []
    for lam in cfg.grid(0.05, 0.95, 91):
        lam = float(lam)
        case = generalized_bound(f, lam, tol=tol)
        if not case.report.holds:
            raise RowCheckError(f"SLD bound violated at lam={lam!r}: {case.report}")
        near_pure = 1.0 - case.purity < NEAR_PURE
        rows.append((lam, k * case.entropy, k * case.report.rhs, near_pure) + _provenance(cfg, tol))
    return ("lam", "S_sld", "bound", "near_pure") + PROVENANCE, rows


def _binary_entropy(a):
    return shannon_entropy(np.array([a, 1.0 - a]))


def qubit_example_rows(cfg):
    tol = cfg.tolerance(1e-9)
    rows = []
    for p in cfg.grid(0.0, 1.0, 101):
        p = float(p)
        f = single_qubit_family(p, cfg.t)
        spec = AveragingSpec.for_family(f)
        pt = averaged_probs(f, pm_basis(p), spec).p
        svn = von_neumann_entropy(average_state(f, spec))
        fq = qfi_pure(f.initial, f.generator, f.time) / cfg.t**2
        exact = (2 * p * p - 2 * p + 1, 2 * p * (1 - p), _binary_entropy(p), 4 * p * (1 - p))
        numeric = (pt[0], pt[1], svn, fq)
        diff = max(abs(a - b) for a, b in zip(numeric, exact))
        rows.append(
            (p,)
            + tuple(x for pair in zip(numeric, exact) for x in pair)
            + (diff,)
            + _provenance(cfg, tol)
        )
    cols = ("p", "pt_plus", "pt_plus_exact", "pt_minus", "pt_minus_exact",
            "S_rho_s", "S_rho_s_exact", "FQ_over_t2", "FQ_over_t2_exact", "max_abs_diff")
    return cols + PROVENANCE, rows


def cmd_qubit_example(cfg):
    """Numerical averages next to their closed forms for the single-qubit family."""
    cols, rows = qubit_example_rows(cfg)
    worst = max(r[cols.index("max_abs_diff")] for r in rows)
    print(f"qubit-example: max |numeric - closed form| = {worst:.3e}", file=sys.stderr)
    if worst > cfg.tolerance(1e-9):
        raise RowCheckError(f"closed-form mismatch {worst:.3e}")
    return cols, rows


def cmd_nonsld_sweep(cfg):
    """Per-value entropy and classical Fisher information under ``{|q>, |qbar>}``."""
    tol = cfg.tolerance(1e-8)
    q_grid = DEFAULT_Q_GRID if cfg.grid_points is None else cfg.grid(0.5, 1.0, 11)
    f = single_qubit_family(0.5, cfg.t)
    rows = []
    for case in violation_search(f, cfg.lam0, q_grid, tol=tol):
        rows.append((case.extra["q"], cfg.entropy_scale * case.entropy, case.classical_fisher,
                     case.qfi, case.expected_violation) + _provenance(cfg, tol))
    return ("q", "S_lambda", "classical_fisher", "FQ", "expected_violation") + PROVENANCE, rows


def cmd_cycle(cfg):
    """Per-value memory entropy and Landauer heat over one period of the qubit family."""
    tol = cfg.tolerance(1e-9)
    f = single_qubit_family(cfg.p, cfg.t)
    basis = pm_basis(cfg.p)
    lams = cfg.grid(0.0, f.period, 65)
    rows = []
    for lam in lams:
        rec = memory_cycle(f, basis, float(lam))
        rows.append((rec.lam, rec.probs.p[0], rec.probs.p[1], cfg.entropy_scale * rec.entropy,
                     rec.heat_bound, landauer_bound(rec.entropy, cfg.temperature))
                    + _provenance(cfg, tol))
    return ("lam", "p_plus", "p_minus", "S_lambda", "heat_kT", "heat_J") + PROVENANCE, rows


def cmd_fuzz(cfg):
    """Run every property suite; returns (columns, rows, witnesses, ok)."""
    results = run_all(seed=cfg.seed, trials=cfg.trials, tol=cfg.tol)
    rows = []
    for r in results:
        rows.append((r.name, r.trials, len(r.failures), r.tol, r.passed,
                     json.dumps(r.notes, sort_keys=True)) + _provenance(cfg, r.tol))
    witnesses = {r.name: r.failures for r in results}
    ok = all(r.passed for r in results)
    return ("suite", "trials", "failures", "suite_tol", "passed", "notes") + PROVENANCE, rows, witnesses, ok


TABLE_COMMANDS = {
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "qubit-example": cmd_qubit_example,
    "nonsld-sweep": cmd_nonsld_sweep,
    "cycle": cmd_cycle,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="qfitherm", description=__doc__.splitlines()[0])
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--t", type=float, default=1.0, help="interrogation time")
    ap.add_argument("--temperature", type=float, default=300.0, help="bath temperature in kelvin")
    ap.add_argument("--grid-start", type=float)
    ap.add_argument("--grid-stop", type=float)
    ap.add_argument("--grid-points", type=int)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--tol", type=float, help="override every check tolerance")
    ap.add_argument("--units", choices=("nats", "bits"), default="nats")
    ap.add_argument("--p", type=float, default=0.25, help="state parameter for the cycle command")
    ap.add_argument("--lam0", type=float, default=0.0, help="basis anchor for nonsld-sweep")
    ap.add_argument("--trials", type=int, help="cap on trials per fuzz suite")
    ap.add_argument("--witness", help="fuzz witness file (default: next to --out)")
    return ap


def _resolve(path):
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    path = _resolve(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def run(cfg):
    """Execute one configuration; returns the process exit code."""
    config = asdict(cfg)
    if cfg.command == "fuzz":
        cols, rows, witnesses, ok = cmd_fuzz(cfg)
        _emit(render(cols, rows, cfg.format, config), cfg.out)
        wpath = cfg.witness
        if wpath is None and cfg.out is not None:
            wpath = str(Path(cfg.out).with_suffix("")) + ".witnesses.json"
        if wpath is not None:
            _emit(json.dumps({"seed": cfg.seed, "witnesses": witnesses}, indent=2) + "\n", wpath)
        if not ok:
            failed = [r[0] for r in rows if not r[4]]
            print(f"fuzz: failing suites: {', '.join(failed)}", file=sys.stderr)
            return 1
        return 0
    try:
        cols, rows = TABLE_COMMANDS[cfg.command](cfg)
    except RowCheckError as exc:
        print(f"{cfg.command}: {exc}", file=sys.stderr)
        return 2
    _emit(render(cols, rows, cfg.format, config), cfg.out)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
