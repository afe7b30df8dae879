"""Command-line entry point: configuration-driven verification runs.

Each subcommand writes ``<command>.csv`` with one row per check into the
output directory, plus command-specific artifacts. Exit status is 0 when
every check passes, 1 when any fails (``failures.json`` lists them) and 2 on
configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import algebra as alg
from . import dirac as dr
from . import forcefree as ff
from . import formal_powers as fp
from . import maxwell as mw
from .calculus import Grid, ResidualReport, dyadic_grids
from .config import COMMANDS, load_config, load_config_file
from .errors import (
    ConfigError,
    NonMonotoneError,
    NonPositivePermittivityError,
    ZeroDivisorError,
)
from .medium import build_tables
from .sampling import random_biquaternion, random_tuple

CSV_COLUMNS = ("check_id", "anchor", "h", "max_norm", "l2_norm", "slope", "threshold", "status")

DIRAC_MIN_DET = 0.1

DEFAULT_BASE_NODES = {
    "formal-powers": 39,
    "maxwell-verify": 33,
    "forcefree-verify": 9,
    "dirac-verify": 17,
}


@dataclass(frozen=True)
class CheckRow:
    check_id: str
    anchor: str
    h: float | None
    max_norm: float | None
    l2_norm: float | None
    slope: float | None
    threshold: float
    passed: bool

    def cells(self):
        def fmt(v):
            return "" if v is None else repr(float(v))
        return [self.check_id, self.anchor, fmt(self.h), fmt(self.max_norm),
                fmt(self.l2_norm), fmt(self.slope), fmt(self.threshold),
                "pass" if self.passed else "fail"]

    def as_dict(self):
        return dict(zip(CSV_COLUMNS, self.cells()))


class Recorder:
    def __init__(self, tolerances):
        self.tol = tolerances
        self.rows = []

    def residual(self, check_id, anchor, report):
        """Row for a refinement study: slope test, or zero test when exact."""
        min_order = self.tol["min_order"]
        zero_tol = self.tol["zero_tol"]
        exact = report.order is None
        self.rows.append(CheckRow(
            check_id, anchor, report.h, report.max_norm, report.l2_norm, report.order,
            zero_tol if exact else min_order, report.passes(min_order, zero_tol)))

    def zero(self, check_id, anchor, value, threshold=None, h=None):
        threshold = self.tol["zero_tol"] if threshold is None else threshold
        self.rows.append(CheckRow(check_id, anchor, h, value, None, None, threshold,
                                  bool(value <= threshold)))

    def at_least(self, check_id, anchor, value, threshold, h=None):
        self.rows.append(CheckRow(check_id, anchor, h, None, None, value, threshold,
                                  bool(value >= threshold)))

    def above(self, check_id, anchor, value, threshold):
        """Row for a determinant-style lower bound on a norm."""
        self.rows.append(CheckRow(check_id, anchor, None, value, None, None, threshold,
                                  bool(value > threshold)))

    def equivalence(self, check_id, anchor, eq):
        self.rows.append(CheckRow(check_id, anchor, eq.full.h, eq.defect, None, None,
                                  eq.bound, eq.holds))


def _grids(cfg, command, ranges, names):
    base = cfg.grid["base_nodes"] or DEFAULT_BASE_NODES[command]
    counts = [base] * len(ranges)
    return dyadic_grids(Grid.uniform(ranges, counts, names), cfg.grid["levels"])


def _study(name, grids, fn):
    return ResidualReport.combine([ResidualReport.from_residual(name, fn(g), g) for g in grids])


def _tag(value):
    """Short, filesystem- and CSV-safe label for a coefficient."""
    if isinstance(value, alg.Hyperbolic):
        return f"{value.u:g}{value.v:+g}j"
    if isinstance(value, complex):
        return f"{value.real:g}{value.imag:+g}i"
    return f"{value:g}"


# ---------------------------------------------------------------------------
# subcommands


def run_algebra(cfg, rec, out):
    rng = np.random.default_rng(cfg.seed)
    n = cfg.algebra["cases"]
    tol = cfg.tolerances["algebra_tol"]
    p, q, r = (random_biquaternion(rng, n) for _ in range(3))

    def rel(a, b):
        scale = 1.0 + np.maximum(np.abs(a).max(axis=-1), np.abs(b).max(axis=-1))
        return float(np.max(np.abs(a - b).max(axis=-1) / scale))

    lhs = alg.qmul(alg.qmul(p, q), r)
    rhs = alg.qmul(p, alg.qmul(q, r))
    rec.zero("algebra-associativity", "biquaternion-associativity", rel(lhs, rhs), tol)
    rec.zero("algebra-conjugation", "conjugation-anti-homomorphism",
             rel(alg.qconj(alg.qmul(p, q)), alg.qmul(alg.qconj(q), alg.qconj(p))), tol)
    pp = alg.qmul(p, alg.qconj(p))
    vec = float(np.max(np.abs(pp[:, 1:]).max(axis=-1) / (1.0 + np.abs(pp[:, 0]))))
    rec.zero("algebra-norm-scalar", "quaternion-norm-is-scalar", vec, tol)
    inv = alg.qmul(p, alg.qinv(p))
    rec.zero("algebra-inverse", "biquaternion-inverse", rel(inv, np.broadcast_to(alg.unit(0), inv.shape)), tol)

    def detects(fn):
        try:
            fn()
        except ZeroDivisorError:
            return 0.0
        return 1.0

    rec.zero("algebra-zero-divisor-bq", "biquaternion-zero-divisor",
             detects(lambda: alg.qinv(np.array([1.0, 1j, 0.0, 0.0]))), 0.0)
    rec.zero("algebra-zero-divisor-hyp", "hyperbolic-zero-divisor",
             detects(lambda: alg.hyp_inverse(alg.Hyperbolic(1.0, 1.0))), 0.0)

    a = rng.normal(size=(4, n))
    b = rng.normal(size=(4, n))
    x, y = alg.Bicomplex(*a), alg.Bicomplex(*b)
    prod = alg.bicomplex_mul(x, y)
    w1, w2 = alg.bicomplex_split(prod)
    x1, x2 = alg.bicomplex_split(x)
    y1, y2 = alg.bicomplex_split(y)
    # W = w1 + w2 e1 with e1^2 = -1 and j e1 = e1 j
    s1 = alg.hyp_mul(x1, y1) - alg.hyp_mul(x2, y2)
    s2 = alg.hyp_mul(x1, y2) + alg.hyp_mul(x2, y1)
    err = max(np.max(np.abs(w1.u - s1.u)), np.max(np.abs(w1.v - s1.v)),
              np.max(np.abs(w2.u - s2.u)), np.max(np.abs(w2.v - s2.v)))
    rec.zero("algebra-bicomplex-split", "bicomplex-hyperbolic-split",
             float(err) / (1.0 + float(np.max(np.abs(a)) * np.max(np.abs(b)))), tol)


def _tables(cfg):
    try:
        return build_tables(cfg.profile())
    except (NonPositivePermittivityError, NonMonotoneError, ValueError) as exc:
        raise ConfigError(f"{cfg.source}: medium: {exc}") from None


def run_formal_powers(cfg, rec, out):
    tables = _tables(cfg)
    n_max = cfg.formal_powers["n_max"]
    table = fp.table_from_medium(tables, n_max, cfg.formal_powers["samples"])
    fp.write_x_tables_csv(table, out / "x_tables.csv")
    # default box: 38 cells of 1/64, the largest dyadic-nested square inside [0, 0.6]
    lo, hi = cfg.grid["box"] or (0.0, 38 / 64)
    hi = min(hi, table.xi_max)
    grids = _grids(cfg, "formal-powers", [(lo, hi), (lo, hi)], ("xi", "t"))

    vacuum = float(np.ptp(tables.eps_samples)) == 0.0
    for a in cfg.formal_powers["a"]:
        for n in range(n_max + 1):
            rep = fp.verify_formal_power(n, a, table, grids)
            rec.residual(f"fp-vekua-n{n}-a{_tag(a)}", "hyperbolic-vekua", rep)
            if vacuum:
                g = grids[-1]
                xi, t = g.mesh()[g.axis("xi")], g.mesh()[g.axis("t")]
                z = fp.z_on_grid(n, a, table, g)
                ref = alg.hyp_mul(a, alg.hyp_pow(alg.Hyperbolic(xi, t), n))
                err = float(max(np.max(np.abs(z.u - ref.u)), np.max(np.abs(z.v - ref.v))))
                rec.zero(f"fp-vacuum-n{n}-a{_tag(a)}", "vacuum-formal-power", err, 1e-10, g.h)
    g = grids[-1]
    fp.write_z_samples_csv(n_max, cfg.formal_powers["a"][0], table, g, out / "z_samples.csv")


def run_maxwell(cfg, rec, out):
    tables = _tables(cfg)
    rng = np.random.default_rng(cfg.seed)
    t_range = tuple(cfg.grid["t_range"])
    x_range = tables.x_range
    grids = _grids(cfg, "maxwell-verify", [t_range, x_range], ("t", "x1"))
    fine = grids[-1]

    sextet = mw.build_sextet(tables, fine)
    rec.above("maxwell-sextet-independence", "maxwell-generating-sextet",
              sextet.min_abs_det, cfg.tolerances["det_tol"])
    for i in range(cfg.maxwell["tuples"]):
        phis = random_tuple(rng, fine, 6)
        eq = mw.sextet_equivalence(phis, fine, tables, sextet)
        rec.equivalence(f"maxwell-equivalence-{i:02d}", "maxwell-second-kind-equivalence", eq)

    rep = _study("maxwell-1d-longitudinal", grids,
                 lambda g: mw.maxone1_operator(mw.v1_closed_form(1.0, 2.0, tables, g), g, tables))
    rec.residual("maxwell-v1-closed-form", "maxwell-1d-longitudinal", rep)

    n = cfg.maxwell["n"]
    a1, a2 = cfg.maxwell["a1"], cfg.maxwell["a2"]
    table = fp.table_from_medium(tables, max(n, 1), cfg.formal_powers["samples"], inverse=True)
    rep = _study("maxwell-1d-transverse", grids, lambda g: mw.maxone2_operator(
        mw.fields_from_formal_powers(n, a1, a2, table, g, tables), tables))
    rec.residual(f"maxwell-formal-power-n{n}", "maxwell-1d-transverse", rep)
    mw.write_fields_csv(mw.fields_from_formal_powers(n, a1, a2, table, fine, tables),
                        out / "fields.csv")


def run_forcefree(cfg, rec, out):
    rng = np.random.default_rng(cfg.seed)
    box = tuple(cfg.grid["box"] or (0.0, 1.0))
    grids = _grids(cfg, "forcefree-verify", [box] * 3, ("x1", "x2", "x3"))
    fine = grids[-1]
    dets = {}
    for alpha in cfg.forcefree["alpha"]:
        tag = _tag(alpha)
        for k in cfg.forcefree["axis"]:
            rep = _study("force-free", grids, lambda g: ff.ff_operator(ff.exp_solution(alpha, k, g), alpha, g))
            rec.residual(f"ff-exp-a{tag}-x{k}", "force-free-exp-solution", rep)
            b = ff.exp_solution(alpha, k, fine)
            coord = fine.mesh()[fine.axis(f"x{k}")]
            bm = np.zeros_like(b)
            bm[..., 0] = np.cos(alpha * -coord)
            bm[..., k] = np.sin(alpha * -coord)
            ident = alg.qmul(b, bm) - alg.unit(0)
            rec.zero(f"ff-inverse-a{tag}-x{k}", "force-free-exp-inverse",
                     float(np.max(np.abs(ident))), 1e-12)
            quartet = ff.quartet_from_b(b, cfg.tolerances["det_tol"])
            dets[f"alpha={tag},axis={k}"] = quartet.min_abs_det
            rec.above(f"ff-quartet-a{tag}-x{k}", "force-free-generating-quartet",
                      quartet.min_abs_det, cfg.tolerances["det_tol"])

        b = ff.exp_solution(alpha, 1, fine)
        for i in range(cfg.forcefree["tuples"]):
            phis = random_tuple(rng, fine, 4, complex_valued=True, freq=(0.5, 2.0))
            eq = ff.quartet_equivalence(phis, b, alpha, fine)
            rec.equivalence(f"ff-equivalence-a{tag}-{i:02d}", "force-free-second-kind-equivalence", eq)
        for i in range(cfg.forcefree["lambdas"]):
            lam = random_biquaternion(rng)
            rep = _study("force-free", grids,
                         lambda g: ff.ff_operator(alg.qmul(ff.exp_solution(alpha, 1, g), lam), alpha, g))
            rec.residual(f"ff-right-module-a{tag}-{i:02d}", "force-free-right-module", rep)

        pairs = [ff.quotient_check(ff.exp_solution(alpha, 1, g), ff.exp_solution(alpha, 2, g), alpha, g)
                 for g in grids]
        rec.residual(f"ff-quotient-a{tag}", "force-free-quotient",
                     ResidualReport.combine([p[0] for p in pairs]))
        rec.residual(f"ff-quotient-inverse-a{tag}", "force-free-quotient-inverse",
                     ResidualReport.combine([p[1] for p in pairs]))

        if alpha.imag == 0:
            rep = _study("force-free-divergence", grids,
                         lambda g: ff.divergence_operator(ff.exp_solution(alpha, 2, g), alpha, g))
            rec.residual(f"ff-divergence-a{tag}", "force-free-divergence", rep)

    with open(out / "forcefree.json", "w") as fh:
        json.dump({"min_abs_det": dets}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_dirac(cfg, rec, out):
    rng = np.random.default_rng(cfg.seed)
    d = cfg.dirac
    data = dr.DiracData(d["m"], d["omega"], d["phi"])
    box = tuple(cfg.grid["box"] or (0.0, 1.0))
    grids = _grids(cfg, "dirac-verify", [box], ("x1",))
    reports = [[] for _ in range(4)]
    for g in grids:
        q = dr.ode_oracle_solutions(data, box, g.counts[0])
        for k, F in enumerate(q.on_grid(g)):
            reports[k].append(dr.dirac_residual(F, data, g))
    for k in range(4):
        rec.residual(f"dirac-oracle-F{k}", "dirac-biquaternionic", ResidualReport.combine(reports[k]))

    q = dr.ode_oracle_solutions(data, box, grids[-1].counts[0])
    mn = dr.quartet_independence(list(q.trajectories))
    rec.above("dirac-quartet-independence", "dirac-generating-quartet", mn, DIRAC_MIN_DET)
    order, _ = dr.integrator_order(data, box)
    rec.at_least("dirac-integrator-order", "dirac-ode-oracle", order,
                 cfg.tolerances["integrator_order"])

    n3 = cfg.grid["base_nodes"] or DEFAULT_BASE_NODES["dirac-verify"]
    g3 = Grid.uniform([box] * 3, [n3] * 3, ("x1", "x2", "x3"))
    members = dr.ode_oracle_solutions(data, box, n3).on_grid(g3)
    for i in range(d["tuples"]):
        phis = random_tuple(rng, g3, 4, complex_valued=True, freq=(0.5, 2.0))
        eq = dr.quartet_equivalence(phis, members, data, g3)
        rec.equivalence(f"dirac-equivalence-{i:02d}", "dirac-second-kind-equivalence", eq)

    traj = {f"F{k}": {"re": q.trajectories[k].real.tolist(), "im": q.trajectories[k].imag.tolist()}
            for k in range(4)}
    with open(out / "dirac.json", "w") as fh:
        json.dump({"min_abs_det": mn, "x1": q.x.tolist(), "trajectories": traj}, fh,
                  indent=2, sort_keys=True)
        fh.write("\n")


RUNNERS = {
    "algebra-selftest": run_algebra,
    "formal-powers": run_formal_powers,
    "maxwell-verify": run_maxwell,
    "forcefree-verify": run_forcefree,
    "dirac-verify": run_dirac,
}


def write_report(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow(row.cells())


def run(cfg, command):
    """Run ``command`` under ``cfg``; returns (exit code, rows)."""
    out = Path(cfg.output["dir"])
    out.mkdir(parents=True, exist_ok=True)
    rec = Recorder(cfg.tolerances)
    RUNNERS[command](cfg, rec, out)
    write_report(rec.rows, out / f"{command}.csv")
    failures = [r.as_dict() for r in rec.rows if not r.passed]
    manifest = out / "failures.json"
    if failures:
        with open(manifest, "w") as fh:
            json.dump({"command": command, "failures": failures}, fh, indent=2)
            fh.write("\n")
        return 1, rec.rows
    if manifest.exists():
        manifest.unlink()
    return 0, rec.rows


def build_parser():
    p = argparse.ArgumentParser(prog="pseudoanalytic",
                                description="Residual-based verification of generating-set solutions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--seed", type=int, help="seed for randomized checks (overrides the config)")
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--refinements", type=int,
                   help="number of grid levels in refinement studies (overrides the config)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config_file(args.config) if args.config else load_config()
        if cfg.command is not None and cfg.command != args.command:
            raise ConfigError(f"{cfg.source}: command: config is for {cfg.command!r}, "
                              f"not {args.command!r}")
        if args.seed is not None:
            if args.seed < 0 or args.seed >= 2 ** 64:
                raise ConfigError("--seed: must be an unsigned 64-bit integer")
            cfg.seed = args.seed
        if args.out is not None:
            cfg.output["dir"] = args.out
        if args.refinements is not None:
            if args.refinements < 1:
                raise ConfigError("--refinements: must be >= 1")
            cfg.grid["levels"] = args.refinements
        code, rows = run(cfg, args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    n_fail = sum(not r.passed for r in rows)
    print(f"{args.command}: {len(rows) - n_fail}/{len(rows)} checks passed")
    return code


if __name__ == "__main__":
    sys.exit(main())
