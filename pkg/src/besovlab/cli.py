"""Configuration-driven command line front end.

Usage::

    besov-dirichlet <subcommand> --config <path> [--out <dir>] [--seed <n>] [--threads <k>]

One subcommand per experiment plus ``all`` and ``list``.  Values given in
the config file override flags, and flags override built-in defaults.  The
output directory resolves as config, then ``--out``, then the ``BESOV_OUT``
environment variable, then ``./reports``; nothing is written outside it.

Exit codes: 0 success, 1 configuration error, 2 hard-assertion failure.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time

import numpy as np

from ._version import __version__
from .config import KNOWN_EXPERIMENTS, RunConfig, load_config
from .domain import assemble_operator, build_grid
from .dyadic import build_partition
from .errors import BesovLabError, ConfigError, HardAssertionError
from .lab import (Ensemble, appendix_a_probe, bernstein_scan, bilinear_scan,
                  gradient_scan, partition_report, schrodinger_equivalence_scan)
from .reports import ExperimentReport
from .spectral import decompose

DESCRIPTIONS = {
    "check-partition": "ladder partition-of-unity, splitting and reconstruction "
                       "diagnostics (hard assertion)",
    "scan-bernstein": "band and low-pass multiplier p->p norms against the "
                      "dyadic rate 2^(2 alpha j)",
    "scan-gradient": "gradient-composed multiplier norms and the heat-flow "
                     "rate sqrt(t) ||grad exp(-tH)||",
    "scan-bilinear": "product-estimate constants in homogeneous frame norms "
                     "over a seeded ensemble",
    "scan-bilinear-inhomogeneous": "product-estimate constants in "
                                   "inhomogeneous frame norms",
    "probe-appendix-a": "gradient-square chain probe on the heat flow (hard "
                        "assertion; see README appendix A)",
    "scan-schrodinger": "frame-norm ratios between the potential-perturbed "
                        "and free operators",
}

DEFAULT_SEED = 42
DEFAULT_COUNT = 32


class LabContext:
    """Lazily built operator state shared by the experiment runners."""

    def __init__(self, config: RunConfig, seed: int, count: int, threads: int):
        self.config = config
        self.ensemble = Ensemble(seed=seed, count=count)
        self.threads = threads
        self._dec = None
        self._part = None
        self._dec_free = None
        self._part_free = None

    @property
    def dec(self):
        if self._dec is None:
            grid = build_grid(self.config.domain.spec())
            self._dec = decompose(assemble_operator(grid))
        return self._dec

    @property
    def part(self):
        if self._part is None:
            self._part = build_partition(self.dec)
        return self._part

    @property
    def dec_free(self):
        if self._dec_free is None:
            if self.config.domain.potential.kind == "none":
                self._dec_free = self.dec
            else:
                grid = build_grid(self.config.domain.free_spec())
                self._dec_free = decompose(assemble_operator(grid))
        return self._dec_free

    @property
    def part_free(self):
        if self._part_free is None:
            self._part_free = (self.part if self.dec_free is self.dec
                               else build_partition(self.dec_free))
        return self._part_free


def merge_reports(name: str, reports: list[ExperimentReport]) -> ExperimentReport:
    merged = ExperimentReport(name=name, domain=reports[0].domain,
                              columns=reports[0].columns,
                              metadata=dict(reports[0].metadata))
    for rep in reports:
        if rep.columns != merged.columns:
            raise ValueError(f"cannot merge {name}: column mismatch")
        merged.rows.extend(rep.rows)
        merged.metadata.update(rep.metadata)
    return merged


def run_check_partition(ctx: LabContext) -> ExperimentReport:
    report, ok = partition_report(ctx.dec, ctx.part)
    if not ok:
        bad = [row for row in report.rows if not row[4]]
        raise HardAssertionError(
            f"partition diagnostic failed: {bad[0][0]} = {bad[0][2]!r} "
            f"exceeds tolerance {bad[0][3]!r}", report=report)
    return report


def run_bernstein(ctx: LabContext) -> ExperimentReport:
    params = ctx.config.parameters
    parts = [bernstein_scan(ctx.dec, ctx.part, alpha, p, threads=ctx.threads)
             for alpha in params.alpha_grid for p in params.p_grid]
    merged = merge_reports("scan-bernstein", parts)
    merged.sort(key=lambda r: (r[2], float(r[3]), r[0], r[1]))
    return merged


def run_gradient(ctx: LabContext) -> ExperimentReport:
    params = ctx.config.parameters
    parts = []
    for p in params.p_grid:
        parts.append(gradient_scan(ctx.dec, ctx.part, "heat", p,
                                   t_exponents=params.t_exponents,
                                   threads=ctx.threads))
        for alpha in params.alpha_grid:
            for mode in ("block", "lowpass"):
                parts.append(gradient_scan(ctx.dec, ctx.part, mode, p,
                                           alpha=alpha, threads=ctx.threads))
    merged = merge_reports("scan-gradient", parts)
    low = -(10 ** 9)
    merged.sort(key=lambda r: (r[0], float(r[1]),
                               low if r[2] is None else r[2],
                               low if r[3] is None else r[3],
                               low if r[4] is None else r[4]))
    return merged


def run_bilinear(ctx: LabContext) -> ExperimentReport:
    params = ctx.config.parameters
    return bilinear_scan(ctx.dec, ctx.part, ctx.ensemble, params.s_grid,
                         params.p_tuple, params.q, threads=ctx.threads)


def run_bilinear_inhomogeneous(ctx: LabContext) -> ExperimentReport:
    params = ctx.config.parameters
    return bilinear_scan(ctx.dec, ctx.part, ctx.ensemble, params.s_grid,
                         params.p_tuple, params.q, inhomogeneous=True,
                         threads=ctx.threads)


def run_appendix_a(ctx: LabContext) -> ExperimentReport:
    params = ctx.config.parameters
    return appendix_a_probe(ctx.dec, ctx.part, ctx.ensemble,
                            params.t_exponents, params.epsilon,
                            threads=ctx.threads)


def run_schrodinger(ctx: LabContext) -> ExperimentReport:
    sch = ctx.config.parameters.schrodinger
    return schrodinger_equivalence_scan(ctx.dec, ctx.dec_free, ctx.part,
                                        ctx.part_free, ctx.ensemble,
                                        sch.s, sch.p, sch.q, threads=ctx.threads)


RUNNERS = {
    "check-partition": run_check_partition,
    "scan-bernstein": run_bernstein,
    "scan-gradient": run_gradient,
    "scan-bilinear": run_bilinear,
    "scan-bilinear-inhomogeneous": run_bilinear_inhomogeneous,
    "probe-appendix-a": run_appendix_a,
    "scan-schrodinger": run_schrodinger,
}


def list_experiments() -> str:
    lines = [f"{name}  {DESCRIPTIONS[name]}" for name in KNOWN_EXPERIMENTS]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="besov-dirichlet",
        description="Run dyadic-frame estimate experiments on discretized "
                    "Dirichlet operators and emit CSV reports.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="print experiment selectors in stable order")
    for name in KNOWN_EXPERIMENTS + ("all",):
        help_line = DESCRIPTIONS.get(name, "run every configured experiment")
        sp = sub.add_parser(name, help=help_line)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", help="output directory (config overrides; "
                                      "falls back to $BESOV_OUT, then ./reports)")
        sp.add_argument("--seed", type=int, help="ensemble seed (config overrides)")
        sp.add_argument("--threads", type=int,
                        help="worker threads for row-parallel scans "
                             "(default: available cores)")
    return parser


def _write_outputs(out_dir, reports, config, seed, count, wall_times):
    os.makedirs(out_dir, exist_ok=True)
    schema = {}
    outputs = []
    for report in reports:
        csv_path = os.path.join(out_dir, f"{report.name}.csv")
        report.to_csv(csv_path)
        schema[report.name] = report.schema()
        outputs.append(os.path.basename(csv_path))
    with open(os.path.join(out_dir, "schema.json"), "w", encoding="utf-8") as fh:
        json.dump(schema, fh, indent=2, sort_keys=True)
        fh.write("\n")
    manifest = {
        "config": config.to_dict(),
        "ensemble_resolved": {"seed": seed, "count": count},
        "versions": {
            "besovlab": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "wall_times_s": wall_times,
        "outputs": sorted(outputs),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        sys.stdout.write(list_experiments())
        return 0

    try:
        config = load_config(args.config)
        seed = config.ensemble.seed if config.ensemble.seed is not None \
            else (args.seed if args.seed is not None else DEFAULT_SEED)
        count = config.ensemble.count if config.ensemble.count is not None \
            else DEFAULT_COUNT
        out_dir = config.output_dir or args.out or os.environ.get("BESOV_OUT") \
            or "reports"
        threads = args.threads if args.threads else (os.cpu_count() or 1)

        if args.command == "all":
            selected = config.experiments or KNOWN_EXPERIMENTS
            selected = [n for n in KNOWN_EXPERIMENTS if n in selected]
        else:
            selected = [args.command]

        ctx = LabContext(config, seed=seed, count=count, threads=threads)
        reports = []
        wall_times = {}
        failure = None
        for name in selected:
            t0 = time.monotonic()
            try:
                reports.append(RUNNERS[name](ctx))
            except HardAssertionError as exc:
                if exc.report is not None:
                    reports.append(exc.report)
                failure = exc
                wall_times[name] = round(time.monotonic() - t0, 3)
                break
            wall_times[name] = round(time.monotonic() - t0, 3)

        _write_outputs(out_dir, reports, config, seed, count, wall_times)
        if failure is not None:
            print(f"hard assertion failed: {failure}", file=sys.stderr)
            return 2
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except HardAssertionError as exc:
        print(f"hard assertion failed: {exc}", file=sys.stderr)
        return 2
    except BesovLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
