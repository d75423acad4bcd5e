"""``verify``: sweep a grid of s values and report each verification step.

Exit codes: 0 all records pass, 1 some record fails its tolerance, 2 bad
arguments, 3 numerical non-convergence somewhere (or an I/O failure).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from zmv import __version__
from zmv.funceq import (
    DEFAULT_EXCLUSION_RADIUS,
    GridSpec,
    Step,
    TolerancePolicy,
    VerificationRecord,
    excluded,
    fe_residual,
    guarded as _guard,
    in_strip,
    interchange_records,
    eq1_record,
    series_record,
    telescope_record,
)
from zmv.mellin_engine import TruncationConfig

COMMANDS = ("eq1", "telescope", "interchange", "sine-mellin", "fe", "chain", "all")
CSV_HEADER = (
    "step", "s_re", "s_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
    "abs_err", "rel_err", "n_terms", "converged", "pass",
)
SINE_FREQS = (2.0 * math.pi, 4.0 * math.pi, 8.0 * math.pi)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    grid: GridSpec
    trunc: TruncationConfig = field(default_factory=TruncationConfig)
    abs_tol: float = 1e-8
    rel_tol: float = 1e-9
    n_terms: int = 10_000
    format: str = "csv"
    out_path: str | None = None
    parallel: bool = True

    @property
    def policy(self) -> TolerancePolicy:
        return TolerancePolicy(self.abs_tol, self.rel_tol)


@dataclass
class PointResult:
    records: list[VerificationRecord]
    excluded: bool = False


def evaluate_point(s: complex, cfg: RunConfig) -> PointResult:
    """Records for one grid point, or an excluded marker."""
    if excluded(s, cfg.grid.exclusion_radius):
        return PointResult([], excluded=True)
    pol, trunc, cmd = cfg.policy, cfg.trunc, cfg.command
    upper = in_strip(s, 0.0, 1.0)
    lower = in_strip(s, -1.0, 0.0)

    eq1 = lambda: _guard(Step.EQ1, s, lambda: eq1_record(s, trunc, pol))  # noqa: E731
    tel = lambda: _guard(Step.TELESCOPE, s, lambda: telescope_record(s, trunc, pol))  # noqa: E731
    inter = lambda freqs=SINE_FREQS[:2]: _guard(  # noqa: E731
        Step.INTERCHANGE, s, lambda: interchange_records(s, trunc, pol, freqs))
    series = lambda: _guard(Step.SERIES_SUM, s, lambda: series_record(s, cfg.n_terms, pol))  # noqa: E731
    fe = lambda: _guard(Step.FUNC_EQ, s, lambda: fe_residual(s, pol))  # noqa: E731

    if cmd == "eq1":
        return PointResult(eq1()) if upper else PointResult([], excluded=True)
    if cmd == "telescope":
        return PointResult(tel()) if upper else PointResult([], excluded=True)
    if cmd == "sine-mellin":
        return PointResult(inter(SINE_FREQS)) if lower else PointResult([], excluded=True)
    if cmd == "interchange":
        return PointResult(inter() + series()) if lower else PointResult([], excluded=True)
    if cmd == "fe":
        return PointResult(fe())
    records: list[VerificationRecord] = []
    if upper:
        records = eq1() + tel()
    elif lower:
        records = inter() + series()
    elif cmd == "chain":
        return PointResult([], excluded=True)
    return PointResult(records + fe())


def _evaluate_star(args: tuple[complex, RunConfig]) -> PointResult:
    return evaluate_point(*args)


def sweep(cfg: RunConfig) -> list[PointResult]:
    """Evaluate every grid point; results come back in grid order."""
    points = list(cfg.grid.points())
    if cfg.parallel and len(points) > 1:
        with ProcessPoolExecutor() as pool:
            return list(pool.map(_evaluate_star, [(s, cfg) for s in points], chunksize=4))
    return [evaluate_point(s, cfg) for s in points]


def fmt_number(x: float) -> str:
    """Shortest round-trip decimal; integral values without a trailing '.0'."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _json_number(x: float) -> float | int | str:
    if not math.isfinite(x):
        return fmt_number(x)
    if x == 0:
        return 0
    return int(x) if x.is_integer() and abs(x) < 1e16 else x


def record_fields(r: VerificationRecord) -> dict[str, object]:
    return {
        "step": r.step.value,
        "s_re": r.s.real, "s_im": r.s.imag,
        "lhs_re": r.lhs.real, "lhs_im": r.lhs.imag,
        "rhs_re": r.rhs.real, "rhs_im": r.rhs.imag,
        "abs_err": r.abs_err, "rel_err": r.rel_err,
        "n_terms": r.n_terms, "converged": r.converged, "pass": r.passed,
    }


def emit_report(records: Sequence[VerificationRecord], cfg: RunConfig) -> bytes:
    """Serialise records as CSV (exact header) or JSON with a metadata block."""
    if cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            row = []
            for v in record_fields(r).values():
                if isinstance(v, bool):
                    row.append("true" if v else "false")
                elif isinstance(v, float):
                    row.append(fmt_number(v))
                else:
                    row.append(str(v))
            writer.writerow(row)
        return buf.getvalue().encode("utf-8")
    if cfg.format == "json":
        rows = []
        for r in records:
            d = record_fields(r)
            rows.append({k: _json_number(v) if isinstance(v, float) else v for k, v in d.items()})
        doc = {
            "metadata": {
                "tolerances": {"abs_tol": cfg.abs_tol, "rel_tol": cfg.rel_tol},
                "grid": asdict(cfg.grid),
                "tool_version": __version__,
            },
            "records": rows,
        }
        return (json.dumps(doc, indent=1) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {cfg.format!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="verify",
        description="Numerically check each step of the Mellin-transform route "
                    "to the zeta functional equation over a grid of s values.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--re", nargs=2, type=float, required=True, metavar=("MIN", "MAX"))
    p.add_argument("--im", nargs=2, type=float, required=True, metavar=("MIN", "MAX"))
    p.add_argument("--steps", nargs=2, type=int, default=(1, 1), metavar=("RE_STEPS", "IM_STEPS"))
    p.add_argument("--abs-tol", type=float, default=1e-8)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.add_argument("--max-intervals", type=int, default=TruncationConfig.max_intervals)
    p.add_argument("--target-tol", type=float, default=TruncationConfig.target_tol,
                   help="truncation/quadrature target for the Mellin engine")
    p.add_argument("--n-terms", type=int, default=10_000, help="series cutoff N for SERIES_SUM")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--no-parallel", action="store_true")
    p.add_argument("--exclusion-radius", type=float, default=DEFAULT_EXCLUSION_RADIUS)
    return p


def parse_config(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(list(argv))
    try:
        grid = GridSpec(ns.re[0], ns.re[1], ns.im[0], ns.im[1], ns.steps[0], ns.steps[1],
                        ns.exclusion_radius)
        trunc = TruncationConfig(ns.max_intervals, ns.target_tol)
        if not (ns.abs_tol > 0 and ns.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if ns.n_terms < 1:
            raise ValueError("--n-terms must be >= 1")
    except ValueError as exc:
        parser.error(str(exc))
    return RunConfig(ns.command, grid, trunc, ns.abs_tol, ns.rel_tol, ns.n_terms,
                     ns.format, ns.out, not ns.no_parallel)


def run(argv: Sequence[str]) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    results = sweep(cfg)
    records = [r for res in results for r in res.records]
    n_excluded = sum(res.excluded for res in results)
    passed = sum(r.passed for r in records)
    finite_rel = [r.rel_err for r in records if math.isfinite(r.rel_err)]
    max_rel = max(finite_rel) if finite_rel else 0.0

    try:
        payload = emit_report(records, cfg)
        if cfg.out_path:
            with open(cfg.out_path, "wb") as fh:
                fh.write(payload)
        else:
            sys.stdout.write(payload.decode("utf-8"))
            sys.stdout.flush()
    except OSError as exc:
        print(f"verify: cannot write report: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    print(
        f"points={len(results)} records={len(records)} passed={passed} "
        f"failed={len(records) - passed} excluded={n_excluded} max_rel_err={max_rel:.3e}",
        file=sys.stderr,
    )
    if any(not r.converged for r in records):
        return EXIT_NUMERIC
    if passed < len(records):
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
