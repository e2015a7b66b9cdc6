"""Command-line sweeps over a2 or SNR, analytic and/or Monte Carlo.

Values resolve in the order: built-in defaults, ``--preset``, ``--config``
file, explicit flags. Exit codes: 0 ok, 2 configuration error, 3 numerical
failure or an analytic/Monte Carlo mismatch under ``--method both``.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field, fields
from typing import Sequence, TextIO

from . import analytic
from .channel import RicianLink
from .montecarlo import EstimatorKind, estimate_many
from .presets import PRESETS
from .rates import SystemParams

HEADER = ["a2", "snr_db", "scheme", "method", "rate_s1", "rate_s2", "rate_sum", "std_error_sum"]
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
MISMATCH_SLACK = 0.02

DEFAULT_GRIDS = {"a2": (0.05, 0.45, 0.05), "snr": (5.0, 15.0, 1.0)}


class ConfigError(ValueError):
    pass


@dataclass
class SweepSpec:
    variable: str | None = None
    start: float | None = None
    stop: float | None = None
    step: float | None = None
    a2: float = 0.1
    snr_db: float = 20.0
    omega_sd: float = 3.0
    omega_sr: float = 6.0
    omega_rd: float = 6.0
    k_sd: float = 2.0
    k_sr: float = 5.0
    k_rd: float = 5.0
    methods: list[str] = field(default_factory=lambda: ["analytic"])
    schemes: list[str] = field(default_factory=lambda: ["onoma", "cnoma"])
    samples: int = 1_000_000
    seed: int = 0
    workers: int = 1
    convention: str = "paper"
    output: str = "csv"

    def links(self) -> tuple[RicianLink, RicianLink, RicianLink]:
        try:
            return (RicianLink.from_amplitude(self.k_sd, self.omega_sd),
                    RicianLink.from_amplitude(self.k_sr, self.omega_sr),
                    RicianLink.from_amplitude(self.k_rd, self.omega_rd))
        except ValueError as e:
            raise ConfigError(str(e)) from e

    def points(self) -> list[tuple[float, float]]:
        """(a2, snr_db) pairs in emission order."""
        if self.variable is None:
            pts = [(self.a2, self.snr_db)]
        else:
            d_start, d_stop, d_step = DEFAULT_GRIDS[self.variable]
            start = d_start if self.start is None else self.start
            stop = d_stop if self.stop is None else self.stop
            step = d_step if self.step is None else self.step
            if not step > 0:
                raise ConfigError(f"step must be > 0, got {step}")
            if start > stop:
                raise ConfigError(f"start {start} > stop {stop}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            values = [round(start + i * step, 12) for i in range(count)]
            if self.variable == "a2":
                pts = [(v, self.snr_db) for v in values]
            else:
                pts = [(self.a2, v) for v in values]
        for a2, _ in pts:
            if not (0.0 < a2 < 0.5):
                raise ConfigError(f"a2 must lie in (0, 0.5), got {a2}")
        return pts


_CHOICES = {
    "variable": (None, "a2", "snr"),
    "convention": ("paper", "model"),
    "output": ("csv", "json"),
}


def _expand(value: str, both: Sequence[str]) -> list[str]:
    return list(both) if value == "both" else [value]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onoma-relay", description=__doc__.splitlines()[0])
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--config", metavar="FILE", help="JSON file with SweepSpec field names")
    p.add_argument("--sweep", dest="variable", choices=["a2", "snr"])
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--a2", type=float)
    p.add_argument("--snr-db", dest="snr_db", type=float)
    for link in ("sd", "sr", "rd"):
        p.add_argument(f"--omega-{link}", dest=f"omega_{link}", type=float,
                       help="amplitude; the mean power is its square")
        p.add_argument(f"--k-{link}", dest=f"k_{link}", type=float)
    p.add_argument("--method", choices=["analytic", "montecarlo", "both"])
    p.add_argument("--scheme", choices=["onoma", "cnoma", "both"])
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--convention", choices=["paper", "model"],
                   help="paper: additive O-NOMA totals; model: per-draw direct/relay selection")
    p.add_argument("--output", choices=["csv", "json"])
    p.add_argument("-o", "--out", metavar="PATH", help="write rows here instead of stdout")
    return p


def resolve_spec(args: argparse.Namespace) -> SweepSpec:
    spec = SweepSpec()
    if args.preset:
        pr = PRESETS[args.preset]
        for name in ("variable", "start", "stop", "step", "a2", "snr_db",
                     "omega_sd", "omega_sr", "omega_rd", "k_sd", "k_sr", "k_rd"):
            setattr(spec, name, getattr(pr, name))
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        known = {f.name for f in fields(SweepSpec)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for k, v in data.items():
            setattr(spec, k, v)
    for name in ("variable", "start", "stop", "step", "a2", "snr_db", "omega_sd", "omega_sr",
                 "omega_rd", "k_sd", "k_sr", "k_rd", "samples", "seed", "workers",
                 "convention", "output"):
        v = getattr(args, name)
        if v is not None:
            setattr(spec, name, v)
    # an explicit sweep variable without explicit bounds falls back to the default grid
    if args.variable is not None and (args.preset is None or PRESETS[args.preset].variable != args.variable):
        if args.start is None and args.stop is None and args.step is None:
            spec.start = spec.stop = spec.step = None
    if args.method:
        spec.methods = _expand(args.method, ("analytic", "montecarlo"))
    if args.scheme:
        spec.schemes = _expand(args.scheme, ("onoma", "cnoma"))
    _validate(spec)
    return spec


def _validate(spec: SweepSpec) -> None:
    for name, allowed in _CHOICES.items():
        if getattr(spec, name) not in allowed:
            raise ConfigError(f"{name} must be one of {allowed}, got {getattr(spec, name)!r}")
    if not spec.methods or set(spec.methods) - {"analytic", "montecarlo"}:
        raise ConfigError(f"bad methods {spec.methods}")
    if not spec.schemes or set(spec.schemes) - {"onoma", "cnoma"}:
        raise ConfigError(f"bad schemes {spec.schemes}")
    if spec.samples < 100:
        raise ConfigError("samples must be >= 100")
    if not (0 <= spec.seed < 1 << 64):
        raise ConfigError("seed must be a 64-bit unsigned integer")
    if spec.workers < 1:
        raise ConfigError("workers must be >= 1")
    if spec.convention == "model" and "analytic" in spec.methods and "onoma" in spec.schemes:
        raise ConfigError("analytic O-NOMA rates exist only for --convention paper")
    spec.methods = [m for m in ("analytic", "montecarlo") if m in spec.methods]
    spec.schemes = [s for s in ("onoma", "cnoma") if s in spec.schemes]


def compute_rows(spec: SweepSpec) -> tuple[list[dict], bool]:
    """All output rows and whether every analytic/MC pair agreed."""
    links = spec.links()
    pts = spec.points()
    systems = [SystemParams.from_db(a2, snr) for a2, snr in pts]

    ana: list[analytic.SchemeTotals] = []
    if "analytic" in spec.methods:
        ana = [analytic.scheme_totals(*links, s) for s in systems]
    mc: dict[str, list] = {}
    if "montecarlo" in spec.methods:
        onoma_kind = (EstimatorKind.PAPER_FAITHFUL if spec.convention == "paper"
                      else EstimatorKind.SELECTION_BASED)
        kinds = {"onoma": onoma_kind, "cnoma": EstimatorKind.CNOMA}
        for scheme in spec.schemes:
            mc[scheme] = estimate_many(links, systems, kinds[scheme], spec.samples, spec.seed, spec.workers)

    rows, agree = [], True
    for p, (a2, snr) in enumerate(pts):
        for scheme in spec.schemes:
            base = {"a2": a2, "snr_db": snr, "scheme": scheme}
            a_row = m_row = None
            if ana:
                r = getattr(ana[p], scheme)
                a_row = dict(base, method="analytic", rate_s1=r.s1, rate_s2=r.s2,
                             rate_sum=r.sum, std_error_sum=None)
                rows.append(a_row)
            if mc:
                e = mc[scheme][p]
                m_row = dict(base, method="montecarlo", rate_s1=e["s1"].mean, rate_s2=e["s2"].mean,
                             rate_sum=e["sum"].mean, std_error_sum=e["sum"].std_error)
                rows.append(m_row)
            if a_row and m_row:
                tol = 3.0 * m_row["std_error_sum"] + MISMATCH_SLACK
                if abs(a_row["rate_sum"] - m_row["rate_sum"]) > tol:
                    agree = False
                    rows.append(dict(base, method="diagnostic",
                                     rate_s1=a_row["rate_s1"] - m_row["rate_s1"],
                                     rate_s2=a_row["rate_s2"] - m_row["rate_s2"],
                                     rate_sum=a_row["rate_sum"] - m_row["rate_sum"],
                                     std_error_sum=tol))
    return rows, agree


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return format(float(v), ".6g")


def write_rows(rows: list[dict], fmt: str, sink: TextIO) -> None:
    if fmt == "csv":
        w = csv.writer(sink, lineterminator="\n")
        w.writerow(HEADER)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in HEADER])
    else:
        for r in rows:
            rec = {k: (r[k] if isinstance(r[k], str) or r[k] is None else float(_fmt(r[k])))
                   for k in HEADER}
            sink.write(json.dumps(rec) + "\n")


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    try:
        spec = resolve_spec(args)
        rows, agree = compute_rows(spec)
    except (ValueError, TypeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (analytic.SeriesTruncationError, FloatingPointError, OverflowError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC

    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_rows(rows, spec.output, fh)
    else:
        write_rows(rows, spec.output, stdout)
    if not agree:
        print("analytic and Monte Carlo sums disagree beyond 3 std errors + "
              f"{MISMATCH_SLACK}; see diagnostic rows", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    sys.exit(run())
