"""Command-line interface: ``becldpc <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 a simulated point used its whole
trial budget without a single frame error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from pathlib import Path

from . import __version__
from .bounds import BoundKind, curve, lower_sphere_packing
from .decode import SwmlConfig
from .ensembles import EnsembleSpec, sample_gallager, sample_ru
from .errors import (
    ConfigError,
    ContractViolation,
    DegreeMatrixParseError,
    EnumerationBudgetError,
)
from .formats import dumps_alist, read_alist
from .gf2 import rank
from .manifest import build_manifest, manifest_path, write_manifest
from .qc import QcCode, assemble_irregular_base, fixture_path, read_degree_matrix
from .rng import make_rng
from .sim import ChannelConfig, run_fer
from .spectrum import (
    DEFAULT_MAX_DIM,
    avg_spectrum_even,
    avg_spectrum_gallager,
    avg_spectrum_linear,
    average_spectra,
    empirical_spectrum,
)
from .thresholds import ml_threshold_lower, table2, threshold_residual, truncate

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_ERRORS = 3

# QC code simulated when neither --code nor --matrix is given
DEFAULT_CODE = "irregular-12x24.dm"
DEFAULT_M0 = 200


class UsageError(ValueError):
    """Bad flag combination detected after argument parsing."""


def parse_grid(text: str) -> list[float]:
    """``a:b:step`` (inclusive), a comma list, or a single value."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} must look like start:stop:step")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise UsageError(f"grid {text!r} needs step > 0 and stop >= start")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return [round(a + i * step, 12) for i in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def resolve_path(text: str) -> Path:
    """Existing path, or a shipped fixture matched by file name (hyphens optional)."""
    p = Path(text)
    if p.exists():
        return p
    wanted = p.name.replace("-", "")
    if not wanted.endswith(".dm"):
        wanted += ".dm"
    folder = fixture_path("")
    for cand in sorted(folder.iterdir()):
        if cand.name.replace("-", "") == wanted:
            return cand
    raise FileNotFoundError(f"no such file or shipped fixture: {text}")


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, text: str, params: dict, *, seed=None, fixtures=(), extra_outputs=()):
    """Write ``text`` to ``--out`` plus a manifest, or to stdout."""
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.write_text(text)
    outputs = [out, *extra_outputs]
    if not args.no_manifest:
        mpath = manifest_path(out)
        man = build_manifest(args.command, params, seed=seed, fixtures=fixtures,
                             outputs=[*outputs, mpath])
        write_manifest(mpath, man)
    print(f"wrote {out}", file=sys.stderr)


def _fmt_log(v: float) -> str:
    return f"{v:.9f}" if math.isfinite(v) else "-inf"


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func",)}


# ---------------------------------------------------------------------------
# subcommands


def cmd_spectrum(args) -> int:
    fixtures = []
    if args.matrix:
        path = resolve_path(args.matrix)
        fixtures.append(path)
        h = read_alist(path)
        spec = empirical_spectrum(h, max_dim=args.max_dim)
        label = f"code {path.name}"
    elif args.sample:
        es = EnsembleSpec(args.J, args.K, args.n)
        rng = make_rng(args.seed)
        draw = sample_gallager if args.sample == "gallager" else (lambda s, g: sample_ru(s, g)[0])
        spec = average_spectra(empirical_spectrum(draw(es, rng), max_dim=args.max_dim)
                               for _ in range(args.count))
        label = f"{args.sample} sample mean ({args.count})"
    elif args.ensemble == "gallager":
        spec = avg_spectrum_gallager(EnsembleSpec(args.J, args.K, args.n))
        label = "gallager average"
    elif args.ensemble in ("linear", "even"):
        if args.r is None or args.n is None:
            raise UsageError(f"--ensemble {args.ensemble} needs --n and --r")
        fn = avg_spectrum_linear if args.ensemble == "linear" else avg_spectrum_even
        spec = fn(args.n, args.r)
        label = f"{args.ensemble} average"
    else:
        raise UsageError("give one of --ensemble, --matrix or --sample")
    logs = spec.log10()
    rows = [(w, c.numerator, c.denominator, _fmt_log(lg)) for w, (c, lg) in enumerate(zip(spec.coeffs, logs))]
    text = _rows_to_csv(("w", "coefficient_num", "coefficient_den", "log10"), rows)
    extra = []
    if args.plot:
        from .plotting import plot_spectrum

        extra.append(plot_spectrum([(label, logs)], args.plot, title=label))
    _emit(args, text, _params(args), seed=args.seed if args.sample else None,
          fixtures=fixtures, extra_outputs=extra)
    return EXIT_OK


def _bound_params(args, kind: BoundKind) -> tuple[dict, list]:
    need = {
        BoundKind.SPHERE_PACKING: ("n", "k"),
        BoundKind.TIGHT_LOWER: ("n", "k", "dmin"),
        BoundKind.RANDOM_LINEAR: ("n",),
        BoundKind.S_BOUND: ("n",),
        BoundKind.R_BOUND_RU: ("n", "J", "K"),
        BoundKind.R_BOUND_GALLAGER: ("n", "J", "K"),
    }[kind]
    missing = [f"--{f}" for f in need if getattr(args, f) is None]
    if missing:
        raise UsageError(f"--kind {kind.value} needs {' '.join(missing)}")
    fixtures = []
    if kind is BoundKind.SPHERE_PACKING:
        return {"n": args.n, "k": args.k}, fixtures
    if kind is BoundKind.TIGHT_LOWER:
        return {"n": args.n, "k": args.k, "d0": args.dmin}, fixtures
    if kind is BoundKind.RANDOM_LINEAR:
        r = args.r if args.r is not None else (args.n - args.k if args.k is not None else None)
        if r is None:
            raise UsageError("--kind random-linear needs --r or --k")
        return {"n": args.n, "r": r, "exact_rank_product": not args.approx_rank_product}, fixtures
    if kind is BoundKind.S_BOUND:
        if args.matrix:
            path = resolve_path(args.matrix)
            fixtures.append(path)
            spec = empirical_spectrum(read_alist(path), max_dim=args.max_dim)
        elif args.J is not None and args.K is not None:
            spec = avg_spectrum_gallager(EnsembleSpec(args.J, args.K, args.n))
        elif args.r is not None:
            spec = avg_spectrum_linear(args.n, args.r)
        else:
            raise UsageError("--kind s-bound needs --matrix, --J/--K, or --r for the spectrum")
        d_min = args.dmin if args.dmin is not None else (spec.min_distance() or args.n)
        return {"spectrum": spec, "d_min": d_min}, fixtures
    return {"n": args.n, "j": args.J, "k_row": args.K}, fixtures


def cmd_bounds(args) -> int:
    kind = BoundKind(args.kind)
    grid_text = args.eps_grid or args.eps
    if grid_text is None:
        raise UsageError("give --eps or --eps-grid")
    grid = parse_grid(grid_text)
    params, fixtures = _bound_params(args, kind)
    bc = curve(kind, grid, **params)
    rows = [(repr(e), f"{v:.12e}", _fmt_log(math.log10(v) if v > 0 else -math.inf)) for e, v in bc.points]
    text = _rows_to_csv(("epsilon", "p_e", "log10_p_e"), rows)
    extra = []
    if args.plot:
        from .plotting import plot_curves

        extra.append(plot_curves([(kind.value, bc.eps, bc.values)], args.plot,
                                 title=f"{kind.value} bound", ylabel="frame error probability"))
    if args.plot_script:
        _write_plot_script(args, "epsilon", "p_e")
        extra.append(Path(args.plot_script))
    _emit(args, text, _params(args) | {"metadata": bc.params}, fixtures=fixtures, extra_outputs=extra)
    return EXIT_OK


def cmd_threshold(args) -> int:
    if args.table2:
        rows = [(c["J"], c["K"], c["rate"], c["threshold_8dp"], repr(c["threshold"]),
                 f"{threshold_residual(c['threshold'], c['J'], c['K']):.3e}") for c in table2()]
    elif args.J is not None and args.K is not None:
        t = ml_threshold_lower(args.J, args.K)
        rows = [(args.J, args.K, f"{args.K - args.J}/{args.K}", truncate(t), repr(t),
                 f"{threshold_residual(t, args.J, args.K):.3e}")]
    else:
        raise UsageError("give --table2 or both --J and --K")
    text = _rows_to_csv(("J", "K", "rate", "threshold_8dp", "threshold", "residual"), rows)
    _emit(args, text, _params(args))
    return EXIT_OK


def _load_target(args):
    if args.code and args.matrix:
        raise UsageError("give only one of --code and --matrix")
    if args.code:
        path = resolve_path(args.code)
        dm = read_degree_matrix(path)
        if args.assemble:
            dm = assemble_irregular_base(dm)
        if args.M0 is None:
            raise UsageError("--code needs --M0")
        return QcCode(dm, args.M0), [path]
    if args.matrix:
        path = resolve_path(args.matrix)
        return read_alist(path), [path]
    if args.M0 is not None or args.assemble:
        raise UsageError("--M0/--assemble need --code")
    path = fixture_path(DEFAULT_CODE)
    return QcCode(read_degree_matrix(path), DEFAULT_M0), [path]


def _write_plot_script(args, x, y):
    from .plotting import plot_script

    if args.out is None:
        raise UsageError("--plot-script needs --out so the script knows which CSV to read")
    png = Path(args.out).with_suffix(".png").name
    Path(args.plot_script).write_text(plot_script([args.out], x=x, y=y, out=png))


def cmd_simulate(args) -> int:
    target, fixtures = _load_target(args)
    grid = parse_grid(args.eps)
    swml = None
    if args.decoder == "swml":
        if args.W is None:
            raise UsageError("--decoder swml needs --W")
        swml = SwmlConfig(args.W, args.shift, args.passes, not args.no_repeel)
    cfg = ChannelConfig(0.0, args.seed, args.trials, args.max_errors)
    t0 = time.perf_counter()
    sc = run_fer(target, args.decoder, grid, cfg, threads=args.threads,
                 start_trial=args.start_trial, swml=swml, debug=args.debug)
    elapsed = time.perf_counter() - t0
    extra = []
    if args.plot:
        from .plotting import plot_curves

        extra.append(plot_curves([(f"{args.decoder} FER", sc.eps, sc.fer)], args.plot,
                                 title=f"{args.decoder} decoding"))
    if args.plot_script:
        _write_plot_script(args, "epsilon", "fer")
        extra.append(Path(args.plot_script))
    params = _params(args) | {"decoder_config": sc.params, "wall_time_s": round(elapsed, 3)}
    _emit(args, sc.to_csv(), params, seed=args.seed, fixtures=fixtures, extra_outputs=extra)
    starved = sc.zero_error_points()
    if starved:
        eps_list = ", ".join(repr(p.eps) for p in starved)
        print(f"trial budget exhausted with zero frame errors at eps = {eps_list}", file=sys.stderr)
        return EXIT_NO_ERRORS
    return EXIT_OK


def cmd_gen_code(args) -> int:
    fixtures = []
    if args.qc:
        path = resolve_path(args.qc)
        fixtures.append(path)
        dm = read_degree_matrix(path)
        if args.assemble:
            dm = assemble_irregular_base(dm)
        if args.M0 is None:
            raise UsageError("--qc needs --M0")
        h = QcCode(dm, args.M0).h
    elif args.ensemble:
        if None in (args.J, args.K, args.n):
            raise UsageError("--ensemble needs --J, --K and --n")
        spec = EnsembleSpec(args.J, args.K, args.n)
        rng = make_rng(args.seed)
        h = sample_gallager(spec, rng) if args.ensemble == "gallager" else sample_ru(spec, rng)[0]
    else:
        raise UsageError("give --ensemble or --qc")
    print(f"{h.rows}x{h.cols} parity-check matrix, rank {rank(h)}", file=sys.stderr)
    _emit(args, dumps_alist(h), _params(args), seed=args.seed if args.ensemble else None,
          fixtures=fixtures)
    return EXIT_OK


def cmd_report(args) -> int:
    """Tables and figures that run in well under a minute."""
    from .plotting import plot_curves, plot_spectrum

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    rows = [(c["J"], c["K"], c["rate"], c["threshold_8dp"]) for c in table2()]
    p = out / "thresholds.csv"
    p.write_text(_rows_to_csv(("J", "K", "rate", "threshold_8dp"), rows))
    written.append(p)

    es = EnsembleSpec(3, 6, 48)
    avg = avg_spectrum_gallager(es)
    rng = make_rng(args.seed)
    emp = average_spectra(empirical_spectrum(sample_gallager(es, rng)) for _ in range(args.samples))
    p = out / "spectrum_gallager_3_6_48.csv"
    p.write_text(_rows_to_csv(("weight", "average", "empirical_mean"),
                              [(w, f"{float(a):.9g}", f"{float(e):.9g}")
                               for w, (a, e) in enumerate(zip(avg.coeffs, emp.coeffs))]))
    written.append(p)
    written.append(plot_spectrum([("ensemble average", avg.log10()),
                                  (f"mean of {args.samples} samples", emp.log10())],
                                 out / "spectrum_gallager_3_6_48.png",
                                 title="(3,6) Gallager ensemble, n = 48"))

    grid = parse_grid("0.20:0.50:0.01")
    n, j, k_row = 96, 4, 8
    curves = [
        ("sphere packing", curve("sphere", grid, n=n, k=n // 2)),
        ("random linear", curve("random-linear", grid, n=n, r=n // 2)),
        ("S-bound", curve("s-bound", grid, spectrum=avg_spectrum_gallager(EnsembleSpec(j, k_row, n)),
                          d_min=1)),
        ("R-bound RU", curve("rbound-ru", grid, n=n, j=j, k_row=k_row)),
        ("R-bound Gallager", curve("rbound-gallager", grid, n=n, j=j, k_row=k_row)),
    ]
    p = out / "bounds_n96_4_8.csv"
    p.write_text(_rows_to_csv(["epsilon"] + [c[0] for c in curves],
                              [[repr(e)] + [f"{c[1].values[i]:.9e}" for c in curves]
                               for i, e in enumerate(grid)]))
    written.append(p)
    written.append(plot_curves([(name, c.eps, c.values) for name, c in curves],
                               out / "bounds_n96_4_8.png", title="(4,8), n = 96",
                               ylabel="frame error probability", markers=False))

    h = sample_gallager(EnsembleSpec(3, 6, 96), make_rng(args.seed))
    sim_grid = parse_grid("0.25:0.45:0.025")
    cfg = ChannelConfig(0.0, args.seed, args.trials, 100)
    sims = [(name, run_fer(h, name, sim_grid, cfg)) for name in ("bp", "ml")]
    p = out / "simulation_gallager_3_6_96.csv"
    p.write_text(_rows_to_csv(("epsilon", "decoder", "trials", "frame_errors", "fer"),
                              [(repr(pt.eps), name, pt.trials, pt.frame_errors, f"{pt.fer:.6e}")
                               for name, sc in sims for pt in sc.points]))
    written.append(p)
    sphere = [lower_sphere_packing(96, 96 - rank(h), e) for e in sim_grid]
    written.append(plot_curves([(f"{name} simulated", sc.eps, sc.fer) for name, sc in sims]
                               + [("sphere packing", sim_grid, sphere)],
                               out / "simulation_gallager_3_6_96.png",
                               title="(3,6) Gallager code, n = 96"))

    mpath = out / "report.manifest.json"
    write_manifest(mpath, build_manifest("report", _params(args), seed=args.seed,
                                         outputs=[*written, mpath]))
    for w in written:
        print(w)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_output(p):
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--no-manifest", action="store_true",
                   help="do not write PATH.manifest.json next to --out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="becldpc",
        description="LDPC codes on the binary erasure channel: spectra, ML bounds, "
                    "thresholds, QC code construction and decoder simulation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("spectrum", help="weight spectra as CSV",
                       description="Exact ensemble-average or enumerated weight spectra.")
    p.add_argument("--ensemble", choices=("linear", "even", "gallager"),
                   help="ensemble-average spectrum")
    p.add_argument("--matrix", metavar="ALIST", help="enumerate the code of this alist matrix")
    p.add_argument("--sample", choices=("gallager", "ru"),
                   help="average the enumerated spectra of sampled codes")
    p.add_argument("--count", type=int, default=100, help="number of sampled codes (default 100)")
    p.add_argument("--J", type=int, help="column weight")
    p.add_argument("--K", type=int, help="row weight")
    p.add_argument("--n", type=int, help="code length")
    p.add_argument("--r", type=int, help="number of checks (linear, even)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM,
                   help=f"largest code dimension to enumerate (default {DEFAULT_MAX_DIM})")
    p.add_argument("--plot", metavar="PNG", help="also draw log10 spectrum to this file")
    _add_output(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("bounds", help="ML frame-error bounds as CSV",
                       description="Lower and upper bounds on the ML frame-error probability.")
    p.add_argument("--kind", required=True, choices=[k.value for k in BoundKind], help="bound type")
    p.add_argument("--n", type=int, help="code length")
    p.add_argument("--k", type=int, help="code dimension")
    p.add_argument("--r", type=int, help="redundancy (random-linear, s-bound linear spectrum)")
    p.add_argument("--J", type=int, help="column weight")
    p.add_argument("--K", type=int, help="row weight")
    p.add_argument("--dmin", type=int, help="minimum distance (tight-lower, s-bound)")
    p.add_argument("--matrix", metavar="ALIST", help="s-bound from the enumerated spectrum of this code")
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM,
                   help=f"largest code dimension to enumerate (default {DEFAULT_MAX_DIM})")
    p.add_argument("--approx-rank-product", action="store_true",
                   help="random-linear: use 2^(v-r) instead of the exact rank product")
    p.add_argument("--eps", metavar="GRID", help="erasure probability, list a,b,c or range a:b:step")
    p.add_argument("--eps-grid", metavar="GRID", help="same as --eps")
    p.add_argument("--plot", metavar="PNG", help="also draw the curve to this file")
    p.add_argument("--plot-script", metavar="PY", help="write a standalone plotting script for --out")
    _add_output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("threshold", help="ML-threshold lower bounds",
                       description="Lower bound on the ML threshold of (J,K)-regular codes.")
    p.add_argument("--table2", action="store_true", help="all tabulated (J,K) cells")
    p.add_argument("--J", type=int, help="column weight")
    p.add_argument("--K", type=int, help="row weight")
    _add_output(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("simulate", help="Monte-Carlo FER/BER",
                       description="Monte-Carlo FER and BER of BP, ML or sliding-window decoding.")
    p.add_argument("--code", metavar="DM",
                   help="degree-matrix file of a QC code (or fixture name); without --code or "
                        f"--matrix the shipped {DEFAULT_CODE} base with M0={DEFAULT_M0} is used")
    p.add_argument("--assemble", action="store_true",
                   help="prefix the degree matrix with the bidiagonal accumulator block")
    p.add_argument("--M0", type=int, help="lifting factor (blocks) for --code")
    p.add_argument("--matrix", metavar="ALIST", help="parity-check matrix in alist format")
    p.add_argument("--decoder", choices=("bp", "ml", "swml"), default="ml", help="decoder (default ml)")
    p.add_argument("--W", type=int, help="swml window size in blocks")
    p.add_argument("--shift", type=int, default=1, help="swml window shift in blocks (default 1)")
    p.add_argument("--passes", type=int, default=15, help="swml maximum passes (default 15)")
    p.add_argument("--no-repeel", action="store_true",
                   help="swml: peel only once up front, not after each window")
    p.add_argument("--eps", required=True, metavar="GRID",
                   help="erasure probability, list a,b,c or range a:b:step")
    p.add_argument("--trials", type=int, default=10_000, help="trial budget per point (default 10000)")
    p.add_argument("--max-errors", type=int, default=100,
                   help="stop a point after this many frame errors, 0 = never (default 100)")
    p.add_argument("--seed", type=int, default=0, help="channel seed (default 0)")
    p.add_argument("--start-trial", type=int, default=0, help="first trial index, to resume a run")
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--debug", action="store_true", help="cross-check ML outcomes against a rank test")
    p.add_argument("--plot", metavar="PNG", help="also draw the FER curve to this file")
    p.add_argument("--plot-script", metavar="PY", help="write a standalone plotting script for --out")
    _add_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen-code", help="write a parity-check matrix as alist",
                       description="Sample an ensemble matrix or expand a QC code to alist.")
    p.add_argument("--ensemble", choices=("gallager", "ru"), help="ensemble to sample")
    p.add_argument("--J", type=int, help="column weight")
    p.add_argument("--K", type=int, help="row weight")
    p.add_argument("--n", type=int, help="code length")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--qc", metavar="DM", help="degree-matrix file to expand (or fixture name)")
    p.add_argument("--assemble", action="store_true",
                   help="prefix the degree matrix with the bidiagonal accumulator block")
    p.add_argument("--M0", type=int, help="lifting factor (blocks) for --qc")
    _add_output(p)
    p.set_defaults(func=cmd_gen_code)

    p = sub.add_parser("report", help="tables, CSVs and PNG figures into a directory",
                       description="Write thresholds, spectra, bounds and a small simulation, "
                                   "each as CSV plus a PNG figure.")
    p.add_argument("--out-dir", required=True, metavar="DIR", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling and channel (default 0)")
    p.add_argument("--samples", type=int, default=20, help="sampled codes for the spectrum (default 20)")
    p.add_argument("--trials", type=int, default=2000, help="simulation trial budget (default 2000)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, ContractViolation, DegreeMatrixParseError,
            EnumerationBudgetError, FileNotFoundError) as exc:
        print(f"becldpc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"becldpc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
