"""Command line interface: translate, inspect, synth and eval."""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BrailleError
from .evaluation import (SUBSTITUTION_NOTE, Confusion, char_accuracy, format_report, metrics)
from .image import binary_to_gray, load_gray, save_gray, save_rgb
from .pipeline import PageResult, PipelineConfig, recognize, recognize_stepwise
from .preprocess import PreprocessConfig
from .synth import compare_dots, load_synth_spec, read_truth, render, with_seed, write_truth
from .translate import cells_to_text, default_table, load_mapping, translate_cells

log = logging.getLogger("brailletext")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PAGE_FAILED = 2
EXIT_BELOW_BAR = 3

TABLE_ENV = "BRAILLE_TABLE"
STAGE_FILES = ("01-bhe", "02-median", "03-binary", "04-closed")
OVERLAY_FILES = ("05-points", "06-margins", "07-grid")


class UsageError(Exception):
    pass


# --- configuration -----------------------------------------------------------

def _table_path(args):
    return args.table or os.environ.get(TABLE_ENV) or None


def _load_table(path):
    if path is None:
        return default_table()
    try:
        return load_mapping(path)
    except OSError as exc:
        raise UsageError(f"cannot read table {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config(args) -> PipelineConfig:
    try:
        pre = PreprocessConfig(median_window=args.median_window,
                               closing_radius=args.closing_radius,
                               otsu_range_fraction=args.otsu_fraction)
        return PipelineConfig(preprocess=pre, fill_threshold=args.fill_threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# --- stage dumps -------------------------------------------------------------

def _gray_rgb(binary):
    # lighten the dots so overlays stay readable
    base = np.where(binary.data, 160, 255).astype(np.uint8)
    return np.repeat(base[:, :, None], 3, axis=2)


def _plot(rgb, x, y, color):
    h, w = rgb.shape[:2]
    xi, yi = int(round(x)), int(round(y))
    if 0 <= xi < w and 0 <= yi < h:
        rgb[yi, xi] = color


def _segment(rgb, a, b, color):
    n = int(max(abs(b[0] - a[0]), abs(b[1] - a[1]))) + 1
    for t in np.linspace(0.0, 1.0, n + 1):
        _plot(rgb, a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), color)


def _points_overlay(result: PageResult):
    rgb = _gray_rgb(result.binary)
    for p in result.detection.points:
        r = max(result.detection.delta_s / 2, 2)
        _segment(rgb, (p.x - r, p.y), (p.x + r, p.y), (220, 0, 0))
        _segment(rgb, (p.x, p.y - r), (p.x, p.y + r), (220, 0, 0))
    return rgb


def _margins_overlay(result: PageResult):
    rgb = _gray_rgb(result.binary)
    h, w = rgb.shape[:2]
    colors = {"upper": (220, 0, 0), "lower": (0, 150, 0), "left": (0, 0, 220), "right": (200, 120, 0)}
    lines = result.structure.diagnostics["margin_lines"]
    for side, line in lines.items():
        span = w if line.horizontal else h
        _segment(rgb, line.at(0), line.at(span - 1), colors[side])
        for p in result.structure.diagnostics["marginal_points"][side]:
            _segment(rgb, (p.x - 2, p.y), (p.x + 2, p.y), colors[side])
    s = result.structure
    _segment(rgb, (s.p0_x - 4, s.p0_y - 4), (s.p0_x + 4, s.p0_y + 4), (0, 0, 0))
    _segment(rgb, (s.p0_x - 4, s.p0_y + 4), (s.p0_x + 4, s.p0_y - 4), (0, 0, 0))
    return rgb


def _grid_overlay(result: PageResult):
    rgb = _gray_rgb(result.binary)
    grid = result.grid
    (ux, uy), (vx, vy) = grid.structure.axes()
    half = grid.side / 2
    lines, cols = grid.shape
    for i in range(lines):
        for j in range(cols):
            corners = grid.cell_corners(i, j)
            for k in range(4):
                _segment(rgb, corners[k], corners[(k + 1) % 4], (0, 0, 220))
            code = result.codes[i][j]
            for d, (cx, cy) in enumerate(grid.centers[i, j]):
                color = (220, 0, 0) if code[d] == "1" else (0, 160, 0)
                sq = [(cx + a * ux + b * vx, cy + a * uy + b * vy)
                      for a, b in ((-half, -half), (half, -half), (half, half), (-half, half))]
                for k in range(4):
                    _segment(rgb, sq[k], sq[(k + 1) % 4], color)
    return rgb


def format_structure(s) -> str:
    out = [f"{key} {value}" for key, value in s.fields().items()]
    out.append(f"theta_b_deg {math.degrees(s.theta_b):.2f}")
    return "\n".join(out) + "\n"


def dump_stages(result: PageResult, outdir: Path, ext=".png"):
    """Write every stage ``result`` reached; returns the file names written."""
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if result.stages is not None:
        st = result.stages
        for name, img in zip(STAGE_FILES, (st.enhanced, st.denoised, st.binary, st.closed)):
            if img is None:
                continue
            if not hasattr(img, "histogram"):
                img = binary_to_gray(img)
            save_gray(img, outdir / (name + ext))
            written.append(name + ext)
    if result.detection is not None:
        save_rgb(_points_overlay(result), outdir / (OVERLAY_FILES[0] + ext))
        written.append(OVERLAY_FILES[0] + ext)
    if result.structure is not None:
        save_rgb(_margins_overlay(result), outdir / (OVERLAY_FILES[1] + ext))
        written.append(OVERLAY_FILES[1] + ext)
        (outdir / "structure.txt").write_text(format_structure(result.structure), encoding="utf-8")
        written.append("structure.txt")
    if result.grid is not None and result.codes is not None:
        save_rgb(_grid_overlay(result), outdir / (OVERLAY_FILES[2] + ext))
        written.append(OVERLAY_FILES[2] + ext)
    return written


# --- per-page work -------------------------------------------------------------

def _translate_one(job):
    """Worker: ``(path, config, table_path, inspect_dir) -> (status, text, report)``."""
    path, config, table_path, inspect_dir = job
    table = _load_table(table_path)
    report = [f"page {path}"]
    try:
        img = load_gray(path)
    except (OSError, ValueError) as exc:
        report.append(f"  error: cannot read image: {exc}")
        return "failed", None, "\n".join(report)
    result = PageResult(stages=None)
    status = "ok"
    try:
        for _ in recognize_stepwise(img, config, table, result):
            pass
    except BrailleError as exc:
        report.append(f"  error: {type(exc).__name__}: {exc}")
        status = "failed"
    if inspect_dir is not None:
        dump_stages(result, Path(inspect_dir) / Path(path).stem)
    if status == "ok":
        if result.blank:
            report.append("  blank page: no Braille points")
        else:
            s = result.structure
            for key, value in s.fields().items():
                report.append(f"  {key} {value}")
            report.append(f"  theta_b_deg {math.degrees(s.theta_b):.2f}")
            for u in result.unknown:
                report.append(f"  unknown code {u.code} at line {u.line + 1} col {u.col + 1}")
    return status, result.text if status == "ok" else None, "\n".join(report)


def _run_jobs(fn, jobs, workers):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def _text_bytes(text):
    return (text + "\n" if text else "").encode("utf-8")


# --- subcommands -------------------------------------------------------------------

def cmd_translate(args) -> int:
    config = _config(args)
    table_path = _table_path(args)
    _load_table(table_path)
    to_stdout = args.output == "-"
    if to_stdout and len(args.images) != 1:
        raise UsageError("'-o -' takes exactly one image")
    if args.output and not to_stdout:
        Path(args.output).mkdir(parents=True, exist_ok=True)
    jobs = [(p, config, table_path, args.inspect_dir) for p in args.images]
    results = _run_jobs(_translate_one, jobs, args.jobs)
    code = EXIT_OK
    for path, (status, text, report) in zip(args.images, results):
        print(report, file=sys.stderr)
        if status != "ok":
            code = EXIT_PAGE_FAILED
            continue
        if to_stdout:
            sys.stdout.buffer.write(_text_bytes(text))
            sys.stdout.flush()
            continue
        out = Path(args.output) / (Path(path).stem + ".txt") if args.output else Path(path).with_suffix(".txt")
        out.write_bytes(_text_bytes(text))
    return code


def cmd_inspect(args) -> int:
    config = _config(args)
    table = _load_table(_table_path(args))
    try:
        img = load_gray(args.image)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read image {args.image}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    outdir = Path(args.inspect_dir or args.output or Path(args.image).stem + "-stages")
    result = PageResult(stages=None)
    failure = None
    try:
        for _ in recognize_stepwise(img, config, table, result):
            pass
    except BrailleError as exc:
        failure = f"{type(exc).__name__}: {exc}"
    if result.blank:
        failure = "blank page: no Braille points"
    written = dump_stages(result, outdir)
    for name in written:
        print(outdir / name)
    if failure:
        print(f"error: {failure}", file=sys.stderr)
        return EXIT_PAGE_FAILED
    return EXIT_OK


def cmd_synth(args) -> int:
    table = _load_table(_table_path(args))
    try:
        spec = load_synth_spec(args.spec, table=table)
    except OSError as exc:
        raise UsageError(f"cannot read spec {args.spec}: {exc.strerror or exc}") from exc
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{args.spec}: {exc}") from exc
    if args.seed is not None:
        spec = with_seed(spec, args.seed)
    out = Path(args.output) if args.output else Path(args.spec).with_suffix(".pgm")
    img, truth = render(spec)
    save_gray(img, out)
    write_truth(truth, out.with_suffix(".truth"))
    print(out)
    return EXIT_OK


def _bar_missed(accuracy, args):
    return args.min_accuracy is not None and accuracy * 100 < args.min_accuracy


def cmd_eval(args) -> int:
    if args.counts is not None:
        tp, fp, tn, fn = args.counts
        try:
            c = Confusion(t_p=tp, t_n=tn, f_p=fp, f_n=fn)
            m = metrics(c)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        print(format_report(c, m))
        return EXIT_BELOW_BAR if _bar_missed(m.accuracy, args) else EXIT_OK

    table = _load_table(_table_path(args))
    if args.text is not None:
        pred_path, truth_path = args.text
        try:
            pred = Path(pred_path).read_text(encoding="utf-8").rstrip("\n")
            true = Path(truth_path).read_text(encoding="utf-8").rstrip("\n")
        except OSError as exc:
            raise UsageError(f"cannot read {exc.filename}: {exc.strerror}") from exc
        cmp = char_accuracy(pred, true, table)
        print(format_report(cmp.confusion, cmp.metrics, SUBSTITUTION_NOTE))
        return EXIT_BELOW_BAR if _bar_missed(cmp.metrics.accuracy, args) else EXIT_OK

    if args.image is None:
        raise UsageError("eval needs an image, --text PRED TRUTH or --counts TP FP TN FN")
    truth_path = args.truth or str(Path(args.image).with_suffix(".truth"))
    try:
        img = load_gray(args.image)
        truth = read_truth(truth_path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read input: {exc}") from exc
    try:
        result = recognize(img, _config(args), table)
    except BrailleError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PAGE_FAILED
    true_cells, _ = translate_cells(truth.codes, table)
    cmp = char_accuracy(result.cells or [], true_cells)
    print("characters")
    print(format_report(cmp.confusion, cmp.metrics, SUBSTITUTION_NOTE))
    if result.detection is not None:
        tol = result.detection.delta_s / 2
        found = result.detection.points
    else:
        tol, found = 1.0, []
    dc = compare_dots(found, truth, tol)
    c = Confusion(t_p=dc.tp, t_n=dc.tn, f_p=dc.fp, f_n=dc.fn)
    if c.total:
        print("dots")
        print(format_report(c, metrics(c), f"matched within {tol:.2f} px"))
    if args.verbose:
        print(cells_to_text(result.cells or []), file=sys.stderr)
    return EXIT_BELOW_BAR if _bar_missed(cmp.metrics.accuracy, args) else EXIT_OK


# --- argument parsing -------------------------------------------------------------

def _common(p, pipeline=True):
    p.add_argument("--table", help=f"mapping table (default: ${TABLE_ENV} or the built-in table)")
    if pipeline:
        p.add_argument("--median-window", type=int, default=3, help="median filter window (odd)")
        p.add_argument("--closing-radius", type=int, default=1, help="closing radius in pixels")
        p.add_argument("--otsu-fraction", type=float, default=0.5,
                       help="share of the intensity range the threshold is searched in")
        p.add_argument("--fill-threshold", type=float, default=0.15,
                       help="fraction of a dot's area that marks it present")
        p.add_argument("--jobs", type=int, default=1, help="pages processed in parallel")
        p.add_argument("--inspect-dir", help="directory for stage images")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brailletext",
                                     description="Bengali Braille page images to text.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="translate page images to text files")
    p.add_argument("images", nargs="+")
    p.add_argument("-o", "--output", help="output directory, or '-' for standard output")
    _common(p)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("inspect", help="dump every processing stage of one page")
    p.add_argument("image")
    p.add_argument("-o", "--output", help="stage directory (same as --inspect-dir)")
    _common(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("synth", help="render a synthetic page and its ground truth")
    p.add_argument("spec", help="spec file: key = value lines, '---', then the text")
    p.add_argument("-o", "--output", help="image path (.pgm by default); the .truth goes beside it")
    p.add_argument("--seed", type=int)
    _common(p, pipeline=False)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="score a page against ground truth")
    p.add_argument("image", nargs="?", help="page image with a .truth sidecar")
    p.add_argument("--truth", help="ground truth sidecar (default: IMAGE with .truth)")
    p.add_argument("--text", nargs=2, metavar=("PRED", "TRUTH"), help="compare two text files")
    p.add_argument("--counts", nargs=4, type=int, metavar=("TP", "FP", "TN", "FN"),
                   help="report metrics for raw confusion counts")
    p.add_argument("--min-accuracy", type=float, help="exit 3 when accuracy (%%) is below this")
    _common(p)
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
