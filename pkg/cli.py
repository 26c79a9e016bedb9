import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape
from rich.table import Table

try:
    from .errors import (AllZeroAlpha, AlphaOutOfBounds, AmplitudeTooLarge, ArtifactError, BallEscape,
                         InstanceParseError, NoConvergence, ParamsInvalid, SearchSpaceTooLarge)
    from .certificates.registry import PASS
    from .pipeline import GapTilePipeline
    from .reports import ALPHA_FILE, REPORT_FILE, load_report, read_alpha_csv, write_alpha_csv, write_csv
    from .run_config import RunConfig, default_config, load_config
    from .tiling_line import build_lambda, tiling_residual, windowed_spectrum
    from .utils.logging import configure_logging
    from .ztile import (ZSet, complement_search, cyclic_tiling_check, dft_tiling_check, format_subsets,
                        load_instance, minimal_period, smoothed_spectrum, subset_indicator, subset_to_zset,
                        z_tiling_check)
except ImportError:
    from errors import (AllZeroAlpha, AlphaOutOfBounds, AmplitudeTooLarge, ArtifactError, BallEscape,
                        InstanceParseError, NoConvergence, ParamsInvalid, SearchSpaceTooLarge)
    from certificates.registry import PASS
    from pipeline import GapTilePipeline
    from reports import ALPHA_FILE, REPORT_FILE, load_report, read_alpha_csv, write_alpha_csv, write_csv
    from run_config import RunConfig, default_config, load_config
    from tiling_line import build_lambda, tiling_residual, windowed_spectrum
    from utils.logging import configure_logging
    from ztile import (ZSet, complement_search, cyclic_tiling_check, dft_tiling_check, format_subsets,
                       load_instance, minimal_period, smoothed_spectrum, subset_indicator, subset_to_zset,
                       z_tiling_check)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CERTIFICATE_FAIL = 1
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3
EXIT_ARTIFACTS = 4
EXIT_SEARCH_SPACE = 5

VERIFY_CHOICES = ("gap", "tiling", "certificate", "flc")
EXPORT_CHOICES = ("residual-curve", "spectrum", "alpha")

console = Console(highlight=False)


def emit(text: str):
    """Plain machine-readable output line(s) on stdout."""
    console.print(text, markup=False, soft_wrap=True)


def _residues(text: Optional[str]) -> List[int]:
    if not text:
        return []
    try:
        return [int(token) for token in text.replace(",", " ").split()]
    except ValueError as e:
        raise InstanceParseError(f"Invalid residue list '{text}': {e}") from e


def _zset(period: int, residues: List[int]) -> ZSet:
    try:
        return ZSet(period, tuple(residues))
    except ValueError as e:
        raise InstanceParseError(str(e)) from e


def _verdict_table(title: str, results: dict) -> Table:
    table = Table(title=title)
    table.add_column("certificate")
    table.add_column("verdict")
    table.add_column("residual", justify="right")
    for name, result in results.items():
        verdict = result["verdict"]
        style = "green" if verdict == PASS else "red"
        residual = result.get("residual")
        table.add_row(name, f"[{style}]{verdict}[/]", "" if residual is None else f"{residual:.3e}")
    return table


def cmd_solve(config: RunConfig, out_dir: Optional[str] = None) -> int:
    pipeline = GapTilePipeline(config, out_dir=out_dir)
    report = pipeline.solve()
    console.print(f"[bold]Solved[/] in {report.iteration['iterations']} iterations, "
                  f"residual {report.iteration['residual']:.3e}, max|alpha| = {report.alpha['max_abs']:.6g}")
    results = {"gap": report.gap, "tiling": {"verdict": report.certificates["tiling"],
                                             "residual": report.tiling["sup_residual"]}}
    results.update({name: {"verdict": report.certificates[name]} for name in ("certificate", "flc")})
    console.print(_verdict_table(f"Certificates ({pipeline.out_dir})", results))
    return EXIT_OK if pipeline.passed(report) else EXIT_CERTIFICATE_FAIL


def cmd_verify(which: str, artifacts_dir: str) -> int:
    pipeline = GapTilePipeline.from_artifacts(artifacts_dir)
    result = pipeline.verify(which)
    console.print(_verdict_table(f"verify {which}", {which: result}))
    if which == "flc":
        for window, size in result["alphabet_sizes"].items():
            emit(f"window {window}: {size} distinct gaps")
    if which == "certificate":
        emit(result["claim"])
    return EXIT_OK if result["verdict"] == PASS else EXIT_CERTIFICATE_FAIL


def cmd_ztile(sub: str, instance_path: str, set_text: Optional[str] = None, period: Optional[int] = None,
              cap: int = 28, workers: int = 1) -> int:
    inst = load_instance(instance_path)
    residues = _residues(set_text)

    if sub == "check":
        if period is not None:
            L = _zset(period, residues)
            result = z_tiling_check(inst.source, L, inst.w)
        else:
            direct = cyclic_tiling_check(inst, residues)
            if direct != dft_tiling_check(inst, residues):
                logger.warning("Direct and DFT tiling checks disagree")
            result = direct
        emit("true" if result else "false")
        return EXIT_OK

    if sub == "search":
        subsets = complement_search(inst, cap=cap, workers=workers)
        if subsets:
            emit(format_subsets(subsets))
        else:
            logger.info(f"No complements in Z_{inst.Nc}")
        return EXIT_OK

    # period
    if residues:
        emit(str(minimal_period(subset_indicator(residues, inst.Nc))))
        return EXIT_OK
    for subset in complement_search(inst, cap=cap, workers=workers):
        emit(f"{format_subsets([subset])}\t{minimal_period(subset_indicator(subset, inst.Nc))}")
    return EXIT_OK


def _spectrum_rows(args, report_dir: Optional[str]):
    if args.instance:
        inst = load_instance(args.instance)
        subsets = complement_search(inst, cap=args.cap, workers=args.workers)
        if not subsets:
            raise ArtifactError(f"Instance {args.instance} has no tiling complement")
        L = subset_to_zset(subsets[0], inst.Nc)
        return smoothed_spectrum(L, args.N, args.nfreq)
    if args.period is not None:
        return smoothed_spectrum(_zset(args.period, _residues(args.set)), args.N, args.nfreq)
    if report_dir is None:
        raise ArtifactError("spectrum export needs --report, --instance or --period")
    report = load_report(os.path.join(report_dir, REPORT_FILE))
    config = RunConfig(**report.config)
    L = build_lambda(read_alpha_csv(os.path.join(report_dir, ALPHA_FILE)), W=config.window, gap=config.a)
    t = -0.5 + np.arange(args.nfreq) / args.nfreq
    return list(zip(t.tolist(), np.abs(windowed_spectrum(L, t, float(args.N))).tolist()))


def cmd_export(what: str, report_path: Optional[str], args) -> int:
    report_dir = os.path.dirname(os.path.abspath(report_path)) if report_path else None
    if report_path and not os.path.exists(report_path):
        raise ArtifactError(f"Report {report_path} not found")
    out = args.out or os.path.join(report_dir or os.getcwd(), f"{what.replace('-', '_')}.csv")

    if what == "alpha":
        alpha = read_alpha_csv(os.path.join(report_dir, ALPHA_FILE))
        write_alpha_csv(out, alpha)
    elif what == "residual-curve":
        report = load_report(report_path)
        config = RunConfig(**report.config)
        L = build_lambda(read_alpha_csv(os.path.join(report_dir, ALPHA_FILE)), W=config.window, gap=config.a)
        curve = tiling_residual(config.tiling_kernel(), L, xcount=config.x_count, span=config.x_span,
                                radius=config.tiling_radius)
        write_csv(out, ("x", "residual"), zip(curve.x.tolist(), curve.deviation.tolist()))
    else:
        write_csv(out, ("t", "magnitude"), _spectrum_rows(args, report_dir))
    console.print(f"Wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaptile", description="Non-periodic tilings of the line by a bandlimited function")
    parser.add_argument('--log-level', type=str, help='Override LOG_LEVEL')
    parser.add_argument('--log-file', type=str, help='Also append logs to this file')
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Solve for alpha, build Lambda and certify")
    solve.add_argument('--config', type=str, help='JSON run configuration (defaults if omitted)')
    solve.add_argument('--out', type=str, help='Artifact directory (overrides config and GAPTILE_OUTPUT_DIR)')

    verify = commands.add_parser("verify", help="Recompute a certificate from persisted artifacts")
    verify.add_argument('which', choices=VERIFY_CHOICES)
    verify.add_argument('--artifacts', type=str, required=True, help='Directory holding alpha.csv and report.json')

    ztile = commands.add_parser("ztile", help="Tilings of Z and Z_N")
    ztile.add_argument('sub', choices=("check", "search", "period"))
    ztile.add_argument('instance', type=str)
    ztile.add_argument('--set', type=str, help='Candidate translates, e.g. "0 2 4"')
    ztile.add_argument('--period', type=int, help='Read --set as residues mod this period (check on Z)')
    ztile.add_argument('--cap', type=int, default=28)
    ztile.add_argument('--workers', type=int, default=1)

    export = commands.add_parser("export", help="Write plot-ready CSV")
    export.add_argument('what', choices=EXPORT_CHOICES)
    export.add_argument('--report', type=str, help='report.json of a solve run')
    export.add_argument('--out', type=str, help='Output CSV path')
    export.add_argument('--instance', type=str, help='ztile instance (spectrum of its first complement)')
    export.add_argument('--period', type=int, help='Spectrum of the periodic set with residues --set')
    export.add_argument('--set', type=str)
    export.add_argument('--N', type=int, default=256, help='Fejer window')
    export.add_argument('--nfreq', type=int, default=512)
    export.add_argument('--cap', type=int, default=28)
    export.add_argument('--workers', type=int, default=1)
    return parser


def run(args) -> int:
    if args.command == "solve":
        config = load_config(args.config) if args.config else default_config()
        return cmd_solve(config, out_dir=args.out)
    if args.command == "verify":
        return cmd_verify(args.which, args.artifacts)
    if args.command == "ztile":
        return cmd_ztile(args.sub, args.instance, set_text=args.set, period=args.period,
                         cap=args.cap, workers=args.workers)
    if args.what != "spectrum" and not args.report:
        raise ArtifactError(f"export {args.what} needs --report")
    return cmd_export(args.what, args.report, args)


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging(log_file=args.log_file, level=args.log_level)

    try:
        return run(args)
    except (ValidationError, ParamsInvalid, AmplitudeTooLarge) as e:
        logger.error(f"Invalid configuration: {e}")
        console.print(f"[red]Invalid configuration:[/] {escape(str(e))}", soft_wrap=True)
        return EXIT_CONFIG
    except NoConvergence as e:
        logger.error(f"{e}")
        console.print(f"[red]No convergence:[/] {escape(str(e))}", soft_wrap=True)
        return EXIT_NO_CONVERGENCE
    except (BallEscape, AllZeroAlpha, AlphaOutOfBounds) as e:
        logger.error(f"{e}")
        console.print(f"[red]Solve failed:[/] {escape(str(e))}", soft_wrap=True)
        return EXIT_NO_CONVERGENCE
    except (ArtifactError, InstanceParseError) as e:
        logger.error(f"{e}")
        console.print(f"[red]Cannot read input:[/] {escape(str(e))}", soft_wrap=True)
        return EXIT_ARTIFACTS
    except SearchSpaceTooLarge as e:
        logger.error(f"{e}")
        console.print(f"[red]Search space too large:[/] {escape(str(e))}", soft_wrap=True)
        return EXIT_SEARCH_SPACE


if __name__ == "__main__":
    sys.exit(main())
