import logging
import os
import time
from typing import Dict, Optional

try:
    from .certificates import CertificateContext, load_certificates
    from .certificates.registry import PASS
    from .kargaev import (R_tail_bound, alpha_sequence, asymmetry, make_target_g,
                          random_operator_checks, solve_fixed_point)
    from .reports import (ALPHA_FILE, LAMBDA_FILE, REPORT_FILE, RunReport, alpha_summary,
                          append_verification, load_report, read_alpha_csv, write_alpha_csv,
                          write_csv, write_report)
    from .run_config import RunConfig
    from .tiling_line import build_lambda, companion_residual, enumerate_rows
    from .utils.logging import get_run_logger
    from .ztile import complement_search, load_instance, minimal_period, subset_indicator
except ImportError:
    from certificates import CertificateContext, load_certificates
    from certificates.registry import PASS
    from kargaev import (R_tail_bound, alpha_sequence, asymmetry, make_target_g,
                         random_operator_checks, solve_fixed_point)
    from reports import (ALPHA_FILE, LAMBDA_FILE, REPORT_FILE, RunReport, alpha_summary,
                         append_verification, load_report, read_alpha_csv, write_alpha_csv,
                         write_csv, write_report)
    from run_config import RunConfig
    from tiling_line import build_lambda, companion_residual, enumerate_rows
    from utils.logging import get_run_logger
    from ztile import complement_search, load_instance, minimal_period, subset_indicator

logger = logging.getLogger(__name__)

SOLVE_CERTIFICATES = ("gap", "tiling", "certificate", "flc")


class GapTilePipeline:
    def __init__(self, config: RunConfig, out_dir: Optional[str] = None):
        """
        Args:
            config: validated run configuration
            out_dir: artifact directory, defaults to the config's (env-overridable) output_dir
        """
        self.config = config
        self.out_dir = out_dir or config.resolved_output_dir()
        self.registry = load_certificates()
        self.log = get_run_logger(os.path.basename(os.path.normpath(self.out_dir)))
        logger.debug(f"Pipeline created for {self.out_dir} with certificates {self.registry.names()}")

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def context(self, alpha) -> CertificateContext:
        L = build_lambda(alpha, W=self.config.window, gap=self.config.a)
        return CertificateContext(config=self.config, alpha=alpha, translation_set=L)

    def solve(self) -> RunReport:
        """Solve, write alpha.csv / lambda.csv / report.json and run every certificate."""
        timings: Dict[str, float] = {}
        params = self.config.solver_params()

        start = time.perf_counter()
        g = make_target_g(params, self.config.amplitude)
        solution = solve_fixed_point(g, params)
        alpha = alpha_sequence(solution)
        timings["solve"] = time.perf_counter() - start
        tail = R_tail_bound(solution.f, params.N)
        self.log['info'](f"Solved in {solution.iterations} iterations, residual {solution.residual:.3e}, R tail {tail:.3e}")
        random_checks = random_operator_checks(params, self.config.seed)
        ztile = self.ztile_suite()

        context = self.context(alpha)
        write_alpha_csv(self.path(ALPHA_FILE), alpha)
        write_csv(self.path(LAMBDA_FILE), ("n", "lambda"), enumerate_rows(context.translation_set))

        certificates = {}
        for name in SOLVE_CERTIFICATES:
            start = time.perf_counter()
            certificates[name] = self.registry.run(name, context)
            timings[name] = time.perf_counter() - start
            self.log['info'](f"{name}: {certificates[name]['verdict']}")

        start = time.perf_counter()
        companion = companion_residual(self.config.tiling_kernel(), xcount=self.config.x_count,
                                       span=self.config.x_span, radius=self.config.tiling_radius)
        timings["companion"] = time.perf_counter() - start

        report = RunReport(
            config=self.config.echo(),
            iteration={
                "iterations": solution.iterations,
                "residual": solution.residual,
                "diff_trace": list(solution.diff_trace),
                "ratio_trace": list(solution.ratio_trace),
                "rho_ball": params.rho_ball,
                "R_tail_bound": tail,
                "random_checks": random_checks
            },
            alpha=alpha_summary(alpha, asymmetry(alpha)),
            gap=certificates["gap"],
            tiling=certificates["tiling"]["tiling"],
            gap_test=certificates["tiling"]["gap_test"],
            companion=companion.to_dict(),
            ztile=ztile,
            certificates={name: result["verdict"] for name, result in certificates.items()},
            timings=timings,
            artifacts={
                "alpha": self.path(ALPHA_FILE),
                "lambda": self.path(LAMBDA_FILE),
                "report": self.path(REPORT_FILE)
            }
        )
        write_report(self.path(REPORT_FILE), report)
        logger.info(f"Run written to {self.out_dir}")
        return report

    def ztile_suite(self) -> Dict:
        """Complements and their minimal periods for the configured cyclic instance, if any."""
        if not self.config.ztile_instance:
            return {}
        inst = load_instance(self.config.ztile_instance)
        complements = complement_search(inst)
        periods = [minimal_period(subset_indicator(subset, inst.Nc)) for subset in complements]
        self.log['info'](f"{self.config.ztile_instance}: {len(complements)} complements in Z_{inst.Nc}, periods {periods}")
        return {
            "instance": self.config.ztile_instance,
            "Nc": inst.Nc,
            "w": float(inst.w),
            "complements": [[int(s) for s in subset] for subset in complements],
            "periods": periods
        }

    @classmethod
    def from_artifacts(cls, artifacts_dir: str) -> "GapTilePipeline":
        """Rebuild a pipeline from the config echoed in an existing report.json."""
        report = load_report(os.path.join(artifacts_dir, REPORT_FILE))
        return cls(RunConfig(**report.config), out_dir=artifacts_dir)

    def verify(self, which: str, arguments: Optional[Dict] = None) -> Dict:
        """Recompute one certificate from the persisted alpha and append it to report.json."""
        alpha = read_alpha_csv(self.path(ALPHA_FILE))
        context = self.context(alpha)
        result = self.registry.run(which, context, arguments)
        append_verification(self.path(REPORT_FILE), which, result)
        self.log['info'](f"verify {which}: {result['verdict']}")
        return result

    def passed(self, report: RunReport) -> bool:
        return all(verdict == PASS for verdict in report.certificates.values())
