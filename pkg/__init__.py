from .circle_space import CircleFunction, CircleGrid, CoeffSeq, fourier_coeffs, synthesize
from .kargaev import KargaevSolution, SolverParams, alpha_sequence, gap_residual, make_target_g, solve_fixed_point
from .tiling_line import Kernel, TilingReport, TranslationSet, build_lambda, nonperiodicity_certificate, tiling_residual
from .ztile import CyclicInstance, ZFunction, ZSet, complement_search, dft_tiling_check, z_tiling_check
from .certificates import Certificate, CertificateRegistry, load_certificates
from .run_config import DEFAULT_CONFIG, RunConfig
from .reports import RunReport
from .pipeline import GapTilePipeline

__all__ = [
    'CircleFunction',
    'CircleGrid',
    'CoeffSeq',
    'fourier_coeffs',
    'synthesize',
    'KargaevSolution',
    'SolverParams',
    'alpha_sequence',
    'gap_residual',
    'make_target_g',
    'solve_fixed_point',
    'Kernel',
    'TilingReport',
    'TranslationSet',
    'build_lambda',
    'nonperiodicity_certificate',
    'tiling_residual',
    'CyclicInstance',
    'ZFunction',
    'ZSet',
    'complement_search',
    'dft_tiling_check',
    'z_tiling_check',
    'Certificate',
    'CertificateRegistry',
    'load_certificates',
    'DEFAULT_CONFIG',
    'RunConfig',
    'RunReport',
    'GapTilePipeline'
]
