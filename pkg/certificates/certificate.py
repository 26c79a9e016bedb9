try:
    from ..tiling_line import is_strictly_increasing, max_points_per_unit, nonperiodicity_certificate
    from .registry import FAIL, PASS
except ImportError:
    from tiling_line import is_strictly_increasing, max_points_per_unit, nonperiodicity_certificate
    from certificates.registry import FAIL, PASS

name = 'certificate'
emoji = '📜'
description = 'Non-periodicity of Lambda: a non-integer witness point and a compactly supported perturbation.'
parameters = {
    'type': 'object',
    'properties': {},
    'required': []
}

# Every unit interval meets at most two points of n + alpha(n) when |alpha| < 1/2
MAX_DENSITY = 2


def check(context, arguments):
    L = context.translation_set
    report = nonperiodicity_certificate(L)
    density = max_points_per_unit(L)
    checks = dict(report.checks)
    checks["strictly_increasing"] = is_strictly_increasing(L)
    checks["bounded_density"] = density <= MAX_DENSITY
    passed = report.passed and all(checks.values())
    return {
        "verdict": PASS if passed else FAIL,
        "witness": report.witness,
        "witness_value": report.witness_value,
        "checks": checks,
        "max_points_per_unit": density,
        "claim": report.claim
    }
