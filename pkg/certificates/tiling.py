try:
    from ..tiling_line import delta_gap_test, tiling_residual
    from .registry import FAIL, PASS
except ImportError:
    from tiling_line import delta_gap_test, tiling_residual
    from certificates.registry import FAIL, PASS

name = 'tiling'
emoji = '🧱'
description = ('Tiling residual plus tail bound of the configured kernel along Lambda, and an independent '
               'delta-gap test with the second kernel family, also counted with its tail.')
parameters = {
    'type': 'object',
    'properties': {
        'x_count': {'type': 'integer', 'description': 'Number of test points'},
        'x_span': {'type': 'number', 'description': 'Test points cover [-x_span, x_span]'},
        'radius': {'type': 'number', 'description': 'Truncation radius of the tiling sum'}
    },
    'required': []
}


def check(context, arguments):
    config = context.config
    L = context.translation_set
    x_count = int(arguments.get('x_count', config.x_count))
    x_span = float(arguments.get('x_span', config.x_span))

    report = tiling_residual(config.tiling_kernel(), L, xcount=x_count, span=x_span,
                             radius=float(arguments.get('radius', config.tiling_radius)))
    gap_kernel = config.gap_test_kernel()
    gap_test = delta_gap_test(L, gap_kernel, xcount=x_count, span=x_span,
                              radius=config.gap_test_radius, a=config.a)
    gap_tail = gap_kernel.tail_bound(config.gap_test_radius)

    # a truncated sum only certifies up to its tail bound
    tiling_bound = report.sup_residual + report.tail_bound
    gap_bound = gap_test + gap_tail
    passed = tiling_bound <= config.tiling_tol and gap_bound <= config.gap_test_tol
    return {
        "verdict": PASS if passed else FAIL,
        "residual": report.sup_residual,
        "bound": tiling_bound,
        "tiling": report.to_dict(),
        "tiling_tol": config.tiling_tol,
        "gap_test": {
            "residual": gap_test,
            "tail_bound": gap_tail,
            "bound": gap_bound,
            "tol": config.gap_test_tol,
            "kernel": {"family": config.gap_test_family, "b": config.gap_test_b},
            "radius": config.gap_test_radius
        }
    }
