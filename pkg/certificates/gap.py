try:
    from ..kargaev import gap_residual
    from .registry import FAIL, PASS
except ImportError:
    from kargaev import gap_residual
    from certificates.registry import FAIL, PASS

name = 'gap'
emoji = '🕳️'
description = 'Spectral gap of the signed-interval function: sup |F^| over a uniform grid of (-a, a) minus end margins.'
parameters = {
    'type': 'object',
    'properties': {
        'grid_pts': {
            'type': 'integer',
            'description': 'Number of grid points in the gap'
        },
        'tol': {
            'type': 'number',
            'description': 'Largest accepted residual'
        }
    },
    'required': []
}


def check(context, arguments):
    config = context.config
    grid_pts = int(arguments.get('grid_pts', config.gap_grid_pts))
    tol = float(arguments.get('tol', config.gap_tol))
    residual = gap_residual(context.alpha, config.a, grid_pts)
    return {
        "verdict": PASS if residual <= tol else FAIL,
        "residual": residual,
        "tol": tol,
        "a": config.a,
        "grid_pts": grid_pts,
        "N": context.alpha.N
    }
