try:
    from ..tiling_line import alphabet_growth
    from .registry import FAIL, PASS
except ImportError:
    from tiling_line import alphabet_growth
    from certificates.registry import FAIL, PASS

name = 'flc'
emoji = '🔤'
description = 'Finite local complexity check: number of distinct gaps of Lambda over growing windows.'
parameters = {
    'type': 'object',
    'properties': {
        'windows': {'type': 'array', 'items': {'type': 'integer'}},
        'round_tol': {'type': 'number'}
    },
    'required': []
}


def check(context, arguments):
    windows = tuple(arguments.get('windows', context.config.alphabet_windows))
    round_tol = float(arguments.get('round_tol', 1e-9))
    sizes = alphabet_growth(context.translation_set, windows, round_tol)
    counts = [sizes[w] for w in sorted(sizes)]
    # a growing alphabet means Lambda does not have finite local complexity on these windows
    growing = all(b > a for a, b in zip(counts, counts[1:]))
    return {
        "verdict": PASS if growing else FAIL,
        "alphabet_sizes": {str(w): sizes[w] for w in sorted(sizes)},
        "round_tol": round_tol
    }
