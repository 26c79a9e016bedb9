import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

try:
    from .circle_space import (CircleFunction, CircleGrid, CoeffSeq, evaluate, fourier_coeffs,
                               fourier_coeffs_direct, hermitian_defect, refine, sup_norm,
                               sup_norm_gap_bound, synthesize)
    from .errors import NyquistViolation, SymmetryViolation
except ImportError:
    from circle_space import (CircleFunction, CircleGrid, CoeffSeq, evaluate, fourier_coeffs,
                              fourier_coeffs_direct, hermitian_defect, refine, sup_norm,
                              sup_norm_gap_bound, synthesize)
    from errors import NyquistViolation, SymmetryViolation

coefficients = st.integers(min_value=1, max_value=24).flatmap(
    lambda N: arrays(np.float64, 2 * N + 1, elements=st.floats(-1, 1, allow_nan=False)).map(
        lambda values: CoeffSeq(N, values)))


def test_grid_points_are_uniform_and_mirrored():
    grid = CircleGrid(64)
    t = grid.points
    assert t[0] == -0.5
    assert np.allclose(np.diff(t), 1 / 64, atol=0)
    assert np.all(t[grid.mirror[1:]] == -t[1:])
    assert t[grid.zero_index] == 0.0
    assert grid.mirror_index(0) == 0 and grid.mirror_index(1) == 63


@pytest.mark.parametrize("M", [0, 2, 7])
def test_grid_rejects_bad_sizes(M):
    with pytest.raises(ValueError):
        CircleGrid(M)


def test_constant_function_coefficients():
    f = CircleFunction(CircleGrid(64), np.ones(64))
    c = fourier_coeffs(f, 2)
    assert np.allclose(c.values, [0, 0, 1, 0, 0], atol=1e-15)


def test_single_harmonic_coefficients():
    f = CircleFunction.from_callable(CircleGrid(64), lambda t: 2 * np.cos(2 * np.pi * t))
    c = fourier_coeffs(f, 1)
    assert c[-1] == pytest.approx(1, abs=1e-14)
    assert c[1] == pytest.approx(1, abs=1e-14)
    assert c[0] == pytest.approx(0, abs=1e-14)


def test_odd_imaginary_part_gives_odd_real_coefficients():
    f = CircleFunction.from_callable(CircleGrid(64), lambda t: 1j * np.sin(2 * np.pi * t))
    c = fourier_coeffs(f, 1)
    assert c[1] == pytest.approx(0.5, abs=1e-14)
    assert c[-1] == pytest.approx(-0.5, abs=1e-14)


def test_endpoint_jump_does_not_trip_symmetry_check():
    # f(t) = i t is Hermitian but jumps across t = +-1/2
    f = CircleFunction.from_callable(CircleGrid(8192), lambda t: 1j * t)
    c = fourier_coeffs(f, 4)
    for n in (1, 2, 3):
        assert c[n] == pytest.approx((-1) ** (n + 1) / (2 * np.pi * n), abs=1e-6)


def test_nyquist_violation():
    f = CircleFunction.zeros(CircleGrid(16))
    with pytest.raises(NyquistViolation):
        fourier_coeffs(f, 8)
    with pytest.raises(NyquistViolation):
        synthesize(CoeffSeq.zeros(8), CircleGrid(16))


def test_non_hermitian_samples_rejected():
    with pytest.raises(SymmetryViolation):
        CircleFunction(CircleGrid(16), np.full(16, 1j))


def test_synthesize_examples():
    assert np.allclose(synthesize(CoeffSeq.from_mapping({0: 1.0}), CircleGrid(8)).samples, 1)
    f = synthesize(CoeffSeq.from_mapping({-1: 1.0, 1: 1.0}), CircleGrid(16))
    assert f.samples[CircleGrid(16).zero_index] == pytest.approx(2)
    assert sup_norm(f) == pytest.approx(2)


def test_random_degree_eight_polynomial_matches_direct_quadrature():
    rng = np.random.default_rng(8)
    c = CoeffSeq(8, rng.uniform(-1, 1, 17))
    f = synthesize(c, CircleGrid(128))
    production = fourier_coeffs(f, 8)
    direct = fourier_coeffs_direct(f, 8)
    assert np.max(np.abs(production.values - c.values)) <= 1e-12
    assert np.max(np.abs(direct - c.values)) <= 1e-12


@seed(20240101)
@settings(max_examples=200, deadline=None)
@given(coefficients)
def test_analysis_inverts_synthesis(c):
    f = synthesize(c, CircleGrid(128))
    assert hermitian_defect(f) == 0.0
    assert np.max(np.abs(fourier_coeffs(f, c.N).values - c.values)) <= 1e-12
    # Parseval
    assert fourier_coeffs(f, c.N).mass <= sup_norm(f) ** 2 + 1e-9


@seed(20240102)
@settings(max_examples=50, deadline=None)
@given(coefficients)
def test_grid_sup_is_within_bernstein_gap_of_dense_sup(c):
    M = 128
    dense = np.max(np.abs(evaluate(c, np.linspace(-0.5, 0.5, 16 * M, endpoint=False))))
    grid_sup = sup_norm(synthesize(c, CircleGrid(M)))
    assert grid_sup <= dense + 1e-12
    assert dense <= grid_sup + sup_norm_gap_bound(c, M) + 1e-12


def test_evaluate_matches_grid_samples():
    rng = np.random.default_rng(3)
    c = CoeffSeq(5, rng.normal(size=11))
    grid = CircleGrid(32)
    assert np.allclose(evaluate(c, grid.points), synthesize(c, grid).samples, atol=1e-12)


def test_refine_keeps_coarse_values():
    rng = np.random.default_rng(5)
    f = synthesize(CoeffSeq(6, rng.normal(size=13)), CircleGrid(32))
    fine = refine(f, 6)
    assert fine.grid.M == 64
    assert np.allclose(fine.samples[::2], f.samples, atol=1e-12)


def test_coeff_seq_indexing_and_truncation():
    c = CoeffSeq.from_mapping({-2: 0.5, 1: -0.25})
    assert c.N == 2
    assert c[5] == 0.0
    assert c.argmax == -2
    assert c.truncate(4)[-2] == 0.5 and c.truncate(4).N == 4
    assert c.truncate(1).values.tolist() == [0.0, 0.0, -0.25]
    assert c.with_value(0, 0.1)[0] == 0.1
    assert c[0] == 0.0
