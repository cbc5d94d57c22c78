import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

import oracles
from llfaccel.errors import DepthError, DimensionMismatchError, ValidationError
from llfaccel.fixedpoint import quantize
from llfaccel.pyramid import (
    GAUSSIAN,
    LAPLACIAN,
    Pyramid,
    collapse,
    downsample,
    gaussian_pyramid,
    laplacian_pyramid,
    max_depth,
    upsample,
)

rng = np.random.default_rng(77)


def test_downsample_constant_and_dims():
    assert np.allclose(downsample(np.full((64, 64), 0.4)), 0.4)
    p = np.zeros((512, 512))
    dims = [p.shape[0]]
    for _ in range(3):
        p = downsample(p)
        dims.append(p.shape[0])
    assert dims == [512, 256, 128, 64]
    assert downsample(np.ones((1, 1))).shape == (1, 1)


def test_downsample_impulse():
    p = np.zeros((5, 5))
    p[2, 2] = 1.0
    out = downsample(p)
    assert out.shape == (3, 3)
    assert out[1, 1] == 0.25
    assert np.count_nonzero(out) == 1


@pytest.mark.parametrize("shape", [(7, 5), (8, 8), (3, 10)])
def test_downsample_matches_oracle(shape):
    p = rng.random(shape)
    assert np.allclose(downsample(p), oracles.down(p), atol=1e-12)


def test_downsample_linear_and_dc():
    a, b = rng.random((2, 15, 12))
    assert np.allclose(downsample(2 * a - 3 * b), 2 * downsample(a) - 3 * downsample(b), atol=1e-6)
    y, x = np.mgrid[0:32, 0:32] / 31
    smooth = 0.5 + 0.05 * np.sin(2 * x) * np.cos(y)
    assert abs(downsample(smooth).mean() - smooth.mean()) < 1e-3


def test_upsample_constants():
    assert np.allclose(upsample(np.full((4, 4), 0.7), 8, 8), 0.7)
    assert upsample(np.array([[0.3]]), 2, 2)[0, 0] == pytest.approx(0.3)
    assert not upsample(np.zeros((3, 2)), 3, 6).any()
    assert upsample(np.zeros((3, 2)), 3, 6).shape == (6, 3)


@pytest.mark.parametrize("coarse,fine", [((3, 4), (5, 8)), ((4, 4), (8, 7)), ((1, 2), (2, 3))])
def test_upsample_matches_oracle(coarse, fine):
    p = rng.random(coarse)
    assert np.allclose(upsample(p, fine[1], fine[0]), oracles.up(p, *fine), atol=1e-12)


def test_upsample_rejects_bad_target():
    with pytest.raises(DimensionMismatchError):
        upsample(np.zeros((4, 4)), 10, 8)


def test_gaussian_pyramid():
    p = rng.random((32, 32))
    assert len(gaussian_pyramid(p, 1)) == 1
    assert gaussian_pyramid(p, 1)[0] is p or np.array_equal(gaussian_pyramid(p, 1)[0], p)
    g = gaussian_pyramid(p, 3)
    assert g.kind == GAUSSIAN
    for mine, ref in zip(g, oracles.gaussian(p, 3)):
        assert np.allclose(mine, ref, atol=1e-12)
    c = gaussian_pyramid(np.full((16, 16), 0.2), 4)
    assert [lv.shape for lv in c] == [(16, 16), (8, 8), (4, 4), (2, 2)]
    assert all(np.allclose(lv, 0.2) for lv in c)


def test_depth_error_names_max_depth():
    with pytest.raises(DepthError) as e:
        gaussian_pyramid(np.zeros((6, 20)), 4)
    assert e.value.max_depth == 3 == max_depth(20, 6)
    assert "3" in str(e.value)
    with pytest.raises(ValidationError):
        gaussian_pyramid(np.zeros((4, 4)), 0)


def test_laplacian_pyramid():
    p = rng.random((32, 32))
    lp = laplacian_pyramid(p, 3)
    assert lp.kind == LAPLACIAN and len(lp) == 4
    for mine, ref in zip(lp, oracles.laplacian(p, 3)):
        assert np.abs(mine - ref).max() <= 1e-6
    c = laplacian_pyramid(np.full((16, 12), 0.6), 2)
    assert all(np.allclose(b, 0) for b in c.bands)
    assert np.allclose(c.residual, 0.6)
    z = laplacian_pyramid(np.zeros((9, 9)), 3)
    assert not any(lv.any() for lv in z)


def test_collapse_examples():
    bands = [np.zeros((9, 7)), np.zeros((5, 4))]
    out = collapse(Pyramid(LAPLACIAN, bands + [np.full((3, 2), 0.35)]))
    assert out.shape == (9, 7) and np.allclose(out, 0.35)
    r = rng.random((3, 3))
    assert np.array_equal(collapse(Pyramid(LAPLACIAN, [r])), r)
    with pytest.raises(DimensionMismatchError):
        collapse(Pyramid(LAPLACIAN, [np.zeros((8, 8)), np.zeros((3, 3))]))
    with pytest.raises(ValidationError):
        collapse(Pyramid(GAUSSIAN, [r]))


@given(st.integers(4, 40), st.integers(4, 40), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_round_trip_property(h, w, n, seed):
    assume(min(h, w) >= 2**n)
    p = np.random.default_rng(seed).random((h, w))
    lp = laplacian_pyramid(p, n)
    for fine, coarse in zip(lp.levels, lp.levels[1:]):
        assert coarse.shape == ((fine.shape[0] + 1) // 2, (fine.shape[1] + 1) // 2)
    assert np.abs(collapse(lp) - p).max() <= 1e-6


def test_fixed_point_matches_loops_and_reference():
    p = rng.random((21, 18))
    q = quantize(p)
    lq = laplacian_pyramid(q, 2)
    for mine, ref in zip(lq, oracles.laplacian_q(q, 2)):
        assert np.array_equal(mine, ref)
    # telescoping makes the fixed-point rebuild exact as well
    assert np.array_equal(collapse(lq), q)
    # each level stays within a few convolution error bounds of the float pyramid
    lf = laplacian_pyramid(q.astype(np.float64), 2)
    for l, (a, b) in enumerate(zip(lq, lf)):
        assert np.abs(a - b).max() < 12 * 3 * (l + 1)


def test_stacks_of_planes():
    stack = rng.random((2, 3, 10, 9))
    lp = laplacian_pyramid(stack, 2)
    for idx in np.ndindex(2, 3):
        single = laplacian_pyramid(stack[idx], 2)
        for a, b in zip(lp, single):
            assert np.array_equal(a[idx], b)
