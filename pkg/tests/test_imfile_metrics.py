import math

import numpy as np
import pytest
from PIL import Image

from llfaccel.cards import CORPUS_SIZE, corpus, test_card as make_card
from llfaccel.errors import ImageIOError, ValidationError
from llfaccel.fixedpoint import dequantize, from_uint8, q_to_uint8, quantize, to_uint8
from llfaccel.imfile import load_image, planes_to_uint8, save_image
from llfaccel.metrics import psnr

rng = np.random.default_rng(9)


def test_fixed_point_round_trips():
    q = rng.integers(-(1 << 20), 1 << 20, 1000)
    assert np.array_equal(quantize(dequantize(q)), q)
    u8 = np.arange(256, dtype=np.uint8)
    assert np.array_equal(q_to_uint8(from_uint8(u8)), u8)
    assert np.array_equal(to_uint8(dequantize(from_uint8(u8))), u8)


def test_export_rounding_examples():
    assert list(to_uint8(np.array([1.5, 0.5, -0.1, 0.0, 1.0]))) == [255, 128, 0, 0, 255]


def test_ppm_examples(tmp_path):
    path = tmp_path / "white.ppm"
    path.write_bytes(b"P6\n2 2\n255\n" + b"\xff" * 12)
    planes, raw = load_image(path)
    assert planes.shape == (3, 2, 2) and np.all(planes == 1.0)
    assert raw.shape == (2, 2, 3)
    commented = tmp_path / "c.ppm"
    commented.write_bytes(b"P6 # made by hand\n1 1\n# depth\n255\n\x01\x02\x03")
    assert list(load_image(commented)[1][0, 0]) == [1, 2, 3]


def test_ppm_errors(tmp_path):
    short = tmp_path / "short.ppm"
    short.write_bytes(b"P6\n2 2\n255\n" + b"\x00" * 5)
    with pytest.raises(ImageIOError, match="expected 12 bytes, got 5"):
        load_image(short)
    deep = tmp_path / "deep.ppm"
    deep.write_bytes(b"P6\n1 1\n65535\n" + b"\x00" * 6)
    with pytest.raises(ImageIOError, match="bit depth"):
        load_image(deep)
    ascii_ = tmp_path / "a.ppm"
    ascii_.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    with pytest.raises(ImageIOError):
        load_image(ascii_)
    with pytest.raises(ImageIOError, match="no such file"):
        load_image(tmp_path / "missing.ppm")
    with pytest.raises(ImageIOError, match="unsupported format"):
        (tmp_path / "x.bmp").write_bytes(b"BM")
        load_image(tmp_path / "x.bmp")


def test_ppm_byte_identical_round_trip(tmp_path):
    for name, img in corpus((17, 11)).items():
        src = tmp_path / f"{name}.ppm"
        save_image(img, src)
        again = tmp_path / f"{name}_2.ppm"
        save_image(load_image(src)[0], again)
        assert src.read_bytes() == again.read_bytes()
        third = tmp_path / f"{name}_3.ppm"
        save_image(load_image(again)[0], third)
        assert third.read_bytes() == again.read_bytes()


def test_png_rgb_and_gray(tmp_path):
    rgb = rng.integers(0, 256, (5, 6, 3), dtype=np.uint8)
    Image.fromarray(rgb, "RGB").save(tmp_path / "c.png")
    planes, raw = load_image(tmp_path / "c.png")
    assert np.array_equal(raw, rgb)
    assert np.allclose(planes, np.transpose(rgb, (2, 0, 1)) / 255)
    gray = rng.integers(0, 256, (4, 3), dtype=np.uint8)
    Image.fromarray(gray, "L").save(tmp_path / "g.png")
    planes, _ = load_image(tmp_path / "g.png")
    assert planes.shape == (3, 4, 3)
    assert np.array_equal(planes[0], planes[2])
    save_image(planes, tmp_path / "out.png")
    assert np.array_equal(load_image(tmp_path / "out.png")[1][..., 1], gray)


def test_png_16_bit_rejected(tmp_path):
    Image.fromarray(np.full((3, 3), 40000, dtype=np.uint16)).save(tmp_path / "d.png")
    with pytest.raises(ImageIOError, match="bit depth"):
        load_image(tmp_path / "d.png")


def test_save_clamps_and_errors(tmp_path):
    planes = np.array([[[1.5, 0.5, -0.1]]] * 3)
    save_image(planes, tmp_path / "v.ppm")
    assert list(load_image(tmp_path / "v.ppm")[1][0, :, 0]) == [255, 128, 0]
    assert planes_to_uint8(np.zeros((2, 2))).shape == (2, 2, 3)
    with pytest.raises(ImageIOError):
        save_image(planes, tmp_path / "no_dir" / "v.ppm")
    with pytest.raises(ImageIOError):
        save_image(planes, tmp_path / "v.tiff")


def test_psnr_examples():
    a = rng.integers(0, 255, (3, 8, 8)).astype(np.uint8)
    same = psnr(a, a)
    assert same.mse == 0 and same.identical and math.isinf(same.psnr_db)
    assert same.format_psnr() == "inf"
    off = psnr(a, a + 1)
    assert off.psnr_db == pytest.approx(20 * math.log10(255), abs=1e-9)
    assert off.format_psnr() == "48.13"
    assert psnr(np.zeros((4, 4)), np.full((4, 4), 255)).psnr_db == pytest.approx(0.0)
    b = rng.integers(0, 256, (3, 8, 8))
    assert psnr(a, b).psnr_db == psnr(b, a).psnr_db
    assert len(psnr(a, b).per_channel) == 3
    with pytest.raises(ValidationError):
        psnr(a, a[:2])


def test_cards():
    c = corpus()
    assert sorted(c) == ["card0", "card1", "card2"]
    for img in c.values():
        assert img.shape == (3, CORPUS_SIZE[1], CORPUS_SIZE[0])
        assert np.array_equal(np.floor(img * 255 + 0.5) / 255, img)
    assert np.array_equal(make_card(20, 10, 1), make_card(20, 10, 1))
    with pytest.raises(ValueError):
        make_card(8, 8, 3)
