"""8-bit image files: binary PPM (P6) and PNG.

Images are handled as planar float arrays ``(3, height, width)`` normalized
to [0, 1]. Export clamps to [0, 1] and rounds half-up to 8 bits.
"""

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageIOError, ValidationError
from .fixedpoint import to_uint8

PPM_SUFFIXES = {".ppm"}
PNG_SUFFIXES = {".png"}


def _ppm_tokens(data, count):
    """Read ``count`` whitespace-separated header fields after the magic."""
    pos = 2
    fields = []
    while len(fields) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise ImageIOError("PPM header ends early")
        fields.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return fields, pos + 1


def read_ppm(path):
    data = Path(path).read_bytes()
    if data[:2] != b"P6":
        raise ImageIOError(f"{path}: not a binary PPM (P6) file")
    fields, offset = _ppm_tokens(data, 3)
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError:
        raise ImageIOError(f"{path}: malformed PPM header") from None
    if width < 1 or height < 1:
        raise ImageIOError(f"{path}: empty image {width}x{height}")
    if maxval != 255:
        raise ImageIOError(f"{path}: unsupported bit depth (maxval {maxval}); only 8-bit PPM is read")
    expected = width * height * 3
    raster = data[offset : offset + expected]
    if len(raster) < expected:
        raise ImageIOError(
            f"{path}: truncated P6 payload, expected {expected} bytes, got {len(raster)}"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)


def write_ppm(path, rgb):
    h, w, _ = rgb.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    Path(path).write_bytes(header + np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())


def read_png(path):
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise ImageIOError(f"{path}: not a PNG file")
            if im.mode in ("I", "I;16", "I;16B", "F"):
                raise ImageIOError(f"{path}: unsupported bit depth (mode {im.mode}); only 8-bit PNG is read")
            if im.mode in ("L", "LA", "P", "1"):
                gray = np.asarray(im.convert("L"))
                return np.repeat(gray[:, :, None], 3, axis=2)
            return np.asarray(im.convert("RGB"))
    except UnidentifiedImageError as e:
        raise ImageIOError(f"{path}: unreadable image ({e})") from None


def load_image(path):
    """Read an 8-bit PNG or P6 file.

    Returns ``(planes, raw)``: normalized planes ``(3, H, W)`` and the 8-bit
    buffer ``(H, W, 3)`` as stored in the file. Grayscale PNGs are replicated
    to three channels.
    """
    path = Path(path)
    if not path.is_file():
        raise ImageIOError(f"{path}: no such file")
    suffix = path.suffix.lower()
    try:
        if suffix in PPM_SUFFIXES:
            raw = read_ppm(path)
        elif suffix in PNG_SUFFIXES:
            raw = read_png(path)
        else:
            raise ImageIOError(f"{path}: unsupported format {suffix!r}; use .png or .ppm")
    except OSError as e:
        if isinstance(e, ImageIOError):
            raise
        raise ImageIOError(f"{path}: {e}") from None
    planes = np.transpose(raw, (2, 0, 1)).astype(np.float64) / 255.0
    return planes, raw


def planes_to_uint8(planes):
    """Planar floats -> interleaved ``(H, W, 3)`` bytes (clamp, round half-up)."""
    planes = np.asarray(planes)
    if planes.ndim == 2:
        planes = planes[None]
    if planes.ndim != 3:
        raise ValidationError("expected planes shaped (C, H, W) or a single plane")
    u8 = to_uint8(planes) if planes.dtype != np.uint8 else planes
    if u8.shape[0] == 1:
        u8 = np.repeat(u8, 3, axis=0)
    return np.transpose(u8, (1, 2, 0))


def save_image(planes, path):
    path = Path(path)
    rgb = planes_to_uint8(planes)
    suffix = path.suffix.lower()
    try:
        if suffix in PPM_SUFFIXES:
            write_ppm(path, rgb)
        elif suffix in PNG_SUFFIXES:
            Image.fromarray(np.ascontiguousarray(rgb), "RGB").save(path, format="PNG")
        else:
            raise ImageIOError(f"{path}: unsupported format {suffix!r}; use .png or .ppm")
    except ImageIOError:
        raise
    except OSError as e:
        raise ImageIOError(f"{path}: cannot write ({e.strerror or e})") from None
