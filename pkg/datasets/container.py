"""Binary container for labeled image sets.

Layout: b"LADS1" | u32 header length | JSON header | f64 images | f64 labels,
all little-endian. The header records count, height, width, n_classes and meta.
"""
import json
import struct
from pathlib import Path

import numpy as np

from interfaces.datasets import LabeledImageSet
from interfaces.errors import ConsistencyError, FormatError, LengthError

MAGIC = b"LADS1"
_LEN = struct.Struct("<I")


def encode_dataset(dataset: LabeledImageSet) -> bytes:
    count, height, width = dataset.images.shape
    header = json.dumps({
        "count": int(count),
        "height": int(height),
        "width": int(width),
        "n_classes": int(dataset.n_classes),
        "meta": dataset.meta,
    }, sort_keys=True).encode("utf-8")
    return b"".join([
        MAGIC,
        _LEN.pack(len(header)),
        header,
        dataset.images.astype("<f8").tobytes(),
        dataset.labels.astype("<f8").tobytes(),
    ])


def decode_dataset(blob: bytes) -> LabeledImageSet:
    if blob[:len(MAGIC)] != MAGIC:
        raise FormatError("not a dataset container")
    offset = len(MAGIC)
    if len(blob) < offset + _LEN.size:
        raise LengthError("truncated header length")
    (header_len,) = _LEN.unpack_from(blob, offset)
    offset += _LEN.size
    if len(blob) < offset + header_len:
        raise LengthError("truncated header")
    try:
        header = json.loads(blob[offset:offset + header_len].decode("utf-8"))
        count, height, width = header["count"], header["height"], header["width"]
        n_classes = header["n_classes"]
    except (ValueError, KeyError) as e:
        raise FormatError(f"bad dataset header: {e}") from e
    offset += header_len

    n_pixels = count * height * width
    expected = 8 * (n_pixels + count)
    if len(blob) - offset != expected:
        raise LengthError(f"payload is {len(blob) - offset} bytes, header implies {expected}")
    images = np.frombuffer(blob, dtype="<f8", count=n_pixels, offset=offset).reshape(count, height, width)
    labels = np.frombuffer(blob, dtype="<f8", count=count, offset=offset + 8 * n_pixels)
    if not np.all(labels == np.round(labels)):
        raise ConsistencyError("labels are not integers")
    return LabeledImageSet(images.copy(), labels.astype(np.int64), n_classes, meta=header.get("meta", ""))


def save_dataset(dataset: LabeledImageSet, path) -> None:
    Path(path).write_bytes(encode_dataset(dataset))


def load_dataset(path) -> LabeledImageSet:
    return decode_dataset(Path(path).read_bytes())
