"""IDX image and label files (big-endian header, unsigned byte payload), optionally gzipped."""
import gzip
import struct
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import structlog

from interfaces.datasets import LabeledImageSet
from interfaces.errors import ConsistencyError, FormatError, LengthError

logger = structlog.get_logger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801
GZIP_MAGIC = b"\x1f\x8b"


def read_idx_bytes(path) -> bytes:
    raw = Path(path).read_bytes()
    if raw[:2] == GZIP_MAGIC:
        try:
            return gzip.decompress(raw)
        except (OSError, EOFError) as e:
            raise FormatError(f"{path}: corrupt gzip stream: {e}") from e
    return raw


def _header(data: bytes, magic: int, n_dims: int, what: str) -> Tuple[int, ...]:
    size = 4 * (1 + n_dims)
    if len(data) < size:
        raise LengthError(f"{what}: {len(data)} bytes is shorter than the {size}-byte header")
    fields = struct.unpack(f">{1 + n_dims}I", data[:size])
    if fields[0] != magic:
        raise FormatError(f"{what}: magic 0x{fields[0]:08x}, expected 0x{magic:08x}")
    return fields[1:]


def parse_idx_images(data: bytes) -> np.ndarray:
    """[count x rows x cols] uint8 images."""
    count, rows, cols = _header(data, IMAGES_MAGIC, 3, "images")
    expected = count * rows * cols
    payload = data[16:]
    if len(payload) < expected:
        raise LengthError(f"images: header promises {expected} bytes, payload has {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8, count=expected).reshape(count, rows, cols)


def parse_idx_labels(data: bytes) -> np.ndarray:
    (count,) = _header(data, LABELS_MAGIC, 1, "labels")
    payload = data[8:]
    if len(payload) < count:
        raise LengthError(f"labels: header promises {count} bytes, payload has {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8, count=count).astype(np.int64)


def load_idx_images(images_path, labels_path, n_classes: int = 10,
                    limit: Optional[int] = None) -> LabeledImageSet:
    """Pixels scaled to [0, 1]; counts in the two headers must agree."""
    images = parse_idx_images(read_idx_bytes(images_path))
    labels = parse_idx_labels(read_idx_bytes(labels_path))
    if images.shape[0] != labels.shape[0]:
        raise ConsistencyError(f"{images.shape[0]} images but {labels.shape[0]} labels")
    if labels.size and int(labels.max()) >= n_classes:
        raise ConsistencyError(f"label {int(labels.max())} is not below n_classes={n_classes}")
    if limit is not None:
        images, labels = images[:limit], labels[:limit]
    logger.info("idx_loaded", path=str(images_path), count=int(labels.size),
                rows=int(images.shape[1]), cols=int(images.shape[2]))
    return LabeledImageSet(images.astype(np.float64) / 255.0, labels, n_classes, meta=f"idx:{Path(images_path).name}")
