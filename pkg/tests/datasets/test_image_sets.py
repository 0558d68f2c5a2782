"""Tests for synthetic patterns, IDX files and the dataset container."""
import gzip
import struct

import numpy as np
import pytest

from config.train_config import AngleLaw
from datasets.container import decode_dataset, encode_dataset, load_dataset, save_dataset
from datasets.idx import (
    IMAGES_MAGIC,
    LABELS_MAGIC,
    load_idx_images,
    parse_idx_images,
    parse_idx_labels,
)
from datasets.synthetic import GLYPH_NAMES, render_glyph, synthetic_rotated_patterns
from interfaces.datasets import LabeledImageSet
from interfaces.errors import ConfigError, ConsistencyError, FormatError, LengthError


def idx_images(pixels: np.ndarray) -> bytes:
    count, rows, cols = pixels.shape
    return struct.pack(">IIII", IMAGES_MAGIC, count, rows, cols) + pixels.astype(np.uint8).tobytes()


def idx_labels(labels) -> bytes:
    return struct.pack(">II", LABELS_MAGIC, len(labels)) + bytes(labels)


@pytest.fixture
def idx_pair(tmp_path):
    """Four hand-built 28x28 images and their labels."""
    pixels = np.zeros((4, 28, 28), dtype=np.uint8)
    for i in range(4):
        pixels[i, i, :] = 255
        pixels[i, :, i] = 51
    images = tmp_path / "images.idx"
    labels = tmp_path / "labels.idx"
    images.write_bytes(idx_images(pixels))
    labels.write_bytes(idx_labels([3, 1, 4, 1]))
    return images, labels, pixels


class TestSyntheticPatterns:
    """Test the rotated glyph generator."""

    def test_glyphs_render(self):
        """Test all ten glyphs render non-empty in [0, 1]."""
        assert len(GLYPH_NAMES) == 10
        for index in range(10):
            img = render_glyph(index, 16)
            assert img.shape == (16, 16)
            assert 0.0 <= img.min() and img.max() <= 1.0
            assert img.sum() > 0.0

    def test_c4_law_is_exact(self):
        """Test every c4 sample equals an exact quarter-turn permutation of its glyph."""
        data = synthetic_rotated_patterns(n_per_class=6, classes=3, size=12, angle_law=AngleLaw.C4, seed=2)
        for img, label, angle in zip(data.images, data.labels, data.angles):
            k = int(round(angle / (np.pi / 2.0))) % 4
            assert np.array_equal(img, np.rot90(render_glyph(int(label), 12), -k))

    def test_balanced_and_class_major(self):
        """Test n_per_class items per class in class order."""
        data = synthetic_rotated_patterns(n_per_class=5, classes=4, size=10, seed=0)
        assert np.array_equal(data.labels, np.repeat(np.arange(4), 5))
        assert data.meta == "synthetic:uniform"
        assert data.images.min() >= 0.0 and data.images.max() <= 1.0

    def test_deterministic(self):
        """Test the same seed gives identical bytes and another seed does not."""
        a = synthetic_rotated_patterns(n_per_class=3, size=8, seed=1)
        b = synthetic_rotated_patterns(n_per_class=3, size=8, seed=1)
        c = synthetic_rotated_patterns(n_per_class=3, size=8, seed=2)
        assert a.images.tobytes() == b.images.tobytes()
        assert a.images.tobytes() != c.images.tobytes()

    @pytest.mark.parametrize("kwargs", [{"classes": 1}, {"classes": 11}, {"size": 7}, {"n_per_class": 0}])
    def test_invalid(self, kwargs):
        """Test out-of-range arguments raise config errors."""
        with pytest.raises(ConfigError):
            synthetic_rotated_patterns(**kwargs)

    def test_split(self):
        """Test a seeded 20% split partitions the set."""
        data = synthetic_rotated_patterns(n_per_class=10, classes=2, size=8)
        train, test = data.split(0.2, seed=0)
        assert (len(train), len(test)) == (16, 4)
        assert sorted(np.concatenate([train.angles, test.angles])) == sorted(data.angles)


class TestIdx:
    """Test IDX parsing."""

    def test_load(self, idx_pair):
        """Test shapes, scaling and labels of the fixture."""
        images, labels, pixels = idx_pair
        data = load_idx_images(images, labels)
        assert data.images.shape == (4, 28, 28)
        assert np.array_equal(data.labels, [3, 1, 4, 1])
        assert data.images[2, 2, 5] == 1.0
        assert data.images[0, 5, 0] == pytest.approx(0.2)
        assert np.allclose(data.images * 255.0, pixels)

    def test_gzip(self, idx_pair, tmp_path):
        """Test gzipped files load the same."""
        images, labels, _ = idx_pair
        zipped = tmp_path / "images.idx.gz"
        zipped.write_bytes(gzip.compress(images.read_bytes()))
        assert np.array_equal(load_idx_images(zipped, labels).images, load_idx_images(images, labels).images)

    def test_limit(self, idx_pair):
        """Test limit keeps the leading items."""
        images, labels, _ = idx_pair
        assert np.array_equal(load_idx_images(images, labels, limit=2).labels, [3, 1])

    def test_wrong_magic(self, idx_pair):
        """Test an images file passed as labels is rejected."""
        images, _, _ = idx_pair
        with pytest.raises(FormatError):
            parse_idx_labels(images.read_bytes())

    def test_empty_file(self, tmp_path):
        """Test an empty file is too short for the header."""
        with pytest.raises(LengthError):
            parse_idx_images(b"")

    def test_truncated_payload(self, idx_pair):
        """Test a payload shorter than the header promises."""
        images, _, _ = idx_pair
        with pytest.raises(LengthError):
            parse_idx_images(images.read_bytes()[:-1])

    def test_count_mismatch(self, idx_pair, tmp_path):
        """Test image and label counts must agree."""
        images, _, _ = idx_pair
        labels = tmp_path / "three.idx"
        labels.write_bytes(idx_labels([0, 1, 2]))
        with pytest.raises(ConsistencyError):
            load_idx_images(images, labels)

    def test_label_range(self, idx_pair):
        """Test labels at or above n_classes are rejected."""
        images, labels, _ = idx_pair
        with pytest.raises(ConsistencyError):
            load_idx_images(images, labels, n_classes=4)


class TestContainer:
    """Test LADS1 dataset files."""

    def test_roundtrip(self, tmp_path):
        """Test images, labels and meta survive a save and load."""
        data = synthetic_rotated_patterns(n_per_class=2, classes=3, size=8)
        path = tmp_path / "set.lads"
        save_dataset(data, path)
        restored = load_dataset(path)
        assert np.array_equal(restored.images, data.images)
        assert np.array_equal(restored.labels, data.labels)
        assert (restored.n_classes, restored.meta) == (3, data.meta)

    def test_bad_magic(self):
        """Test foreign bytes raise."""
        with pytest.raises(FormatError):
            decode_dataset(b"PK\x03\x04 not a dataset")

    def test_truncated(self):
        """Test a missing trailing byte raises a length error."""
        data = LabeledImageSet(np.zeros((2, 3, 3)), [0, 1], 2)
        with pytest.raises(LengthError):
            decode_dataset(encode_dataset(data)[:-1])

    def test_label_mismatch(self):
        """Test a set with more labels than images is inconsistent."""
        with pytest.raises(ConsistencyError):
            LabeledImageSet(np.zeros((2, 3, 3)), [0, 1, 1], 2)
