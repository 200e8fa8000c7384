import numpy as np
import pytest


def _corpus():
    data = pytest.importorskip("skimage.data")
    color = pytest.importorskip("skimage.color")
    images = [getattr(data, name)() for name in
              ("camera", "moon", "coins", "text", "page", "brick", "grass", "gravel")]
    for name in ("astronaut", "coffee", "chelsea", "rocket"):
        rgb = getattr(data, name)()
        images.append(np.floor(color.rgb2gray(rgb) * 255 + 0.5).astype(np.uint8))
    return images


_CORPUS = None


@pytest.fixture(scope="session")
def corpus():
    """Natural grayscale test images bundled with scikit-image."""
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = _corpus()
    return _CORPUS


@pytest.fixture(scope="session")
def natural_crop(corpus):
    """Random square crop from the natural-image corpus."""
    def crop(rng, size=128):
        img = corpus[int(rng.integers(len(corpus)))]
        r = int(rng.integers(0, img.shape[0] - size + 1))
        c = int(rng.integers(0, img.shape[1] - size + 1))
        return np.ascontiguousarray(img[r:r + size, c:c + size])
    return crop


@pytest.fixture(scope="session")
def test_image_256(corpus):
    """The camera image box-filtered down to 256x256."""
    cam = corpus[0].reshape(256, 2, 256, 2).mean(axis=(1, 3))
    return np.floor(cam + 0.5).astype(np.uint8)


def smooth_cover(rng, shape, spread=12.0):
    """Low-contrast synthetic cover: a gradient plus a few soft blobs."""
    rows, cols = shape
    y, x = np.mgrid[0:rows, 0:cols] / max(rows, cols)
    field = 0.6 * x + 0.4 * y
    for _ in range(4):
        cy, cx = rng.random(2)
        field += rng.normal() * np.exp(-((y - cy) ** 2 + (x - cx) ** 2) / 0.05)
    field = (field - field.mean()) / field.std()
    return np.clip(np.floor(128 + spread * field + 0.5), 0, 255).astype(np.uint8)


def mixed_bits(rng, shape=(8, 8)):
    while True:
        bits = rng.integers(0, 2, shape).astype(np.uint8)
        if 0 < bits.sum() < bits.size:
            return bits


@pytest.fixture
def rng():
    return np.random.default_rng(20241014)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for report in terminalreporter.stats.get(outcome, []):
            for name, value in getattr(report, "user_properties", []):
                if name == "acceptance":
                    lines.append(value)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
