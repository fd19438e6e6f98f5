import numpy as np
import pytest

from betamatte import io
from betamatte.core import BACKGROUND, FOREGROUND, UNKNOWN


def test_beta_roundtrip_bit_exact(tmp_path, rng):
    beta = rng.normal(size=(5, 7, 4)).astype(np.float32)
    path = tmp_path / "b.betaf32"
    io.write_beta(path, beta)
    back = io.read_beta(path)
    assert back.dtype == np.float32
    assert back.tobytes() == beta.tobytes()
    raw = path.read_bytes()
    assert raw.startswith(b"BETAF32 7 5\n")
    assert len(raw) == len(b"BETAF32 7 5\n") + 5 * 7 * 16
    # record 0 is little-endian a_R, a_G, a_B, b of pixel (0, 0)
    assert np.array_equal(np.frombuffer(raw[12:28], "<f4"), beta[0, 0])


def test_beta_file_is_deterministic(tmp_path, rng):
    beta = rng.normal(size=(3, 3, 4))
    io.write_beta(tmp_path / "a", beta)
    io.write_beta(tmp_path / "b", beta)
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_read_beta_rejects_garbage(tmp_path):
    (tmp_path / "x").write_bytes(b"NOTBETA 1 1\n" + bytes(16))
    with pytest.raises(OSError):
        io.read_beta(tmp_path / "x")
    (tmp_path / "y").write_bytes(b"BETAF32 2 2\n" + bytes(16))
    with pytest.raises(OSError):
        io.read_beta(tmp_path / "y")


@pytest.mark.parametrize("bits,step", [(8, 1 / 255), (16, 1 / 65535)])
def test_alpha_roundtrip(tmp_path, rng, bits, step):
    alpha = rng.random((9, 11))
    path = tmp_path / "a.png"
    io.write_map(path, alpha, bits=bits)
    back = io.read_map(path)
    assert back.shape == alpha.shape
    assert np.max(np.abs(back - alpha)) <= step


def test_export_clamps(tmp_path):
    path = tmp_path / "a.png"
    io.write_map(path, np.array([[-0.3, 1.4]]))
    assert io.read_map(path).tolist() == [[0.0, 1.0]]


def test_trimap_thresholds(tmp_path):
    gray = np.array([[0, 40, 128, 210, 255]], dtype=np.uint8)
    import cv2
    cv2.imwrite(str(tmp_path / "t.png"), gray)
    assert io.read_trimap(tmp_path / "t.png").tolist() == [
        [BACKGROUND, BACKGROUND, UNKNOWN, FOREGROUND, FOREGROUND]]


def test_image_roundtrip_rgb_order(tmp_path):
    img = np.zeros((2, 2, 3))
    img[0, 0] = (1, 0, 0)
    io.write_image(tmp_path / "i.png", img)
    back = io.read_image(tmp_path / "i.png")
    assert back[0, 0].tolist() == [1, 0, 0]


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        io.read_image(tmp_path / "nope.png")
