"""Smoke checks of the compiled extension: one thin probe per exposed area."""

import json
import math

import numpy as np
import pytest

import polarkit

SCENE = {
    "width": 8,
    "height": 8,
    "background": {"s0": 200.0, "dop": 0.0, "aop": 0.0},
    "regions": [{"rect": [2, 2, 6, 6], "s0": 240.0, "dop": 0.5, "aop": 0.0}],
    "max_value": 255,
}


def test_stokes_round_trip():
    s = polarkit.StokesVector(10.0, 3.0, -4.0)
    r = polarkit.stokes_from_quad(*polarkit.forward_quad(s))
    assert r.s0 == pytest.approx(s.s0, abs=1e-12)
    assert r.s1 == pytest.approx(s.s1, abs=1e-12)
    assert r.s2 == pytest.approx(s.s2, abs=1e-12)
    assert s.is_physical()


def test_aop_dop():
    s = polarkit.StokesVector(10.0, 6.0, 8.0)
    assert polarkit.dop(s) == pytest.approx(1.0, abs=1e-15)
    assert polarkit.aop(s).radians == pytest.approx(0.5 * math.atan2(8.0, 6.0), abs=1e-15)
    assert polarkit.aop(polarkit.StokesVector(5.0, 0.0, 0.0)).degenerate
    with pytest.raises(polarkit.PolarkitError):
        polarkit.dop(polarkit.StokesVector(0.0, 0.0, 0.0))


def test_rotation_shifts_aop_and_keeps_dop():
    s = polarkit.StokesVector(10.0, 2.0, 5.0)
    r = polarkit.rotate_frame(s, 0.3)
    assert polarkit.dop(r) == pytest.approx(polarkit.dop(s), abs=1e-14)
    expected = polarkit.wrap_aop(polarkit.aop(s).radians - 0.3)
    assert polarkit.aop(r).radians == pytest.approx(expected, abs=1e-12)


def test_render_split_encode():
    raw = polarkit.render_raw(json.dumps(SCENE))
    assert raw.shape == (8, 8) and raw.dtype == np.uint16
    assert raw[0, 0] == 100  # unpolarized background, all sites read s0/2
    assert raw[2, 2] == 180  # region I0 site: (240 + 120) / 2

    i0, i45, i90, i135 = polarkit.split(raw, max_value=255)
    assert i0.shape == (4, 4)
    assert (i0[1, 1], i45[1, 1], i90[1, 1], i135[1, 1]) == (180.0, 120.0, 60.0, 120.0)

    s0, s1, s2 = polarkit.stokes_planes(raw, max_value=255)
    assert s0[0, 0] == pytest.approx(200.0)
    assert s0[1, 1] == pytest.approx(240.0)
    assert s1[1, 1] == pytest.approx(120.0)
    assert s2[1, 1] == pytest.approx(0.0)

    img = polarkit.encode(raw, combo="stokes", max_value=255)
    assert img.shape == (4, 4, 3) and img.dtype == np.uint8
    assert tuple(img[0, 0]) == (100, 128, 128)
    assert tuple(img[1, 1]) == (120, 188, 128)


def test_detection_metrics():
    assert polarkit.iou((0, 0, 2, 2), (1, 0, 3, 2)) == pytest.approx(1 / 3)

    gt = [("im0", "car", (0, 0, 10, 10)), ("im1", "car", (5, 5, 15, 15))]
    dets = [("im0", "car", (0, 0, 10, 10), 0.9), ("im1", "car", (5, 5, 15, 15), 0.6)]
    r = polarkit.average_precision(gt, dets, "car")
    assert r["ap"] == 1.0
    assert r["true_positives"] == 2
    # Canonical detection ids make the result independent of list order.
    assert polarkit.average_precision(gt, dets[::-1], "car") == r

    assert polarkit.weighted_map(0.8254, 0.6639, 442, 9265) == pytest.approx(0.6706, abs=0.002)
    assert polarkit.error_rate_evolution(0.8254, 0.9079) == pytest.approx(47.25, abs=0.05)


def test_subsample():
    kept = polarkit.subsample([f"frame_{i}" for i in range(100)], 25)
    assert kept == ["frame_0", "frame_25", "frame_50", "frame_75"]


def test_seeded_noise_is_deterministic():
    noisy = dict(SCENE, noise_sigma=6.0, seed=11)
    a = polarkit.render_raw(json.dumps(noisy))
    b = polarkit.render_raw(json.dumps(noisy))
    c = polarkit.render_raw(json.dumps(noisy), seed=12)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_gaussian_sample_stream():
    assert polarkit.gaussian_sample(3, 9) == polarkit.gaussian_sample(3, 9)
    draws = [polarkit.gaussian_sample(1, i) for i in range(20000)]
    assert abs(np.mean(draws)) < 0.05
    assert abs(np.var(draws) - 1.0) < 0.05
