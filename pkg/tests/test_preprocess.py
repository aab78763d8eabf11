import unittest

import numpy as np

from reliefscan.exceptions import InpaintError, ReliefscanException
from reliefscan.models.heightmap import HeightMap, LabelMask
from reliefscan.preprocess import (U16_MAX, inpaint_missing, missingness_stats,
                                   normalize_u16, percentile, prepare,
                                   robust_range, round_half_away,
                                   validity_mask)
from reliefscan.segment import Hyperparameters, TrainingSample
from reliefscan.segment.logistic import LogisticSegmenter
from reliefscan.synth import SynthConfig, generate_sample


class HelpersTestCase(unittest.TestCase):

    def test_percentile_linear(self):

        self.assertEqual(float(percentile([1, 2, 3, 4, 5], 25)), 2.0)
        self.assertEqual(float(percentile([1, 2, 3, 4], 50)), 2.5)
        self.assertEqual(float(percentile([10.0, 20.0], 75)), 17.5)

    def test_round_half_away(self):

        self.assertEqual(round_half_away(np.array([2.5, -2.5, 0.49, 1.5])).tolist(), [3.0, -3.0, 0.0, 2.0])

    def test_validity_mask(self):

        h = HeightMap(np.array([[1.0, np.nan], [np.inf, 2.0]]), 0.34)
        self.assertEqual(validity_mask(h).m.tolist(), [[True, False], [False, True]])
        self.assertEqual(validity_mask(h).fraction_false, 0.5)


class InpaintTestCase(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(2024)

    def test_finite_pixels_untouched(self):

        for _ in range(100):
            z = self.rng.normal(0.0, 3.0, size=(32, 32)).cumsum(axis=1)
            frac = self.rng.uniform(0.01, 0.05)
            dropped = self.rng.choice(z.size, size=int(frac * z.size), replace=False)
            z.ravel()[dropped] = np.nan
            h = HeightMap(z, 0.34)

            filled = inpaint_missing(h)
            valid = np.isfinite(h.z)
            self.assertTrue(filled.is_complete)
            self.assertEqual(filled.z[valid].tobytes(), h.z[valid].tobytes())

            lo, hi = robust_range(h)
            self.assertTrue(np.all(filled.z[~valid] >= lo - 1e-9))
            self.assertTrue(np.all(filled.z[~valid] <= hi + 1e-9))

    def test_constant_map_fills_exactly(self):

        z = np.full((16, 16), 7.25)
        z[3, 4] = np.nan
        z[10, 11] = np.nan
        filled = inpaint_missing(HeightMap(z, 0.34))
        self.assertTrue(np.all(filled.z == 7.25))

    def test_ramp_hole(self):

        c = 0.1
        z = np.tile(np.arange(16, dtype=np.float64) * c, (16, 1))
        expected = z[8, 8]
        z[8, 8] = np.nan
        filled = inpaint_missing(HeightMap(z, 0.34), radius_px=3)
        step = 15 * c / 255.0
        self.assertLessEqual(abs(filled.z[8, 8] - expected), 2 * step + 1e-12)

    def test_complete_map_is_copied(self):

        h = HeightMap(np.arange(64, dtype=float).reshape(8, 8), 0.34)
        self.assertTrue(inpaint_missing(h).same_values(h))

    def test_all_missing(self):

        with self.assertRaises(InpaintError):
            inpaint_missing(HeightMap(np.full((4, 4), np.nan), 0.34))

    def test_bad_radius(self):

        with self.assertRaises(InpaintError):
            inpaint_missing(HeightMap(np.zeros((4, 4)), 0.34), radius_px=0)


class NormalizeTestCase(unittest.TestCase):

    def test_endpoints(self):

        z = np.array([[-2.0, 0.0], [1.0, 2.0]])
        img = normalize_u16(HeightMap(z, 0.68))
        self.assertEqual(img.u16.dtype, np.uint16)
        self.assertEqual(img.u16.tolist(), [[0, 32768], [49151, U16_MAX]])
        self.assertEqual((img.z_min_um, img.z_max_um), (-2.0, 2.0))
        self.assertEqual(img.pitch_um, 0.68)
        self.assertFalse(img.degenerate)

    def test_flat(self):

        with self.assertLogs('reliefscan.preprocess', level='WARNING'):
            img = normalize_u16(HeightMap(np.full((4, 4), 3.0), 0.34))
        self.assertTrue(img.degenerate)
        self.assertFalse(img.u16.any())

    def test_missing_rejected(self):

        with self.assertRaises(ReliefscanException):
            normalize_u16(HeightMap(np.array([[1.0, np.nan]]), 0.34))

    def test_prepare(self):

        z = np.arange(100, dtype=float).reshape(10, 10)
        z[5, 5] = np.nan
        img = prepare(HeightMap(z, 0.34))
        self.assertEqual(img.shape, (10, 10))
        self.assertEqual(int(img.u16[9, 9]), U16_MAX)
        self.assertEqual(int(img.u16[0, 0]), 0)


class AffineInvarianceTestCase(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(77)

    def test_normalize_ignores_offset_and_scale(self):

        for _ in range(100):
            z = self.rng.normal(0.0, 5.0, size=(16, 20)).cumsum(axis=0)
            base = normalize_u16(HeightMap(z, 0.34)).u16
            self.assertEqual(normalize_u16(HeightMap(z + 17.25, 0.34)).u16.tolist(), base.tolist())
            self.assertEqual(normalize_u16(HeightMap(z * 2.5, 0.34)).u16.tolist(), base.tolist())

    def test_prepare_and_predict_ignore_offset_and_scale(self):

        segmenter = LogisticSegmenter()
        hyper = Hyperparameters(epochs=3, pixels_per_sample=0, scales_px=[1, 2], augment_copies=0, seed=5)
        samples = [generate_sample(SynthConfig(seed=s, width=64, height=64, pitch_um=2.0, stroke_width_um=12.0))
                   for s in range(20)]
        model = segmenter.fit([TrainingSample(prepare(samples[0].heightmap), samples[0].labels)], hyper)

        for sample in samples:
            h = sample.heightmap
            base = prepare(h)
            prob = segmenter.predict(model, base).prob
            for z in (h.z + 17.3, h.z * 2.5):
                moved = prepare(HeightMap(z, h.pitch_um))
                self.assertEqual(moved.u16.tolist(), base.u16.tolist())
                self.assertEqual(segmenter.predict(model, moved).prob.tobytes(), prob.tobytes())


class MissingnessTestCase(unittest.TestCase):

    def test_fractions(self):

        z = np.zeros((4, 4))
        z[0, 0] = np.nan
        z[0, 3] = np.nan
        z[1, 3] = np.nan
        ink = np.zeros((4, 4), dtype=bool)
        ink[:, :2] = True

        m = missingness_stats(HeightMap(z, 0.34), LabelMask(ink))
        self.assertEqual(m.frac_total, 3 / 16)
        self.assertEqual(m.frac_ink, 1 / 8)
        self.assertEqual(m.frac_papyrus, 2 / 8)
        self.assertAlmostEqual(m.dice_missing_vs_ink, 2 / 11, places=12)
