import unittest

import numpy as np

from reliefscan.evaluation.metrics import dice
from reliefscan.exceptions import FeatureMismatch, SegmenterError
from reliefscan.models.heightmap import LabelMask
from reliefscan.models.image import NormalizedImage
from reliefscan.models.segmenter import SegmenterModel, feature_names
from reliefscan.segment import (Hyperparameters, TrainingSample,
                                check_training_set, predict)
from reliefscan.segment.augment import (ELASTIC_MAX_PX, IDENTITY, Augmentation,
                                        apply_augmentation, augment,
                                        draw_augmentation)
from reliefscan.segment.features import (extract_features, kernel_support,
                                         scales_for_shape)
from reliefscan.segment.logistic import LogisticSegmenter
from reliefscan.segment.loss import (composite_loss, composite_loss_grad,
                                     cross_entropy, soft_dice_loss)
from reliefscan.segment.roughness import RoughnessSegmenter


def image(u16, pitch_um=0.34):
    return NormalizedImage(np.asarray(u16, dtype=np.uint16), pitch_um, 0.0, 1.0)


def square_sample(size=48, side=24, ink_level=10000, paper_level=50000):
    u = np.full((size, size), paper_level, dtype=np.uint16)
    ink = np.zeros((size, size), dtype=bool)
    lo = (size - side) // 2
    ink[lo:lo + side, lo:lo + side] = True
    u[ink] = ink_level
    return TrainingSample(image(u), LabelMask(ink))


class FeatureTestCase(unittest.TestCase):

    def test_kernel_support(self):

        self.assertEqual(kernel_support(1), 7)
        self.assertEqual(kernel_support(16), 97)
        self.assertEqual(scales_for_shape((20, 30), [1, 2, 4, 8]), [1, 2])

    def test_layout(self):

        u = np.random.default_rng(0).integers(0, 65536, size=(32, 40))
        stack = extract_features(image(u), [1, 2, 4])
        self.assertEqual(stack.count, 13)
        self.assertEqual(stack.names, feature_names([1, 2, 4]))
        self.assertEqual(stack.shape, (32, 40))
        self.assertEqual(stack.pixels().shape, (32 * 40, 13))
        self.assertTrue(np.array_equal(stack.plane('height'), image(u).unit))

    def test_flat_image(self):

        stack = extract_features(image(np.full((16, 16), 1234)), [1, 2])
        for name in ('gradient_s1', 'roughness_s2', 'laplacian_s1'):
            self.assertFalse(stack.plane(name).any(), name)
        self.assertTrue(np.all(stack.plane('smooth_s2') == 1234 / 65535.0))

    def test_default_feature_count(self):

        u = np.zeros((100, 100), dtype=np.uint16)
        self.assertEqual(extract_features(image(u)).count, 21)

    def test_linear_ramp(self):

        u = np.tile(np.arange(64, dtype=np.uint16) * 1000, (64, 1))
        stack = extract_features(image(u), [1, 2])
        slope = 1000 / 65535.0
        interior = (slice(14, -14), slice(14, -14))
        for s in (1, 2):
            self.assertTrue(np.allclose(stack.plane('gradient_s{}'.format(s))[interior], slope, atol=1e-9))
            self.assertTrue(np.allclose(stack.plane('laplacian_s{}'.format(s))[interior], 0.0, atol=1e-9))
            self.assertTrue(np.allclose(stack.plane('roughness_s{}'.format(s))[interior], 0.0, atol=1e-6))

    def test_too_small(self):

        with self.assertRaises(SegmenterError):
            extract_features(image(np.zeros((10, 10))), [1, 2])
        with self.assertRaises(SegmenterError):
            extract_features(image(np.zeros((10, 10))), [])


class LossTestCase(unittest.TestCase):

    def test_perfect_prediction(self):

        y = np.array([0.0, 1.0, 1.0, 0.0])
        self.assertAlmostEqual(soft_dice_loss(y, y), 0.0, places=12)
        self.assertAlmostEqual(cross_entropy(np.zeros(4), y), np.log(2.0), places=12)

    def test_gradient_matches_finite_differences(self):

        rng = np.random.default_rng(1)
        z = rng.normal(0.0, 2.0, size=50)
        y = (rng.random(50) < 0.3).astype(float)
        loss, grad = composite_loss_grad(z, y)
        self.assertAlmostEqual(loss, composite_loss(z, y), places=12)

        eps = 1e-6
        numeric = np.empty_like(z)
        for i in range(z.size):
            up, down = z.copy(), z.copy()
            up[i] += eps
            down[i] -= eps
            numeric[i] = (composite_loss(up, y) - composite_loss(down, y)) / (2 * eps)
        self.assertTrue(np.allclose(grad, numeric, atol=1e-6), np.abs(grad - numeric).max())

    def test_gradient_on_small_grids(self):

        rng = np.random.default_rng(12)
        eps = 1e-6
        for _ in range(20):
            z = rng.normal(0.0, 1.5, size=(8, 8))
            y = (rng.random((8, 8)) < 0.4).astype(float)
            _, grad = composite_loss_grad(z, y)
            self.assertEqual(grad.shape, (8, 8))
            numeric = np.empty_like(z)
            for idx in np.ndindex(z.shape):
                up, down = z.copy(), z.copy()
                up[idx] += eps
                down[idx] -= eps
                numeric[idx] = (composite_loss(up, y) - composite_loss(down, y)) / (2 * eps)
            self.assertLessEqual(np.linalg.norm(grad - numeric) / np.linalg.norm(numeric), 1e-4)


class LogisticSegmenterTestCase(unittest.TestCase):

    def setUp(self):
        self.segmenter = LogisticSegmenter(name='logistic')
        self.hyper = Hyperparameters(learning_rate=0.05, epochs=300, patience=300, pixels_per_sample=0,
                                     batch_pixels=512, scales_px=[1, 2], seed=3, augment_copies=0)

    def test_separable_toy(self):

        sample = square_sample()
        model = self.segmenter.fit([sample], self.hyper)
        pred = self.segmenter.predict(model, sample.image)
        self.assertGreaterEqual(dice(pred.ink, sample.labels.ink), 0.99)
        self.assertEqual(model.feature_count, 9)
        self.assertEqual(model.train_pitch_um, 0.34)

    def test_loss_decreases(self):

        model = self.segmenter.fit([square_sample()], self.hyper.replace(epochs=20, learning_rate=0.01))
        self.assertEqual(len(model.loss_curve), 20)
        self.assertLess(model.loss_curve[-1], model.loss_curve[0])

    def test_deterministic(self):

        hyper = self.hyper.replace(epochs=5, augment_copies=1)
        a = self.segmenter.fit([square_sample()], hyper)
        b = self.segmenter.fit([square_sample()], hyper)
        self.assertEqual(a.weights.tolist(), b.weights.tolist())
        self.assertEqual(a.bias, b.bias)

    def test_single_class(self):

        sample = square_sample(side=0)
        with self.assertRaises(SegmenterError):
            self.segmenter.fit([sample], self.hyper)
        with self.assertRaises(SegmenterError):
            check_training_set([])

    def test_zero_model_predicts_half(self):

        model = SegmenterModel.zeros([1, 2], 0.34)
        pred = predict(model, image(np.arange(400).reshape(20, 20)))
        self.assertTrue(np.all(pred.prob == 0.5))
        self.assertTrue(pred.ink.all())

    def test_scale_mismatch(self):

        with self.assertRaises(FeatureMismatch):
            SegmenterModel(np.zeros(5), 0.0, [1, 2], np.zeros(5), np.ones(5), 0.34)


class RoughnessSegmenterTestCase(unittest.TestCase):

    def test_smooth_ink(self):

        rng = np.random.default_rng(5)
        u = rng.integers(20000, 45000, size=(64, 64)).astype(np.uint16)
        ink = np.zeros((64, 64), dtype=bool)
        ink[20:44, 20:44] = True
        u[ink] = 32500
        sample = TrainingSample(image(u), LabelMask(ink))

        segmenter = RoughnessSegmenter(name='roughness')
        model = segmenter.fit([sample], Hyperparameters(scales_px=[1, 2], pixels_per_sample=0))
        self.assertEqual(model.segmenter, 'roughness')
        self.assertEqual(int(np.count_nonzero(model.weights)), 1)
        self.assertGreaterEqual(dice(segmenter.predict(model, sample.image).ink, ink), 0.7)


class AugmentTestCase(unittest.TestCase):

    def test_identity(self):

        sample = square_sample()
        img, labels = apply_augmentation(sample.image, sample.labels, IDENTITY)
        self.assertIs(img, sample.image)
        self.assertIs(labels, sample.labels)

    def test_double_flip(self):

        u = np.random.default_rng(11).integers(0, 65536, size=(24, 30))
        ink = u > 40000
        flip = Augmentation(False, True, 0, 1.0, np.zeros((2, 4, 4)))
        once_img, once_labels = apply_augmentation(image(u), LabelMask(ink), flip)
        twice_img, twice_labels = apply_augmentation(once_img, once_labels, flip)
        self.assertFalse(np.array_equal(once_img.u16, u))
        self.assertEqual(twice_img.u16.tolist(), u.tolist())
        self.assertEqual(twice_labels, LabelMask(ink))

    def test_flip_rotate_keeps_labels_aligned(self):

        sample = square_sample(size=32, side=8)
        params = Augmentation(True, False, 1, 1.0, np.zeros((2, 4, 4)))
        img, labels = apply_augmentation(sample.image, sample.labels, params)
        self.assertEqual(labels.ink_pixels, 64)
        self.assertTrue(np.all(img.u16[labels.ink] == 10000))
        self.assertTrue(np.all(img.u16[~labels.ink] == 50000))

    def test_warp_keeps_labels_aligned(self):

        sample = square_sample(size=48, side=24)
        params = Augmentation(False, False, 0, 1.0, np.full((2, 4, 4), 0.4))
        img, labels = apply_augmentation(sample.image, sample.labels, params)

        self.assertEqual(labels, sample.labels)
        self.assertFalse(np.array_equal(img.u16, sample.image.u16))
        self.assertTrue(np.all(img.u16[12:35, 12:35] == 10000))
        self.assertTrue(np.all(img.u16[:11, :] == 50000))
        self.assertTrue(10000 < int(img.u16[35, 20]) < 50000)

    def test_ink_area_over_seeds(self):

        rr, cc = np.mgrid[0:64, 0:64]
        ink = (rr - 32) ** 2 + (cc - 32) ** 2 <= 64
        u = np.where(ink, 12000, 48000)
        area = int(ink.sum())
        self.assertEqual(area, 197)

        for seed in range(100):
            params = draw_augmentation(seed)
            self.assertTrue(np.any(params.displacement))
            self.assertLessEqual(float(np.abs(params.displacement).max()), ELASTIC_MAX_PX)
            _, labels = augment(image(u), LabelMask(ink), seed)
            self.assertLess(abs(labels.ink_pixels - area) / area, 0.05, 'seed {}'.format(seed))

    def test_seeded(self):

        sample = square_sample(size=64, side=24)
        a_img, a_labels = augment(sample.image, sample.labels, 17)
        b_img, b_labels = augment(sample.image, sample.labels, 17)
        self.assertTrue(np.array_equal(a_img.u16, b_img.u16))
        self.assertEqual(a_labels, b_labels)
        self.assertEqual(a_img.shape, (64, 64))
        self.assertEqual(a_labels.ink_pixels, 576)
