import unittest
from unittest import mock

import numpy as np

from reliefscan.app import create_app, segmenters
from reliefscan.exceptions import SegmenterError
from reliefscan.models.heightmap import LabelMask
from reliefscan.models.image import NormalizedImage
from reliefscan.models.segmenter import SegmenterModel
from reliefscan.segment import Hyperparameters, SegmenterBase, TrainingSample
from reliefscan.segment.logistic import LogisticSegmenter
from reliefscan.segment.roughness import RoughnessSegmenter


class FakeEntryPoint:

    def __init__(self, name, target=None, error=None):
        self.name = name
        self.target = target
        self.error = error

    def load(self):
        if self.error:
            raise self.error
        return self.target


class PluginsTestCase(unittest.TestCase):

    def setUp(self):
        create_app()

    def tearDown(self):
        segmenters.register()

    def test_builtins(self):

        logistic = segmenters.get('logistic')
        self.assertIsInstance(logistic, LogisticSegmenter)
        self.assertEqual(logistic.name, 'logistic')
        self.assertIsInstance(segmenters.get('roughness'), RoughnessSegmenter)

    def test_unknown(self):

        with self.assertRaises(SegmenterError) as cm:
            segmenters.get('unet')
        self.assertIn('logistic, roughness', cm.exception.message)

    def test_entry_points(self):

        eps = [
            FakeEntryPoint('everything', target=EverythingSegmenter),
            FakeEntryPoint('broken', error=ImportError('no module named broken')),
            FakeEntryPoint('logistic', target=EverythingSegmenter)
        ]
        with mock.patch('reliefscan.utils.plugin.entry_points', return_value=eps):
            with self.assertLogs('reliefscan.plugins', level='ERROR'):
                segmenters.register()

        self.assertEqual(list(segmenters.available), ['logistic', 'roughness', 'everything'])
        self.assertIsInstance(segmenters.get('logistic'), LogisticSegmenter)

        plugin = segmenters.get('everything')
        u16 = np.arange(400, dtype=np.uint16).reshape(20, 20)
        image = NormalizedImage(u16, 0.34, 0.0, 1.0)
        labels = LabelMask(u16 < 100)
        model = plugin.fit([TrainingSample(image, labels)], Hyperparameters(scales_px=[1, 2]))
        self.assertTrue(plugin.predict(model, image).ink.all())


class EverythingSegmenter(SegmenterBase):
    """Marks every pixel as ink."""

    def fit(self, samples, hyper):
        return SegmenterModel.zeros(hyper.scales_px, samples[0].image.pitch_um)
