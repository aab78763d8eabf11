import logging
import os
import shutil
import tempfile
import unittest
from unittest import mock

import numpy as np

from reliefscan import settings
from reliefscan.evaluation.experiment import (Experiment, run_cross_res,
                                              run_lopo, run_matched, run_zbin)
from reliefscan.evaluation.folds import make_folds
from reliefscan.evaluation.metrics import dice
from reliefscan.exceptions import DimensionMismatch, FoldError, ManifestError
from reliefscan.models.enums import FoldKind, Regime
from reliefscan.models.manifest import DatasetManifest, Sample
from reliefscan.segment import Hyperparameters
from reliefscan.segment.augment import augment
from reliefscan.synth import SynthConfig, generate_corpus
from reliefscan.utils.hooks import fold_trained_hook
from reliefscan.utils.logging import ContextFilter, run_context


def fake_manifest(counts):
    entries = []
    for p, count in enumerate(counts):
        papyrus = 'P{}'.format(248 + p)
        for k in range(count):
            sid = '{}_{:02d}'.format(papyrus, k + 1)
            entries.append(Sample(sid, papyrus, 'alpha', sid + '.hmap', sid + '.pgm'))
    return DatasetManifest(entries)


class DiceTestCase(unittest.TestCase):

    def test_matches_set_definition(self):

        rng = np.random.default_rng(0)
        for _ in range(500):
            a = rng.random((32, 32)) < rng.uniform(0.0, 0.5)
            b = rng.random((32, 32)) < rng.uniform(0.0, 0.5)
            sa = set(zip(*np.nonzero(a)))
            sb = set(zip(*np.nonzero(b)))
            expected = 1.0 if not sa and not sb else 2.0 * len(sa & sb) / (len(sa) + len(sb))
            self.assertEqual(dice(a, b), expected)

    def test_symmetric(self):

        rng = np.random.default_rng(1)
        for _ in range(50):
            a = rng.random((32, 32)) < 0.3
            b = rng.random((32, 32)) < 0.3
            self.assertEqual(dice(a, b), dice(b, a))
            self.assertEqual(dice(a, a), 1.0)

    def test_edge_cases(self):

        empty = np.zeros((4, 4), dtype=bool)
        full = np.ones((4, 4), dtype=bool)
        self.assertEqual(dice(empty, empty), 1.0)
        self.assertEqual(dice(empty, full), 0.0)
        self.assertEqual(dice(full, full), 1.0)
        with self.assertRaises(DimensionMismatch):
            dice(empty, np.zeros((4, 5), dtype=bool))


class FoldTestCase(unittest.TestCase):

    def test_cv5_sizes(self):

        plan = make_folds(fake_manifest([5, 5, 4]), FoldKind.CV5, seed=0)
        self.assertEqual(sorted(plan.sizes, reverse=True), [3, 3, 3, 3, 2])
        self.assertEqual(plan.folds, [0, 1, 2, 3, 4])
        for fold in plan.folds:
            self.assertFalse(set(plan.test_ids(fold)) & set(plan.train_ids(fold)))

    def test_cv5_seeded(self):

        manifest = fake_manifest([5, 5, 4])
        a = make_folds(manifest, FoldKind.CV5, seed=11)
        b = make_folds(manifest, FoldKind.CV5, seed=11)
        self.assertEqual(a.assignments, b.assignments)

    def test_lopo(self):

        plan = make_folds(fake_manifest([5, 5, 4]), FoldKind.LOPO)
        self.assertEqual(plan.sizes, [5, 5, 4])
        self.assertEqual(plan.names, ['P248', 'P249', 'P250'])
        self.assertEqual(plan.fold_of('P250_03'), 2)

    def test_too_few(self):

        with self.assertRaises(FoldError):
            make_folds(fake_manifest([3]), FoldKind.CV5)
        with self.assertRaises(FoldError):
            make_folds(fake_manifest([6]), FoldKind.LOPO)


class ExperimentTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        base = SynthConfig(seed=7, width=48, height=48, pitch_um=2.0, stroke_width_um=8.0)
        self.manifest = generate_corpus(base, 5, {'P248': {}, 'P250': {'roughness_rms_um': 0.2}}, self.tmp)
        self.hyper = Hyperparameters(epochs=2, pixels_per_sample=512, batch_pixels=256, scales_px=[1, 2],
                                     learning_rate=0.01, seed=3)

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def experiment(self, **kwargs):
        return Experiment(self.manifest, ladder=[1, 2], hyper=self.hyper, **kwargs)

    def test_matched(self):

        trained = []

        def receiver(sender, **kwargs):
            trained.append(kwargs['model_id'])

        exp = self.experiment()
        with fold_trained_hook.connected_to(receiver):
            table = exp.matched()

        self.assertEqual(len(table), 20)
        self.assertEqual(table.pitches, [2.0, 4.0])
        self.assertEqual(sorted(trained), sorted('cv5-n{}-f{}'.format(n, k) for n in (1, 2) for k in range(5)))
        for row in table:
            self.assertEqual(row.regime, Regime.Matched)
            self.assertEqual(row.fold, exp.plan.fold_of(row.sample_id))
            self.assertNotIn(row.sample_id, exp.plan.train_ids(row.fold))
            self.assertTrue(0.0 <= row.dice <= 1.0)

    def test_cross_res_and_zbin_reuse_models(self):

        trained = []

        def receiver(sender, **kwargs):
            trained.append(kwargs['model_id'])

        exp = self.experiment()
        with fold_trained_hook.connected_to(receiver):
            cross = exp.cross_res()
            binned = exp.zbin()

        self.assertEqual(len(cross), 20)
        self.assertEqual(len(binned), 20)
        self.assertEqual({r.model_id for r in cross}, {'cv5-n1-f{}'.format(k) for k in range(5)})
        self.assertEqual(len(trained), 10)

    def test_lopo(self):

        table = run_lopo(self.manifest, self.hyper)
        self.assertEqual(len(table), 10)
        self.assertEqual({r.model_id for r in table}, {'lopo-P248', 'lopo-P250'})
        for row in table:
            self.assertEqual(row.model_id, 'lopo-' + row.papyrus_id)
            self.assertEqual(row.pitch_um, 2.0)

    def test_module_functions_match_experiment(self):

        def scores(table):
            return [(r.sample_id, r.pitch_um, r.dice) for r in table]

        exp = self.experiment()
        self.assertEqual(scores(run_matched(self.manifest, [1, 2], self.hyper)), scores(exp.matched()))
        self.assertEqual(scores(run_cross_res(self.manifest, [1, 2], self.hyper)), scores(exp.cross_res()))
        self.assertEqual(scores(run_zbin(self.manifest, [1, 2], self.hyper)), scores(exp.zbin()))

    def test_deterministic_across_threads(self):

        a = self.experiment(threads=1).run(Regime.Matched)
        b = self.experiment(threads=3).run(Regime.Matched)
        self.assertEqual([(r.sample_id, r.pitch_um, r.dice) for r in a],
                         [(r.sample_id, r.pitch_um, r.dice) for r in b])

    def test_workers_keep_run_context(self):

        exp = self.experiment(threads=3)

        def stamp(i):
            record = logging.LogRecord('reliefscan.experiment', logging.INFO, __file__, 1, 'task %s', (i,), None)
            ContextFilter().filter(record)
            return record.run_id, record.regime

        with run_context(run_id='7-matched', regime='matched'):
            stamps = exp._map(stamp, list(range(6)))
        self.assertEqual(stamps, [('7-matched', 'matched')] * 6)

    def test_concurrent_callers_share_one_model(self):

        trained = []

        def receiver(sender, **kwargs):
            trained.append(kwargs['model_id'])

        exp = self.experiment(threads=4)
        train_ids = exp.plan.train_ids(0)
        with fold_trained_hook.connected_to(receiver):
            models = exp._map(lambda _: exp.model(FoldKind.CV5, 1, 0, train_ids), list(range(4)))
        self.assertEqual(trained, ['cv5-n1-f0'])
        self.assertTrue(all(m is models[0] for m in models))

    def test_default_training_augments(self):

        self.assertEqual(settings.AUGMENT_COPIES, 1)
        self.assertEqual(self.hyper.augment_copies, 1)

        exp = self.experiment()
        train_ids = exp.plan.train_ids(0)
        with mock.patch('reliefscan.segment.logistic.augment', wraps=augment) as spy:
            exp.model(FoldKind.CV5, 1, 0, train_ids)
        self.assertEqual(spy.call_count, len(train_ids))
        self.assertEqual([c.args[2] for c in spy.call_args_list],
                         [1003 + 7919 * (i + 1) for i in range(len(train_ids))])

    def test_training_sample_is_never_scored(self):

        exp = self.experiment()
        train_ids = exp.plan.train_ids(0)
        model = exp.model(FoldKind.CV5, 1, 0, train_ids)
        image, labels = exp.prepared(1)[train_ids[0]]
        with self.assertRaises(FoldError):
            exp._score(Regime.Matched, model, train_ids[0], image, labels, 2.0, 0)

    def test_missingness_and_models(self):

        model_dir = os.path.join(self.tmp, 'models')
        exp = self.experiment(model_dir=model_dir)
        rows = exp.missingness()
        self.assertEqual(len(rows), 10)
        for sample, m in rows:
            self.assertAlmostEqual(m.frac_total, 39 / 2304.0)

        exp.model(FoldKind.CV5, 1, 0, exp.plan.train_ids(0))
        self.assertTrue(os.path.isfile(os.path.join(model_dir, 'cv5-n1-f0.json')))

    def test_empty_manifest(self):

        with self.assertRaises(ManifestError):
            Experiment(DatasetManifest([]))
