"""
Held-out Dice under the four experimental regimes.

    matched    train and test on block-averaged maps at each ladder pitch
    cross_res  train at native pitch, test on block-averaged maps
               interpolated back onto the native grid
    zbin       matched models tested on maps whose heights were binned
               with a bin width equal to the pitch
    lopo       train on every papyrus but one, test the held-out papyrus
               at native pitch

Inpainting runs once per sample on the native map; degradation acts on
physical heights and normalization comes last.
"""
import contextvars
import logging
import os
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Sequence, Tuple

from reliefscan.evaluation.folds import FoldPlan, make_folds
from reliefscan.evaluation.metrics import dice
from reliefscan.exceptions import (BaseError, FoldError, ManifestError,
                                   RegimeError)
from reliefscan.hmap_io.hmap import read_heightmap
from reliefscan.hmap_io.models import save_model
from reliefscan.hmap_io.pgm import read_mask
from reliefscan.models.enums import FoldKind, Regime
from reliefscan.models.heightmap import HeightMap, LabelMask, check_same_shape
from reliefscan.models.image import NormalizedImage
from reliefscan.models.manifest import DatasetManifest, Sample
from reliefscan.models.results import ResultRow, ResultTable
from reliefscan.models.segmenter import SegmenterModel
from reliefscan.preprocess import (Missingness, inpaint_missing,
                                   missingness_stats, normalize_u16)
from reliefscan.resample import (PitchLadder, block_downsample,
                                 block_downsample_labels, degrade_roundtrip,
                                 scale_pitch, zbin)
from reliefscan.segment import Hyperparameters, SegmenterBase, TrainingSample
from reliefscan.segment.features import scales_for_shape
from reliefscan.segment.logistic import LogisticSegmenter
from reliefscan.utils.hooks import (fold_trained_hook, regime_complete_hook,
                                    sample_scored_hook)
from reliefscan.utils.logging import run_context

LOG = logging.getLogger('reliefscan.experiment')

FOLD_SEED_OFFSET = 0
MODEL_SEED_OFFSET = 1000
LOPO_SEED_OFFSET = 2000

Prepared = Dict[str, Tuple[NormalizedImage, LabelMask]]


class Experiment:

    def __init__(self, manifest: DatasetManifest, ladder: Sequence[int] = None, hyper: Hyperparameters = None,
                 segmenter: SegmenterBase = None, **kwargs) -> None:
        if not len(manifest):
            raise ManifestError('empty manifest: nothing to evaluate')
        self.manifest = manifest
        self.hyper = hyper or Hyperparameters()
        self.segmenter = segmenter or LogisticSegmenter(name='logistic')
        self.kernels = list(ladder or [1])
        self.threads = int(kwargs.get('threads', 1))
        self.n_folds = int(kwargs.get('n_folds', 5))
        self.inpaint_radius = int(kwargs.get('inpaint_radius', 3))
        self.percentiles = tuple(kwargs.get('percentiles', (0.5, 99.5)))
        self.model_dir = kwargs.get('model_dir', None)

        self._lock = threading.Lock()
        self._native = OrderedDict()  # type: OrderedDict[str, Tuple[HeightMap, LabelMask]]
        self._missingness = OrderedDict()  # type: OrderedDict[str, Missingness]
        self._models = {}  # type: Dict[Tuple[str, int, int], SegmenterModel]
        self._trained_on = {}  # type: Dict[str, List[str]]
        self._prepared = {}  # type: Dict[int, Prepared]
        self._plan = None  # type: FoldPlan
        self._key_locks = {}  # type: Dict[Any, threading.Lock]

    @classmethod
    def from_config(cls, manifest: DatasetManifest, config: Dict[str, Any], segmenter: SegmenterBase = None) -> 'Experiment':
        model_dir = os.path.join(config['OUTPUT_DIR'], 'models') if config.get('SAVE_MODELS') else None
        return Experiment(
            manifest,
            ladder=config['LADDER'],
            hyper=Hyperparameters.from_config(config),
            segmenter=segmenter,
            threads=config['THREADS'],
            n_folds=config['N_FOLDS'],
            inpaint_radius=config['INPAINT_RADIUS'],
            percentiles=config['ROBUST_PERCENTILES'],
            model_dir=model_dir
        )

    @property
    def ladder(self) -> PitchLadder:
        return PitchLadder(self.kernels, self.native_pitch_um)

    @property
    def native_pitch_um(self) -> float:
        self.load()
        return next(iter(self._native.values()))[0].pitch_um

    @property
    def plan(self) -> FoldPlan:
        if self._plan is None:
            self._plan = make_folds(self.manifest, FoldKind.CV5, self.hyper.seed + FOLD_SEED_OFFSET, self.n_folds)
        return self._plan

    def _map(self, fn: Callable, items: Sequence) -> List:
        if self.threads <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            futures = [executor.submit(contextvars.copy_context().run, fn, item) for item in items]
            return [f.result() for f in futures]

    def _key_lock(self, key) -> threading.Lock:
        with self._lock:
            return self._key_locks.setdefault(key, threading.Lock())

    def load(self) -> None:
        """Read, check and inpaint every sample once."""
        with self._key_lock('load'):
            if self._native:
                return

            def load_sample(sample: Sample):
                raw = read_heightmap(sample.heightmap_path)
                labels = read_mask(sample.label_path)
                check_same_shape(raw, labels, 'heightmap and labels of {}'.format(sample.sample_id))
                return raw, labels, inpaint_missing(raw, self.inpaint_radius, self.percentiles)

            loaded = self._map(load_sample, list(self.manifest))
            pitches = {raw.pitch_um for raw, _, _ in loaded}
            if len(pitches) > 1:
                raise ManifestError('samples have mixed native pitches: {}'.format(sorted(pitches)))
            for sample, (raw, labels, filled) in zip(self.manifest, loaded):
                self._missingness[sample.sample_id] = missingness_stats(raw, labels)
                self._native[sample.sample_id] = (filled, labels)
            LOG.info('Loaded and inpainted %d samples at %s um', len(loaded), pitches.pop())

    def missingness(self) -> List[Tuple[Sample, Missingness]]:
        self.load()
        return [(s, self._missingness[s.sample_id]) for s in self.manifest]

    def prepared(self, n: int) -> Prepared:
        """Block-averaged, normalized images and majority-rule labels at kernel n."""
        self.load()
        with self._key_lock(('prepared', n)):
            with self._lock:
                if n in self._prepared:
                    return self._prepared[n]
            items = list(self._native.items())

            def prepare(item):
                sid, (filled, labels) = item
                return sid, (normalize_u16(block_downsample(filled, n)), block_downsample_labels(labels, n))

            prepared = OrderedDict(self._map(prepare, items))
            with self._lock:
                self._prepared[n] = prepared
            return prepared

    def _scales(self, shape) -> List[int]:
        scales = scales_for_shape(shape, self.hyper.scales_px)
        if not scales:
            raise RegimeError('no feature scale in {} fits a {}x{} grid'.format(self.hyper.scales_px, shape[1], shape[0]))
        return scales

    def model(self, kind: FoldKind, n: int, fold: int, train_ids: List[str], name: str = None) -> SegmenterModel:
        """Train once per (kind, kernel, fold); concurrent callers wait for the first."""
        key = (FoldKind(kind).value, n, fold)
        with self._key_lock(('model',) + key):
            with self._lock:
                if key in self._models:
                    return self._models[key]

            prepared = self.prepared(n)
            samples = [TrainingSample(*prepared[sid]) for sid in train_ids]
            shape = min((s.image.shape for s in samples), key=min)
            offset = LOPO_SEED_OFFSET if FoldKind(kind) == FoldKind.LOPO else MODEL_SEED_OFFSET
            model_id = '{}-{}'.format(FoldKind(kind).value, name) if name else '{}-n{}-f{}'.format(FoldKind(kind).value, n, fold)
            hyper = self.hyper.replace(
                seed=self.hyper.seed + offset + fold,
                scales_px=self._scales(shape),
                model_id=model_id
            )
            model = self.segmenter.fit(samples, hyper)
            model.model_id = model_id

            with self._lock:
                self._models[key] = model
                self._trained_on[model_id] = list(train_ids)

        if self.model_dir:
            os.makedirs(self.model_dir, exist_ok=True)
            save_model(model, os.path.join(self.model_dir, model_id + '.json'))
        fold_trained_hook.send(kind, model_id=model_id, fold=fold, pitch_um=scale_pitch(self.native_pitch_um, n))
        return model

    def _score(self, regime: Regime, model: SegmenterModel, sid: str, image: NormalizedImage,
               labels: LabelMask, pitch_um: float, fold: int) -> ResultRow:
        if sid in self._trained_on[model.model_id]:
            raise FoldError('sample {} was used to train {}'.format(sid, model.model_id))
        pred = self.segmenter.predict(model, image)
        score = dice(pred.ink, labels.ink)
        sample_scored_hook.send(regime.value, sample_id=sid, pitch_um=pitch_um, dice=score)
        return ResultRow(
            sample_id=sid,
            papyrus_id=self.manifest.get(sid).papyrus_id,
            regime=regime,
            pitch_um=pitch_um,
            dice=score,
            fold=fold,
            model_id=model.model_id
        )

    def _run_tasks(self, regime: Regime, tasks: List, fn: Callable) -> ResultTable:
        def guarded(task):
            with run_context(regime=regime.value):
                try:
                    return fn(task)
                except BaseError as e:
                    LOG.error('Regime %s failed on task %s: %s', regime.value, task, e.message)
                    raise RegimeError('regime {} aborted: task {} failed: {}'.format(
                        regime.value, task, e.message), errors=[e.message]) from e

        table = ResultTable()
        for rows in self._map(guarded, tasks):
            table.extend(rows)
        regime_complete_hook.send(regime.value, rows=len(table))
        LOG.info('Regime %s produced %d rows', regime.value, len(table))
        return table

    def matched(self) -> ResultTable:
        self.load()
        native = self.native_pitch_um
        for n in self.kernels:
            self.prepared(n)

        def task(item):
            n, fold = item
            pitch = scale_pitch(native, n)
            with run_context(pitch_um=pitch):
                model = self.model(FoldKind.CV5, n, fold, self.plan.train_ids(fold))
                prepared = self.prepared(n)
                return [self._score(Regime.Matched, model, sid, prepared[sid][0], prepared[sid][1], pitch, fold)
                        for sid in self.plan.test_ids(fold)]

        return self._run_tasks(Regime.Matched, [(n, k) for n in self.kernels for k in self.plan.folds], task)

    def zbin(self) -> ResultTable:
        self.load()
        native = self.native_pitch_um
        for n in self.kernels:
            self.prepared(n)

        def task(item):
            n, fold = item
            pitch = scale_pitch(native, n)
            with run_context(pitch_um=pitch):
                model = self.model(FoldKind.CV5, n, fold, self.plan.train_ids(fold))
                prepared = self.prepared(n)
                rows = []
                for sid in self.plan.test_ids(fold):
                    coarse = block_downsample(self._native[sid][0], n)
                    image = normalize_u16(zbin(coarse, coarse.pitch_um))
                    rows.append(self._score(Regime.ZBin, model, sid, image, prepared[sid][1], pitch, fold))
                return rows

        return self._run_tasks(Regime.ZBin, [(n, k) for n in self.kernels for k in self.plan.folds], task)

    def cross_res(self) -> ResultTable:
        self.load()
        native = self.native_pitch_um

        def task(fold):
            model = self.model(FoldKind.CV5, 1, fold, self.plan.train_ids(fold))
            rows = []
            for sid in self.plan.test_ids(fold):
                filled, labels = self._native[sid]
                for n in self.kernels:
                    pitch = scale_pitch(native, n)
                    with run_context(pitch_um=pitch):
                        degraded = degrade_roundtrip(filled, n)
                        image = normalize_u16(degraded)
                        cropped = labels.crop(*degraded.shape)
                        rows.append(self._score(Regime.CrossRes, model, sid, image, cropped, pitch, fold))
            return rows

        return self._run_tasks(Regime.CrossRes, list(self.plan.folds), task)

    def lopo(self) -> ResultTable:
        self.load()
        plan = make_folds(self.manifest, FoldKind.LOPO, self.hyper.seed + FOLD_SEED_OFFSET)
        native = self.native_pitch_um

        def task(fold):
            model = self.model(FoldKind.LOPO, 1, fold, plan.train_ids(fold), name=plan.names[fold])
            prepared = self.prepared(1)
            return [self._score(Regime.Lopo, model, sid, prepared[sid][0], prepared[sid][1], native, fold)
                    for sid in plan.test_ids(fold)]

        return self._run_tasks(Regime.Lopo, list(plan.folds), task)

    def run(self, regime: Regime) -> ResultTable:
        regime = Regime(regime)
        LOG.info('Running regime %s over kernels %s', regime.value, self.kernels)
        return {
            Regime.Matched: self.matched,
            Regime.CrossRes: self.cross_res,
            Regime.ZBin: self.zbin,
            Regime.Lopo: self.lopo
        }[regime]()


def run_matched(manifest: DatasetManifest, ladder: Sequence[int], hyper: Hyperparameters, **kwargs) -> ResultTable:
    return Experiment(manifest, ladder, hyper, **kwargs).matched()


def run_cross_res(manifest: DatasetManifest, ladder: Sequence[int], hyper: Hyperparameters, **kwargs) -> ResultTable:
    return Experiment(manifest, ladder, hyper, **kwargs).cross_res()


def run_zbin(manifest: DatasetManifest, ladder: Sequence[int], hyper: Hyperparameters, **kwargs) -> ResultTable:
    return Experiment(manifest, ladder, hyper, **kwargs).zbin()


def run_lopo(manifest: DatasetManifest, hyper: Hyperparameters, **kwargs) -> ResultTable:
    return Experiment(manifest, [1], hyper, **kwargs).lopo()
