import json
import os
import shutil
import tempfile
import unittest

from click.testing import CliRunner

from reliefscan.commands import cli

RUN_CONFIG = """\
SYNTH_DIR = 'corpus'
MANIFEST = 'corpus/manifest.csv'
OUTPUT_DIR = 'out'
SEED = 5
NATIVE_PITCH_UM = 2.0
SYNTH_WIDTH = 48
SYNTH_HEIGHT = 48
SYNTH_PARAMS = {'stroke_width_um': 8.0}
SYNTH_PAPYRI = ['P248', 'P250']
SYNTH_SAMPLES_PER_PAPYRUS = [5, 5]
LADDER = [1, 2]
FEATURE_SCALES = [1, 2]
EPOCHS = 2
PIXELS_PER_SAMPLE = 256
BATCH_PIXELS = 256
N_PERM = 99
"""


class CommandsTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.config_file = os.path.join(self.tmp, 'run.conf')
        with open(self.config_file, 'w') as f:
            f.write(RUN_CONFIG)
        self.out = os.path.join(self.tmp, 'out')
        self.runner = CliRunner()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args) + ['--config', self.config_file])

    def test_pipeline(self):

        result = self.invoke('synth')
        self.assertEqual(result.exit_code, 0, result.output)
        manifest = os.path.join(self.tmp, 'corpus', 'manifest.csv')
        self.assertIn(manifest, result.output)
        self.assertIn(os.path.join(self.tmp, 'corpus', 'P250_05.hmap'), result.output)
        self.assertTrue(os.path.isfile(manifest))

        result = self.invoke('run')
        self.assertEqual(result.exit_code, 0, result.output)
        for name in ('results_matched.csv', 'results_cross_res.csv', 'results_zbin.csv', 'results_lopo.csv',
                     'missingness.csv', 'provenance.json', 'config.echo'):
            path = os.path.join(self.out, name)
            self.assertTrue(os.path.isfile(path), name)
            self.assertIn(path, result.output)

        with open(os.path.join(self.out, 'results_matched.csv')) as f:
            self.assertEqual(len(f.read().splitlines()), 1 + 10 * 2)
        with open(os.path.join(self.out, 'config.echo')) as f:
            self.assertEqual(f.read(), RUN_CONFIG)
        with open(os.path.join(self.out, 'provenance.json')) as f:
            provenance = json.load(f)
        self.assertEqual(provenance['command'], 'run')
        self.assertEqual(provenance['settings']['SEED'], 5)

        result = self.invoke('stats')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn(os.path.join(self.out, 'stats.json'), result.output)
        with open(os.path.join(self.out, 'stats.json')) as f:
            stats = json.load(f)
        self.assertEqual(list(stats['regimes']), ['matched', 'cross_res', 'zbin', 'lopo'])
        self.assertIn('missingness', stats)

        result = self.invoke('report')
        self.assertEqual(result.exit_code, 0, result.output)
        for name in ('boxplot.svg', 'report.md'):
            self.assertIn(os.path.join(self.out, name), result.output)
            self.assertTrue(os.path.isfile(os.path.join(self.out, name)))

    def test_rerun_is_byte_identical(self):

        self.assertEqual(self.invoke('synth').exit_code, 0)
        self.assertEqual(self.invoke('run', '--regimes', 'matched', '--out', self.out).exit_code, 0)
        with open(os.path.join(self.out, 'results_matched.csv'), 'rb') as f:
            first = f.read()

        again = os.path.join(self.tmp, 'again')
        self.assertEqual(self.invoke('run', '--regimes', 'matched', '--out', again).exit_code, 0)
        with open(os.path.join(again, 'results_matched.csv'), 'rb') as f:
            self.assertEqual(f.read(), first)

    def test_stats_without_results(self):

        result = self.invoke('stats')
        self.assertEqual(result.exit_code, 3)
        self.assertIn('ERROR: no result tables found', result.output)
        self.assertIn(os.path.join(self.out, 'results_matched.csv'), result.output)

    def test_report_without_stats(self):

        result = self.invoke('report')
        self.assertEqual(result.exit_code, 3)
        self.assertIn('ERROR: statistics not found', result.output)

    def test_unknown_config_key(self):

        with open(self.config_file, 'a') as f:
            f.write('SEGMENTOR = "logistic"\n')
        result = self.invoke('synth')
        self.assertEqual(result.exit_code, 2)
        self.assertIn('SEGMENTOR', result.output)

    def test_bad_options(self):

        self.assertEqual(self.invoke('run', '--regimes', 'upscaled').exit_code, 2)
        self.assertEqual(self.invoke('run', '--ladder', '1,x').exit_code, 2)

    def test_version(self):

        result = self.runner.invoke(cli, ['--version'])
        self.assertEqual(result.exit_code, 0)
        self.assertIn('1.0.0', result.output)
