import contextlib
import os
import shutil
import tempfile
import unittest

from reliefscan.app import create_app
from reliefscan.exceptions import ConfigError


@contextlib.contextmanager
def mod_env(*remove, **update):
    """
    See https://stackoverflow.com/questions/2059482#34333710

    Temporarily updates the ``os.environ`` dictionary in-place.

    :param remove: Environment variables to remove.
    :param update: Dictionary of environment variables and values to add/update.
    """
    env = os.environ
    update = update or {}
    remove = remove or []

    # List of environment variables being updated or removed.
    stomped = (set(update.keys()) | set(remove)) & set(env.keys())
    # Environment variables and values to restore on exit.
    update_after = {k: env[k] for k in stomped}
    # Environment variables and values to remove on exit.
    remove_after = frozenset(k for k in update if k not in env)

    try:
        env.update(update)
        [env.pop(k, None) for k in remove]
        yield
    finally:
        env.update(update_after)
        [env.pop(k) for k in remove_after]


class ConfigTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.config_file = os.path.join(self.tmp, 'run.conf')

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def _write(self, text):
        with open(self.config_file, 'w') as f:
            f.write(text)

    def test_defaults(self):

        with mod_env('RELIEFSCAN_THREADS', 'SEED', 'LADDER', 'REGIMES'):
            config = create_app()

        self.assertEqual(config['THREADS'], 1)
        self.assertEqual(config['SEED'], 0)
        self.assertEqual(config['LADDER'], [1, 2, 3, 4, 6, 8, 10, 16, 32])
        self.assertEqual(config['REGIMES'], ['matched', 'cross_res', 'zbin', 'lopo'])
        self.assertEqual(config['SEGMENTER'], 'logistic')
        self.assertIsNone(config['CONFIG_FILE'])
        self.assertTrue(os.path.isabs(config['OUTPUT_DIR']))

    def test_run_config(self):

        self._write("SEED = 7\nLADDER = [1, 2]\nOUTPUT_DIR = 'results'\nREGIMES = ['matched']\n")
        with mod_env('RELIEFSCAN_THREADS', 'SEED', 'LADDER', 'REGIMES', 'OUTPUT_DIR'):
            config = create_app(config_file=self.config_file)

        self.assertEqual(config['SEED'], 7)
        self.assertEqual(config['LADDER'], [1, 2])
        self.assertEqual(config['REGIMES'], ['matched'])
        self.assertEqual(config['OUTPUT_DIR'], os.path.join(self.tmp, 'results'))
        self.assertEqual(config['CONFIG_FILE'], self.config_file)

    def test_unknown_key(self):

        self._write('SEED = 7\nNUM_EPOCHS = 3\n')
        with self.assertRaises(ConfigError) as cm:
            create_app(config_file=self.config_file)
        self.assertEqual(cm.exception.errors, ['NUM_EPOCHS'])
        self.assertEqual(cm.exception.code, 2)

    def test_bad_syntax(self):

        self._write('SEED = = 7\n')
        with self.assertRaises(ConfigError):
            create_app(config_file=self.config_file)

    def test_missing_file(self):

        with self.assertRaises(ConfigError):
            create_app(config_file=os.path.join(self.tmp, 'nope.conf'))

    def test_env_overrides(self):

        with mod_env(RELIEFSCAN_THREADS='4', SEED='11', LADDER='1,2,4'):
            config = create_app()

        self.assertEqual(config['THREADS'], 4)
        self.assertEqual(config['SEED'], 11)
        self.assertEqual(config['LADDER'], [1, 2, 4])

    def test_invalid_values(self):

        with mod_env(RELIEFSCAN_THREADS='0'):
            with self.assertRaises(ConfigError):
                create_app()

        with mod_env('RELIEFSCAN_THREADS', 'LADDER', 'REGIMES'):
            with self.assertRaises(ConfigError):
                create_app({'LADDER': [2, 4]})
            with self.assertRaises(ConfigError):
                create_app({'REGIMES': ['matched', 'upscaled']})
            with self.assertRaises(ConfigError):
                create_app({'N_PERM': 0})
