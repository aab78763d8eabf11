#
# ***** RELIEFSCAN DEFAULT SETTINGS -- DO NOT MODIFY THIS FILE *****
#
# To override these settings use /etc/reliefscan.conf, the configuration file
# set by the environment variable RELIEFSCAN_CONF_FILE, or a run config passed
# with "reliefscan <command> --config <path>".
#
# Run config files use the same flat KEY = value syntax as this file. Keys
# that are not defined here are rejected.

from typing import Any, Dict, List  # noqa

DEBUG = False

# Logging configuration
LOG_CONFIG_FILE = ''
LOG_HANDLERS = ['console']  # ['console', 'file']
LOG_FILE = 'reliefscan.log'  # NOTE: 'file' must be added to LOG_HANDLERS for logging to work
LOG_LEVEL = 'WARNING'  # DEBUG, INFO, WARNING, ERROR, CRITICAL
LOG_MAX_BYTES = 10 * 1024 * 1024  # 10 MB
LOG_BACKUP_COUNT = 2
LOG_FORMAT = 'default'  # 'default', 'simple', 'verbose', 'json' or any valid logging format

# Corpus locations
MANIFEST = 'corpus/manifest.csv'
OUTPUT_DIR = 'out'
SEED = 0

# Synthetic corpus
NATIVE_PITCH_UM = 0.34
SYNTH_DIR = 'corpus'
SYNTH_WIDTH = 1024
SYNTH_HEIGHT = 1024
SYNTH_DROPOUT_FRAC = 0.017
SYNTH_PARAMS = {}  # type: Dict[str, Any]  # base physical parameters, e.g. {'roughness_rms_um': 0.4}
SYNTH_PAPYRI = ['P248', 'P250', 'P500P2']
SYNTH_SAMPLES_PER_PAPYRUS = [5, 5, 4]
SYNTH_PAPYRUS_OFFSETS = {
    'P248': {},
    'P250': {'fiber_period_um': 2.0, 'roughness_rms_um': 0.05},
    'P500P2': {'ink_depression_um': -1.8, 'ink_smoothing_factor': 0.4, 'fiber_period_um': -3.0},
}  # type: Dict[str, Dict[str, float]]

# Preprocessing
INPAINT_RADIUS = 3  # pixels
ROBUST_PERCENTILES = [0.5, 99.5]

# Resolution ladder (block kernel sizes in native pixels)
LADDER = [1, 2, 3, 4, 6, 8, 10, 16, 32]

# Segmenter
SEGMENTER = 'logistic'  # logistic (default) or roughness, or any 'reliefscan.segmenters' entry point
FEATURE_SCALES = [1, 2, 4, 8, 16]  # pixels
LEARNING_RATE = 1e-3
EPOCHS = 100
BATCH_PIXELS = 4096
PIXELS_PER_SAMPLE = 8192  # training pixels drawn from each sample
PATIENCE = 10  # epochs without validation improvement before stopping
VALIDATION_FRAC = 0.1
AUGMENT_COPIES = 1  # augmented copies of each training sample

# Experiments
REGIMES = ['matched', 'cross_res', 'zbin', 'lopo']
N_FOLDS = 5
THREADS = 1  # overridden by RELIEFSCAN_THREADS
SAVE_MODELS = False

# Statistics
N_PERM = 9999
ALPHA = 0.05
DICE_REFERENCE = 0.70
