import os
from typing import Any, Dict, Optional

from flask import Config as FlaskConfig

from reliefscan.exceptions import ConfigError

PATH_SETTINGS = ['MANIFEST', 'OUTPUT_DIR', 'SYNTH_DIR', 'LOG_FILE', 'LOG_CONFIG_FILE']


class Config:

    def __init__(self, config_file: Optional[str] = None) -> None:
        self.config_file = config_file

    def get_user_config(self, config_file: Optional[str] = None) -> FlaskConfig:
        config_file = config_file or self.config_file
        config = FlaskConfig('/')

        config.from_object('reliefscan.settings')
        config.from_pyfile('/etc/reliefscan.conf', silent=True)
        config.from_envvar('RELIEFSCAN_CONF_FILE', silent=True)

        base_dir = os.getcwd()
        if config_file:
            run_config = load_run_config(config_file)
            config.update(run_config)
            base_dir = os.path.dirname(os.path.abspath(config_file))
        config['CONFIG_FILE'] = os.path.abspath(config_file) if config_file else None

        config['DEBUG'] = get_config('DEBUG', default=False, type=bool, config=config)
        config['LOG_LEVEL'] = get_config('LOG_LEVEL', default='WARNING', type=str, config=config)
        config['LOG_HANDLERS'] = get_config('LOG_HANDLERS', default=['console'], type=list, config=config)
        config['LOG_FORMAT'] = get_config('LOG_FORMAT', default='default', type=str, config=config)

        config['MANIFEST'] = get_config('MANIFEST', default=None, type=str, config=config)
        config['OUTPUT_DIR'] = get_config('OUTPUT_DIR', default='out', type=str, config=config)
        config['SEED'] = get_config('SEED', default=0, type=int, config=config)
        config['SEGMENTER'] = get_config('SEGMENTER', default='logistic', type=str, config=config)
        config['REGIMES'] = get_config('REGIMES', default=[], type=list, config=config)
        config['LADDER'] = [int(n) for n in get_config('LADDER', default=[1], type=list, config=config)]
        config['N_PERM'] = get_config('N_PERM', default=9999, type=int, config=config)

        # worker cap
        config['THREADS'] = get_config('RELIEFSCAN_THREADS', default=config.get('THREADS', 1), type=int, config=config)

        for key in PATH_SETTINGS:
            if config.get(key):
                config[key] = resolve_path(config[key], base_dir)

        validate(config)
        return config


def load_run_config(path: str) -> Dict[str, Any]:
    """
    Read a flat KEY = value run config file and reject keys that are not
    known settings.
    """
    if not os.path.isfile(path):
        raise ConfigError('Run config file not found: {}'.format(path))

    defaults = FlaskConfig('/')
    defaults.from_object('reliefscan.settings')

    run_config = FlaskConfig(os.path.dirname(os.path.abspath(path)))
    try:
        run_config.from_pyfile(os.path.abspath(path))
    except SyntaxError as e:
        raise ConfigError('Run config {} is not valid KEY = value syntax: {} (line {})'.format(path, e.msg, e.lineno))

    unknown = sorted(k for k in run_config if k not in defaults)
    if unknown:
        raise ConfigError('Unknown config keys in {}: {}'.format(path, ', '.join(unknown)), errors=unknown)
    return dict(run_config)


def resolve_path(path: str, base_dir: str) -> str:
    path = os.path.expandvars(os.path.expanduser(path))
    if not os.path.isabs(path):
        path = os.path.join(base_dir, path)
    return os.path.normpath(path)


def validate(config: FlaskConfig) -> None:
    if config['THREADS'] < 1:
        raise ConfigError('THREADS must be at least 1, not {}'.format(config['THREADS']))
    if not config['LADDER'] or any(n < 1 for n in config['LADDER']):
        raise ConfigError('LADDER must be a non-empty list of kernel sizes >= 1')
    if config['LADDER'][0] != 1:
        raise ConfigError('LADDER must start at the native kernel size 1')
    unknown = [r for r in config['REGIMES'] if r not in ('matched', 'cross_res', 'zbin', 'lopo')]
    if unknown:
        raise ConfigError('Unknown regimes: {}'.format(', '.join(unknown)))
    if config['N_PERM'] < 1:
        raise ConfigError('N_PERM must be positive')
    if config['NATIVE_PITCH_UM'] <= 0:
        raise ConfigError('NATIVE_PITCH_UM must be positive')


def get_config(key, default=None, type=None, **kwargs):

    if key in os.environ:
        rv = os.environ[key]
        if type == bool:
            return rv.lower() in ['yes', 'on', 'true', 't', '1']
        elif type == list:
            return rv.split(',')
        elif type is not None:
            try:
                rv = type(rv)
            except ValueError:
                rv = default
        return rv

    try:
        rv = kwargs['config'].get(key, default)
    except KeyError:
        rv = default
    return rv
