import json
import logging
import os
from contextlib import contextmanager
from contextvars import ContextVar
from logging.config import dictConfig
from typing import Any, Dict, Iterator

import yaml

_run_context = ContextVar('run_context', default={})  # type: ContextVar[Dict[str, Any]]


@contextmanager
def run_context(**values: Any) -> Iterator[None]:
    """Stamp log records emitted inside the block with run/regime/pitch values."""
    token = _run_context.set({**_run_context.get(), **values})
    try:
        yield
    finally:
        _run_context.reset(token)


class Logger:

    def __init__(self, config: Dict[str, Any] = None) -> None:
        self.config = None
        if config:
            self.setup_logging(config)

    def setup_logging(self, config: Dict[str, Any]) -> None:
        self.config = config

        log_config_file = os.path.expandvars(os.path.expanduser(config['LOG_CONFIG_FILE'] or ''))
        log_level = 'DEBUG' if config['DEBUG'] else config['LOG_LEVEL']

        if log_config_file and os.path.exists(log_config_file):
            with open(log_config_file) as f:
                dictConfig(yaml.safe_load(f.read()))
            return

        if config['LOG_FORMAT'] in ['default', 'simple', 'verbose', 'json']:
            log_format = config['LOG_FORMAT']
            custom_format = ''  # not used
        else:
            log_format = 'custom'
            custom_format = config['LOG_FORMAT']

        handlers = {
            'console': {
                'class': 'logging.StreamHandler',
                'formatter': log_format,
                'level': log_level,
                'filters': ['context'],
                'stream': 'ext://sys.stderr'
            }
        }  # type: Dict[str, Any]
        if 'file' in config['LOG_HANDLERS']:
            handlers['file'] = {
                'class': 'logging.handlers.RotatingFileHandler',
                'formatter': log_format,
                'level': log_level,
                'filters': ['context'],
                'filename': os.path.expandvars(os.path.expanduser(config['LOG_FILE'])),
                'maxBytes': config['LOG_MAX_BYTES'],
                'backupCount': config['LOG_BACKUP_COUNT']
            }

        dictConfig({
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'default': {
                    '()': 'reliefscan.utils.logging.CustomFormatter'
                },
                'simple': {
                    'format': '%(levelname)s %(message)s'
                },
                'verbose': {
                    'format': '%(asctime)s - %(name)s[%(process)d]: %(levelname)s - %(message)s [in %(pathname)s:%(lineno)d]'
                },
                'json': {
                    '()': 'reliefscan.utils.logging.JSONFormatter'
                },
                'custom': {
                    'format': custom_format
                }
            },
            'filters': {
                'context': {
                    '()': 'reliefscan.utils.logging.ContextFilter',
                }
            },
            'handlers': handlers,
            'loggers': {
                'reliefscan': {
                    'level': log_level,
                    'handlers': [h for h in config['LOG_HANDLERS'] if h in handlers],
                    'propagate': False
                },
            },
        })


class ContextFilter(logging.Filter):

    def filter(self, record):

        context = _run_context.get()
        record.run_id = context.get('run_id', '-')
        record.regime = context.get('regime', '-')
        record.pitch_um = context.get('pitch_um', '-')
        return True


class CustomFormatter(logging.Formatter):

    def __init__(self):

        self.formatters = {
            'reliefscan': '%(asctime)s %(name)s[%(process)d]: [%(levelname)s] %(message)s'
                          ' run=%(run_id)s regime=%(regime)s pitch=%(pitch_um)s',
            'py.warnings': '%(asctime)s %(name)s[%(process)d]: [%(levelname)s] %(message)s'
        }
        self.default_formatter = logging.BASIC_FORMAT
        super().__init__()

    def format(self, record):

        fmt = record.name.split('.').pop(0)
        if fmt == 'reliefscan' and not hasattr(record, 'run_id'):
            ContextFilter().filter(record)

        formatter = logging.Formatter(self.formatters.get(fmt, self.default_formatter))
        return formatter.format(record)


class JSONFormatter(logging.Formatter):

    RECORD_ATTRS = [
        'run_id', 'regime', 'pitch_um', 'name', 'levelno', 'levelname', 'pathname', 'filename', 'module',
        'lineno', 'funcName', 'created', 'thread', 'threadName', 'process',  # 'message',
    ]

    def format(self, record):
        payload = {
            attr: getattr(record, attr) for attr in self.RECORD_ATTRS if hasattr(record, attr)
        }
        payload['message'] = record.getMessage()

        indent = 2 if os.environ.get('RELIEFSCAN_ENV', '') == 'development' else None
        return json.dumps(payload, indent=indent, default=str)
