"""
Plain-text HMAP heightmap interchange format.

    HMAP 1
    width W
    height H
    pitch_um P
    meta <key> <value>        (zero or more)
    <W tokens>                (H data lines)

Tokens are decimal numbers; nan/inf/-inf (any case) mark missing pixels.
The canonical writer emits the shortest decimal that round-trips each
64-bit value, so read(write(h)) reproduces h bit for bit.
"""
import logging
import re
from typing import Dict

import numpy as np
from pyparsing import (Keyword, ParseException, Regex, Word, alphanums,
                       pyparsing_common, restOfLine)

from reliefscan.exceptions import FormatError
from reliefscan.models.heightmap import HeightMap
from reliefscan.utils.format import format_float

LOG = logging.getLogger('reliefscan.hmap_io')

FORMAT_VERSION = 1

_integer = pyparsing_common.signed_integer
_number = Regex(r'[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?').setParseAction(lambda t: float(t[0]))

MAGIC = Keyword('HMAP') + _integer('version')
WIDTH = Keyword('width') + _integer('value')
HEIGHT = Keyword('height') + _integer('value')
PITCH = Keyword('pitch_um') + _number('value')
META = Keyword('meta') + Word(alphanums + '_.-:/')('key') + restOfLine('value')

_DECIMAL = re.compile(r'[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\Z')
_MISSING = {'nan', 'inf', '-inf', '+inf'}
_TOKEN = re.compile(r'\S+')


def _parse_line(grammar, text: str, lineno: int, path, what: str):
    try:
        return grammar.parseString(text, parseAll=True)
    except ParseException as e:
        raise FormatError('malformed {} header line: {!r}'.format(what, text), path=path, line=lineno, column=e.col)


def _parse_value(token: str, lineno: int, column: int, path) -> float:
    if token.lower() in _MISSING:
        return np.nan
    if not _DECIMAL.match(token):
        raise FormatError('non-numeric token {!r}'.format(token), path=path, line=lineno, column=column)
    return float(token)


def parse_heightmap(text: str, path=None) -> HeightMap:
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines.pop()
    if len(lines) < 4:
        raise FormatError('truncated header, expected at least 4 lines', path=path, line=len(lines) + 1)

    magic = _parse_line(MAGIC, lines[0], 1, path, 'magic')
    if magic['version'] != FORMAT_VERSION:
        raise FormatError('unsupported HMAP version {}'.format(magic['version']), path=path, line=1, column=6)
    width = _parse_line(WIDTH, lines[1], 2, path, 'width')['value']
    height = _parse_line(HEIGHT, lines[2], 3, path, 'height')['value']
    pitch = _parse_line(PITCH, lines[3], 4, path, 'pitch_um')['value']

    if width < 1:
        raise FormatError('width must be positive, got {}'.format(width), path=path, line=2, column=7)
    if height < 1:
        raise FormatError('height must be positive, got {}'.format(height), path=path, line=3, column=8)
    if not pitch > 0:
        raise FormatError('pitch_um must be positive, got {}'.format(pitch), path=path, line=4, column=10)

    meta = {}  # type: Dict[str, str]
    i = 4
    while i < len(lines) and lines[i].startswith('meta'):
        m = _parse_line(META, lines[i], i + 1, path, 'meta')
        meta[m['key']] = m['value'].strip()
        i += 1

    rows = lines[i:]
    if len(rows) != height:
        raise FormatError('dimension mismatch: header declares height {} but found {} data rows'.format(
            height, len(rows)), path=path, line=i + 1 + min(len(rows), height))

    z = np.empty((height, width), dtype=np.float64)
    for r, line in enumerate(rows):
        lineno = i + 1 + r
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]
        if len(tokens) != width:
            raise FormatError('dimension mismatch: row {} has {} tokens, header declares width {}'.format(
                r, len(tokens), width), path=path, line=lineno, column=1)
        z[r] = [_parse_value(tok, lineno, col, path) for tok, col in tokens]

    return HeightMap(z, pitch_um=pitch, meta=meta)


def read_heightmap(path) -> HeightMap:
    with open(path, 'r', encoding='ascii', newline='') as f:
        text = f.read()
    h = parse_heightmap(text, path=path)
    LOG.debug('Read heightmap %s: %r', path, h)
    return h


def dump_heightmap(h: HeightMap) -> str:
    lines = [
        'HMAP {}'.format(FORMAT_VERSION),
        'width {}'.format(h.width),
        'height {}'.format(h.height),
        'pitch_um {}'.format(format_float(h.pitch_um)),
    ]
    for key, value in h.meta.items():
        if not key or any(c.isspace() for c in key) or '\n' in str(value):
            raise ValueError('meta key/value not representable in HMAP: {!r}={!r}'.format(key, value))
        lines.append('meta {} {}'.format(key, value))
    for row in h.z:
        lines.append(' '.join(format_float(v) for v in row.tolist()))
    return '\n'.join(lines) + '\n'


def write_heightmap(h: HeightMap, path) -> None:
    with open(path, 'w', encoding='ascii', newline='') as f:
        f.write(dump_heightmap(h))
    LOG.debug('Wrote heightmap %s: %r', path, h)
