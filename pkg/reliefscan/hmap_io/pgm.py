import logging
import re

import numpy as np

from reliefscan.exceptions import FormatError
from reliefscan.models.heightmap import LabelMask

LOG = logging.getLogger('reliefscan.hmap_io')

INK = 255
PAPYRUS = 0
MAXVAL = 255

_HEADER_TOKEN = re.compile(rb'\s*(?:#[^\n]*\n\s*)*(\S+)')


def parse_mask(data: bytes, path=None) -> LabelMask:
    """Binary PGM (P5, maxval 255) with ink=255 and papyrus=0."""
    pos = 0
    fields = []
    for _ in range(4):
        m = _HEADER_TOKEN.match(data, pos)
        if not m:
            raise FormatError('truncated PGM header', path=path)
        fields.append(m.group(1))
        pos = m.end()

    if fields[0] != b'P5':
        raise FormatError('not a binary PGM: magic {!r}'.format(fields[0][:8]), path=path)
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise FormatError('non-numeric PGM header field in {!r}'.format(fields[1:]), path=path)
    if width < 1 or height < 1:
        raise FormatError('PGM dimensions must be positive, got {}x{}'.format(width, height), path=path)
    if maxval != MAXVAL:
        raise FormatError('mask PGM must use maxval {}, got {}'.format(MAXVAL, maxval), path=path)

    # exactly one whitespace byte separates the header from the raster
    pos += 1
    raster = data[pos:]
    if len(raster) != width * height:
        raise FormatError('PGM raster has {} bytes, expected {}'.format(len(raster), width * height), path=path)

    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    illegal = (pixels != INK) & (pixels != PAPYRUS)
    if illegal.any():
        r, c = (int(v) for v in np.argwhere(illegal)[0])
        raise FormatError('illegal mask value {} at row {} col {}; only {} and {} allowed'.format(
            pixels[r, c], r, c, PAPYRUS, INK), path=path)

    return LabelMask(pixels == INK)


def read_mask(path) -> LabelMask:
    with open(path, 'rb') as f:
        data = f.read()
    mask = parse_mask(data, path=path)
    LOG.debug('Read mask %s: %r', path, mask)
    return mask


def dump_mask(m: LabelMask) -> bytes:
    header = 'P5\n{} {}\n{}\n'.format(m.width, m.height, MAXVAL).encode('ascii')
    raster = np.where(m.ink, INK, PAPYRUS).astype(np.uint8)
    return header + raster.tobytes()


def write_mask(m: LabelMask, path) -> None:
    with open(path, 'wb') as f:
        f.write(dump_mask(m))
    LOG.debug('Wrote mask %s: %r', path, m)
