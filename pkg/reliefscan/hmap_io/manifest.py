import csv
import io
import logging
import os

from reliefscan.exceptions import FormatError, ManifestError
from reliefscan.models.manifest import DatasetManifest, Sample

LOG = logging.getLogger('reliefscan.hmap_io')

HEADER = ['sample_id', 'papyrus_id', 'letter', 'heightmap', 'label']


def read_manifest(path) -> DatasetManifest:
    """
    Load and validate a dataset manifest CSV.

    Relative heightmap/label paths resolve against the manifest's directory.
    """
    root = os.path.dirname(os.path.abspath(path))
    with open(path, 'r', encoding='utf-8', newline='') as f:
        text = f.read()

    if not text.strip():
        raise ManifestError('empty manifest: {}'.format(path))

    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if [h.strip() for h in header] != HEADER:
        raise FormatError('manifest header must be {}, got {}'.format(','.join(HEADER), ','.join(header)),
                          path=path, line=1)

    entries = []
    seen = set()
    for lineno, row in enumerate(reader, start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != len(HEADER):
            raise FormatError('expected {} columns, got {}'.format(len(HEADER), len(row)), path=path, line=lineno)
        sample_id, papyrus_id, letter, heightmap, label = (cell.strip() for cell in row)
        if sample_id in seen:
            raise ManifestError('duplicate sample_id {!r} in {} (line {})'.format(sample_id, path, lineno))
        seen.add(sample_id)

        heightmap = heightmap if os.path.isabs(heightmap) else os.path.join(root, heightmap)
        label = label if os.path.isabs(label) else os.path.join(root, label)
        for f in (heightmap, label):
            if not os.path.isfile(f):
                raise ManifestError('sample {!r} refers to missing file {}'.format(sample_id, f))
        try:
            entries.append(Sample(sample_id, papyrus_id, letter, heightmap, label))
        except ValueError as e:
            raise FormatError(str(e), path=path, line=lineno)

    if not entries:
        raise ManifestError('empty manifest: {} has no samples'.format(path))

    manifest = DatasetManifest(entries, root=root)
    LOG.info('Loaded manifest %s: %d samples across papyri %s', path, len(manifest), ', '.join(manifest.papyri))
    return manifest


def write_manifest(manifest: DatasetManifest, path) -> None:
    """Write paths relative to the manifest's directory so corpora can be moved."""
    root = os.path.dirname(os.path.abspath(path))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(HEADER)
    for s in manifest:
        writer.writerow([
            s.sample_id,
            s.papyrus_id,
            s.letter,
            os.path.relpath(s.heightmap_path, root).replace(os.sep, '/'),
            os.path.relpath(s.label_path, root).replace(os.sep, '/')
        ])
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(buf.getvalue())
