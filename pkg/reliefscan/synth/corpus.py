import logging
import os
from typing import Dict, List, Mapping, Sequence, Union

from reliefscan.exceptions import ManifestError, SynthError
from reliefscan.hmap_io.hmap import write_heightmap
from reliefscan.hmap_io.manifest import write_manifest
from reliefscan.hmap_io.pgm import write_mask
from reliefscan.models.manifest import DatasetManifest, Sample
from reliefscan.synth.generator import SynthConfig, generate_sample
from reliefscan.synth.glyphs import LETTERS

LOG = logging.getLogger('reliefscan.synth')

MANIFEST_NAME = 'manifest.csv'


def sample_seed(base_seed: int, index: int) -> int:
    return int(base_seed) ^ int(index)


def generate_corpus(base_cfg: SynthConfig, n_per_papyrus: Union[int, Sequence[int]],
                    papyri: Mapping[str, Dict[str, float]], out_dir: str,
                    letters: List[str] = None) -> DatasetManifest:
    """
    Write one HMAP and one PGM per sample plus a manifest into out_dir.

    papyri maps each papyrus id to additive offsets on the base physical
    parameters. Sample i of the corpus is seeded with base seed XOR i.
    """
    papyrus_ids = list(papyri)
    if not papyrus_ids:
        raise SynthError('at least one papyrus is required')
    if isinstance(n_per_papyrus, int):
        counts = [n_per_papyrus] * len(papyrus_ids)
    else:
        counts = [int(n) for n in n_per_papyrus]
        if len(counts) != len(papyrus_ids):
            raise SynthError('{} sample counts given for {} papyri'.format(len(counts), len(papyrus_ids)))
    if any(n < 0 for n in counts):
        raise SynthError('sample counts must not be negative')
    if sum(counts) == 0:
        raise ManifestError('empty manifest: no samples requested')
    letters = letters or LETTERS

    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise SynthError('cannot create corpus directory {}: {}'.format(out_dir, e.strerror))

    entries = []
    index = 0
    for papyrus_id, count in zip(papyrus_ids, counts):
        papyrus_cfg = base_cfg.with_offsets(papyri[papyrus_id] or {})
        for k in range(count):
            letter = letters[index % len(letters)]
            cfg = papyrus_cfg.replace(seed=sample_seed(base_cfg.seed, index), glyph=letter)
            sample = generate_sample(cfg)

            sample_id = '{}_{:02d}'.format(papyrus_id, k + 1)
            heightmap = sample.heightmap
            heightmap.meta.update(papyrus_id=papyrus_id, sample_id=sample_id)
            hmap_path = os.path.join(out_dir, sample_id + '.hmap')
            mask_path = os.path.join(out_dir, sample_id + '.pgm')
            try:
                write_heightmap(heightmap, hmap_path)
                write_mask(sample.labels, mask_path)
            except OSError as e:
                raise SynthError('cannot write sample {}: {}'.format(sample_id, e.strerror))

            entries.append(Sample(sample_id, papyrus_id, letter, os.path.abspath(hmap_path), os.path.abspath(mask_path)))
            LOG.info('Generated sample %s (%s, seed %d)', sample_id, letter, cfg.seed)
            index += 1

    manifest = DatasetManifest(entries, root=os.path.abspath(out_dir))
    write_manifest(manifest, os.path.join(out_dir, MANIFEST_NAME))
    return manifest
