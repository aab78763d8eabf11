from reliefscan.hmap_io.hmap import (dump_heightmap, parse_heightmap,  # noqa
                                    read_heightmap, write_heightmap)
from reliefscan.hmap_io.manifest import read_manifest, write_manifest  # noqa
from reliefscan.hmap_io.models import load_model, save_model  # noqa
from reliefscan.hmap_io.pgm import dump_mask, parse_mask, read_mask, write_mask  # noqa
from reliefscan.hmap_io.results import (dump_results, read_missingness,  # noqa
                                        read_results, write_missingness,
                                        write_results)
