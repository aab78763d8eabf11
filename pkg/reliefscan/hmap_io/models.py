import json
import logging

from reliefscan.exceptions import FormatError
from reliefscan.models.segmenter import SegmenterModel
from reliefscan.utils.format import custom_json_dumps

LOG = logging.getLogger('reliefscan.hmap_io')


def save_model(model: SegmenterModel, path) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(custom_json_dumps(model.serialize) + '\n')
    LOG.debug('Saved %r to %s', model, path)


def load_model(path) -> SegmenterModel:
    with open(path, 'r', encoding='utf-8') as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError('model file is not valid JSON: {}'.format(e.msg), path=path, line=e.lineno, column=e.colno)
    return SegmenterModel.parse(doc)
