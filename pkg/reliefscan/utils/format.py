import json
import math
import traceback
from typing import Any

import numpy as np


class CustomJSONEncoder(json.JSONEncoder):
    def default(self, o: Any) -> Any:  # pylint: disable=method-hidden
        if isinstance(o, np.integer):
            return int(o)
        elif isinstance(o, np.floating):
            return float(o)
        elif isinstance(o, np.bool_):
            return bool(o)
        elif isinstance(o, np.ndarray):
            return o.tolist()
        elif hasattr(o, 'serialize'):
            return o.serialize
        elif isinstance(o, Exception):
            return traceback.format_exception_only(o.__class__, o)
        else:
            return json.JSONEncoder.default(self, o)


def custom_json_dumps(obj: object, indent: int = 2) -> str:
    return json.dumps(obj, cls=CustomJSONEncoder, indent=indent, sort_keys=True, allow_nan=False)


def format_float(value: float) -> str:
    """Shortest decimal that round-trips to the same 64-bit value; 'nan' for non-finite."""
    if not math.isfinite(value):
        return 'nan'
    text = repr(float(value))
    if text.endswith('.0'):
        text = text[:-2]
    return text
