import csv
import functools
import io
import json
import math
import weakref
from pathlib import Path

import numpy as np

from .errors import DataError
from .settings import CHUNK_SIZE


def weak_lru(maxsize=128, typed=False):
    """
    LRU Cache decorator that keeps a weak reference to "self" and
    can be safely used on class methods
    """

    def wrapper(func):
        @functools.lru_cache(maxsize, typed)
        def _func(_self, *args, **kwargs):
            return func(_self(), *args, **kwargs)

        @functools.wraps(func)
        def inner(self, *args, **kwargs):
            return _func(weakref.ref(self), *args, **kwargs)

        return inner

    return wrapper


def chunks(items, size=CHUNK_SIZE):
    """
    Yields consecutive slices of at most `size` items.
    """
    for start in range(0, len(items), size):
        yield items[start : start + size]


def prepare_value(value):
    """
    Prepares a value for JSON output.

    Numpy scalars and arrays become plain Python numbers and lists, and
    non-finite floats become the strings "inf", "-inf" and "nan" so the
    output stays strict JSON.
    """
    if isinstance(value, dict):
        return {str(key): prepare_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [prepare_value(item) for item in value]
    if isinstance(value, np.ndarray):
        return [prepare_value(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if hasattr(value, "to_dict"):
        return prepare_value(value.to_dict())
    return value


def dump_json(payload):
    """
    Serialises a payload with stable field order and a trailing newline.
    """
    return json.dumps(prepare_value(payload), indent=2) + "\n"


def load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        msg = f"Malformed JSON: {err}"
        raise DataError(msg) from err


def parse_csv_grid(text):
    """
    Reads two columns node,value; a header row is optional.

    Returns:
        tuple: (nodes, values) as lists of floats.
    """
    nodes, values = [], []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < 2:
            msg = f"CSV line {lineno}: expected node,value"
            raise DataError(msg)
        try:
            node, value = float(row[0]), float(row[1])
        except ValueError as err:
            if lineno == 1 and not nodes:
                continue
            msg = f"CSV line {lineno}: {err}"
            raise DataError(msg) from err
        nodes.append(node)
        values.append(value)
    if not nodes:
        msg = "CSV grid has no rows"
        raise DataError(msg)
    return nodes, values


def format_csv_rows(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(item)) if isinstance(item, float) else item for item in row])
    return buffer.getvalue()


def read_text(path):
    try:
        return Path(path).read_text()
    except OSError as err:
        msg = f"Cannot read {path}: {err}"
        raise DataError(msg) from err


def write_text(path, text):
    """
    Writes to `path`, or returns the text unchanged when path is None.
    """
    if path is None:
        return text
    try:
        Path(path).write_text(text)
    except OSError as err:
        msg = f"Cannot write {path}: {err}"
        raise DataError(msg) from err
    return text
