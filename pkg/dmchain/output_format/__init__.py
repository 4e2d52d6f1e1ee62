from .abc import Record, RowFormat
from . import csv_rows
from . import json_rows

_ROW_FORMAT_CLASSES_BY_NAME = {
    'csv': csv_rows.CsvRowFormat,
    'json': json_rows.JsonRowFormat,
}

FORMAT_NAMES = tuple(_ROW_FORMAT_CLASSES_BY_NAME)

def get_row_format(name: str, **kwargs) -> RowFormat:
    cls = _ROW_FORMAT_CLASSES_BY_NAME.get(name)
    if cls is None:
        raise ValueError(f'unknown output format {name!r}')
    return cls(**kwargs)
