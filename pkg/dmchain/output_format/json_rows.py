import json

from ..error import DmchainError
from .abc import Record, RowFormat

class JsonRowFormat(RowFormat):
    def emit(self, columns: list[str], records: list[Record]) -> str:
        """
        A JSON array with one object per record, keys in column order and
        `null` for missing values.
        """
        out = [{c: self.round_value(r.get(c)) for c in columns} for r in records]
        return json.dumps(out, indent=2) + '\n'

    def parse(self, text: str) -> tuple[list[str], list[Record]]:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DmchainError(f'malformed JSON output: {e}')
        if not isinstance(data, list) or not all(isinstance(r, dict) for r in data):
            raise DmchainError('JSON output must be an array of objects')
        columns = list(data[0].keys()) if data else []
        records = [{c: _number(r.get(c)) for c in columns} for r in data]
        return columns, records

def _number(x):
    if isinstance(x, int) and not isinstance(x, bool):
        return float(x)
    return x
