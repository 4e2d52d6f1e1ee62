import csv
import io

from ..error import DmchainError
from .abc import Record, RowFormat

MISSING = 'NA'

class CsvRowFormat(RowFormat):
    def emit(self, columns: list[str], records: list[Record]) -> str:
        """
        Comma-separated text with a header row, `\\n` line endings, `.` as
        decimal separator and `NA` for missing values.
        """
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator='\n')
        w.writerow(columns)
        for r in records:
            w.writerow([self._cell(r.get(c)) for c in columns])
        return buf.getvalue()

    def _cell(self, x) -> str:
        x = self.round_value(x)
        if x is None:
            return MISSING
        if isinstance(x, str):
            return x
        return self.format_number(x)

    def parse(self, text: str) -> tuple[list[str], list[Record]]:
        rows = list(csv.reader(io.StringIO(text)))
        if len(rows) == 0:
            raise DmchainError('CSV input has no header row')
        columns, records = rows[0], []
        for i, row in enumerate(rows[1:], start=2):
            if len(row) != len(columns):
                raise DmchainError(f'CSV line {i} has {len(row)} cells, expected {len(columns)}')
            records.append({c: _parse_cell(s) for c, s in zip(columns, row)})
        return columns, records

def _parse_cell(s: str):
    if s == MISSING:
        return None
    try:
        return float(s)
    except ValueError:
        return s
