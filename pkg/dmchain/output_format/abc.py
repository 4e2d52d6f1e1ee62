from abc import ABCMeta, abstractmethod
import math
from typing import Any

# One output row: column name -> number, text, or `None` for "no value".
Record = dict[str, Any]

class RowFormat(metaclass = ABCMeta):
    """
    A serialization of tables of records, used for every command's output.
    Numbers are written with `digits` significant digits, so emitting the
    parsed form of an output reproduces it byte for byte.
    """

    def __init__(self, digits: int = 12):
        self.digits = digits

    def round_value(self, x: Any) -> Any:
        """
        Normalize one cell: non-finite numbers become `None`, finite numbers
        are rounded to `self.digits` significant digits, and text passes
        through.
        """
        if x is None or isinstance(x, str):
            return x
        x = float(x)
        if not math.isfinite(x):
            return None
        return float(self.format_number(x))

    def format_number(self, x: float) -> str:
        return '%.*g' % (self.digits, x)

    @abstractmethod
    def emit(self, columns: list[str], records: list[Record]) -> str:
        ...

    @abstractmethod
    def parse(self, text: str) -> tuple[list[str], list[Record]]:
        '''
        Inverse of `emit`, up to the rounding `emit` applies: numeric cells
        come back as `float`, missing cells as `None`.
        '''
        ...
