"""Exposure variants and the (lower, central, upper) triple they produce."""

from __future__ import annotations

from enum import Enum
from typing import Callable, NamedTuple


class Variant(str, Enum):
    LOWER = "lower"
    CENTRAL = "central"
    UPPER = "upper"

    def __str__(self) -> str:
        return self.value


VARIANTS = (Variant.LOWER, Variant.CENTRAL, Variant.UPPER)


class Band(NamedTuple):
    lower: float
    central: float
    upper: float

    @classmethod
    def from_mapping(cls, values) -> "Band":
        missing = [v.value for v in VARIANTS if v not in values]
        if missing:
            raise KeyError(f"missing variant(s): {missing}")
        return cls(*(values[v] for v in VARIANTS))

    @classmethod
    def zero(cls) -> "Band":
        return cls(0.0, 0.0, 0.0)

    def __getitem__(self, key):
        if isinstance(key, str):
            return getattr(self, Variant(key).value)
        return tuple.__getitem__(self, key)

    def map(self, fn: Callable[[float], float]) -> "Band":
        return Band(fn(self.lower), fn(self.central), fn(self.upper))

    def scale(self, factor: float) -> "Band":
        return self.map(lambda x: x * factor)

    def is_ordered(self) -> bool:
        return self.lower <= self.central <= self.upper
