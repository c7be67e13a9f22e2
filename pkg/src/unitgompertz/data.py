"""Validated observation container shared by sampling, L-moments and GOF."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ArgumentError, DomainError

__all__ = ["DataSample"]


@dataclass(frozen=True)
class DataSample:
    """Sorted observations, each strictly inside (0, 1).

    Duplicates are kept (``duplicate_policy == "keep"``); their count is
    recorded because ties reduce the information in order-statistic
    estimators.
    """

    values: np.ndarray
    duplicate_policy: str = "keep"
    n_duplicates: int = field(default=0)

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float).ravel()
        if arr.size == 0:
            raise ArgumentError("a data sample needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise DomainError("observations must be finite")
        bad = np.flatnonzero((arr <= 0.0) | (arr >= 1.0))
        if bad.size:
            i = int(bad[0])
            raise DomainError(f"observation #{i + 1} = {arr[i]!r} lies outside (0, 1)")
        arr.sort()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "n_duplicates", int(arr.size - np.unique(arr).size))

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> DataSample:
        return cls(np.fromiter(values, dtype=float))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n
