"""Immutable sampled solutions."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping

import numpy as np

__all__ = ["Trajectory"]


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time grid plus state matrix of shape ``(len(times), dimension)``.

    Arrays are copied and marked read-only on construction.
    """

    times: np.ndarray
    states: np.ndarray
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        times = _frozen(self.times)
        states = np.array(self.states, dtype=float, copy=True)
        if states.ndim == 1:
            states = states[:, None]
        states.setflags(write=False)
        if times.ndim != 1:
            raise ValueError("times must be a 1-D array")
        if states.shape[0] != times.shape[0]:
            raise ValueError(
                f"states has {states.shape[0]} rows but there are {times.shape[0]} times"
            )
        if times.size > 1 and not np.all(np.diff(times) > 0.0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def with_metadata(self, **extra) -> Trajectory:
        return Trajectory(self.times, self.states, {**self.metadata, **extra})
