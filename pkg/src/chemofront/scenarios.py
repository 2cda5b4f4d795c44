"""Initial data for the three numerical experiments.

T1: one bacterial colony in the centre, fungus seeded in a corner, Dv = 0.
T2: as T1 with slowly diffusing bacteria, Dv = 1e-5.
T3: two colonies at (0.2, 0.5) and (0.8, 0.5) in a uniform fungus lawn
    just above threshold.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .grid import Field, StateSnapshot
from .params import Parameters

T2_DV = 1e-5
T_METASTABLE = 9.8039
T2_LONG_T_END = 170.0


def _gaussian(X, Y, x0, y0, width=1000.0):
    return np.exp(-width * ((X - x0) ** 2 + (Y - y0) ** 2))


def _mesh(n):
    if n < 16:
        raise DomainError(f"grid_n must be >= 16, got {n}")
    x = np.linspace(0.0, 1.0, n)
    return np.meshgrid(x, x, indexing="xy")


def _corner_colony(X, Y):
    # 10 / (e^a + e^-a) written to avoid overflowing e^a far from the seed.
    e = _gaussian(X, Y, 0.2, 0.2)
    return 10.0 * e / (1.0 + e * e)


def initial_condition_T1(grid_n: int) -> StateSnapshot:
    X, Y = _mesh(grid_n)
    v = 3.0 * _gaussian(X, Y, 0.5, 0.5)
    u = _corner_colony(X, Y)
    return StateSnapshot(t=0.0, u=Field(u), v=Field(v), c=Field(np.zeros_like(u)))


def initial_condition_T2(grid_n: int) -> StateSnapshot:
    return initial_condition_T1(grid_n)


def initial_condition_T3(grid_n: int) -> StateSnapshot:
    X, Y = _mesh(grid_n)
    v = 3.0 * (_gaussian(X, Y, 0.2, 0.5) + _gaussian(X, Y, 0.8, 0.5))
    u = np.full_like(X, 0.21)
    return StateSnapshot(t=0.0, u=Field(u), v=Field(v), c=Field(np.zeros_like(u)))


@dataclass(frozen=True)
class Scenario:
    name: str
    ic_builder: object
    param_overrides: dict = field(default_factory=dict)
    centers: tuple = ((0.5, 0.5),)
    t_end: float = T_METASTABLE

    def params(self, base: Parameters) -> Parameters:
        return base.replace(**self.param_overrides)

    def initial_condition(self, grid_n: int) -> StateSnapshot:
        return self.ic_builder(grid_n)


SCENARIOS = {
    "T1": Scenario("T1", initial_condition_T1, {"Dv": 0.0}),
    "T2": Scenario("T2", initial_condition_T2, {"Dv": T2_DV}),
    "T3": Scenario("T3", initial_condition_T3, {"Dv": 0.0},
                   centers=((0.2, 0.5), (0.8, 0.5))),
}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name.upper()]
    except KeyError:
        raise DomainError(f"unknown scenario {name!r}; choose from T1, T2, T3") from None
