"""The section x = y (with x <= 0) and the induced return map.

The surface is g(x, y, z) = x - y, crossed in the rising direction
(dg/dt > 0): on the section with x < 0 and small z one has
dg/dt = -(2 + a)x - z > 0, so rising crossings pick out exactly one
intersection per loop of the attractor and the return map is
single-valued.  Section coordinates are (u, v) = (x, z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoReturn
from .integrate import (
    Direction,
    EventSpec,
    IntegratorConfig,
    integrate_with_events,
)
from .system import RosslerParams, State, vector_field_frozen

#: Crossings closer than this to the start time are discarded: they are the
#: starting point itself when integration begins on the section.
MIN_FLIGHT_TIME = 1e-6

DEFAULT_FLIGHT_CAP = 50.0


@dataclass(frozen=True)
class SectionPoint:
    """A point of the section, u = x, v = z (lifted to (u, u, v) in space)."""

    u: float
    v: float

    def lift(self) -> State:
        return np.array([self.u, self.u, self.v])

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v])


@dataclass(frozen=True)
class CrossingRecord:
    t: float
    point: SectionPoint
    index: int


@dataclass(frozen=True)
class Section:
    """Surface g = x - y with a half-space constraint x <= x_max."""

    x_max: float = 0.0
    direction: Direction = Direction.RISING

    def surface(self, t: float, s: State) -> float:
        return s[0] - s[1]

    def constraint(self, t: float, s: State) -> bool:
        return s[0] <= self.x_max

    def event_spec(self) -> EventSpec:
        return EventSpec(self.surface, self.direction, self.constraint)

    def project(self, s: State) -> SectionPoint:
        return SectionPoint(float(s[0]), float(s[2]))


DEFAULT_SECTION = Section()


def detect_crossings(
    field,
    t0: float,
    t1: float,
    x0: State,
    cfg: IntegratorConfig,
    section: Section = DEFAULT_SECTION,
) -> list[CrossingRecord]:
    """All qualifying section crossings of the trajectory from (t0, x0).

    If the start point already lies on the section (|g| < 1e-10) and
    qualifies in constraint and direction, it is reported as index 0.
    """
    records: list[CrossingRecord] = []
    g0 = section.surface(t0, x0)
    if abs(g0) < 1e-10 and section.constraint(t0, x0):
        gdot = _surface_rate(field, section, t0, x0)
        if (
            section.direction is Direction.BOTH
            or (section.direction is Direction.RISING and gdot > 0.0)
            or (section.direction is Direction.FALLING and gdot < 0.0)
        ):
            records.append(CrossingRecord(t0, section.project(x0), 0))

    result = integrate_with_events(field, t0, t1, x0, cfg, section.event_spec())
    for t_ev, s_ev in result.events:
        if t_ev - t0 < MIN_FLIGHT_TIME:
            continue
        records.append(CrossingRecord(t_ev, section.project(s_ev), len(records)))
    return records


def _surface_rate(field, section: Section, t: float, s: State) -> float:
    f = field(t, s)
    return f[0] - f[1]


def return_map(
    p: RosslerParams,
    q: SectionPoint,
    cfg: IntegratorConfig,
    section: Section = DEFAULT_SECTION,
    flight_cap: float = DEFAULT_FLIGHT_CAP,
) -> tuple[SectionPoint, float]:
    """Next qualifying crossing of the frozen flow started at q, plus flight time.

    Raises NoReturn if no crossing occurs within ``flight_cap`` time units.
    """
    field = lambda t, s: vector_field_frozen(p, s)
    # Starting exactly on the section is safe: the lifted point has
    # g = u - u = 0 and zero-valued brackets are never treated as crossings.
    result = integrate_with_events(
        field, 0.0, flight_cap, q.lift(), cfg, section.event_spec(), max_events=1
    )
    for t_ev, s_ev in result.events:
        if t_ev > MIN_FLIGHT_TIME:
            return section.project(s_ev), t_ev
    raise NoReturn(f"no section return within {flight_cap} time units from {q}")


def return_map_jacobian(
    p: RosslerParams,
    q: SectionPoint,
    cfg: IntegratorConfig,
    h_fd: float = 1e-6,
    section: Section = DEFAULT_SECTION,
) -> np.ndarray:
    """2x2 Jacobian of the return map by central differences (step h_fd)."""
    cols = []
    for du, dv in ((h_fd, 0.0), (0.0, h_fd)):
        plus, _ = return_map(p, SectionPoint(q.u + du, q.v + dv), cfg, section)
        minus, _ = return_map(p, SectionPoint(q.u - du, q.v - dv), cfg, section)
        cols.append((plus.as_array() - minus.as_array()) / (2.0 * h_fd))
    return np.column_stack(cols)
