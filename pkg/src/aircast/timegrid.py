"""Calendar arithmetic, timezone normalization, day typing, and activity features.

Hours are counted as integers since a fixed epoch (2000-01-01 00:00 UTC), which
keeps series alignment exact and avoids datetime arithmetic in inner loops.
Local-time handling is explicit: offset rules and DST transition instants are
part of the configuration, and nonexistent/ambiguous local times raise instead
of being silently folded.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from enum import Enum

import numpy as np

EPOCH = datetime(2000, 1, 1)

HOURS_PER_DAY = 24

# Default activity windows (local hour ranges, end-exclusive). The return
# window intentionally crosses midnight into the next day.
DEPARTURE_EVE_WINDOW = (17, 24)
DEPARTURE_MORNING_WINDOW = (6, 13)
RETURN_EVENING_WINDOW = (17, 26)


class GapError(ValueError):
    """Local time falls in a spring-forward gap and does not exist."""


class AmbiguousTimeError(ValueError):
    """Local time occurs twice across a fall-back transition."""


def hour_index(dt: datetime) -> int:
    """Whole hours between the epoch and a (UTC) datetime."""
    delta = dt - EPOCH
    return delta.days * 24 + delta.seconds // 3600


def hour_to_datetime(h: int) -> datetime:
    return EPOCH + timedelta(hours=int(h))


def date_of_hour(h: int) -> date:
    return (EPOCH + timedelta(hours=int(h))).date()


def hour_of_day(h: int) -> int:
    return int(h) % 24


def day_start_hour(d: date) -> int:
    return (d - EPOCH.date()).days * 24


@dataclass(frozen=True)
class TzRules:
    """Fixed-offset timezone with explicit DST transition instants.

    ``transitions`` is a sorted list of (utc_hour_index, dst_active_after)
    pairs. Before the first transition the standard offset applies.
    """

    std_offset_min: int
    dst_offset_min: int
    transitions: tuple = ()

    def offset_at_utc(self, utc_hour: int) -> int:
        """Offset (minutes east of UTC) in force at a UTC hour."""
        if not self.transitions:
            return self.std_offset_min
        keys = [t[0] for t in self.transitions]
        i = bisect.bisect_right(keys, utc_hour) - 1
        if i < 0:
            return self.std_offset_min
        return self.dst_offset_min if self.transitions[i][1] else self.std_offset_min

    @classmethod
    def from_dict(cls, d: dict) -> "TzRules":
        return cls(
            std_offset_min=int(d["std_offset_min"]),
            dst_offset_min=int(d.get("dst_offset_min", d["std_offset_min"])),
            transitions=tuple((int(h), bool(flag)) for h, flag in d.get("transitions", [])),
        )

    def to_dict(self) -> dict:
        return {
            "std_offset_min": self.std_offset_min,
            "dst_offset_min": self.dst_offset_min,
            "transitions": [[h, bool(f)] for h, f in self.transitions],
        }


UTC = TzRules(std_offset_min=0, dst_offset_min=0)


def utc_to_local(utc_hour: int, rules: TzRules) -> datetime:
    return hour_to_datetime(utc_hour) + timedelta(minutes=rules.offset_at_utc(utc_hour))


def local_to_utc(local_dt: datetime, rules: TzRules, fold: int | None = None) -> int:
    """Invert :func:`utc_to_local`.

    Raises :class:`GapError` for nonexistent local times and
    :class:`AmbiguousTimeError` for repeated ones unless ``fold`` selects the
    earlier (0) or later (1) occurrence.
    """
    candidates = []
    for off in {rules.std_offset_min, rules.dst_offset_min}:
        guess = local_dt - timedelta(minutes=off)
        h = hour_index(guess)
        if guess != hour_to_datetime(h):
            continue  # sub-hour offsets would land between grid hours
        if utc_to_local(h, rules) == local_dt:
            candidates.append(h)
    candidates.sort()
    if not candidates:
        raise GapError(f"local time {local_dt} does not exist under the given rules")
    if len(candidates) == 1:
        return candidates[0]
    if fold is None:
        raise AmbiguousTimeError(
            f"local time {local_dt} is ambiguous; pass fold=0 (earlier) or fold=1 (later)"
        )
    return candidates[0] if fold == 0 else candidates[-1]


class DayType(Enum):
    """Position of a date relative to surrounding non-working days."""

    POST = "Post"
    EXT = "Ext"
    PREV = "Prev"
    FIRST = "First"
    INT = "Int"
    LAST = "Last"


SCHOOL_KINDS = ("full", "reduced", "none")
TRAVEL_KINDS = ("departure-eve", "departure-morning", "return-evening")


@dataclass(frozen=True)
class CalendarConfig:
    """Explicit holiday/school/travel calendar.

    first_date/last_date bound the range over which day classification is
    valid (neighbors needed, so the effective classifiable range shrinks by
    one day at each end).
    """

    first_date: date
    last_date: date
    holidays: frozenset = frozenset()
    special_eves: frozenset = frozenset()
    school_periods: tuple = ()  # ((start, end, kind), ...) end-inclusive
    travel_windows: tuple = ()  # ((date, kind), ...)
    weekend_days: tuple = (5, 6)
    # A maximal 1-day non-working run is both First and Last; tie broken here.
    single_day_run: str = "last"
    # A working day squeezed between non-working days carries return traffic.
    isolated_workday: str = "post"

    def __post_init__(self):
        spans = sorted((s, e) for s, e, _ in self.school_periods)
        for (s1, e1), (s2, _) in zip(spans, spans[1:]):
            if s2 <= e1:
                raise ValueError(f"overlapping school periods near {s2}")
        for s, e, kind in self.school_periods:
            if kind not in SCHOOL_KINDS:
                raise ValueError(f"unknown school kind {kind!r}")
        for _, kind in self.travel_windows:
            if kind not in TRAVEL_KINDS:
                raise ValueError(f"unknown travel window kind {kind!r}")

    def covers(self, d: date) -> bool:
        return self.first_date <= d <= self.last_date

    def is_working(self, d: date) -> bool:
        return d.weekday() not in self.weekend_days and d not in self.holidays

    def school_kind(self, d: date) -> str:
        for s, e, kind in self.school_periods:
            if s <= d <= e:
                return kind
        return "full" if self.is_working(d) else "none"

    @classmethod
    def from_dict(cls, d: dict) -> "CalendarConfig":
        pd = date.fromisoformat
        return cls(
            first_date=pd(d["first_date"]),
            last_date=pd(d["last_date"]),
            holidays=frozenset(pd(x) for x in d.get("holidays", [])),
            special_eves=frozenset(pd(x) for x in d.get("special_eves", [])),
            school_periods=tuple(
                (pd(s), pd(e), kind) for s, e, kind in d.get("school_periods", [])
            ),
            travel_windows=tuple((pd(x), kind) for x, kind in d.get("travel_windows", [])),
            weekend_days=tuple(d.get("weekend_days", (5, 6))),
            single_day_run=d.get("single_day_run", "last"),
            isolated_workday=d.get("isolated_workday", "post"),
        )

    def to_dict(self) -> dict:
        return {
            "first_date": self.first_date.isoformat(),
            "last_date": self.last_date.isoformat(),
            "holidays": sorted(x.isoformat() for x in self.holidays),
            "special_eves": sorted(x.isoformat() for x in self.special_eves),
            "school_periods": [
                [s.isoformat(), e.isoformat(), kind] for s, e, kind in self.school_periods
            ],
            "travel_windows": [[x.isoformat(), kind] for x, kind in self.travel_windows],
            "weekend_days": list(self.weekend_days),
            "single_day_run": self.single_day_run,
            "isolated_workday": self.isolated_workday,
        }

    @classmethod
    def load(cls, path) -> "CalendarConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)


def classify_day(d: date, calendar: CalendarConfig) -> DayType:
    """Classify a date by its position among working/non-working neighbors."""
    if not (calendar.covers(d - timedelta(days=1)) and calendar.covers(d + timedelta(days=1))):
        raise ValueError(f"{d} (with neighbors) outside calendar range")
    prev_w = calendar.is_working(d - timedelta(days=1))
    cur_w = calendar.is_working(d)
    next_w = calendar.is_working(d + timedelta(days=1))

    if cur_w:
        if prev_w and next_w:
            return DayType.EXT
        if prev_w:  # next is non-working
            return DayType.PREV
        if next_w:  # prev is non-working
            return DayType.POST
        # single working day wedged between non-working runs
        return DayType.POST if calendar.isolated_workday == "post" else DayType.PREV

    # non-working: place within the maximal non-working run
    if prev_w and next_w:
        return DayType.LAST if calendar.single_day_run == "last" else DayType.FIRST
    if prev_w:
        return DayType.FIRST
    if next_w:
        return DayType.LAST
    return DayType.INT


def _window_hours(day0: int, lo: int, hi: int) -> range:
    """Absolute hour range for a local-hour window of the day starting at day0."""
    return range(day0 + lo, day0 + hi)


ANTHRO_FEATURES = (
    "holiday",
    "eve",
    "departure",
    "return",
    "school_full",
    "school_reduced",
    "school_none",
    "workday",
)


@dataclass
class AnthroFeatures:
    """Hourly activity indicator matrix for one station."""

    start_hour: int
    names: tuple = ANTHRO_FEATURES
    values: np.ndarray = field(default_factory=lambda: np.zeros((len(ANTHRO_FEATURES), 0)))

    def column(self, name: str) -> np.ndarray:
        return self.values[self.names.index(name)]


def anthro_features(
    start: date,
    n_days: int,
    calendar: CalendarConfig,
    station=None,
    departure_eve=DEPARTURE_EVE_WINDOW,
    departure_morning=DEPARTURE_MORNING_WINDOW,
    return_evening=RETURN_EVENING_WINDOW,
) -> AnthroFeatures:
    """Build hourly 0/1 activity indicators over [start, start + n_days).

    The station argument is accepted for interface symmetry; the calendar is
    city-wide, so features are identical across stations.
    """
    if n_days < 0:
        raise ValueError("n_days must be >= 0")
    n_hours = n_days * HOURS_PER_DAY
    feats = AnthroFeatures(
        start_hour=day_start_hour(start), values=np.zeros((len(ANTHRO_FEATURES), n_hours))
    )
    if n_days == 0:
        return feats
    if not (calendar.covers(start) and calendar.covers(start + timedelta(days=n_days - 1))):
        raise ValueError("requested range outside calendar coverage")

    v = feats.values
    idx = {name: i for i, name in enumerate(ANTHRO_FEATURES)}
    base = feats.start_hour

    for k in range(n_days):
        d = start + timedelta(days=k)
        h0 = k * HOURS_PER_DAY
        sl = slice(h0, h0 + HOURS_PER_DAY)
        if d in calendar.holidays:
            v[idx["holiday"], sl] = 1.0
        if d in calendar.special_eves:
            v[idx["eve"], sl] = 1.0
        if calendar.is_working(d):
            v[idx["workday"], sl] = 1.0
        v[idx["school_" + calendar.school_kind(d)], sl] = 1.0

    windows = {
        "departure-eve": ("departure", departure_eve),
        "departure-morning": ("departure", departure_morning),
        "return-evening": ("return", return_evening),
    }
    for d, kind in calendar.travel_windows:
        name, (lo, hi) = windows[kind]
        for h in _window_hours(day_start_hour(d), lo, hi):
            j = h - base
            if 0 <= j < n_hours:
                v[idx[name], j] = 1.0
    return feats


def daytype_series(start: date, n_days: int, calendar: CalendarConfig) -> list:
    return [classify_day(start + timedelta(days=k), calendar) for k in range(n_days)]
