"""Cleaning, sliding-window construction, per-window features and encoding.

The dense per-timestep block laid out by :meth:`Preprocessor.transform` is

    [day one-hot (31) | month one-hot (12) | weekday one-hot (7) |
     scaled numerics (3) | first-season one-hot (4) | last-season one-hot (4)]

for a total width of 61. Window-level values (numerics, seasons) are repeated
on every timestep; the date blocks vary per flight.
"""

from __future__ import annotations

import datetime as dt
import enum
import json
import os
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import CityVocab, CustomerHistory, RawTrip, Trip, group_into_histories

DAY_SLOTS = 31
MONTH_SLOTS = 12
WEEKDAY_SLOTS = 7
SEASON_SLOTS = 4
NUMERIC_SLOTS = 3
DENSE_WIDTH = DAY_SLOTS + MONTH_SLOTS + WEEKDAY_SLOTS + NUMERIC_SLOTS + 2 * SEASON_SLOTS

MANIFEST_VERSION = 1


class Season(enum.IntEnum):
    WINTER = 0
    SPRING = 1
    SUMMER = 2
    AUTUMN = 3


def season_of_month(month: int) -> Season:
    """Meteorological seasons: Dec-Feb, Mar-May, Jun-Aug, Sep-Nov."""
    if not 1 <= month <= 12:
        raise ValueError(f"month out of range: {month}")
    return Season((month % 12) // 3)


@dataclass(frozen=True)
class CustomFeatures:
    """Window-level feature vector; the three numerics may be missing (None)."""

    avg_day_difference: int | None
    domestic_flight_count: int | None
    return_trip_count: int | None
    first_season: Season
    last_season: Season
    days: tuple[int, ...]
    months: tuple[int, ...]
    weekdays: tuple[int, ...]
    flights_array: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class WindowEntry:
    customer_id: str
    window: tuple[Trip, ...]
    features: CustomFeatures
    target_origin: int
    target_destination: int


@dataclass(frozen=True)
class EncodedEntry:
    """Numeric tensors for one window entry, ready for the network."""

    dense: np.ndarray  # (w, DENSE_WIDTH) float64
    flight_origins: np.ndarray  # (w,) int64
    flight_destinations: np.ndarray  # (w,) int64
    top_origin: int
    target_origin: int
    label: int


@dataclass
class CleanResult:
    histories: list[CustomerHistory]
    dropped: Counter

    @property
    def kept_rows(self) -> int:
        return sum(len(h) for h in self.histories)


def clean(rows: Iterable[RawTrip], vocab: CityVocab) -> CleanResult:
    """Drop unusable rows, resolve city names to ids, group and date-sort.

    Rows are checked in a fixed order so each drop is counted once:
    null city field first (otherwise two empty fields would look like a
    same-city row), then origin == destination, then out-of-vocabulary.
    """
    dropped: Counter = Counter()
    trips = []
    for row in rows:
        if not row.origin_name or not row.destination_name or not row.top_origin_name:
            dropped["null_city"] += 1
            continue
        if row.origin_name == row.destination_name:
            dropped["same_city"] += 1
            continue
        if (
            row.origin_name not in vocab
            or row.destination_name not in vocab
            or row.top_origin_name not in vocab
        ):
            dropped["out_of_vocab"] += 1
            continue
        trips.append(
            Trip(
                customer_id=row.customer_id,
                origin=vocab.id_of(row.origin_name),
                destination=vocab.id_of(row.destination_name),
                departure_date=row.departure_date,
                domestic=row.domestic,
                return_trip=row.return_trip,
                top_origin_city=vocab.id_of(row.top_origin_name),
            )
        )
    return CleanResult(group_into_histories(trips), dropped)


def filter_min_trips(histories: Iterable[CustomerHistory], w: int) -> list[CustomerHistory]:
    """Keep customers with n >= w + 2: at least one training window plus the test window."""
    if w < 1:
        raise ValueError(f"window size must be positive, got {w}")
    return [h for h in histories if len(h) >= w + 2]


def window_features(window: Sequence[Trip]) -> CustomFeatures:
    dates = [t.departure_date for t in window]
    return CustomFeatures(
        avg_day_difference=(dates[-1] - dates[0]).days,
        domestic_flight_count=sum(t.domestic for t in window),
        return_trip_count=sum(t.return_trip for t in window),
        first_season=season_of_month(dates[0].month),
        last_season=season_of_month(dates[-1].month),
        days=tuple(d.day for d in dates),
        months=tuple(d.month for d in dates),
        weekdays=tuple(d.weekday() for d in dates),
        flights_array=tuple((t.origin, t.destination) for t in window),
    )


def window_customer(history: CustomerHistory, w: int) -> list[WindowEntry]:
    """All n - w sliding windows of ``history``; entry j targets trip j + w."""
    n = len(history)
    if n < w + 1:
        raise ValueError(
            f"customer {history.customer_id!r} has {n} trips, need at least {w + 1} for window size {w}"
        )
    entries = []
    for j in range(n - w):
        window = history.trips[j : j + w]
        target = history.trips[j + w]
        entries.append(
            WindowEntry(
                customer_id=history.customer_id,
                window=window,
                features=window_features(window),
                target_origin=target.origin,
                target_destination=target.destination,
            )
        )
    return entries


def split_train_test(
    entries_per_customer: Iterable[Sequence[WindowEntry]],
) -> tuple[list[WindowEntry], list[WindowEntry]]:
    """Per customer: final entry (targeting the last flight) to test, rest to train."""
    train: list[WindowEntry] = []
    test: list[WindowEntry] = []
    for entries in entries_per_customer:
        if len(entries) < 2:
            who = entries[0].customer_id if entries else "<empty>"
            raise ValueError(
                f"customer {who!r} has {len(entries)} window entries; "
                "need at least 2 (filter_min_trips should have removed it)"
            )
        train.extend(entries[:-1])
        test.append(entries[-1])
    return train, test


def build_dataset(
    histories: Iterable[CustomerHistory], w: int
) -> tuple[list[WindowEntry], list[WindowEntry]]:
    """filter_min_trips + window_customer + split_train_test in one step."""
    kept = filter_min_trips(histories, w)
    if not kept:
        raise ValueError(f"no customer has the {w + 2} trips required for window size {w}")
    return split_train_test(window_customer(h, w) for h in kept)


@dataclass(frozen=True)
class Preprocessor:
    """Fitted numeric statistics plus fixed categorical layouts.

    ``transform`` is pure: medians fill missing numerics, means/stds come from
    the training entries only, and categorical blocks are fixed one-hot slots.
    """

    medians: np.ndarray  # (3,)
    means: np.ndarray  # (3,)
    stds: np.ndarray  # (3,), zeros already replaced by 1.0
    n_cities: int

    def to_dict(self) -> dict:
        return {
            "medians": self.medians.tolist(),
            "means": self.means.tolist(),
            "stds": self.stds.tolist(),
            "n_cities": self.n_cities,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Preprocessor":
        return cls(
            medians=np.asarray(payload["medians"], dtype=np.float64),
            means=np.asarray(payload["means"], dtype=np.float64),
            stds=np.asarray(payload["stds"], dtype=np.float64),
            n_cities=int(payload["n_cities"]),
        )

    def transform(self, entry: WindowEntry) -> EncodedEntry:
        f = entry.features
        w = len(f.days)
        ids = [entry.target_origin, entry.target_destination]
        for o, d in f.flights_array:
            ids.extend((o, d))
        ids.extend(t.top_origin_city for t in entry.window)
        for i in ids:
            if not 0 <= i < self.n_cities:
                raise ValueError(f"city id {i} out of vocabulary (p={self.n_cities})")

        numerics = np.array(
            [
                self.medians[0] if f.avg_day_difference is None else f.avg_day_difference,
                self.medians[1] if f.domestic_flight_count is None else f.domestic_flight_count,
                self.medians[2] if f.return_trip_count is None else f.return_trip_count,
            ],
            dtype=np.float64,
        )
        scaled = (numerics - self.means) / self.stds

        dense = np.zeros((w, DENSE_WIDTH), dtype=np.float64)
        offset_month = DAY_SLOTS
        offset_weekday = offset_month + MONTH_SLOTS
        offset_numeric = offset_weekday + WEEKDAY_SLOTS
        offset_first = offset_numeric + NUMERIC_SLOTS
        offset_last = offset_first + SEASON_SLOTS
        for t in range(w):
            dense[t, f.days[t] - 1] = 1.0
            dense[t, offset_month + f.months[t] - 1] = 1.0
            dense[t, offset_weekday + f.weekdays[t]] = 1.0
        dense[:, offset_numeric : offset_numeric + NUMERIC_SLOTS] = scaled
        dense[:, offset_first + int(f.first_season)] = 1.0
        dense[:, offset_last + int(f.last_season)] = 1.0

        pairs = np.asarray(f.flights_array, dtype=np.int64)
        return EncodedEntry(
            dense=dense,
            flight_origins=pairs[:, 0],
            flight_destinations=pairs[:, 1],
            top_origin=entry.window[-1].top_origin_city,
            target_origin=entry.target_origin,
            label=entry.target_destination,
        )


def _numeric_matrix(entries: Sequence[WindowEntry]) -> np.ndarray:
    values = np.full((len(entries), NUMERIC_SLOTS), np.nan, dtype=np.float64)
    for i, e in enumerate(entries):
        f = e.features
        for j, v in enumerate((f.avg_day_difference, f.domestic_flight_count, f.return_trip_count)):
            if v is not None:
                values[i, j] = v
    return values


def fit_preprocessor(train_entries: Sequence[WindowEntry], n_cities: int) -> Preprocessor:
    """Fit medians, means and stds on training entries only.

    Medians are taken over the non-missing values; means/stds over the
    median-imputed column, mirroring an imputer-then-scaler pipeline. A
    constant column gets std 1.0 so it scales to exact zeros.
    """
    if not train_entries:
        raise ValueError("cannot fit a preprocessor on an empty training set")
    values = _numeric_matrix(train_entries)
    if np.all(np.isnan(values), axis=0).any():
        raise ValueError("a numeric feature is missing in every training entry")
    medians = np.nanmedian(values, axis=0)
    imputed = np.where(np.isnan(values), medians, values)
    means = imputed.mean(axis=0)
    stds = imputed.std(axis=0)
    stds = np.where(stds > 0.0, stds, 1.0)
    return Preprocessor(medians=medians, means=means, stds=stds, n_cities=n_cities)


# --- prepared-dataset manifest (JSON, lossless round trip) ---


def _trip_to_list(t: Trip) -> list:
    return [
        t.origin,
        t.destination,
        t.departure_date.isoformat(),
        t.domestic,
        t.return_trip,
        t.top_origin_city,
    ]


def save_entries(path: str | Path, entries: Sequence[WindowEntry], vocab: CityVocab, w: int) -> None:
    payload = {
        "format_version": MANIFEST_VERSION,
        "window_size": w,
        "cities": list(vocab.cities),
        "entries": [
            {
                "customer_id": e.customer_id,
                "window": [_trip_to_list(t) for t in e.window],
                "target_origin": e.target_origin,
                "target_destination": e.target_destination,
            }
            for e in entries
        ],
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def load_entries(path: str | Path) -> tuple[list[WindowEntry], CityVocab, int]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {version!r} in {path}")
    w = int(payload["window_size"])
    vocab = CityVocab(tuple(payload["cities"]))
    entries = []
    for item in payload["entries"]:
        window = tuple(
            Trip(
                customer_id=item["customer_id"],
                origin=int(o),
                destination=int(d),
                departure_date=dt.date.fromisoformat(date),
                domestic=bool(dom),
                return_trip=bool(ret),
                top_origin_city=int(top),
            )
            for o, d, date, dom, ret, top in item["window"]
        )
        if len(window) != w:
            raise ValueError(f"manifest entry has window length {len(window)}, expected {w}")
        entries.append(
            WindowEntry(
                customer_id=item["customer_id"],
                window=window,
                features=window_features(window),
                target_origin=int(item["target_origin"]),
                target_destination=int(item["target_destination"]),
            )
        )
    return entries, vocab, w
