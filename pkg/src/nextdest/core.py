"""Domain types shared by every stage: trips, customer histories, city vocabulary."""

from __future__ import annotations

import datetime as dt
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class RawTrip:
    """One CSV row: city fields are still names, nothing validated beyond parsing."""

    customer_id: str
    departure_date: dt.date
    origin_name: str
    destination_name: str
    domestic: bool
    return_trip: bool
    top_origin_name: str


@dataclass(frozen=True)
class Trip:
    """One flight of one customer, with cities resolved to vocabulary ids."""

    customer_id: str
    origin: int
    destination: int
    departure_date: dt.date
    domestic: bool
    return_trip: bool
    top_origin_city: int


@dataclass(frozen=True)
class CustomerHistory:
    """A customer's trips in non-decreasing date order (ties keep input order)."""

    customer_id: str
    trips: tuple[Trip, ...]

    def __post_init__(self) -> None:
        if not self.trips:
            raise ValueError(f"customer {self.customer_id!r}: history must hold at least one trip")
        dates = [t.departure_date for t in self.trips]
        if any(a > b for a, b in zip(dates, dates[1:])):
            raise ValueError(f"customer {self.customer_id!r}: trips not in date order")

    def __len__(self) -> int:
        return len(self.trips)


@dataclass(frozen=True)
class CityVocab:
    """Dense 0-based city ids, ordered by descending trip count then name."""

    cities: tuple[str, ...]
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {name: i for i, name in enumerate(self.cities)}
        if len(index) != len(self.cities):
            raise ValueError("vocabulary contains duplicate city names")
        object.__setattr__(self, "index", index)

    def __len__(self) -> int:
        return len(self.cities)

    def __contains__(self, name: str) -> bool:
        return name in self.index

    def id_of(self, name: str) -> int:
        return self.index[name]

    def name_of(self, city_id: int) -> str:
        return self.cities[city_id]


def build_vocab(trips: Iterable[RawTrip], top_p: int) -> CityVocab:
    """Vocabulary of the ``top_p`` most frequent cities in the raw rows.

    Both the origin and the destination slot of every row contribute one count;
    empty names contribute nothing. Ordering is descending count with
    lexicographic tie-break, so the result is independent of row order.
    """
    if top_p < 2:
        raise ValueError(f"top_p must be at least 2, got {top_p}")
    counts: Counter[str] = Counter()
    for row in trips:
        if row.origin_name:
            counts[row.origin_name] += 1
        if row.destination_name:
            counts[row.destination_name] += 1
    if not counts:
        raise ValueError("no trips given, cannot build a vocabulary")
    if len(counts) < top_p:
        raise ValueError(f"need {top_p} distinct cities but the input contains only {len(counts)}")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return CityVocab(tuple(name for name, _ in ranked[:top_p]))


def group_into_histories(trips: Sequence[Trip]) -> list[CustomerHistory]:
    """Group trips by customer and sort each group by date (stable in input order).

    Customers are returned in first-seen order.
    """
    by_customer: dict[str, list[Trip]] = {}
    for trip in trips:
        by_customer.setdefault(trip.customer_id, []).append(trip)
    histories = []
    for customer_id, group in by_customer.items():
        ordered = sorted(group, key=lambda t: t.departure_date)
        histories.append(CustomerHistory(customer_id, tuple(ordered)))
    return histories
