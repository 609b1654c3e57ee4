"""Synthetic airline-trip generation and CSV interchange.

The generator stands in for a proprietary flight-history dataset. Customers
follow one of three archetypes:

* ``seasonal``  - every trip leaves a fixed home city; the destination is read
  from a per-customer season-to-city table, so trips in the same season share
  one destination.
* ``commuter``  - trips alternate between a home/work city pair,
  (home, work), (work, home), ... with the return-trip flag set. Given the
  origin of the next trip, the destination is always the other city of the
  pair, which makes these customers perfectly predictable.
* ``random``    - destination drawn uniformly; each trip starts where the
  previous one ended.

All randomness flows through ``numpy.random.PCG64`` seeded per customer with
``SeedSequence((seed, customer_index))``, so output is reproducible and
independent of any parallelism across customers.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import CustomerHistory, RawTrip, Trip

CSV_COLUMNS = (
    "CUST_KEY",
    "SEG_LCL_DEP_DT",
    "ORG_CITY_NM",
    "CITY_NM",
    "DOM_INTNL_FLAG",
    "JRNY_TYP",
    "TOP1_ORG_CTY",
)

ARCHETYPES = ("seasonal", "commuter", "random")


def city_name(city_id: int) -> str:
    """Canonical name of a generated city; zero-padded so name order = id order."""
    return f"C{city_id:03d}"


def city_id(name: str) -> int:
    if not (name.startswith("C") and name[1:].isdigit()):
        raise ValueError(f"not a generated city name: {name!r}")
    return int(name[1:])


@dataclass(frozen=True)
class GenConfig:
    n_customers: int
    n_cities: int
    trips_per_customer: tuple[int, int]
    archetype_mix: Mapping[str, float]
    date_range: tuple[dt.date, dt.date]
    seed: int

    def __post_init__(self) -> None:
        if self.n_customers < 1:
            raise ValueError("n_customers must be positive")
        if self.n_cities < 2:
            raise ValueError(f"need at least 2 cities, got {self.n_cities}")
        lo, hi = self.trips_per_customer
        if lo < 1 or hi < lo:
            raise ValueError(f"bad trips_per_customer range {self.trips_per_customer}")
        unknown = set(self.archetype_mix) - set(ARCHETYPES)
        if unknown:
            raise ValueError(f"unknown archetypes {sorted(unknown)}; expected subset of {ARCHETYPES}")
        if any(v < 0 for v in self.archetype_mix.values()):
            raise ValueError("archetype proportions must be non-negative")
        total = sum(self.archetype_mix.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"archetype proportions must sum to 1, got {total}")
        start, end = self.date_range
        if end < start:
            raise ValueError(f"empty date_range {start}..{end}")

    @property
    def mix_vector(self) -> np.ndarray:
        return np.array([self.archetype_mix.get(a, 0.0) for a in ARCHETYPES], dtype=np.float64)


def _customer_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, index))))


def _sorted_dates(rng: np.random.Generator, n: int, date_range: tuple[dt.date, dt.date]) -> list[dt.date]:
    start, end = date_range
    span = (end - start).days + 1
    offsets = np.sort(rng.integers(0, span, size=n))
    return [start + dt.timedelta(days=int(o)) for o in offsets]


def _season_index(month: int) -> int:
    # Dec-Feb=0, Mar-May=1, Jun-Aug=2, Sep-Nov=3 (meteorological, northern hemisphere).
    return (month % 12) // 3


def _other_city(rng: np.random.Generator, n_cities: int, exclude: int) -> int:
    c = int(rng.integers(0, n_cities - 1))
    return c if c < exclude else c + 1


def _is_domestic(origin: int, destination: int, n_cities: int) -> bool:
    # The first half of the city ids form the home country.
    n_domestic = (n_cities + 1) // 2
    return origin < n_domestic and destination < n_domestic


def generate(config: GenConfig) -> list[CustomerHistory]:
    """Generate ``n_customers`` histories, fully determined by ``config.seed``."""
    histories = []
    for i in range(config.n_customers):
        rng = _customer_rng(config.seed, i)
        customer_id = f"CU{i:06d}"
        archetype = ARCHETYPES[int(rng.choice(len(ARCHETYPES), p=config.mix_vector))]
        lo, hi = config.trips_per_customer
        n_trips = int(rng.integers(lo, hi + 1))
        dates = _sorted_dates(rng, n_trips, config.date_range)
        legs: list[tuple[int, int, bool]] = []  # (origin, destination, return_trip)

        if archetype == "seasonal":
            home = int(rng.integers(0, config.n_cities))
            season_city = [_other_city(rng, config.n_cities, home) for _ in range(4)]
            for date in dates:
                dest = season_city[_season_index(date.month)]
                legs.append((home, dest, bool(rng.random() < 0.7)))
        elif archetype == "commuter":
            home = int(rng.integers(0, config.n_cities))
            work = _other_city(rng, config.n_cities, home)
            for j in range(n_trips):
                origin, dest = (home, work) if j % 2 == 0 else (work, home)
                legs.append((origin, dest, True))
        else:
            origin = int(rng.integers(0, config.n_cities))
            for _ in range(n_trips):
                dest = _other_city(rng, config.n_cities, origin)
                legs.append((origin, dest, bool(rng.random() < 0.5)))
                origin = dest

        top_origin = _modal_origin([o for o, _, _ in legs])
        trips = tuple(
            Trip(
                customer_id=customer_id,
                origin=origin,
                destination=dest,
                departure_date=date,
                domestic=_is_domestic(origin, dest, config.n_cities),
                return_trip=ret,
                top_origin_city=top_origin,
            )
            for (origin, dest, ret), date in zip(legs, dates)
        )
        histories.append(CustomerHistory(customer_id, trips))
    return histories


def _modal_origin(origins: Sequence[int]) -> int:
    counts: dict[int, int] = {}
    for o in origins:
        counts[o] = counts.get(o, 0) + 1
    # Ties go to the smallest id, which is also the lexicographically smallest name.
    return min(counts, key=lambda c: (-counts[c], c))


def archetype_of(config: GenConfig, index: int) -> str:
    """Archetype the generator assigned to customer ``index`` (for stats/tests)."""
    rng = _customer_rng(config.seed, index)
    return ARCHETYPES[int(rng.choice(len(ARCHETYPES), p=config.mix_vector))]


def histories_to_rows(histories: Iterable[CustomerHistory]) -> list[RawTrip]:
    """The in-memory equivalent of write_csv followed by read_csv."""
    rows = []
    for history in histories:
        for t in history.trips:
            rows.append(
                RawTrip(
                    customer_id=t.customer_id,
                    departure_date=t.departure_date,
                    origin_name=city_name(t.origin),
                    destination_name=city_name(t.destination),
                    domestic=t.domestic,
                    return_trip=t.return_trip,
                    top_origin_name=city_name(t.top_origin_city),
                )
            )
    return rows


def write_csv(histories: Iterable[CustomerHistory], path: str | Path) -> None:
    """Write histories in the interchange schema (UTF-8, header row, ISO dates)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in histories_to_rows(histories):
            writer.writerow(
                (
                    row.customer_id,
                    row.departure_date.isoformat(),
                    row.origin_name,
                    row.destination_name,
                    "D" if row.domestic else "I",
                    "RT" if row.return_trip else "OW",
                    row.top_origin_name,
                )
            )


def read_csv(path: str | Path) -> list[RawTrip]:
    """Read raw trip rows; malformed dates or flags fail with the line number."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in CSV_COLUMNS:
            if column not in header:
                raise ValueError(f"missing column {column!r} in {path}")
        for lineno, record in enumerate(reader, start=2):
            raw_date = record["SEG_LCL_DEP_DT"]
            try:
                date = dt.date.fromisoformat(raw_date)
            except ValueError:
                raise ValueError(f"{path} line {lineno}: unparseable date {raw_date!r}") from None
            flag = record["DOM_INTNL_FLAG"]
            if flag not in ("D", "I"):
                raise ValueError(f"{path} line {lineno}: DOM_INTNL_FLAG must be D or I, got {flag!r}")
            journey = record["JRNY_TYP"]
            if journey not in ("OW", "RT"):
                raise ValueError(f"{path} line {lineno}: JRNY_TYP must be OW or RT, got {journey!r}")
            rows.append(
                RawTrip(
                    customer_id=record["CUST_KEY"],
                    departure_date=date,
                    origin_name=record["ORG_CITY_NM"],
                    destination_name=record["CITY_NM"],
                    domestic=flag == "D",
                    return_trip=journey == "RT",
                    top_origin_name=record["TOP1_ORG_CTY"],
                )
            )
    return rows
