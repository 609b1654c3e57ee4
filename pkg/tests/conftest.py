import datetime as dt

import pytest

from nextdest.core import RawTrip, build_vocab
from nextdest import datagen, pipeline


def make_raw(
    origin="AAA",
    destination="BBB",
    date="2024-01-01",
    customer="CU000000",
    domestic=True,
    return_trip=False,
    top_origin=None,
):
    return RawTrip(
        customer_id=customer,
        departure_date=dt.date.fromisoformat(date),
        origin_name=origin,
        destination_name=destination,
        domestic=domestic,
        return_trip=return_trip,
        top_origin_name=origin if top_origin is None else top_origin,
    )


def commuter_pair(history):
    """The {home, work} pair of a commuter customer, from the first trip."""
    first = history.trips[0]
    return first.origin, first.destination


def commuter_oracle_hits(histories, w):
    """Predict 'the other city of the pair' for each held-out last flight."""
    hits = 0
    total = 0
    for h in histories:
        home, work = commuter_pair(h)
        last = h.trips[-1]
        predicted = work if last.origin == home else home
        hits += predicted == last.destination
        total += 1
    return hits, total


@pytest.fixture(scope="session")
def mixed_dataset():
    """Small mixed-archetype dataset shared by pipeline/model tests."""
    config = datagen.GenConfig(
        n_customers=120,
        n_cities=10,
        trips_per_customer=(8, 14),
        archetype_mix={"seasonal": 0.3, "commuter": 0.4, "random": 0.3},
        date_range=(dt.date(2020, 1, 1), dt.date(2024, 12, 31)),
        seed=7,
    )
    histories = datagen.generate(config)
    rows = datagen.histories_to_rows(histories)
    vocab = build_vocab(rows, 10)
    cleaned = pipeline.clean(rows, vocab)
    return config, cleaned.histories, vocab
