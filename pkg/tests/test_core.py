import datetime as dt

import numpy as np
import pytest

from nextdest.core import CityVocab, CustomerHistory, Trip, build_vocab, group_into_histories

from conftest import make_raw


def trip(date, origin=0, destination=1, customer="CU000000"):
    return Trip(
        customer_id=customer,
        origin=origin,
        destination=destination,
        departure_date=dt.date.fromisoformat(date),
        domestic=True,
        return_trip=False,
        top_origin_city=origin,
    )


class TestBuildVocab:
    def test_sixteen_cities_all_kept(self):
        # 100 trips spread over exactly 16 cities -> vocabulary of all 16.
        rng = np.random.default_rng(0)
        names = [f"CITY{i:02d}" for i in range(16)]
        rows = []
        for _ in range(100):
            a, b = rng.choice(16, size=2, replace=False)
            rows.append(make_raw(origin=names[a], destination=names[b]))
        vocab = build_vocab(rows, 16)
        assert sorted(vocab.cities) == names

    def test_two_cities(self):
        rows = [make_raw("A", "B"), make_raw("B", "A"), make_raw("A", "B")]
        vocab = build_vocab(rows, 2)
        assert vocab.cities == ("A", "B")  # A: 3, B: 3, tie broken by name

    def test_tie_broken_lexicographically(self):
        # Counts by hand: A appears 5 times, B 5 times, C once.
        rows = [
            make_raw("A", "B"),
            make_raw("B", "A"),
            make_raw("A", "B"),
            make_raw("B", "A"),
            make_raw("A", "C"),
            make_raw("B", ""),
        ]
        vocab = build_vocab(rows, 2)
        assert vocab.cities == ("A", "B")

    def test_frequency_order(self):
        rows = [make_raw("X", "Y")] * 3 + [make_raw("Y", "Z")] * 2
        vocab = build_vocab(rows, 3)
        assert vocab.cities == ("Y", "X", "Z")  # Y: 5, X: 3, Z: 2

    def test_permutation_invariant_and_idempotent(self):
        rng = np.random.default_rng(1)
        names = [f"N{i}" for i in range(8)]
        rows = [
            make_raw(names[rng.integers(8)], names[rng.integers(8)])
            for _ in range(60)
        ]
        reference = build_vocab(rows, 5)
        for _ in range(5):
            shuffled = [rows[i] for i in rng.permutation(len(rows))]
            assert build_vocab(shuffled, 5) == reference
        assert build_vocab(rows, 5) == reference

    def test_too_few_cities(self):
        rows = [make_raw("A", "B")]
        with pytest.raises(ValueError, match="only 2"):
            build_vocab(rows, 3)

    def test_empty_input(self):
        with pytest.raises(ValueError, match="no trips"):
            build_vocab([], 2)

    def test_top_p_too_small(self):
        with pytest.raises(ValueError, match="at least 2"):
            build_vocab([make_raw("A", "B")], 1)


class TestCityVocab:
    def test_bijective(self):
        vocab = CityVocab(("B", "A", "C"))
        for i, name in enumerate(vocab.cities):
            assert vocab.id_of(name) == i
            assert vocab.name_of(i) == name
        assert "A" in vocab and "Z" not in vocab
        assert len(vocab) == 3

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            CityVocab(("A", "A"))


class TestCustomerHistory:
    def test_requires_trips(self):
        with pytest.raises(ValueError, match="at least one"):
            CustomerHistory("CU000000", ())

    def test_rejects_out_of_order(self):
        with pytest.raises(ValueError, match="date order"):
            CustomerHistory("CU000000", (trip("2024-02-01"), trip("2024-01-01")))

    def test_allows_date_ties(self):
        h = CustomerHistory("CU000000", (trip("2024-01-01"), trip("2024-01-01")))
        assert len(h) == 2


class TestGrouping:
    def test_groups_and_sorts(self):
        trips = [
            trip("2024-03-01", customer="A"),
            trip("2024-01-01", customer="B"),
            trip("2024-01-01", customer="A"),
            trip("2024-02-01", customer="A"),
        ]
        histories = group_into_histories(trips)
        assert [h.customer_id for h in histories] == ["A", "B"]
        assert [t.departure_date.month for t in histories[0].trips] == [1, 2, 3]

    def test_stable_for_equal_dates(self):
        a = trip("2024-01-01", origin=0, destination=1)
        b = trip("2024-01-01", origin=2, destination=3)
        histories = group_into_histories([a, b])
        assert histories[0].trips == (a, b)
