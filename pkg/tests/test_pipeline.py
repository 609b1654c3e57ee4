import dataclasses
import datetime as dt

import numpy as np
import pytest

from nextdest import datagen, pipeline
from nextdest.core import CityVocab, CustomerHistory, Trip, build_vocab
from nextdest.pipeline import (
    DENSE_WIDTH,
    Season,
    build_dataset,
    clean,
    filter_min_trips,
    fit_preprocessor,
    load_entries,
    save_entries,
    season_of_month,
    split_train_test,
    window_customer,
    window_features,
)

from conftest import make_raw

VOCAB = CityVocab(("AAA", "BBB", "CCC", "DDD"))


def trip(date, origin=0, destination=1, domestic=True, return_trip=False, customer="CU000000"):
    return Trip(customer, origin, destination, dt.date.fromisoformat(date), domestic, return_trip, origin)


def history(dates, pairs=None, customer="CU000000"):
    pairs = pairs or [(0, 1)] * len(dates)
    return CustomerHistory(
        customer,
        tuple(trip(d, o, dest, customer=customer) for d, (o, dest) in zip(dates, pairs)),
    )


class TestSeason:
    def test_mapping(self):
        expected = {
            12: Season.WINTER, 1: Season.WINTER, 2: Season.WINTER,
            3: Season.SPRING, 4: Season.SPRING, 5: Season.SPRING,
            6: Season.SUMMER, 7: Season.SUMMER, 8: Season.SUMMER,
            9: Season.AUTUMN, 10: Season.AUTUMN, 11: Season.AUTUMN,
        }
        assert {m: season_of_month(m) for m in range(1, 13)} == expected

    def test_rejects_bad_month(self):
        with pytest.raises(ValueError):
            season_of_month(0)


class TestClean:
    def test_same_city_dropped(self):
        result = clean([make_raw("AAA", "AAA")], VOCAB)
        assert result.histories == []
        assert result.dropped["same_city"] == 1

    def test_null_city_dropped(self):
        result = clean([make_raw("AAA", ""), make_raw("", "BBB"), make_raw("AAA", "BBB", top_origin="")], VOCAB)
        assert result.histories == []
        assert result.dropped["null_city"] == 3

    def test_double_empty_counts_as_null_not_same_city(self):
        result = clean([make_raw("", "")], VOCAB)
        assert result.dropped == {"null_city": 1}

    def test_out_of_vocab_dropped(self):
        rows = [make_raw("AAA", "ZZZ"), make_raw("ZZZ", "AAA"), make_raw("AAA", "BBB", top_origin="ZZZ")]
        result = clean(rows, VOCAB)
        assert result.histories == []
        assert result.dropped["out_of_vocab"] == 3

    def test_sorts_shuffled_dates(self):
        rows = [
            make_raw("AAA", "BBB", date="2024-03-01"),
            make_raw("BBB", "AAA", date="2024-01-01"),
            make_raw("AAA", "CCC", date="2024-02-01"),
        ]
        result = clean(rows, VOCAB)
        (h,) = result.histories
        assert [t.departure_date.month for t in h.trips] == [1, 2, 3]
        assert result.dropped == {}

    def test_ids_resolved_via_vocab(self):
        result = clean([make_raw("BBB", "DDD", top_origin="AAA")], VOCAB)
        (h,) = result.histories
        assert (h.trips[0].origin, h.trips[0].destination, h.trips[0].top_origin_city) == (1, 3, 0)

    def test_surviving_ids_within_vocab(self, mixed_dataset):
        _, histories, vocab = mixed_dataset
        p = len(vocab)
        for h in histories:
            for t in h.trips:
                assert 0 <= t.origin < p and 0 <= t.destination < p and 0 <= t.top_origin_city < p


class TestFilterMinTrips:
    def test_boundary_17_with_w15(self):
        h = history([f"2024-01-{d:02d}" for d in range(1, 18)])
        assert filter_min_trips([h], 15) == [h]

    def test_n_equal_w_plus_1_dropped(self):
        h = history(["2024-01-01", "2024-01-02", "2024-01-03", "2024-01-04"])
        assert filter_min_trips([h], 3) == []

    def test_survivors_by_direct_scan(self):
        config = datagen.GenConfig(
            n_customers=100,
            n_cities=8,
            trips_per_customer=(10, 20),
            archetype_mix={"random": 1.0},
            date_range=(dt.date(2020, 1, 1), dt.date(2024, 12, 31)),
            seed=13,
        )
        histories = datagen.generate(config)
        survivors = filter_min_trips(histories, 10)
        assert survivors == [h for h in histories if len(h) >= 12]

    def test_rejects_bad_window(self):
        with pytest.raises(ValueError):
            filter_min_trips([], 0)


class TestWindowCustomer:
    def test_five_trip_example(self):
        pairs = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 0)]
        dates = ["2024-01-01", "2024-01-05", "2024-01-09", "2024-02-01", "2024-02-10"]
        entries = window_customer(history(dates, pairs), 3)
        assert len(entries) == 2
        assert entries[0].features.flights_array == ((0, 1), (1, 2), (2, 0))
        assert (entries[0].target_origin, entries[0].target_destination) == (0, 3)
        assert entries[1].features.flights_array == ((1, 2), (2, 0), (0, 3))
        assert (entries[1].target_origin, entries[1].target_destination) == (3, 0)

    def test_boundary_single_entry(self):
        entries = window_customer(history(["2024-01-01", "2024-01-02", "2024-01-03"]), 2)
        assert len(entries) == 1

    def test_too_short_raises(self):
        with pytest.raises(ValueError, match="at least 4"):
            window_customer(history(["2024-01-01", "2024-01-02", "2024-01-03"]), 3)

    def test_hand_computed_features(self):
        trips = (
            trip("2024-01-05", 0, 1, domestic=True, return_trip=True),
            trip("2024-01-12", 1, 0, domestic=True, return_trip=False),
            trip("2024-03-20", 0, 2, domestic=False, return_trip=False),
            trip("2024-04-01", 2, 0),
        )
        entries = window_customer(CustomerHistory("CU000000", trips), 3)
        f = entries[0].features
        assert f.avg_day_difference == 75
        assert f.domestic_flight_count == 2
        assert f.return_trip_count == 1
        assert f.first_season == Season.WINTER
        assert f.last_season == Season.SPRING
        assert f.days == (5, 12, 20)
        assert f.months == (1, 1, 3)
        assert f.weekdays == (4, 4, 2)  # Fri, Fri, Wed

    def test_windows_are_consecutive_and_ordered(self, mixed_dataset):
        _, histories, _ = mixed_dataset
        for h in histories[:20]:
            if len(h) < 4:
                continue
            for j, entry in enumerate(window_customer(h, 3)):
                assert entry.window == h.trips[j : j + 3]
                target = h.trips[j + 3]
                assert (entry.target_origin, entry.target_destination) == (target.origin, target.destination)


class TestSplit:
    def test_two_entries_one_each(self):
        h = history([f"2024-01-{d:02d}" for d in range(1, 18)])
        train, test = split_train_test([window_customer(h, 15)])
        assert len(train) == 1 and len(test) == 1

    def test_five_entries_four_one(self):
        h = history([f"2024-01-{d:02d}" for d in range(1, 9)])
        entries = window_customer(h, 3)
        assert len(entries) == 5
        train, test = split_train_test([entries])
        assert len(train) == 4 and len(test) == 1
        assert test[0] == entries[-1]

    def test_single_entry_rejected(self):
        h = history(["2024-01-01", "2024-01-02", "2024-01-03"])
        with pytest.raises(ValueError, match="at least 2"):
            split_train_test([window_customer(h, 2)])

    def test_test_rows_equal_customer_count(self):
        config = datagen.GenConfig(
            n_customers=5000,
            n_cities=6,
            trips_per_customer=(5, 8),
            archetype_mix={"random": 1.0},
            date_range=(dt.date(2022, 1, 1), dt.date(2024, 12, 31)),
            seed=3,
        )
        histories = datagen.generate(config)
        train, test = build_dataset(histories, 3)
        assert len(test) == 5000
        per_customer = {}
        for e in train:
            per_customer[e.customer_id] = per_customer.get(e.customer_id, 0) + 1
        for h in histories:
            assert per_customer.get(h.customer_id, 0) == len(h) - 3 - 1


class TestPreprocessor:
    def entries(self, numerics):
        out = []
        for i, value in enumerate(numerics):
            h = history(["2024-01-01", "2024-01-02", "2024-01-03"], customer=f"CU{i:06d}")
            e = window_customer(h, 2)[0]
            f = dataclasses.replace(
                e.features,
                avg_day_difference=value,
                domestic_flight_count=value,
                return_trip_count=value,
            )
            out.append(dataclasses.replace(e, features=f))
        return out

    def test_median_mean_std(self):
        pre = fit_preprocessor(self.entries([1, 2, 3]), n_cities=4)
        assert pre.medians.tolist() == [2, 2, 2]
        assert pre.means.tolist() == [2, 2, 2]
        assert np.allclose(pre.stds, np.std([1, 2, 3]))

    def test_constant_feature_scales_to_zero(self):
        entries = self.entries([5, 5, 5])
        pre = fit_preprocessor(entries, n_cities=4)
        assert pre.stds.tolist() == [1.0, 1.0, 1.0]
        encoded = pre.transform(entries[0])
        numeric_block = encoded.dense[0, 50:53]
        assert numeric_block.tolist() == [0.0, 0.0, 0.0]

    def test_missing_numeric_imputed_with_median(self):
        entries = self.entries([1, 2, 3])
        pre = fit_preprocessor(entries, n_cities=4)
        incomplete = dataclasses.replace(
            entries[0], features=dataclasses.replace(entries[0].features, avg_day_difference=None)
        )
        encoded = pre.transform(incomplete)
        expected = (pre.medians[0] - pre.means[0]) / pre.stds[0]
        assert encoded.dense[0, 50] == pytest.approx(expected)

    def test_fit_ignores_missing_when_computing_median(self):
        entries = self.entries([1, 2, 3, 4])
        broken = dataclasses.replace(
            entries[3], features=dataclasses.replace(entries[3].features, avg_day_difference=None)
        )
        pre = fit_preprocessor(entries[:3] + [broken], n_cities=4)
        assert pre.medians[0] == 2.0  # median of {1, 2, 3}

    def test_empty_train_set_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            fit_preprocessor([], n_cities=4)

    def test_value_at_mean_scales_to_zero(self):
        entries = self.entries([1, 2, 3])
        pre = fit_preprocessor(entries, n_cities=4)
        encoded = pre.transform(entries[1])  # value 2 == mean
        assert encoded.dense[0, 50:53].tolist() == [0.0, 0.0, 0.0]


class TestTransform:
    def fixture(self):
        trips = (
            trip("2024-01-01", 0, 1),  # Monday
            trip("2024-02-15", 1, 2),
            trip("2024-06-30", 2, 3),
            trip("2024-07-04", 3, 0),
        )
        h = CustomerHistory("CU000000", trips)
        entries = window_customer(h, 3)
        pre = fit_preprocessor(entries, n_cities=4)
        return entries[0], pre

    def test_dense_width_and_blocks(self):
        entry, pre = self.fixture()
        encoded = pre.transform(entry)
        assert DENSE_WIDTH == 61
        assert encoded.dense.shape == (3, 61)
        # month=1 lights slot 0 of the month block at offset 31
        assert encoded.dense[0, 31] == 1.0
        assert encoded.dense[0, :31].sum() == 1.0 and encoded.dense[0, 0] == 1.0  # day 1
        assert encoded.dense[0, 43] == 1.0  # Monday
        # one-hot block totals: day + month + weekday + 2 seasons
        assert encoded.dense[0].sum() == pytest.approx(5.0 + encoded.dense[0, 50:53].sum())

    def test_season_blocks_broadcast(self):
        entry, pre = self.fixture()
        encoded = pre.transform(entry)
        first = int(entry.features.first_season)
        last = int(entry.features.last_season)
        for t in range(3):
            assert encoded.dense[t, 53 + first] == 1.0
            assert encoded.dense[t, 57 + last] == 1.0

    def test_embedding_indices(self):
        entry, pre = self.fixture()
        encoded = pre.transform(entry)
        assert encoded.flight_origins.tolist() == [0, 1, 2]
        assert encoded.flight_destinations.tolist() == [1, 2, 3]
        assert encoded.top_origin == entry.window[-1].top_origin_city
        assert encoded.target_origin == 3
        assert encoded.label == 0

    def test_deterministic(self):
        entry, pre = self.fixture()
        a, b = pre.transform(entry), pre.transform(entry)
        assert np.array_equal(a.dense, b.dense)
        assert np.array_equal(a.flight_origins, b.flight_origins)

    def test_out_of_vocab_rejected(self):
        entry, pre = self.fixture()
        small = dataclasses.replace(pre, n_cities=3)
        with pytest.raises(ValueError, match="out of vocabulary"):
            small.transform(entry)

    def test_no_leakage_from_test_entries(self):
        # Statistics are a pure function of the train entries; running any
        # number of test entries through transform leaves them untouched.
        entry, pre = self.fixture()
        h = history(["2025-01-01", "2025-03-02", "2025-06-03", "2025-09-04"], customer="CU000099")
        test_entries = window_customer(h, 3)
        before = (pre.medians.copy(), pre.means.copy(), pre.stds.copy())
        _ = [pre.transform(e) for e in test_entries]
        assert np.array_equal(pre.medians, before[0])
        assert np.array_equal(pre.means, before[1])
        assert np.array_equal(pre.stds, before[2])
        refit_a = fit_preprocessor([entry], n_cities=4)
        refit_b = fit_preprocessor([entry], n_cities=4)
        assert np.array_equal(refit_a.medians, refit_b.medians)
        assert np.array_equal(refit_a.stds, refit_b.stds)


class TestManifest:
    def test_round_trip_exact(self, tmp_path, mixed_dataset):
        _, histories, vocab = mixed_dataset
        train, test = build_dataset(histories, 3)
        path = tmp_path / "train.json"
        save_entries(path, train, vocab, 3)
        loaded, loaded_vocab, w = load_entries(path)
        assert w == 3
        assert loaded_vocab == vocab
        assert loaded == train

    def test_version_checked(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"format_version": 99, "window_size": 3, "cities": [], "entries": []}')
        with pytest.raises(ValueError, match="version"):
            load_entries(path)
