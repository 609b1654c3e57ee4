import datetime as dt

import pytest

from nextdest import datagen
from nextdest.datagen import GenConfig, city_name, generate, histories_to_rows, read_csv, write_csv

from conftest import commuter_oracle_hits

DATES = (dt.date(2020, 1, 1), dt.date(2024, 12, 31))


def config(**overrides):
    base = dict(
        n_customers=20,
        n_cities=8,
        trips_per_customer=(6, 10),
        archetype_mix={"seasonal": 0.3, "commuter": 0.4, "random": 0.3},
        date_range=DATES,
        seed=5,
    )
    base.update(overrides)
    return GenConfig(**base)


class TestGenConfig:
    def test_rejects_single_city(self):
        with pytest.raises(ValueError, match="2 cities"):
            config(n_cities=1)

    def test_rejects_empty_date_range(self):
        with pytest.raises(ValueError, match="date_range"):
            config(date_range=(dt.date(2024, 1, 2), dt.date(2024, 1, 1)))

    def test_rejects_bad_mix(self):
        with pytest.raises(ValueError, match="sum to 1"):
            config(archetype_mix={"seasonal": 0.5, "commuter": 0.4})
        with pytest.raises(ValueError, match="non-negative"):
            config(archetype_mix={"seasonal": 1.5, "commuter": -0.5})
        with pytest.raises(ValueError, match="unknown archetypes"):
            config(archetype_mix={"nomad": 1.0})

    def test_rejects_bad_trip_range(self):
        with pytest.raises(ValueError, match="trips_per_customer"):
            config(trips_per_customer=(0, 5))
        with pytest.raises(ValueError, match="trips_per_customer"):
            config(trips_per_customer=(5, 4))


class TestGenerate:
    def test_deterministic_byte_identical(self, tmp_path):
        cfg = config(seed=42)
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        write_csv(generate(cfg), first)
        write_csv(generate(cfg), second)
        assert first.read_bytes() == second.read_bytes()

    def test_customer_count_and_trip_bounds(self):
        cfg = config(n_customers=37, trips_per_customer=(4, 9))
        histories = generate(cfg)
        assert len(histories) == 37
        assert all(4 <= len(h) <= 9 for h in histories)

    def test_dates_ascend(self):
        for h in generate(config()):
            dates = [t.departure_date for t in h.trips]
            assert dates == sorted(dates)
            assert all(DATES[0] <= d <= DATES[1] for d in dates)

    def test_commuter_alternation(self):
        cfg = config(n_customers=1, archetype_mix={"commuter": 1.0}, trips_per_customer=(6, 6))
        (history,) = generate(cfg)
        home, work = history.trips[0].origin, history.trips[0].destination
        for j, trip in enumerate(history.trips):
            expected = (home, work) if j % 2 == 0 else (work, home)
            assert (trip.origin, trip.destination) == expected
            assert trip.return_trip

    def test_seasonal_same_season_same_destination(self):
        cfg = config(n_customers=30, archetype_mix={"seasonal": 1.0}, trips_per_customer=(10, 16))
        for history in generate(cfg):
            by_season = {}
            for trip in history.trips:
                season = (trip.departure_date.month % 12) // 3
                by_season.setdefault(season, set()).add(trip.destination)
            assert all(len(dests) == 1 for dests in by_season.values())

    def test_commuter_oracle_is_perfect(self):
        cfg = config(n_customers=50, archetype_mix={"commuter": 1.0})
        hits, total = commuter_oracle_hits(generate(cfg), w=3)
        assert hits == total == 50

    def test_substreams_independent_of_customer_count(self):
        # Customer i depends only on (seed, i), so a shorter run is a prefix.
        long = generate(config(n_customers=12))
        short = generate(config(n_customers=5))
        assert long[:5] == short

    def test_top_origin_is_modal_origin(self):
        for history in generate(config(n_customers=40)):
            origins = [t.origin for t in history.trips]
            counts = {o: origins.count(o) for o in set(origins)}
            best = min(counts, key=lambda o: (-counts[o], o))
            assert all(t.top_origin_city == best for t in history.trips)

    def test_no_self_loops(self):
        for history in generate(config(n_customers=40)):
            assert all(t.origin != t.destination for t in history.trips)


class TestCsv:
    def test_empty_history_list(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv([], path)
        assert path.read_text() == "CUST_KEY,SEG_LCL_DEP_DT,ORG_CITY_NM,CITY_NM,DOM_INTNL_FLAG,JRNY_TYP,TOP1_ORG_CTY\n"

    def test_single_trip_row(self, tmp_path):
        from nextdest.core import CustomerHistory, Trip

        trip = Trip("CU000007", 0, 1, dt.date(2024, 3, 1), True, False, 0)
        path = tmp_path / "one.csv"
        write_csv([CustomerHistory("CU000007", (trip,))], path)
        lines = path.read_text().splitlines()
        assert lines[1] == "CU000007,2024-03-01,C000,C001,D,OW,C000"

    def test_round_trip_equality(self, tmp_path):
        cfg = config(n_customers=120, trips_per_customer=(6, 12))
        histories = generate(cfg)
        path = tmp_path / "trips.csv"
        write_csv(histories, path)
        assert read_csv(path) == histories_to_rows(histories)

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("CUST_KEY,SEG_LCL_DEP_DT,ORG_CITY_NM,CITY_NM,DOM_INTNL_FLAG,TOP1_ORG_CTY\n")
        with pytest.raises(ValueError, match="JRNY_TYP"):
            read_csv(path)

    def test_bad_date_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "CUST_KEY,SEG_LCL_DEP_DT,ORG_CITY_NM,CITY_NM,DOM_INTNL_FLAG,JRNY_TYP,TOP1_ORG_CTY\n"
            "CU1,2024-01-01,C000,C001,D,OW,C000\n"
            "CU1,01/02/2024,C001,C000,D,OW,C000\n"
        )
        with pytest.raises(ValueError, match="line 3"):
            read_csv(path)

    def test_bad_flags_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "CUST_KEY,SEG_LCL_DEP_DT,ORG_CITY_NM,CITY_NM,DOM_INTNL_FLAG,JRNY_TYP,TOP1_ORG_CTY\n"
            "CU1,2024-01-01,C000,C001,X,OW,C000\n"
        )
        with pytest.raises(ValueError, match="DOM_INTNL_FLAG"):
            read_csv(path)
        path.write_text(
            "CUST_KEY,SEG_LCL_DEP_DT,ORG_CITY_NM,CITY_NM,DOM_INTNL_FLAG,JRNY_TYP,TOP1_ORG_CTY\n"
            "CU1,2024-01-01,C000,C001,D,XX,C000\n"
        )
        with pytest.raises(ValueError, match="JRNY_TYP"):
            read_csv(path)

    def test_city_name_round_trip(self):
        for i in (0, 7, 123):
            assert datagen.city_id(city_name(i)) == i
        with pytest.raises(ValueError, match="city name"):
            datagen.city_id("PARIS")
