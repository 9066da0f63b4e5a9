import json
import random

from conftest import make_random_matrix
from storerec.bench import (
    bench_build_speed,
    bench_cold_start,
    bench_query_speed,
    median_of_runs,
)
from storerec.ratings import RatingMatrix


def small_matrix(seed=0, n_users=30, n_items=20):
    rng = random.Random(seed)
    matrix, _ = make_random_matrix(rng, n_users, n_items, density=0.4,
                                   low=1.0, high=5.0)
    return matrix


class TestMedianOfRuns:
    def test_at_least_five_repetitions(self):
        calls = []
        median_of_runs(lambda: calls.append(1), repetitions=2, warmup=1)
        assert len(calls) == 6  # 1 warmup + 5 floor


class TestQuerySpeedReport:
    def test_report_structure_and_json(self):
        report = bench_query_speed(small_matrix(), probes=10,
                                   min_supports=(0.9,), repetitions=5)
        names = [r.algorithm for r in report.rows]
        assert names == ["ICF", "UCF", "ICF-STR", "Apriori"]
        doc = json.loads(report.to_json())
        assert doc["rows"][0]["algorithm"] == "ICF"
        assert "environment" in doc
        text = report.render_text()
        assert "ICF" in text and "query=" in text

    def test_empty_dataset_rows_are_null_except_str(self):
        report = bench_query_speed(RatingMatrix(), probes=5, min_supports=(0.7,))
        by_name = {r.algorithm: r for r in report.rows}
        assert by_name["ICF"].result_summary == "NULL"
        assert by_name["UCF"].result_summary == "NULL"
        assert by_name["Apriori"].result_summary == "NULL"
        assert "non-empty" in by_name["ICF-STR"].result_summary


class TestBuildSpeedReport:
    def test_rows_and_same_artifact_assertion(self):
        report = bench_build_speed(small_matrix(), repetitions=5)
        by_name = {r.algorithm: r for r in report.rows}
        assert by_name["ICF-STR"].build_seconds == by_name["ICF"].build_seconds
        same = [a for a in report.assertions if "same artifact" in a.name]
        assert same and same[0].passed


class TestColdStartGrid:
    def test_grid_shape_and_assertions(self):
        report = bench_cold_start(seed=4)
        rows = {r.algorithm: r.result_summary for r in report.rows}
        assert rows["no-dwell/ICF"] == "NULL"
        assert rows["no-dwell/UCF"] == "NULL"
        assert rows["no-dwell/Apriori"] == "NULL"
        assert rows["no-dwell/ICF-STR"] != "NULL"
        assert rows["dwell/ICF-STR"] == "mug, band-aid, disinfectant, coffee, slippers"
        assert report.all_passed

    def test_single_item_shelf_gives_singleton(self):
        from storerec.catalog import Item, Shelf, ShelfZone, StoreLayout

        shelves = [
            Shelf("solo", ("gem",), ShelfZone((0, 0), (2, 2))),
            Shelf("other", ("rock", "sand"), ShelfZone((3, 0), (5, 2))),
        ]
        items = [Item("gem", "Gem", "solo"), Item("rock", "Rock", "other"),
                 Item("sand", "Sand", "other")]
        layout = StoreLayout(shelves, items)
        report = bench_cold_start(layout, seed=1, dwell_shelf="solo")
        rows = {r.algorithm: r.result_summary for r in report.rows}
        assert rows["dwell/ICF-STR"] == "gem"
        assert report.all_passed
