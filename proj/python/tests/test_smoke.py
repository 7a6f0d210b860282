import json

import pytest

import nidsfs


def test_partition_count_and_plan():
    assert nidsfs.partition_count(125973, 41) == 3072
    assert nidsfs.partition_count(3, 40) == 1
    assert nidsfs.make_plan(10, 3) == [(0, 3), (3, 6), (6, 10)]


def test_mode_tie_rule():
    assert nidsfs.mode_of([1, 2, 1, 1, 3.2, 1]) == (1.0, 4)
    assert nidsfs.mode_of(["tcp", "udp", "tcp", "udp"]) == ("udp", 2)
    assert nidsfs.mode_of([None, None]) is None


def test_dataset_round_trip(tmp_path):
    ds = nidsfs.parse_csv("dur,proto,label\n0.1,tcp,0\n0.2,udp,1\n")
    assert ds.attributes == ["dur", "proto"]
    assert ds.kinds == ["numeric", "categorical"]
    assert ds.labels == [0, 1]
    path = tmp_path / "d.csv"
    path.write_text(ds.to_csv())
    again = nidsfs.load_csv(path)
    assert again.records == ds.records


def test_errors_carry_codes():
    with pytest.raises(nidsfs.NidsfsError) as info:
        nidsfs.parse_csv("dur,proto,label\n0.1,tcp,0\n0.3,tcp\n")
    assert info.value.code == "MalformedCsv"
    with pytest.raises(nidsfs.NidsfsError):
        nidsfs.load_csv("/nonexistent.csv")


def test_central_points_and_rules():
    ds, signal = nidsfs.synth_dataset(400, 4, 2, seed=3)
    assert len(ds) == 400
    assert ds.class_counts() == (200, 200)
    table = nidsfs.central_points(ds, 10)
    assert len(table) == 6 * 10
    assert table == nidsfs.central_points(ds, 10, threads=4)

    txs = [({"a": 1, "b": "x"}, 0), ({"a": 1, "b": "x"}, 0)]
    rules = nidsfs.generate_rules(txs, 0.5, 0.5)
    assert [r["antecedent"] for r in rules] == [("a", 1.0), ("b", "x")]
    assert all(r["importance"] == 1.0 and r["label"] == 0 for r in rules)


def test_metrics():
    assert nidsfs.confusion([1, 0, 1, 0], [1, 0, 0, 1]) == {"tp": 1, "tn": 1, "fp": 1, "fn": 1}
    m = nidsfs.compute_metrics(50, 40, 5, 5)
    assert m["accuracy"] == 0.9
    assert m["far"] == (1 / 9 + 1 / 11) / 2
    assert nidsfs.compute_metrics(0, 10, 0, 0)["precision"] is None


def test_pipeline_recovers_planted_features():
    _, signal = nidsfs.synth_dataset(2000, 16, 4, seed=7)
    report = nidsfs.run_pipeline(num_features=4, seed=7, engines=["lr", "nb"])
    assert list(report) == [
        "config", "partitions", "selected_features", "threshold_sweep", "engines", "timings_ms", "version",
    ]
    assert sorted(f["attribute"] for f in report["selected_features"]) == sorted(signal)
    assert report["engines"]["lr"]["metrics"]["accuracy"] >= 0.95
    json.dumps(report)


def test_pipeline_rejects_bad_config():
    with pytest.raises(nidsfs.NidsfsError) as info:
        nidsfs.run_pipeline(engines=[])
    assert info.value.code == "InvalidConfig"
