import json

import pytest

from artifacts import INDEX_NAME, ArtifactStore


def test_save_load_and_list(tmp_path):
    store = ArtifactStore(tmp_path / "runs")
    path = store.save("code", "bs3", {"n": 9, "gauge_generators": []})
    assert path.name == "code.bs3.json"
    store.save("code", "surface3", {"n": 9, "gauge_generators": []})
    store.save("report", "bs3", {"ratio": 1.0})
    assert store.load("code", "bs3") == {"n": 9, "gauge_generators": []}
    assert store.list("code") == ["bs3", "surface3"]
    assert store.list("region") == []

    index = json.loads((tmp_path / "runs" / INDEX_NAME).read_text())
    assert index["kinds"] == {"code": ["bs3", "surface3"], "report": ["bs3"]}
    assert index["paths"]["report"]["bs3"] == "report.bs3.json"


def test_reopened_store_sees_saved_artifacts(tmp_path):
    ArtifactStore(tmp_path).save("certificate", "sweep-1", {"outcome": "stuck-at"})
    assert ArtifactStore(tmp_path).load("certificate", "sweep-1") == {"outcome": "stuck-at"}


def test_rejects_unknown_kind_and_unsafe_name(tmp_path):
    store = ArtifactStore(tmp_path)
    with pytest.raises(ValueError):
        store.save("notes", "a", {})
    with pytest.raises(ValueError):
        store.save("code", "../escape", {})
    with pytest.raises(ValueError):
        store.load("code", "absent")
    with pytest.raises(ValueError):
        store.list("notes")


def test_corrupted_index(tmp_path):
    (tmp_path / INDEX_NAME).write_text("{oops")
    with pytest.raises(ValueError):
        ArtifactStore(tmp_path)
