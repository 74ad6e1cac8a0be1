"""Dataset model, JSON round-trip and bundled instances."""
import json

import pytest

from stripnest.datasets import (
    BUNDLED,
    Dataset,
    dataset_from_dict,
    dataset_to_dict,
    load_bundled,
    load_dataset,
    save_dataset,
)


SAMPLE = {
    "name": "sample",
    "strip_width": 6.0,
    "rotations": [0, 180],
    "pieces": [
        {"id": "sq", "quantity": 2, "vertices": [[0, 0], [2, 0], [2, 2], [0, 2]]},
        {"id": "tri", "quantity": 1, "vertices": [[0, 0], [3, 0], [0, 3]]},
    ],
}


class TestJsonModel:
    def test_from_dict(self):
        ds = dataset_from_dict(SAMPLE)
        assert ds.name == "sample"
        assert ds.strip_width == 6.0
        assert ds.rotations == (0.0, 180.0)
        assert [p.id for p in ds.pieces] == ["sq", "tri"]
        assert ds.total_quantity == 3
        assert ds.total_area == pytest.approx(2 * 4.0 + 4.5)

    def test_free_rotations(self):
        data = dict(SAMPLE, rotations="free")
        ds = dataset_from_dict(data)
        assert ds.rotations == "free"
        assert all(p.rotations == "free" for p in ds.pieces)

    def test_round_trip(self, tmp_path):
        ds = dataset_from_dict(SAMPLE)
        path = tmp_path / "ds.json"
        save_dataset(ds, str(path))
        loaded = load_dataset(str(path))
        assert dataset_to_dict(loaded) == dataset_to_dict(ds)

    def test_saved_file_schema(self, tmp_path):
        ds = dataset_from_dict(SAMPLE)
        path = tmp_path / "ds.json"
        save_dataset(ds, str(path))
        data = json.loads(path.read_text())
        assert set(data) == {"name", "strip_width", "rotations", "pieces"}
        assert set(data["pieces"][0]) == {"id", "quantity", "vertices"}

    def test_invalid_polygon_rejected(self):
        bad = dict(SAMPLE, pieces=[{"id": "x", "quantity": 1, "vertices": [[0, 0], [1, 1]]}])
        with pytest.raises(ValueError):
            dataset_from_dict(bad)


EXPECTED_SHAPE = {
    # name: (strip_width, rotations, distinct pieces, total quantity)
    "shirts": (40.0, (0.0, 180.0), 8, 99),
    "trousers": (79.0, (0.0, 180.0), 17, 64),
    "swim": (5752.0, (0.0, 180.0), 10, 48),
    "han": (58.0, "free", 20, 25),
    "jakob2": (70.0, "free", 25, 25),
    "poly5b": (40.0, "free", 75, 75),
}


class TestBundled:
    def test_names(self):
        assert set(BUNDLED) == set(EXPECTED_SHAPE)

    @pytest.mark.parametrize("name", BUNDLED)
    def test_shape(self, name):
        ds = load_bundled(name)
        width, rotations, distinct, total = EXPECTED_SHAPE[name]
        assert ds.strip_width == width
        assert ds.rotations == rotations
        assert len(ds.pieces) == distinct
        assert ds.total_quantity == total

    @pytest.mark.parametrize("name", ["shirts", "trousers", "jakob2"])
    def test_integer_coordinates(self, name):
        ds = load_bundled(name)
        for p in ds.pieces:
            for x, y in p.polygon.vertices:
                assert x == int(x) and y == int(y)

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            load_bundled("nope")
