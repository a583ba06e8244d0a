import json

import pytest

from geospanner.errors import DegenerateInput, GenerationFailed
from geospanner.instances import (
    generate_instance,
    instance_from_payload,
    instance_hash,
    instance_payload,
    load_instance,
    save_instance,
)


class TestGeneration:
    def test_deterministic_per_seed(self, tmp_path):
        a = generate_instance(12, 1, 10, "uniform01", seed=7)
        b = generate_instance(12, 1, 10, "uniform01", seed=7)
        pa = tmp_path / "a.json"
        pb = tmp_path / "b.json"
        save_instance(a, pa)
        save_instance(b, pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_different_seeds_differ(self):
        a = generate_instance(12, 0, 10, "uniform01", seed=7)
        b = generate_instance(12, 0, 10, "uniform01", seed=8)
        assert instance_hash(a) != instance_hash(b)

    def test_requires_seed(self):
        with pytest.raises(GenerationFailed):
            generate_instance(5, 0, 10, "uniform01", seed=None)

    def test_empty_points(self):
        inst = generate_instance(0, 0, 8, "zero", seed=1)
        assert inst.n == 0

    def test_weight_distributions(self):
        z = generate_instance(6, 0, 8, "zero", seed=2)
        assert all(wp.weight == 0 for wp in z.points)
        u = generate_instance(6, 0, 8, "uniform01", seed=2)
        assert all(0 <= wp.weight < 1 for wp in u.points)
        e = generate_instance(6, 0, 8, "exp", seed=2)
        assert all(wp.weight >= 0 for wp in e.points)

    def test_holes_generated_disjoint(self):
        inst = generate_instance(10, 3, 12, "zero", seed=5)
        assert inst.h == 3
        inst.validate()


class TestSerialization:
    def test_round_trip_identity(self, tmp_path):
        inst = generate_instance(9, 2, 10, "uniform01", seed=11)
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        loaded = load_instance(path)
        assert instance_payload(loaded) == instance_payload(inst)
        assert instance_hash(loaded) == instance_hash(inst)
        path2 = tmp_path / "inst2.json"
        save_instance(loaded, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_rejects_wrong_format(self, tmp_path):
        path = tmp_path / "x.json"
        path.write_text(json.dumps({"format": "other"}))
        with pytest.raises(DegenerateInput):
            load_instance(path)

    def test_normalizes_huge_coordinates(self):
        payload = {
            "format": "geospanner-instance",
            "version": 1,
            "outer": [[0, 0], [4e7, 0], [4e7, 4e7], [0, 4e7]],
            "holes": [],
            "points": [{"x": 1e7, "y": 1e7, "w": 1.0},
                       {"x": 2e7, "y": 3e7, "w": 0.0}],
            "seed": None,
            "generator": None,
        }
        inst = instance_from_payload(payload)
        assert inst.scale == 100.0
        assert max(abs(v.x) for v in inst.domain.outer.vertices) <= 1e6

    def test_duplicate_points_rejected(self):
        payload = {
            "format": "geospanner-instance",
            "version": 1,
            "outer": [[0, 0], [10, 0], [10, 10], [0, 10]],
            "holes": [],
            "points": [{"x": 5, "y": 5, "w": 0.0}, {"x": 5, "y": 5, "w": 1.0}],
            "seed": None,
            "generator": None,
        }
        with pytest.raises(DegenerateInput):
            instance_from_payload(payload)
