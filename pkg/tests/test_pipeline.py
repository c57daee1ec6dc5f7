"""End-to-end runs, bundle serialization, and bundle validation."""

import json
import os
import shutil

import numpy as np
import pytest

from hardmap.measures import MEASURE_NAMES
from hardmap.pipeline import (
    BUNDLE_FILES,
    AnalysisBundle,
    BundleValidationError,
    PipelineError,
    RunConfig,
    run_pipeline,
    validate_bundle,
    write_bundle,
)
from hardmap.synth import make_demo_csv

FAST = dict(folds=3, restarts=3, pool=("knn", "gaussian_nb", "cart"))


@pytest.fixture(scope="module")
def demo_run(tmp_path_factory):
    """One full pipeline run over a real CSV file, shared by the module."""
    root = tmp_path_factory.mktemp("demo")
    csv_path = make_demo_csv(str(root / "demo.csv"), n=60, seed=0)
    out = str(root / "bundle")
    config = RunConfig(dataset=csv_path, target="label", output_dir=out, **FAST)
    bundle = run_pipeline(config)
    write_bundle(bundle, out)
    return config, bundle, out


class TestRunConfig:
    def test_defaults(self):
        cfg = RunConfig(dataset="d.csv", target="y", output_dir="o")
        assert cfg.folds == 5 and cfg.keep_measures == 8 and cfg.restarts == 10
        assert len(cfg.pool) == 7

    def test_folds_bound(self):
        with pytest.raises(ValueError, match="folds"):
            RunConfig(dataset="d", target="y", output_dir="o", folds=1)

    def test_unknown_learner(self):
        with pytest.raises(ValueError, match="unknown pool"):
            RunConfig(dataset="d", target="y", output_dir="o", pool=("xgost",))

    def test_empty_pool(self):
        with pytest.raises(ValueError, match="empty"):
            RunConfig(dataset="d", target="y", output_dir="o", pool=())

    def test_nonfinite_threshold(self):
        with pytest.raises(ValueError, match="finite"):
            RunConfig(dataset="d", target="y", output_dir="o", tau_good=float("nan"))

    def test_from_json_round_trip(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "dataset": "d.csv", "target": "y", "output_dir": "o",
            "folds": 3, "pool": ["knn", "cart"],
        }))
        cfg = RunConfig.from_json(str(path))
        assert cfg.folds == 3 and cfg.pool == ("knn", "cart")

    def test_from_json_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({
            "dataset": "d", "target": "y", "output_dir": "o", "verbose": True,
        }))
        with pytest.raises(ValueError, match="unknown config keys.*verbose"):
            RunConfig.from_json(str(path))

    def test_from_json_requires_core_keys(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"dataset": "d"}))
        with pytest.raises(ValueError, match="missing required"):
            RunConfig.from_json(str(path))
        path.write_text(json.dumps([1, 2]))
        with pytest.raises(ValueError, match="JSON object"):
            RunConfig.from_json(str(path))


class TestRunPipeline:
    def test_bundle_shapes(self, demo_run):
        _, bundle, _ = demo_run
        n = bundle.n_instances
        assert n == 60
        assert bundle.coords.shape == (60, 2)
        assert bundle.hardness.values.shape == (60, 13)
        assert bundle.perf.values.shape == (60, 3)
        assert len(bundle.labels) == 60
        assert len(bundle.raw_records) == 60
        assert [fp.owner for fp in bundle.footprints] == [
            "knn", "gaussian_nb", "cart", "instance_easiness",
        ]

    def test_manifest_facts(self, demo_run):
        config, bundle, _ = demo_run
        m = bundle.manifest
        assert m["tool"] == "hardmap"
        assert m["n_instances"] == 60
        assert m["n_classes"] == 2
        assert m["class_names"] == ["c0", "c1"]
        assert m["algorithms"] == ["knn", "gaussian_nb", "cart"]
        assert m["config"]["pool"] == ["knn", "gaussian_nb", "cart"]
        assert m["measure_names"] == list(MEASURE_NAMES)
        assert len(m["selected_measures"]) == 8

    def test_easy_gaussians_mostly_easy(self, demo_run):
        _, bundle, _ = demo_run
        assert bundle.ih.ih.mean() < 0.35

    def test_preloaded_dataset_skips_load(self, tmp_path):
        from hardmap.synth import two_gaussians

        ds = two_gaussians(n=40, seed=1)
        config = RunConfig(
            dataset="does-not-exist.csv", target="label",
            output_dir=str(tmp_path / "b"), **FAST,
        )
        bundle = run_pipeline(config, dataset=ds)
        assert bundle.n_instances == 40

    def test_load_failure_names_stage(self, tmp_path):
        config = RunConfig(
            dataset=str(tmp_path / "nope.csv"), target="y",
            output_dir=str(tmp_path / "b"), **FAST,
        )
        with pytest.raises(PipelineError, match="stage 'load' failed"):
            run_pipeline(config)

    def test_pool_failure_names_stage(self, tmp_path):
        from hardmap.synth import two_gaussians

        # 20 per class but 25 folds requested: stratified split must fail
        ds = two_gaussians(n=40, seed=2)
        config = RunConfig(
            dataset="x.csv", target="label", output_dir=str(tmp_path / "b"),
            folds=25, restarts=2, pool=("knn",),
        )
        with pytest.raises(PipelineError, match="stage 'pool' failed"):
            run_pipeline(config, dataset=ds)


class TestWriteBundle:
    def test_exactly_seven_files(self, demo_run):
        _, _, out = demo_run
        assert sorted(os.listdir(out)) == sorted(BUNDLE_FILES)

    def test_coordinates_round_trip_exactly(self, demo_run):
        _, bundle, out = demo_run
        lines = open(os.path.join(out, "coordinates.csv")).read().splitlines()
        assert lines[0] == "instance_id,z1,z2"
        for r, line in enumerate(lines[1:]):
            sid, z1, z2 = line.split(",")
            assert int(sid) == int(bundle.instance_ids[r])
            assert float(z1) == bundle.coords[r, 0]  # repr round-trips exactly
            assert float(z2) == bundle.coords[r, 1]

    def test_metadata_column_layout(self, demo_run):
        _, bundle, out = demo_run
        header = open(os.path.join(out, "metadata.csv")).readline().rstrip("\n").split(",")
        expected = (
            ["instance_id"] + list(MEASURE_NAMES)
            + [f"algo_{a}_logloss" for a in ("knn", "gaussian_nb", "cart")]
            + ["instance_hardness", "label"]
        )
        assert header == expected
        assert len(header) == 1 + 13 + 3 + 2

    def test_metadata_values_round_trip(self, demo_run):
        _, bundle, out = demo_run
        lines = open(os.path.join(out, "metadata.csv")).read().splitlines()
        row = lines[4].split(",")
        r = 3
        assert int(row[0]) == int(bundle.instance_ids[r])
        assert float(row[1]) == bundle.hardness.values[r, 0]
        assert float(row[14]) == bundle.perf.values[r, 0]
        assert float(row[17]) == bundle.ih.ih[r]
        assert row[18] == bundle.labels[r]

    def test_raw_records_verbatim(self, demo_run):
        config, bundle, out = demo_run
        out_lines = open(os.path.join(out, "raw_records.csv")).read().splitlines()
        src_lines = open(config.dataset).read().splitlines()
        assert out_lines[0] == "instance_id," + src_lines[0]
        for r, line in enumerate(out_lines[1:]):
            assert line == f"{r}," + src_lines[r + 1]

    def test_model_json_contents(self, demo_run):
        _, bundle, out = demo_run
        model = json.load(open(os.path.join(out, "model.json")))
        assert np.asarray(model["A"]).shape == (2, 8)
        r = np.asarray(model["R"])
        assert np.abs(r @ r.T - np.eye(2)).max() < 1e-9
        assert model["selected_measures"] == list(bundle.model.selected_measures)
        assert len(model["restarts_log"]) == 4  # PCA + 3 random restarts

    def test_footprints_json_contents(self, demo_run):
        config, _, out = demo_run
        fps = json.load(open(os.path.join(out, "footprints.json")))
        assert fps["tau_good"] == config.tau_good
        assert fps["easiness_threshold"] == config.easiness_threshold
        assert fps["purity_floor"] == config.purity_floor
        owners = [o["owner"] for o in fps["owners"]]
        assert owners == ["knn", "gaussian_nb", "cart", "instance_easiness"]
        for o in fps["owners"]:
            for poly in o["polygons"]:
                assert len(poly) >= 3
            assert 0.0 <= o["purity"] <= 1.0

    def test_json_files_end_with_newline_and_sorted_keys(self, demo_run):
        _, _, out = demo_run
        for name in ("manifest.json", "model.json", "footprints.json", "ranking.json"):
            raw = open(os.path.join(out, name), "rb").read()
            assert raw.endswith(b"\n")
            obj = json.loads(raw)
            assert raw == (json.dumps(obj, sort_keys=True, indent=1) + "\n").encode()

    def test_failed_write_cleans_up(self, demo_run, tmp_path):
        _, bundle, _ = demo_run
        broken = AnalysisBundle(**{**bundle.__dict__, "model": None})
        out = tmp_path / "broken"
        with pytest.raises(AttributeError):
            write_bundle(broken, str(out))
        assert os.listdir(out) == []


class TestDeterminism:
    def test_reruns_are_byte_identical(self, tmp_path):
        csv_path = make_demo_csv(str(tmp_path / "d.csv"), n=50, seed=3)
        outs = []
        for tag in ("a", "b"):
            out = str(tmp_path / tag)
            config = RunConfig(dataset=csv_path, target="label",
                               output_dir=out, seed=11, **FAST)
            write_bundle(run_pipeline(config), out)
            outs.append(out)
        for name in BUNDLE_FILES:
            a = open(os.path.join(outs[0], name), "rb").read()
            b = open(os.path.join(outs[1], name), "rb").read()
            if name == "manifest.json":
                da, db = json.loads(a), json.loads(b)
                # the timestamp and the echoed output path legitimately differ
                da.pop("created"), db.pop("created")
                da["config"].pop("output_dir"), db["config"].pop("output_dir")
                assert da == db
            else:
                assert a == b, name

    def test_seed_changes_the_embedding(self, tmp_path):
        csv_path = make_demo_csv(str(tmp_path / "d.csv"), n=50, seed=3)
        coords = []
        for seed in (0, 1):
            config = RunConfig(dataset=csv_path, target="label",
                               output_dir=str(tmp_path / f"s{seed}"),
                               seed=seed, **FAST)
            coords.append(run_pipeline(config).coords)
        assert not np.array_equal(coords[0], coords[1])


class TestValidateBundle:
    def test_accepts_written_bundle(self, demo_run):
        _, _, out = demo_run
        summary = validate_bundle(out)
        assert summary["n_instances"] == 60
        assert summary["algorithms"] == ["knn", "gaussian_nb", "cart"]

    @pytest.mark.parametrize("victim", BUNDLE_FILES)
    def test_rejects_any_single_missing_file(self, demo_run, tmp_path, victim):
        _, _, out = demo_run
        clone = tmp_path / "clone"
        shutil.copytree(out, clone)
        os.remove(clone / victim)
        with pytest.raises(BundleValidationError, match=victim):
            validate_bundle(str(clone))

    def _mutated(self, out, tmp_path, name, mutate):
        clone = tmp_path / "mut"
        shutil.copytree(out, clone)
        path = clone / name
        if name.endswith(".json"):
            obj = json.loads(path.read_text())
            mutate(obj)
            path.write_text(json.dumps(obj))
        else:
            path.write_text(mutate(path.read_text()))
        return str(clone)

    def test_rejects_wrong_coordinate_header(self, demo_run, tmp_path):
        _, _, out = demo_run
        clone = self._mutated(out, tmp_path, "coordinates.csv",
                              lambda t: t.replace("z1,z2", "a,b", 1))
        with pytest.raises(BundleValidationError, match="wrong header"):
            validate_bundle(clone)

    def test_rejects_row_count_mismatch(self, demo_run, tmp_path):
        _, _, out = demo_run
        clone = self._mutated(out, tmp_path, "coordinates.csv",
                              lambda t: "\n".join(t.splitlines()[:-1]) + "\n")
        with pytest.raises(BundleValidationError, match="expected 60 rows"):
            validate_bundle(clone)

    def test_rejects_id_disagreement(self, demo_run, tmp_path):
        _, _, out = demo_run

        def flip(text):
            lines = text.splitlines()
            lines[1] = "999" + lines[1][lines[1].index(","):]
            return "\n".join(lines) + "\n"

        clone = self._mutated(out, tmp_path, "metadata.csv", flip)
        with pytest.raises(BundleValidationError, match="disagree"):
            validate_bundle(clone)

    def test_rejects_improper_rotation(self, demo_run, tmp_path):
        _, _, out = demo_run
        clone = self._mutated(out, tmp_path, "model.json",
                              lambda m: m.__setitem__("R", [[1, 0], [0, -1]]))
        with pytest.raises(BundleValidationError, match="rotation"):
            validate_bundle(clone)

    def test_rejects_degenerate_polygon(self, demo_run, tmp_path):
        _, _, out = demo_run

        def mutate(fps):
            fps["owners"][0]["polygons"] = [[[0.0, 0.0], [1.0, 1.0]]]

        clone = self._mutated(out, tmp_path, "footprints.json", mutate)
        with pytest.raises(BundleValidationError, match="degenerate polygon"):
            validate_bundle(clone)

    def test_rejects_unknown_owner(self, demo_run, tmp_path):
        _, _, out = demo_run

        def mutate(fps):
            fps["owners"][0]["owner"] = "mystery"

        clone = self._mutated(out, tmp_path, "footprints.json", mutate)
        with pytest.raises(BundleValidationError, match="mystery"):
            validate_bundle(clone)

    def test_rejects_partial_ranking(self, demo_run, tmp_path):
        _, _, out = demo_run
        clone = self._mutated(out, tmp_path, "ranking.json",
                              lambda r: r["aggregated"].pop())
        with pytest.raises(BundleValidationError, match="permutation"):
            validate_bundle(clone)

    def test_rejects_missing_manifest_key(self, demo_run, tmp_path):
        _, _, out = demo_run
        clone = self._mutated(out, tmp_path, "manifest.json",
                              lambda m: m.pop("algorithms"))
        with pytest.raises(BundleValidationError, match="algorithms"):
            validate_bundle(clone)

    def test_rejects_invalid_json(self, demo_run, tmp_path):
        _, _, out = demo_run
        clone = tmp_path / "badjson"
        shutil.copytree(out, clone)
        (clone / "model.json").write_text("{not json")
        with pytest.raises(BundleValidationError, match="invalid JSON"):
            validate_bundle(str(clone))
