import math

import numpy as np
import pytest

from chromawarp import bench
from chromawarp.image import save_image
from chromawarp.reference import PUBLISHED_TABLE1, PUBLISHED_TABLE3, PUBLISHED_TABLE4

from conftest import smooth_image


@pytest.fixture
def tiny_dataset(tmp_path, rng):
    d = tmp_path / "tiny"
    d.mkdir()
    for k in range(2):
        save_image(smooth_image(rng, 36, 36), d / f"im{k}.png")
    return d


def test_reference_tables():
    assert PUBLISHED_TABLE1["Set5"] == (28.86, 30.43, 28.64, 29.73)
    assert PUBLISHED_TABLE3[("bilinear", 2)]["correlated"] == (32.00, 0.9673, 0.0062)
    assert PUBLISHED_TABLE3[("lanczos", 4)]["independent"][0] == 27.07
    assert PUBLISHED_TABLE4[("BSD100", 2)]["ours"][0] == 28.97
    assert PUBLISHED_TABLE4[("Set14", 3)]["ours"][0] == 26.75
    assert len(PUBLISHED_TABLE4) == 12


def test_builtin_manifests_verify():
    for name in bench.BUILTIN_DATASETS:
        m = bench.builtin_manifest(name)
        m.verify()
        assert all(p.is_file() for p in m.paths())
    assert len(bench.builtin_manifest("desk5").entries) == 5


def test_manifest_round_trip_and_tamper(tiny_dataset):
    m = bench.DatasetManifest.from_directory(tiny_dataset)
    path = m.write()
    again = bench.resolve_dataset(str(tiny_dataset))
    assert again.entries == m.entries and again.digest() == m.digest()
    assert path.read_bytes().count(b"\r") == 0
    (tiny_dataset / "im0.png").write_bytes(b"garbage")
    with pytest.raises(bench.ManifestError, match="digest mismatch"):
        again.verify()
    (tiny_dataset / "im0.png").unlink()
    with pytest.raises(bench.ManifestError, match="missing"):
        again.verify()


def test_missing_dataset_lists_instructions(tmp_path):
    with pytest.raises(bench.ManifestError, match="SelfExSR"):
        bench.resolve_dataset("Set5", data_root=str(tmp_path))


def test_bad_manifest_line(tmp_path):
    p = tmp_path / "MANIFEST.sha256"
    p.write_text("abc  x.png\n")
    with pytest.raises(bench.ManifestError):
        bench.DatasetManifest.from_file(p)


def test_table3_cells_and_determinism(tiny_dataset):
    m = bench.resolve_dataset(str(tiny_dataset))
    spec = bench.ExperimentSpec("table3", m.name, (2, 3), ("bilinear", "lanczos"), timing=False)
    rows = bench.run_table3(m, spec)
    cells = [(r.kernel, r.scale, r.method) for r in rows]
    assert len(cells) == len(set(cells)) == 8
    again = bench.run_table3(m, spec)
    assert [(r.psnr, r.ssim) for r in rows] == [(r.psnr, r.ssim) for r in again]
    csv_text = bench.rows_to_csv(rows)
    lines = csv_text.split("\n")
    assert lines[0] == "dataset,kernel,scale,method,psnr_db,ssim,time_s"
    assert "\r" not in csv_text and all(",," not in l for l in lines)
    assert all(len(l.split(",")[4].split(".")[1]) == 4 for l in lines[1:-1])


def test_zero_weight_file_equal_columns(tiny_dataset, tmp_path):
    from chromawarp.warp import WeightSet
    wpath = tmp_path / "zero.txt"
    WeightSet.zeros().to_file(wpath)
    m = bench.resolve_dataset(str(tiny_dataset))
    spec = bench.ExperimentSpec("table3", m.name, (2,), ("bicubic",), weights_source=str(wpath),
                                timing=False)
    ind, cor = bench.run_table3(m, spec)
    assert (ind.psnr, ind.ssim) == (cor.psnr, cor.ssim)


def test_table1_constant_dataset(tmp_path):
    d = tmp_path / "flat"
    d.mkdir()
    save_image(np.full((24, 24, 3), 0.5), d / "flat.png")
    rows = bench.run_table1(bench.resolve_dataset(str(d)),
                            bench.ExperimentSpec("table1", "flat", (2,), ("bilinear", "bicubic"),
                                                 down="nearest", timing=False))
    assert len(rows) == 4
    assert all(math.isinf(r.psnr) for r in rows)
    assert "inf" in bench.rows_to_csv(rows)


def test_csv_and_metadata_files(tiny_dataset, tmp_path):
    m = bench.resolve_dataset(str(tiny_dataset))
    spec = bench.ExperimentSpec("table4", m.name, (2,), ("lanczos",), repeats=1)
    rows = bench.run_table4_ours([m], spec)
    out = tmp_path / "t4.csv"
    bench.write_csv(rows, out)
    back = bench.read_csv(out)
    assert back[0].method == "correlated" and back[0].time > 0
    meta = bench.experiment_metadata(spec, [m])
    assert meta["reference_GR_Urban100_x4"] == "psnr_db=22.28 time_s=1.24"
    bench.write_metadata(tmp_path / "t4.csv.meta", meta)
    assert (tmp_path / "t4.csv.meta").read_text().startswith("experiment table4\n")
    meta1 = bench.experiment_metadata(bench.ExperimentSpec("table1"), [m])
    assert meta1["table1_scale_assumed"].startswith("2")


def test_correlated_not_worse_on_desk5():
    m = bench.builtin_manifest("desk5")
    spec = bench.ExperimentSpec("table3", "desk5", (2, 3, 4), ("bilinear", "bicubic", "lanczos"),
                                timing=False)
    rows = bench.run_table3(m, spec)
    by = {(r.kernel, r.scale, r.method): r.psnr for r in rows}
    for k in spec.kernels:
        for s in spec.scales:
            assert by[(k, s, "correlated")] >= by[(k, s, "independent")]
