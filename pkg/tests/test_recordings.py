import json

import numpy as np
import pytest

from gesturegan.errors import DataFormatError
from gesturegan.pipeline import FEATURE_NAMES, load_recordings

HEADER = ",".join(FEATURE_NAMES)


def write_recording(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [HEADER] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def test_loads_one_recording_per_file(tmp_path):
    for i in range(3):
        write_recording(tmp_path / "01a" / f"rec_{i}.csv", [[0.1 * i] * 6] * 5)
    recs = load_recordings(tmp_path)
    assert len(recs) == 3
    assert all(r.label == "01a" for r in recs)
    assert [r.source_id for r in recs] == [f"01a/rec_{i}.csv" for i in range(3)]


def test_order_is_lexicographic(tmp_path):
    write_recording(tmp_path / "02a" / "b.csv", [[1] * 6] * 3)
    write_recording(tmp_path / "01a" / "z.csv", [[2] * 6] * 3)
    write_recording(tmp_path / "01a" / "a.csv", [[3] * 6] * 3)
    recs = load_recordings(tmp_path)
    assert [r.source_id for r in recs] == ["01a/a.csv", "01a/z.csv", "02a/b.csv"]


def test_wrong_column_count_cites_line(tmp_path):
    path = tmp_path / "01a" / "bad.csv"
    rows = [[0.0] * 6] * 15
    write_recording(path, rows)
    with open(path, "a") as fh:
        fh.write("1,2,3,4,5\n")
    with pytest.raises(DataFormatError, match="line 17"):
        load_recordings(tmp_path)


def test_non_numeric_cites_line(tmp_path):
    path = tmp_path / "01a" / "bad.csv"
    path.parent.mkdir(parents=True)
    path.write_text(HEADER + "\n0,0,0,0,0,0\n0,0,oops,0,0,0\n")
    with pytest.raises(DataFormatError, match="line 3"):
        load_recordings(tmp_path)


def test_unknown_label_lists_accepted(tmp_path):
    write_recording(tmp_path / "99x" / "rec.csv", [[0.0] * 6] * 3)
    with pytest.raises(DataFormatError, match="01a"):
        load_recordings(tmp_path, classes=["01a", "02a"])


def test_empty_directory_warns(tmp_path):
    with pytest.warns(UserWarning, match="no recording files"):
        assert load_recordings(tmp_path) == []


def test_manifest_overrides_directory_label(tmp_path):
    write_recording(tmp_path / "misc" / "rec.csv", [[0.5] * 6] * 4)
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"misc/rec.csv": "03b"}))
    recs = load_recordings(tmp_path, manifest=manifest)
    assert recs[0].label == "03b"


def test_values_parsed_as_floats(tmp_path):
    write_recording(tmp_path / "01a" / "rec.csv", [[0.25, -1.5, 3, 4.125, -0.5, 9]])
    rec = load_recordings(tmp_path)[0]
    np.testing.assert_allclose(rec.samples[0], [0.25, -1.5, 3, 4.125, -0.5, 9])
    assert rec.sample_rate == 100.0
