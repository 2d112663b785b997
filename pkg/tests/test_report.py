import numpy as np
import pandas as pd

from gesturegan.metrics import MetricReport, PcaProjection
from gesturegan.harness.report import (
    PER_CLASS_METRICS,
    TRANSFER_METRICS,
    plot_history,
    plot_pca,
    read_pca_csv,
    render_tables,
    write_pca_csv,
)


def tiny_report():
    per_class = {
        f"{fam}/{cls}": {m: (0.5, 0.1) for m in PER_CLASS_METRICS}
        for fam in ("timegan", "dgan")
        for cls in ("01a", "02a")
    }
    pooled = {
        "baseline": {m: (0.9, 0.02) for m in TRANSFER_METRICS},
        "trts/timegan": {m: (0.8, 0.05) for m in TRANSFER_METRICS},
        "tstr/timegan": {m: (0.7, 0.05) for m in TRANSFER_METRICS},
        "trts/dgan": {m: (0.85, 0.05) for m in TRANSFER_METRICS},
        "tstr/dgan": {m: (0.75, 0.05) for m in TRANSFER_METRICS},
    }
    return MetricReport(
        per_class=per_class,
        pooled=pooled,
        baseline={m: 0.9 for m in TRANSFER_METRICS},
        n_runs=10,
    )


class TestRenderTables:
    def test_family_blocks_and_class_rows(self):
        text = render_tables(tiny_report(), {}, classes=("01a", "02a"))
        assert "-- dgan --" in text
        assert "-- timegan --" in text
        # one row per class inside each block
        assert text.count("\n01a") == 2
        assert text.count("\n02a") == 2
        for metric in PER_CLASS_METRICS:
            assert metric in text

    def test_transfer_rows(self):
        text = render_tables(tiny_report(), {}, classes=("01a", "02a"))
        assert "base" in text
        assert text.count("trts") >= 2 and text.count("tstr") >= 2
        for metric in TRANSFER_METRICS:
            assert metric in text

    def test_mean_std_formatting(self):
        text = render_tables(tiny_report(), {}, classes=("01a",))
        assert "0.500 +/- 0.100" in text
        assert "0.900 +/- 0.020" in text

    def test_counts_footer(self):
        text = render_tables(
            tiny_report(), {"timegan/01a": 42}, classes=("01a",)
        )
        assert "timegan/01a=42" in text

    def test_missing_cell_renders_dash(self):
        rep = tiny_report()
        del rep.per_class["timegan/01a"]["mmd"]
        lines = render_tables(rep, {}, classes=("01a", "02a")).splitlines()
        row = lines[lines.index("-- timegan --") + 2]
        assert row.startswith("01a") and " " * 10 + "-" in row


class TestPcaCsv:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(0)
        proj = PcaProjection(
            components=np.eye(2, 12),
            mean=np.zeros(12),
            explained_variance=np.array([0.6, 0.3]),
            real_points=rng.normal(size=(5, 2)),
            synth_points=rng.normal(size=(3, 2)),
            seed=0,
        )
        path = write_pca_csv(proj, tmp_path / "p.csv")
        points = read_pca_csv(path)
        np.testing.assert_array_equal(points["real"], proj.real_points)
        np.testing.assert_array_equal(points["synthetic"], proj.synth_points)

    def test_empty_synth_side(self, tmp_path):
        proj = PcaProjection(
            components=np.eye(2, 4),
            mean=np.zeros(4),
            explained_variance=np.array([0.9, 0.1]),
            real_points=np.ones((2, 2)),
            synth_points=np.zeros((0, 2)),
            seed=0,
        )
        points = read_pca_csv(write_pca_csv(proj, tmp_path / "p.csv"))
        assert points["synthetic"].shape == (0, 2)


def test_plot_pca_writes_png(tmp_path):
    proj = PcaProjection(
        components=np.eye(2, 4),
        mean=np.zeros(4),
        explained_variance=np.array([0.9, 0.1]),
        real_points=np.random.default_rng(0).normal(size=(6, 2)),
        synth_points=np.random.default_rng(1).normal(size=(6, 2)),
        seed=0,
    )
    csv_path = write_pca_csv(proj, tmp_path / "p.csv")
    png = plot_pca(csv_path, tmp_path / "figs" / "p.png", title="t")
    assert png.exists() and png.stat().st_size > 0


def test_plot_history_writes_png(tmp_path):
    frame = pd.DataFrame(
        {"epoch": range(5), "phase1": np.linspace(1, 0.2, 5), "phase2": np.linspace(2, 0.5, 5)}
    )
    csv_path = tmp_path / "h.csv"
    frame.to_csv(csv_path, index=False)
    png = plot_history(csv_path, tmp_path / "h.png")
    assert png.exists() and png.stat().st_size > 0
