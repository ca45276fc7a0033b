"""End-to-end tests for the command-line interface."""

import csv
import json

import pytest

from diffusion_descriptors.analytics import kernels
from diffusion_descriptors.cli import main


@pytest.fixture
def sample_dir(tmp_path, capsys):
    """Synthetic scene written by generate-sample."""
    out = tmp_path / "sample"
    assert main(["generate-sample", "--out", str(out), "--seed", "7"]) == 0
    capsys.readouterr()
    return out


def _final_row(path):
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    return rows[-1], len(rows)


class TestDescriptorCommand:
    """Tests for the descriptor subcommand."""

    def test_writes_payload_and_header(self, sample_dir, tmp_path, capsys):
        """Payload, header, CSV and resolved config land next to each other."""
        output = tmp_path / "out" / "field.desc"
        code = main(["descriptor", str(sample_dir / "field.pgm"), str(output), "--kind", "dsp_closed_both", "--csv"])
        assert code == 0
        assert output.stat().st_size == 4 * 8 * 16 * 16
        header = json.loads((tmp_path / "out" / "field.desc.json").read_text(encoding="utf-8"))
        assert header["kind"] == "dsp_closed_both"
        assert (tmp_path / "out" / "field.desc.csv").exists()
        resolved = json.loads((tmp_path / "out" / "resolved_config.json").read_text(encoding="utf-8"))
        assert resolved["kind"] == "dsp_closed_both"
        assert "Saved dsp_closed_both descriptor" in capsys.readouterr().out

    def test_config_applied(self, sample_dir, tmp_path):
        """Descriptor parameters come from the config file."""
        output = tmp_path / "out" / "field.desc"
        assert main(["descriptor", str(sample_dir / "field.pgm"), str(output),
                     "--config", str(sample_dir / "config.json")]) == 0
        header = json.loads((tmp_path / "out" / "field.desc.json").read_text(encoding="utf-8"))
        assert header["params"]["sigma_r"] == 0.4

    def test_unknown_kind(self, sample_dir, tmp_path, capsys):
        """An unknown kind is a usage error."""
        code = main(["descriptor", str(sample_dir / "field.pgm"), str(tmp_path / "h"), "--kind", "surf"])
        assert code == 2
        assert "invalid choice" in capsys.readouterr().err

    def test_invalid_sigma(self, sample_dir, tmp_path, capsys):
        """A non-positive sigma_r exits 2 and names the field."""
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"descriptor": {"sigma_r": 0.0}}), encoding="utf-8")
        code = main(["descriptor", str(sample_dir / "field.pgm"), str(tmp_path / "h"), "--config", str(config)])
        assert code == 2
        assert "descriptor.sigma_r" in capsys.readouterr().err

    def test_missing_image(self, tmp_path, capsys):
        """Unreadable input exits 2."""
        assert main(["descriptor", str(tmp_path / "nope.pgm"), str(tmp_path / "h")]) == 2
        assert capsys.readouterr().err.startswith("error:")


class TestMatchCommand:
    """Tests for the match subcommand."""

    def test_correlation(self, sample_dir, capsys):
        """Match JSON goes to stdout, the summary to stderr."""
        code = main(["match", str(sample_dir / "field.pgm"), str(sample_dir / "templates"),
                     str(sample_dir / "candidates.json")])
        assert code == 0
        captured = capsys.readouterr()
        data = json.loads(captured.out)
        assert data["templates"] == ["blob", "edge"]
        assert len(data["scores"]) == len(data["labels"])
        assert "TEMPLATE MATCHING" in captured.err

    def test_distance_finds_blob(self, sample_dir, tmp_path, capsys):
        """Distance scoring aligns the blob template with its offset."""
        candidates = json.loads((sample_dir / "candidates.json").read_text(encoding="utf-8"))["candidates"]
        code = main(["match", str(sample_dir / "field.pgm"), str(sample_dir / "templates"),
                     str(sample_dir / "candidates.json"), "--score", "distance", "--out", str(tmp_path / "m")])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["best"]["template"] == "blob"
        best = next(c for c in candidates if c["label"] == data["best"]["candidate"])
        assert data["best"]["score"] <= 0.0
        assert (tmp_path / "m" / "match.json").exists()
        resolved = json.loads((tmp_path / "m" / "resolved_config.json").read_text(encoding="utf-8"))
        assert resolved["matching"]["score"] == "distance"
        assert best["type"] == "similarity"

    def test_empty_template_dir(self, sample_dir, tmp_path, capsys):
        """A template directory without PGMs exits 2."""
        empty = tmp_path / "empty"
        empty.mkdir()
        code = main(["match", str(sample_dir / "field.pgm"), str(empty), str(sample_dir / "candidates.json")])
        assert code == 2
        assert "no .pgm templates" in capsys.readouterr().err

    def test_missing_candidates(self, sample_dir, tmp_path):
        """A missing candidate file exits 2."""
        code = main(["match", str(sample_dir / "field.pgm"), str(sample_dir / "templates"),
                     str(tmp_path / "none.json")])
        assert code == 2


class TestToyDiffuseCommand:
    """Tests for the toy-diffuse and landscape subcommands."""

    def test_default_schedule(self, tmp_path, capsys):
        """Nine stages, one landscape per stage, ending at the exact fit."""
        out = tmp_path / "toy"
        assert main(["toy-diffuse", "--out", str(out)]) == 0
        assert sorted(p.name for p in out.glob("landscape_stage*.csv")) == [
            f"landscape_stage{k}.csv" for k in range(9)
        ]
        final, count = _final_row(out / "trajectory.csv")
        assert count == 9
        assert abs(float(final["c1"]) - 1.0) < 0.05
        assert abs(float(final["theta"]) - 0.25) < 0.02
        assert "Final (c1, theta)" in capsys.readouterr().out
        resolved = json.loads((out / "resolved_config.json").read_text(encoding="utf-8"))
        assert resolved["homotopy"]["schedule"][0] == 1.0

    def test_plain_descent(self, tmp_path):
        """--schedule 0 runs a single descent that stays near the start."""
        out = tmp_path / "plain"
        assert main(["toy-diffuse", "--schedule", "0", "--out", str(out)]) == 0
        final, count = _final_row(out / "trajectory.csv")
        assert count == 1
        assert abs(float(final["theta"])) < 0.1

    def test_bad_schedule(self, tmp_path, capsys):
        """Increasing schedules exit 2."""
        assert main(["toy-diffuse", "--schedule", "0.5,1,0", "--out", str(tmp_path)]) == 2
        assert "--schedule" in capsys.readouterr().err

    def test_multimodal_start(self, tmp_path, capsys):
        """A multimodal first stage exits 2 unless allowed."""
        assert main(["toy-diffuse", "--schedule", "0.125,0", "--out", str(tmp_path / "a")]) == 2
        assert "local minima" in capsys.readouterr().err
        assert main(["toy-diffuse", "--schedule", "0.125,0", "--allow-multimodal", "--out", str(tmp_path / "b")]) == 0

    def test_landscape_only(self, tmp_path):
        """--landscape-only writes the single requested landscape."""
        out = tmp_path / "land"
        assert main(["toy-diffuse", "--landscape-only", "--sigma", "1.0", "--out", str(out)]) == 0
        assert [p.name for p in out.glob("*.csv")] == ["landscape_sigma1.csv"]
        with open(out / "landscape_sigma1.csv", newline="", encoding="utf-8") as f:
            assert sum(1 for _ in f) == 1 + 81 * 201

    def test_landscape_command(self, tmp_path, capsys):
        """The landscape subcommand defaults to the raw cost."""
        assert main(["landscape", "--out", str(tmp_path)]) == 0
        assert (tmp_path / "landscape_sigma0.csv").exists()
        assert "Grid minimum" in capsys.readouterr().out

    def test_reruns_identical(self, tmp_path):
        """Two runs write byte-identical results."""
        for name in ("one", "two"):
            assert main(["toy-diffuse", "--schedule", "1,0.5,0", "--out", str(tmp_path / name)]) == 0
        for file_name in ("trajectory.csv", "landscape_stage0.csv", "landscape_stage2.csv"):
            assert (tmp_path / "one" / file_name).read_bytes() == (tmp_path / "two" / file_name).read_bytes()


class TestVerifyIdentitiesCommand:
    """Tests for the verify-identities subcommand."""

    def test_passes(self, tmp_path, capsys):
        """One draw per suite passes and writes the report."""
        assert main(["verify-identities", "--count", "1", "--out", str(tmp_path)]) == 0
        with open(tmp_path / "identities.csv", newline="", encoding="utf-8") as f:
            assert sum(1 for _ in f) == 1 + 8
        assert "IDENTITY VERIFICATION" in capsys.readouterr().out

    def test_broken_kernel(self, tmp_path, monkeypatch, capsys):
        """A wrong closed form exits 1 and reports the worst draw."""
        original = kernels.w
        monkeypatch.setattr(kernels, "w", lambda x: -original(x))
        code = main(["verify-identities", "--count", "2", "--suite", "w_integral", "--out", str(tmp_path)])
        assert code == 1
        assert "w_integral" in capsys.readouterr().err

    def test_unknown_suite(self, tmp_path):
        """Unknown suites are usage errors."""
        assert main(["verify-identities", "--suite", "bogus", "--out", str(tmp_path)]) == 2


class TestMisc:
    """Tests for top-level behaviour."""

    def test_no_command(self, capsys):
        """Without a subcommand the help is shown."""
        assert main([]) == 2
        assert "generate-sample" in capsys.readouterr().out

    def test_generate_sample(self, tmp_path, capsys):
        """generate-sample writes the scene files."""
        out = tmp_path / "s"
        assert main(["generate-sample", "--out", str(out)]) == 0
        assert (out / "field.pgm").exists()
        assert (out / "templates" / "edge.pgm").exists()
        assert "Seed: 42" in capsys.readouterr().out
