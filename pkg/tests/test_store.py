import json
import logging
import time

import pytest

from laacsim.metrics import trial_metrics
from laacsim.occluder import get_preset
from laacsim.simulate import SimConfig, run_script
from laacsim.store import (CSV_HEADER, EVENTS_FILE, META_FILE, SAMPLES_FILE,
                           read_record, replay, write_record)


@pytest.fixture(scope="module")
def record():
    return run_script(get_preset(1), SimConfig(seed=11))


class TestRoundTrip:
    def test_samples_bit_exact(self, record, tmp_path):
        write_record(record, tmp_path / "r")
        back = read_record(tmp_path / "r")
        assert back.samples == record.samples

    def test_events_and_meta_preserved(self, record, tmp_path):
        write_record(record, tmp_path / "r")
        back = read_record(tmp_path / "r")
        assert back.truth_events == record.truth_events
        assert back.detected_events == record.detected_events
        assert back.meta == record.meta

    def test_metrics_stable_across_round_trip(self, record, tmp_path):
        write_record(record, tmp_path / "r")
        a = trial_metrics(record)
        b = trial_metrics(read_record(tmp_path / "r"))
        for k, v in a.as_dict().items():
            assert abs(v - b.as_dict()[k]) < 1e-9

    def test_double_round_trip_idempotent(self, record, tmp_path):
        write_record(record, tmp_path / "a")
        first = read_record(tmp_path / "a")
        write_record(first, tmp_path / "b")
        assert read_record(tmp_path / "b").samples == first.samples


class TestWrite:
    def test_refuses_overwrite(self, record, tmp_path):
        write_record(record, tmp_path / "r")
        with pytest.raises(FileExistsError):
            write_record(record, tmp_path / "r")
        write_record(record, tmp_path / "r", force=True)

    def test_bundle_layout(self, record, tmp_path):
        bundle = write_record(record, tmp_path / "r")
        for name in (SAMPLES_FILE, EVENTS_FILE, META_FILE):
            assert (bundle.path / name).exists()
        header = (bundle.path / SAMPLES_FILE).read_text().splitlines()[0]
        assert header == CSV_HEADER


class TestRead:
    def test_missing_bundle(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_record(tmp_path / "nope")

    def test_missing_sidecars_tolerated(self, record, tmp_path, caplog):
        write_record(record, tmp_path / "r")
        (tmp_path / "r" / EVENTS_FILE).unlink()
        (tmp_path / "r" / META_FILE).unlink()
        with caplog.at_level(logging.WARNING):
            back = read_record(tmp_path / "r")
        assert back.truth_events == [] and back.meta == {}
        assert any("events.json" in m for m in caplog.messages)

    def test_wrong_header_rejected(self, tmp_path):
        d = tmp_path / "r"
        d.mkdir()
        (d / SAMPLES_FILE).write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError, match="header"):
            read_record(d)

    def test_malformed_row_reports_line(self, record, tmp_path):
        write_record(record, tmp_path / "r")
        p = tmp_path / "r" / SAMPLES_FILE
        p.write_text(p.read_text() + "1.0,2.0\n")
        with pytest.raises(ValueError, match="malformed"):
            read_record(tmp_path / "r")

    def test_unparseable_row_rejected(self, tmp_path):
        d = tmp_path / "r"
        d.mkdir()
        (d / SAMPLES_FILE).write_text(CSV_HEADER + "\n0.025,abc,1.0\n")
        with pytest.raises(ValueError, match="unparseable"):
            read_record(d)

    def test_invalid_trace_rejected(self, tmp_path):
        d = tmp_path / "r"
        d.mkdir()
        (d / SAMPLES_FILE).write_text(CSV_HEADER + "\n0.025,0,0\n0.5,0,0\n")
        with pytest.raises(ValueError, match="invalid trace"):
            read_record(d)

    def test_unknown_event_kind_rejected(self, record, tmp_path):
        write_record(record, tmp_path / "r")
        p = tmp_path / "r" / EVENTS_FILE
        payload = json.loads(p.read_text())
        payload["truth_events"][0]["kind"] = "E9_BOGUS"
        p.write_text(json.dumps(payload))
        with pytest.raises(ValueError, match="unknown event kind"):
            read_record(tmp_path / "r")


class TestReplay:
    def test_factor_zero_yields_identical_samples(self, record, tmp_path):
        write_record(record, tmp_path / "r")
        assert list(replay(tmp_path / "r", 0.0)) == record.samples

    def test_pacing_scales_with_factor(self, record):
        short = record.samples[:9]
        rec = type(record)(meta={}, samples=short)
        t0 = time.monotonic()
        out = list(replay(rec, 4.0))
        elapsed = time.monotonic() - t0
        assert out == short
        # 8 gaps of 25 ms at 4x => at least 50 ms of pacing
        assert elapsed >= 0.05

    def test_negative_factor_rejected(self, record):
        with pytest.raises(ValueError):
            list(replay(record, -1.0))
