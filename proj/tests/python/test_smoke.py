"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import omt


def test_config_defaults_and_calibration():
    cfg = omt.OmtConfig()
    assert cfg.generalization_radius == 0.3
    assert cfg.max_representatives == 300
    assert cfg.heat_sigma == 0.03
    gamma = omt.OmtConfig.default_sink_gamma()
    assert cfg.sink_gamma == gamma
    # a 3-sigma transition is a coin flip against the sink
    assert gamma / (gamma + math.exp(-4.5)) == 0.5
    with pytest.raises(omt.UsageError):
        cfg.validate()  # anchor missing


def test_distance_and_similarity():
    a = np.array([1.0, 0.0])
    b = np.array([0.0, 1.0])
    assert omt.distance(a, b) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert omt.similarity(a, a, 0.03) == 1.0
    d = np.array([0.03, 0.0])
    assert omt.similarity(np.zeros(2), d, 0.03) == pytest.approx(math.exp(-0.5), abs=1e-12)


def test_normalize_dataset():
    vectors, scale = omt.normalize_dataset([np.array([3.0, 4.0]), np.array([0.5, 0.0])])
    assert scale == pytest.approx(0.2)
    assert np.linalg.norm(vectors[0]) == pytest.approx(1.0)


def test_synth_is_deterministic():
    spec = omt.SynthSpec()
    spec.seed = 5
    spec.n_steps = 30
    spec.interleave = True
    s1 = omt.synth_stream(spec)
    s2 = omt.synth_stream(spec)
    assert len(s1) == 60
    assert np.array_equal(s1.anchor, s2.anchor)
    for r1, r2 in zip(s1.records, s2.records):
        assert r1.t == r2.t
        assert r1.true_label == r2.true_label
        assert np.array_equal(r1.vector, r2.vector)
    labels = [r.true_label for r in s1.records]
    assert labels == [1, 0] * 30


def test_recognizer_first_gated_point():
    cfg = omt.OmtConfig()
    cfg.labeled_anchor = np.array([0.0, 0.0])
    rec = omt.OmtRecognizer(cfg)
    pred = rec.process_step(np.array([0.1, 0.0]))
    assert pred.gated
    assert pred.nearest_index == 0
    w = math.exp(-(0.1**2) / (2 * 0.03**2))
    assert pred.score == pytest.approx(w / (w + cfg.sink_gamma), abs=1e-12)
    assert pred.identity == 0
    assert len(rec.cover) == 1
    assert rec.step_count == 1


def test_snapshot_roundtrip():
    cfg = omt.OmtConfig()
    cfg.labeled_anchor = np.array([0.0, 0.0])
    rec = omt.OmtRecognizer(cfg)
    rec.process_step(np.array([0.05, 0.0]))
    text = rec.save_snapshot()
    restored = omt.OmtRecognizer.load_snapshot(text)
    assert restored.step_count == rec.step_count
    assert restored.save_snapshot() == text


def test_roc_sweeps():
    spec = omt.SynthSpec()
    spec.seed = 9
    spec.n_steps = 150
    spec.dim = 8
    spec.interleave = True
    stream = omt.synth_stream(spec)

    cfg = omt.OmtConfig()
    cfg.labeled_anchor = stream.anchor
    curve = omt.roc_sweep_omt(stream, cfg, [0.0, 0.5, 1.0])
    assert 0.0 <= curve.auc <= 1.0
    fprs = [p.fpr for p in curve.points]
    assert fprs == sorted(fprs)

    nn_curve = omt.roc_sweep_nn(stream, [stream.anchor], [0.0, 0.3, 2.0])
    assert curve.auc > nn_curve.auc - 1e-12  # learning should not hurt

    preds = [1, 0, 1, 0]
    labels = [1, 0, 0, 1]
    tpr, fpr = omt.confusion(preds, labels)
    assert tpr == 0.5 and fpr == 0.5


def test_stream_file_roundtrip(tmp_path):
    spec = omt.SynthSpec()
    spec.seed = 11
    spec.n_steps = 20
    spec.interleave = True
    stream = omt.synth_stream(spec)

    path = tmp_path / "stream.csv"
    omt.emit_file(stream, str(path))
    back = omt.ingest_file(str(path))
    assert back.scale == 1.0
    assert len(back) == len(stream)
    assert np.array_equal(back.anchor, stream.anchor)
    for r1, r2 in zip(back.records, stream.records):
        assert np.array_equal(r1.vector, r2.vector)
