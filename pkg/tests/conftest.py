"""Shared fixtures: a synthetic dataset CSV and one trained model directory."""

from __future__ import annotations

import pytest

from emoticnn.cli import main as cli_main


@pytest.fixture(scope="session")
def synth_csv(tmp_path_factory):
    """A 400-tweet emoticon-informative dataset, written once per session."""
    path = tmp_path_factory.mktemp("data") / "synth.csv"
    assert cli_main(["synth", "--n", "400", "--seed", "3", "--out", str(path)]) == 0
    return path


@pytest.fixture(scope="session")
def trained_run(tmp_path_factory, synth_csv):
    """A model directory produced by one real `train` invocation."""
    out = tmp_path_factory.mktemp("run") / "model"
    rc = cli_main(
        [
            "train",
            "--data", str(synth_csv),
            "--out", str(out),
            "--epochs", "12",
            "--seed", "3",
            "--max-len", "18",
            "--batch-size", "32",
        ]
    )
    assert rc == 0
    return out
