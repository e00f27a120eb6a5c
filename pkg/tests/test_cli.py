"""End-to-end command-line behaviour: flags, files, exit codes."""

from __future__ import annotations

import csv
import json
import shutil
import subprocess
import sys

import pytest

from emoticnn.cli import main as cli_main
from emoticnn.corpus import MODE_EMOTICON_TEXT, MODE_TEXT_ONLY, load_dataset
from emoticnn.persist import load_model

TRAIN_OUTPUTS = ("model.json", "weights.bin", "history.csv", "confusion.csv", "train.csv", "test.csv")


def read_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def quick_train_args(data, out, **overrides):
    settings = {"epochs": 2, "seed": 1, "max-len": 14, "batch-size": 16}
    settings.update(overrides)
    argv = ["train", "--data", str(data), "--out", str(out)]
    for key, value in settings.items():
        argv += [f"--{key}", str(value)]
    return argv


# -------------------------------------------------------------- synth


def test_synth_writes_balanced_deterministic_csv(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli_main(["synth", "--n", "200", "--seed", "9", "--out", str(a)]) == 0
    assert f"wrote 200 tweets to {a}" in capsys.readouterr().out
    assert cli_main(["synth", "--n", "200", "--seed", "9", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()

    tweets = load_dataset(a)
    assert len(tweets) == 200
    labels = [t.label for t in tweets]
    assert all(labels.count(code) == 50 for code in (1, 2, 3, 4))


def test_synth_rejects_tiny_counts(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        cli_main(["synth", "--n", "2", "--out", str(tmp_path / "x.csv")])
    assert excinfo.value.code == 2


def test_synth_text_signal_has_no_emoji(tmp_path):
    path = tmp_path / "plain.csv"
    assert cli_main(["synth", "--n", "40", "--seed", "0", "--out", str(path), "--text-signal"]) == 0
    for tweet in load_dataset(path):
        assert all(ord(ch) < 0x2000 for ch in tweet.text), tweet.text


# -------------------------------------------------------------- train


def test_train_writes_all_artifacts(trained_run):
    for name in TRAIN_OUTPUTS:
        assert (trained_run / name).is_file(), name


def test_train_prints_final_accuracy(synth_csv, tmp_path, capsys):
    out = tmp_path / "run"
    assert cli_main(quick_train_args(synth_csv, out)) == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("final test accuracy: ")
    printed = float(stdout.split(": ")[1])
    history = read_csv(out / "history.csv")
    assert printed == pytest.approx(float(history[-1]["test_acc"]), abs=5e-7)


def test_train_history_layout(trained_run):
    history = read_csv(trained_run / "history.csv")
    assert list(history[0]) == ["epoch", "train_loss", "train_acc", "test_acc"]
    assert len(history) == 12
    assert [int(row["epoch"]) for row in history] == list(range(1, 13))
    for row in history:
        float(row["train_loss"]), float(row["train_acc"]), float(row["test_acc"])


def test_train_is_byte_reproducible(synth_csv, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli_main(quick_train_args(synth_csv, out_a)) == 0
    assert cli_main(quick_train_args(synth_csv, out_b)) == 0
    for name in TRAIN_OUTPUTS:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name


def test_train_confusion_rows_sum_to_split_sizes(trained_run):
    rows = read_csv(trained_run / "confusion.csv")
    assert list(rows[0]) == ["actual", "Sad", "Happy", "Love", "Angry", "total"]
    assert [row["actual"] for row in rows] == ["Sad", "Happy", "Love", "Angry"]
    for row in rows:
        counts = [int(row[name]) for name in ("Sad", "Happy", "Love", "Angry")]
        assert sum(counts) == int(row["total"])
    grand_total = sum(int(row["total"]) for row in rows)
    assert grand_total == len(load_dataset(trained_run / "test.csv"))
    assert grand_total == 100  # 400 tweets at a 0.75 split


def test_train_split_csvs_partition_the_input(synth_csv, trained_run):
    train_rows = load_dataset(trained_run / "train.csv")
    test_rows = load_dataset(trained_run / "test.csv")
    assert len(train_rows) == 300 and len(test_rows) == 100
    combined = sorted((t.text, t.label) for t in train_rows + test_rows)
    original = sorted((t.text, t.label) for t in load_dataset(synth_csv))
    assert combined == original


def test_train_saved_model_records_mode(synth_csv, tmp_path):
    out = tmp_path / "textonly"
    assert cli_main(quick_train_args(synth_csv, out, mode="text-only")) == 0
    *_, train_cfg = load_model(out)
    assert train_cfg.mode == MODE_TEXT_ONLY


def test_train_requires_data_flag(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        cli_main(["train", "--out", str(tmp_path / "x")])
    assert excinfo.value.code == 2


def test_train_missing_data_file_fails_cleanly(tmp_path, capsys):
    rc = cli_main(quick_train_args(tmp_path / "nope.csv", tmp_path / "out"))
    assert rc == 1
    assert capsys.readouterr().err.startswith("error: ")


def test_train_rejects_too_short_max_len(synth_csv, tmp_path, capsys):
    rc = cli_main(quick_train_args(synth_csv, tmp_path / "out", **{"max-len": 8}))
    assert rc == 1
    assert "too short" in capsys.readouterr().err


# ------------------------------------------------------------- config


def test_config_file_supplies_settings(synth_csv, tmp_path, capsys):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"epochs": 3, "max_len": 14, "batch_size": 16, "seed": 1}))
    out = tmp_path / "run"
    rc = cli_main(["train", "--data", str(synth_csv), "--out", str(out), "--config", str(config)])
    assert rc == 0
    assert capsys.readouterr().err == ""
    assert len(read_csv(out / "history.csv")) == 3


def test_explicit_flag_overrides_config_with_warning(synth_csv, tmp_path, capsys):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"epochs": 5, "max_len": 14, "batch_size": 16}))
    out = tmp_path / "run"
    rc = cli_main(
        ["train", "--data", str(synth_csv), "--out", str(out),
         "--config", str(config), "--epochs", "2"]
    )
    assert rc == 0
    assert "warning: --epochs overrides 'epochs' from the config file" in capsys.readouterr().err
    assert len(read_csv(out / "history.csv")) == 2


def test_config_only_keys_reach_the_optimizer(synth_csv, tmp_path, capsys):
    # A preposterous learning rate must flow through and blow up training.
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"lr": 1e100, "epochs": 2, "max_len": 14, "batch_size": 16}))
    import numpy as np

    with np.errstate(all="ignore"):
        rc = cli_main(
            ["train", "--data", str(synth_csv), "--out", str(tmp_path / "run"),
             "--config", str(config)]
        )
    assert rc == 1
    assert "training diverged" in capsys.readouterr().err


def test_config_precision_float32_round_trips(synth_csv, tmp_path):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"precision": "float32", "epochs": 2, "max_len": 14, "batch_size": 16}))
    out = tmp_path / "run"
    rc = cli_main(["train", "--data", str(synth_csv), "--out", str(out), "--config", str(config)])
    assert rc == 0
    model, *_ = load_model(out)
    assert model.config.precision == "float32"


def test_unknown_config_key_fails(synth_csv, tmp_path, capsys):
    config = tmp_path / "settings.json"
    config.write_text(json.dumps({"learning_rate": 0.1}))
    rc = cli_main(
        ["train", "--data", str(synth_csv), "--out", str(tmp_path / "run"),
         "--config", str(config)]
    )
    assert rc == 1
    assert "unknown keys: learning_rate" in capsys.readouterr().err


def test_non_object_config_fails(synth_csv, tmp_path, capsys):
    config = tmp_path / "settings.json"
    config.write_text("[1, 2, 3]")
    rc = cli_main(
        ["train", "--data", str(synth_csv), "--out", str(tmp_path / "run"),
         "--config", str(config)]
    )
    assert rc == 1
    assert "JSON object" in capsys.readouterr().err


# --------------------------------------------------------------- eval


def test_eval_reproduces_training_accuracy(trained_run, tmp_path, capsys):
    rc = cli_main(
        ["eval", "--model", str(trained_run), "--data", str(trained_run / "test.csv"),
         "--out", str(tmp_path)]
    )
    assert rc == 0
    stdout = capsys.readouterr().out
    printed = float(stdout.splitlines()[0].split(": ")[1])
    last = float(read_csv(trained_run / "history.csv")[-1]["test_acc"])
    assert printed == pytest.approx(last, abs=5e-7)
    assert (tmp_path / "confusion.csv").read_bytes() == (trained_run / "confusion.csv").read_bytes()


def test_eval_prints_labelled_table(trained_run, tmp_path, capsys):
    rc = cli_main(
        ["eval", "--model", str(trained_run), "--data", str(trained_run / "test.csv"),
         "--out", str(tmp_path)]
    )
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].split() == ["Sad", "Happy", "Love", "Angry"]
    for name, line in zip(("Sad", "Happy", "Love", "Angry"), lines[2:6]):
        fields = line.split()
        assert fields[0] == name
        assert len(fields) == 5 and all(f.isdigit() for f in fields[1:])


def test_eval_rejects_corrupted_weights(trained_run, tmp_path, capsys):
    broken = tmp_path / "broken"
    shutil.copytree(trained_run, broken)
    blob = (broken / "weights.bin").read_bytes()
    (broken / "weights.bin").write_bytes(blob[:-4])
    rc = cli_main(["eval", "--model", str(broken), "--data", str(trained_run / "test.csv")])
    assert rc == 1
    assert "blob size mismatch" in capsys.readouterr().err


def test_eval_missing_model_dir_fails(trained_run, tmp_path, capsys):
    rc = cli_main(
        ["eval", "--model", str(tmp_path / "ghost"), "--data", str(trained_run / "test.csv")]
    )
    assert rc == 1
    assert capsys.readouterr().err.startswith("error: missing")


# ------------------------------------------------------------ predict


def test_predict_labels_an_obvious_post(trained_run, capsys):
    rc = cli_main(["predict", "--model", str(trained_run), "--text", "good morning 😊"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "prediction: Happy"
    assert len(lines) == 5


def test_predict_probabilities_sum_to_one(trained_run, capsys):
    rc = cli_main(["predict", "--model", str(trained_run), "--text", "what a day 😭"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    names = [line.split()[0] for line in lines[1:]]
    assert names == ["Sad", "Happy", "Love", "Angry"]
    probs = [float(line.split()[1]) for line in lines[1:]]
    assert abs(sum(probs) - 1.0) < 1e-6
    assert all(0.0 <= p <= 1.0 for p in probs)


def test_predict_accepts_empty_text(trained_run, capsys):
    rc = cli_main(["predict", "--model", str(trained_run), "--text", ""])
    assert rc == 0
    assert capsys.readouterr().out.startswith("prediction: ")


# ------------------------------------------------------------- ablate


@pytest.fixture(scope="module")
def ablation_run(tmp_path_factory):
    data = tmp_path_factory.mktemp("ablate") / "data.csv"
    assert cli_main(["synth", "--n", "160", "--seed", "4", "--out", str(data)]) == 0
    out = tmp_path_factory.mktemp("ablate") / "out"
    rc = cli_main(
        ["ablate", "--data", str(data), "--out", str(out),
         "--epochs", "2", "--seed", "1", "--max-len", "14", "--batch-size", "16"]
    )
    assert rc == 0
    return out


def test_ablate_writes_summary_and_histories(ablation_run):
    rows = read_csv(ablation_run / "ablation.csv")
    assert list(rows[0]) == ["mode", "final_test_acc", "best_test_acc", "best_epoch", "status"]
    assert [row["mode"] for row in rows] == [MODE_EMOTICON_TEXT, MODE_TEXT_ONLY]
    for row in rows:
        assert row["status"] == "ok"
        assert 0.0 <= float(row["final_test_acc"]) <= 1.0
        assert float(row["best_test_acc"]) >= float(row["final_test_acc"])
        assert int(row["best_epoch"]) in (1, 2)
        history = read_csv(ablation_run / f"history_{row['mode']}.csv")
        assert len(history) == 2
        assert float(row["final_test_acc"]) == float(history[-1]["test_acc"])
        best = max(float(r["test_acc"]) for r in history)
        assert float(row["best_test_acc"]) == best


def test_ablate_trains_both_modes_to_loadable_models(ablation_run):
    for mode in (MODE_EMOTICON_TEXT, MODE_TEXT_ONLY):
        model, vocab, _, train_cfg = load_model(ablation_run / mode)
        assert train_cfg.mode == mode
        assert model.config.vocab_size == vocab.size


def test_ablate_vocabularies_differ_only_by_lexicon_phrases(ablation_run):
    _, emo_vocab, lexicon, _ = load_model(ablation_run / MODE_EMOTICON_TEXT)
    _, text_vocab, _, _ = load_model(ablation_run / MODE_TEXT_ONLY)
    emo_words = set(emo_vocab.words())
    text_words = set(text_vocab.words())
    phrase_words = {word for _, phrase in lexicon.items() for word in phrase.split()}
    assert emo_words - text_words <= phrase_words
    assert text_words - emo_words == set()


# ----------------------------------------------------- installed script


def test_installed_console_script_smoke(tmp_path):
    exe = shutil.which("emoticnn")
    assert exe, "console script not on PATH"
    out = tmp_path / "smoke.csv"
    result = subprocess.run(
        [exe, "synth", "--n", "8", "--seed", "0", "--out", str(out)],
        capture_output=True, text=True, timeout=60,
    )
    assert result.returncode == 0
    assert "wrote 8 tweets" in result.stdout
    assert len(load_dataset(out)) == 8


def test_module_entry_point_smoke(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "emoticnn.cli", "synth", "--n", "5", "--out", "x.csv"],
        capture_output=True, text=True, timeout=60, cwd=tmp_path,
    )
    assert result.returncode == 0
    assert (tmp_path / "x.csv").is_file()


def test_usage_error_exit_code_via_subprocess(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "emoticnn.cli", "synth", "--n", "3", "--out", "x.csv"],
        capture_output=True, text=True, timeout=60, cwd=tmp_path,
    )
    assert result.returncode == 2
    assert "at least 4" in result.stderr
