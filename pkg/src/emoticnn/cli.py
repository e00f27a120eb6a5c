"""Command-line interface: train, eval, predict, ablate, and synth.

Every command is a single deterministic process run: identical flags,
inputs, and seed produce byte-identical output files. Exit codes are 0
on success, 1 for runtime failures (I/O, validation, divergence), and 2
for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .corpus import (
    CATEGORY_CODES,
    CATEGORY_NAMES,
    MODE_EMOTICON_TEXT,
    MODE_TEXT_ONLY,
    CorpusError,
    EmoticonLexicon,
    Tweet,
    generate_synthetic,
    load_dataset,
    preprocess,
    save_dataset,
)
from .encode import Vocabulary, encode, fit_vocabulary, pad
from .nn import ModelConfig, init_model
from .persist import PersistError, load_model, save_model
from .train import (
    History,
    TrainConfig,
    TrainingDiverged,
    encode_dataset,
    evaluate,
    split_dataset,
    train_model,
)

__all__ = ["build_parser", "main"]

_MODE_FLAGS = {"emoticon": MODE_EMOTICON_TEXT, "text-only": MODE_TEXT_ONLY}

_DEFAULT_SETTINGS = {
    "mode": "emoticon",
    "batch_size": 32,
    "epochs": 200,
    "seed": 0,
    "max_len": 64,
    "lexicon": None,
    "lr": 0.001,
    "rho": 0.9,
    "epsilon": 1e-7,
    "precision": "float64",
}

# Keys accepted in a --config JSON file; explicit flags override them.
_FLAG_KEYS = ("mode", "batch_size", "epochs", "seed", "max_len", "lexicon")
_CONFIG_ONLY_KEYS = ("lr", "rho", "epsilon", "precision")


def _synth_count(value: str) -> int:
    count = int(value)
    if count < 4:
        raise argparse.ArgumentTypeError(f"need at least 4 tweets, got {count}")
    return count


def _add_train_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="dataset CSV with a text,label header")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument(
        "--mode",
        choices=sorted(_MODE_FLAGS),
        default=None,
        help="emoticon: replace emoji with phrases; text-only: delete them (default: emoticon)",
    )
    parser.add_argument("--batch-size", type=int, default=None, help="minibatch size (default: 32)")
    parser.add_argument("--epochs", type=int, default=None, help="training epochs (default: 200)")
    parser.add_argument("--seed", type=int, default=None, help="seed for split/init/shuffling (default: 0)")
    parser.add_argument("--max-len", type=int, default=None, help="padded sequence length (default: 64)")
    parser.add_argument("--lexicon", default=None, help="emoticon lexicon file (emoji<TAB>phrase per line)")
    parser.add_argument("--config", default=None, help="JSON settings file; explicit flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emoticnn",
        description="Four-way emotion classification of microblog posts "
        "with emoticon normalization and a from-scratch 1D CNN.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a model and write reports")
    _add_train_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="evaluate a saved model on a dataset")
    p_eval.add_argument("--model", required=True, help="directory with model.json and weights.bin")
    p_eval.add_argument("--data", required=True, help="dataset CSV with a text,label header")
    p_eval.add_argument("--out", default=".", help="directory for confusion.csv (default: .)")
    p_eval.set_defaults(func=cmd_eval)

    p_predict = sub.add_parser("predict", help="classify a single text")
    p_predict.add_argument("--model", required=True, help="directory with model.json and weights.bin")
    p_predict.add_argument("--text", required=True, help="raw post text (may be empty)")
    p_predict.set_defaults(func=cmd_predict)

    p_ablate = sub.add_parser(
        "ablate", help="train emoticon and text-only modes with identical settings"
    )
    _add_train_flags(p_ablate)
    p_ablate.set_defaults(func=cmd_ablate)

    p_synth = sub.add_parser("synth", help="generate a synthetic labeled dataset CSV")
    p_synth.add_argument("--n", required=True, type=_synth_count, help="number of tweets (>= 4)")
    p_synth.add_argument("--seed", type=int, default=0, help="generator seed (default: 0)")
    p_synth.add_argument("--out", required=True, help="output CSV path")
    p_synth.add_argument(
        "--text-signal",
        action="store_true",
        help="carry the label in the words instead of the emoticons",
    )
    p_synth.set_defaults(func=cmd_synth)

    return parser


def _load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    allowed = set(_FLAG_KEYS) | set(_CONFIG_ONLY_KEYS)
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValueError(f"config file {path} has unknown keys: {', '.join(unknown)}")
    return data


def _resolve_settings(args: argparse.Namespace) -> dict:
    """Merge defaults, the --config file, and explicit flags (flags win)."""
    settings = dict(_DEFAULT_SETTINGS)
    config = _load_config_file(args.config) if args.config else {}
    settings.update(config)
    for key in _FLAG_KEYS:
        flag_value = getattr(args, key)
        if flag_value is None:
            continue
        if key in config:
            flag = "--" + key.replace("_", "-")
            print(f"warning: {flag} overrides {key!r} from the config file", file=sys.stderr)
        settings[key] = flag_value

    mode = settings["mode"]
    settings["mode"] = _MODE_FLAGS.get(mode, mode)
    if settings["mode"] not in (MODE_EMOTICON_TEXT, MODE_TEXT_ONLY):
        raise ValueError(f"unknown mode {mode!r}")
    return settings


def _load_lexicon(settings: dict) -> EmoticonLexicon:
    if settings["lexicon"]:
        return EmoticonLexicon.from_file(settings["lexicon"])
    return EmoticonLexicon.default()


def _train_config(settings: dict, mode: str) -> TrainConfig:
    return TrainConfig(
        batch_size=settings["batch_size"],
        epochs=settings["epochs"],
        seed=settings["seed"],
        lr=settings["lr"],
        rho=settings["rho"],
        epsilon=settings["epsilon"],
        mode=mode,
    )


def _write_history(history: History, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "train_loss", "train_acc", "test_acc"])
        for record in history:
            writer.writerow([record.epoch, record.train_loss, record.train_acc, record.test_acc])


def _write_confusion(matrix, path: Path) -> None:
    names = [CATEGORY_NAMES[code] for code in CATEGORY_CODES]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["actual", *names, "total"])
        for code in CATEGORY_CODES:
            row = matrix.counts[code - 1]
            writer.writerow([CATEGORY_NAMES[code], *(int(n) for n in row), int(row.sum())])


def _print_confusion(matrix) -> None:
    names = [CATEGORY_NAMES[code] for code in CATEGORY_CODES]
    width = 7
    print("".rjust(width) + "".join(name.rjust(width) for name in names))
    for code in CATEGORY_CODES:
        row = matrix.counts[code - 1]
        print(CATEGORY_NAMES[code].rjust(width) + "".join(str(int(n)).rjust(width) for n in row))


def _run_training(
    tweets: list[Tweet], settings: dict, mode: str, out_dir: Path
) -> tuple[float, History, Vocabulary]:
    """The full train pipeline for one mode; writes all artifacts to out_dir."""
    lexicon = _load_lexicon(settings)
    train_cfg = _train_config(settings, mode)
    length = settings["max_len"]

    train_tweets, test_tweets = split_dataset(tweets, train_cfg.split_ratio, train_cfg.seed)
    vocab = fit_vocabulary(preprocess(t.text, lexicon, mode) for t in train_tweets)
    train_arrays = encode_dataset(train_tweets, vocab, lexicon, mode, length)
    test_arrays = encode_dataset(test_tweets, vocab, lexicon, mode, length)

    model_cfg = ModelConfig(
        vocab_size=vocab.size, L=length, precision=settings["precision"]
    )
    model = init_model(model_cfg, train_cfg.seed)
    model, history = train_model(model, train_arrays, test_arrays, train_cfg, vocab, length)
    accuracy, matrix = evaluate(model, test_arrays)

    out_dir.mkdir(parents=True, exist_ok=True)
    save_model(model, vocab, lexicon, train_cfg, out_dir)
    _write_history(history, out_dir / "history.csv")
    _write_confusion(matrix, out_dir / "confusion.csv")
    save_dataset(train_tweets, out_dir / "train.csv")
    save_dataset(test_tweets, out_dir / "test.csv")
    return accuracy, history, vocab


def cmd_train(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    tweets = load_dataset(args.data)
    accuracy, _, _ = _run_training(tweets, settings, settings["mode"], Path(args.out))
    print(f"final test accuracy: {accuracy:.6f}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    model, vocab, lexicon, train_cfg = load_model(args.model)
    tweets = load_dataset(args.data)
    arrays = encode_dataset(tweets, vocab, lexicon, train_cfg.mode, model.config.L)
    accuracy, matrix = evaluate(model, arrays)
    print(f"accuracy: {accuracy:.6f}")
    _print_confusion(matrix)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_confusion(matrix, out_dir / "confusion.csv")
    return 0


def cmd_predict(args: argparse.Namespace) -> int:
    model, vocab, lexicon, train_cfg = load_model(args.model)
    processed = preprocess(args.text, lexicon, train_cfg.mode)
    ids = pad(encode(processed, vocab), model.config.L)
    probs = model.forward(ids)[0][0]
    predicted = int(probs.argmax()) + 1
    print(f"prediction: {CATEGORY_NAMES[predicted]}")
    for code in CATEGORY_CODES:
        print(f"  {CATEGORY_NAMES[code]:<6} {probs[code - 1]:.8f}")
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    settings = _resolve_settings(args)
    tweets = load_dataset(args.data)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    failures = 0
    for mode in (MODE_EMOTICON_TEXT, MODE_TEXT_ONLY):
        try:
            _, history, _ = _run_training(tweets, settings, mode, out_dir / mode)
        except TrainingDiverged as exc:
            print(f"warning: {mode} run diverged: {exc}", file=sys.stderr)
            failures += 1
            rows.append({"mode": mode, "final_test_acc": "", "best_test_acc": "",
                         "best_epoch": "", "status": "failed"})
            continue
        _write_history(history, out_dir / f"history_{mode}.csv")
        best = max(history, key=lambda record: record.test_acc)
        rows.append({
            "mode": mode,
            "final_test_acc": history[-1].test_acc,
            "best_test_acc": best.test_acc,
            "best_epoch": best.epoch,
            "status": "ok",
        })

    header = ["mode", "final_test_acc", "best_test_acc", "best_epoch", "status"]
    with open(out_dir / "ablation.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    print("  ".join(name.ljust(15) for name in header))
    for row in rows:
        print("  ".join(str(row[name]).ljust(15) for name in header))
    return 1 if failures else 0


def cmd_synth(args: argparse.Namespace) -> int:
    tweets = generate_synthetic(args.n, args.seed, not args.text_signal)
    out_path = Path(args.out)
    if out_path.parent and not out_path.parent.exists():
        out_path.parent.mkdir(parents=True, exist_ok=True)
    save_dataset(tweets, out_path)
    print(f"wrote {len(tweets)} tweets to {out_path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrainingDiverged as exc:
        print(f"error: training diverged: {exc}", file=sys.stderr)
        return 1
    except (CorpusError, PersistError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
