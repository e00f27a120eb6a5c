"""Microblog corpus handling: loading, cleaning, and emoticon normalization.

A tweet goes through two text stages before encoding:

1. ``clean`` strips the usual microblog noise (mentions, URLs, '#',
   punctuation, case) while leaving emoji untouched.
2. ``replace_emoticons`` swaps each known emoji for its word phrase
   ("😊" -> "smiling face"); ``strip_emoticons`` deletes them instead.

Emoji are matched as extended grapheme clusters with longest-match
scanning, so multi-codepoint emoji (variation selectors, ZWJ sequences,
skin tones) behave as single units.

Because the original tweet collection is not public, this module also
provides a deterministic synthetic dataset generator whose labels are
carried either by the trailing emoticon or by keywords in the body.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass

import regex

# Canonical category codes and names (1-based).
CATEGORY_CODES = (1, 2, 3, 4)
CATEGORY_NAMES = {1: "Sad", 2: "Happy", 3: "Love", 4: "Angry"}

# Characters allowed to survive cleaning (besides whitespace handling).
_BASIC_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789' ")

_GRAPHEME_RE = regex.compile(r"\X")
_URL_RE = regex.compile(r"(?<!\S)https?://\S+")
_MENTION_RE = regex.compile(r"(?<!\S)@\S+")
_WS_RE = regex.compile(r"\s+")
# Apostrophes are kept only between letters/digits ("can't"); everything
# else in the ASCII punctuation range becomes a space. [^\W_] rather than
# \w so that '_' (removed as punctuation) never anchors an apostrophe.
_PUNCT_RE = regex.compile(r"(?!(?<=[^\W_])'(?=[^\W_]))[!-/:-@\[-`{-~]")

# Default emoticon table: 16 printed rows, of which 😊 appears twice
# ("Grinning face" then "Smiling face"); building the dict in row order
# keeps the later phrase. Phrases are stored lowercase, verbatim.
_DEFAULT_LEXICON_ROWS = [
    ("\U0001F60A", "Grinning face"),
    ("\U0001F604", "Grinning face with smiling eyes"),
    ("\U0001F601", "Beaming face with smiling eyes"),
    ("\U0001F60A", "Smiling face"),
    ("\U0001F62D", "Loudly crying face"),
    ("\U0001F61E", "Crying face"),
    ("\U0001F613", "Pleading face"),
    ("\U0001F620", "Frowning face"),
    ("\U0001F621", "Angry face"),
    ("\U0001F62C", "Pouting face"),
    ("\U0001F60F", "Face with steam from nose"),
    ("\U0001F5E8️", "Face with symbols on the mouth"),
    ("\U0001F60D", "Smiling face with heart-eyes"),
    ("\U0001F618", "Smiling face with hearts"),
    ("\U0001F617", "Face blowing a kiss"),
    ("\U0001F61A", "Kissing face with closed eyes"),
]


class CorpusError(ValueError):
    """Raised for malformed dataset or lexicon inputs."""


@dataclass(frozen=True)
class Tweet:
    """One labeled microblog post."""

    text: str
    label: int

    def __post_init__(self):
        if self.label not in CATEGORY_CODES:
            raise CorpusError(f"label out of range: {self.label}")


def _normalize_phrase(phrase: str) -> str:
    return _WS_RE.sub(" ", phrase).strip().lower()


class EmoticonLexicon:
    """Ordered map from emoji grapheme clusters to lowercase word phrases.

    Keys may span several grapheme clusters; scanning uses longest match
    first so a longer key always beats any of its prefixes.
    """

    def __init__(self, entries: dict[str, str]):
        self.entries: dict[str, str] = {
            emoji: _normalize_phrase(phrase) for emoji, phrase in entries.items()
        }
        self._by_clusters: dict[tuple[str, ...], str] = {
            tuple(_GRAPHEME_RE.findall(emoji)): phrase
            for emoji, phrase in self.entries.items()
        }
        self._max_key_clusters = max(
            (len(key) for key in self._by_clusters), default=0
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, emoji: str) -> bool:
        return emoji in self.entries

    def __getitem__(self, emoji: str) -> str:
        return self.entries[emoji]

    def items(self):
        return self.entries.items()

    @classmethod
    def default(cls) -> "EmoticonLexicon":
        table: dict[str, str] = {}
        for emoji, phrase in _DEFAULT_LEXICON_ROWS:
            table[emoji] = phrase
        return cls(table)

    @classmethod
    def from_file(cls, path) -> "EmoticonLexicon":
        """Parse a lexicon file: one ``<emoji><TAB><phrase>`` entry per line.

        Blank lines are ignored; duplicate emoji keep the last phrase.
        """
        table: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n").rstrip("\r")
                if not line.strip():
                    continue
                if "\t" not in line:
                    raise CorpusError(
                        f"lexicon line {lineno}: expected <emoji><TAB><phrase>"
                    )
                emoji, phrase = line.split("\t", 1)
                emoji = emoji.strip()
                if not emoji or not phrase.strip():
                    raise CorpusError(f"lexicon line {lineno}: empty field")
                table[emoji] = phrase
        return cls(table)

    def to_rows(self) -> list[list[str]]:
        return [[emoji, phrase] for emoji, phrase in self.entries.items()]


def clean(raw: str) -> str:
    """Normalize raw microblog text, keeping emoji intact.

    Lowercases, drops @-mention and URL tokens whole, turns '#' and all
    other ASCII punctuation into spaces (apostrophes inside words
    survive), and collapses whitespace. Idempotent.
    """
    text = raw.lower()
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _PUNCT_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def _scan(text: str, lexicon: EmoticonLexicon, replace: bool) -> str:
    clusters = _GRAPHEME_RE.findall(text)
    table = lexicon._by_clusters
    max_len = lexicon._max_key_clusters
    parts: list[str] = []
    i = 0
    n = len(clusters)
    while i < n:
        matched = False
        for width in range(min(max_len, n - i), 0, -1):
            phrase = table.get(tuple(clusters[i : i + width]))
            if phrase is not None:
                if replace:
                    parts.append(f" {phrase} ")
                else:
                    parts.append(" ")
                i += width
                matched = True
                break
        if not matched:
            cluster = clusters[i]
            if all(ch in _BASIC_CHARS for ch in cluster):
                parts.append(cluster)
            else:
                parts.append(" ")
            i += 1
    return _WS_RE.sub(" ", "".join(parts)).strip()


def replace_emoticons(text: str, lexicon: EmoticonLexicon) -> str:
    """Replace known emoji with their phrases; delete unknown emoji.

    Scans left to right over grapheme clusters, longest lexicon key
    first. Repeated emoticons yield repeated phrases in order. Expects
    already-cleaned input.
    """
    return _scan(text, lexicon, replace=True)


def strip_emoticons(text: str, lexicon: EmoticonLexicon) -> str:
    """Delete every emoji cluster, lexicon-known or not."""
    return _scan(text, lexicon, replace=False)


MODE_EMOTICON_TEXT = "emoticon_text"
MODE_TEXT_ONLY = "text_only"


def preprocess(text: str, lexicon: EmoticonLexicon, mode: str) -> str:
    """Full text normalization for one tweet: clean, then handle emoji."""
    cleaned = clean(text)
    if mode == MODE_EMOTICON_TEXT:
        return replace_emoticons(cleaned, lexicon)
    if mode == MODE_TEXT_ONLY:
        return strip_emoticons(cleaned, lexicon)
    raise ValueError(f"unknown mode: {mode!r}")


# --------------------------------------------------------------------
# Dataset CSV I/O
# --------------------------------------------------------------------

_CSV_HEADER = ["text", "label"]


def load_dataset(path) -> list[Tweet]:
    """Read a UTF-8 ``text,label`` CSV into Tweets, preserving row order.

    Raises CorpusError with the offending 1-based row number for a bad
    header, a malformed row, or a label outside 1-4.
    """
    tweets: list[Tweet] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CorpusError("empty file: missing 'text,label' header") from None
        if header != _CSV_HEADER:
            raise CorpusError(f"bad header {header!r}: expected 'text,label'")
        for rownum, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise CorpusError(f"malformed row at row {rownum}: {row!r}")
            text, label_field = row
            try:
                label = int(label_field)
            except ValueError:
                raise CorpusError(
                    f"malformed row at row {rownum}: label {label_field!r} "
                    "is not an integer"
                ) from None
            if label not in CATEGORY_CODES:
                raise CorpusError(f"label out of range at row {rownum}")
            tweets.append(Tweet(text=text, label=label))
    return tweets


def save_dataset(tweets, path) -> None:
    """Write Tweets as a ``text,label`` CSV (standard quoting, UTF-8)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        for tweet in tweets:
            writer.writerow([tweet.text, tweet.label])


# --------------------------------------------------------------------
# Synthetic data
# --------------------------------------------------------------------

# Emoticon families by category, grouped by phrase semantics.
EMOTICON_FAMILIES = {
    1: ["\U0001F62D", "\U0001F61E", "\U0001F613"],
    2: ["\U0001F60A", "\U0001F604", "\U0001F601"],
    3: ["\U0001F60D", "\U0001F618", "\U0001F617", "\U0001F61A"],
    4: ["\U0001F621", "\U0001F620", "\U0001F62C", "\U0001F60F", "\U0001F5E8️"],
}

# Bodies with no emotional content; under the emoticon-informative
# regime these are shared by all four categories.
_NEUTRAL_BODIES = [
    "just got off the train",
    "making pasta for dinner tonight",
    "the meeting ran long again",
    "new episode drops at midnight",
    "my phone is at 2 percent",
    "it's been raining since the morning",
    "back at the gym after a week off",
    "the wifi keeps dropping #monday",
    "queue at the coffee shop is endless",
    "finally submitted the report",
    "watching the match with @sam tonight",
    "traffic on the bridge for an hour",
    "planning the weekend trip",
    "left my umbrella at home again",
    "the playlist is on repeat",
    "trying that new ramen place",
    "package says delivered but nothing here",
    "rewatching the old seasons",
    "laptop update took forever",
    "market was packed this afternoon",
]

# Keyword bodies used when the text itself must reveal the category.
_KEYWORD_BODIES = {
    1: [
        "feeling so sad and empty today",
        "i just want to cry",
        "everything hurts and i'm heartbroken",
        "missing them so much it aches",
        "such a lonely gloomy evening",
        "tears again can't help it",
    ],
    2: [
        "what a wonderful cheerful day",
        "so happy and excited right now",
        "laughing so much today",
        "great news made my whole week",
        "feeling joyful and grateful",
        "best day ever honestly",
    ],
    3: [
        "i love you more than anything",
        "my heart is so full of love",
        "so in love with this person",
        "sending hugs and kisses my darling",
        "you are my sweetheart forever",
        "adore you to the moon and back",
    ],
    4: [
        "i am so angry right now",
        "this whole thing makes me furious",
        "absolutely fed up and mad",
        "stop lying to me i'm raging",
        "so annoyed i could scream",
        "the rage is real today",
    ],
}


def generate_synthetic(n: int, seed: int, emoticon_informative: bool) -> list[Tweet]:
    """Produce a deterministic labeled dataset of n tweets.

    Categories rotate 1,2,3,4,... so counts stay balanced. When
    ``emoticon_informative`` is set, bodies come from a neutral shared
    pool and one or two category-revealing emoticons are appended, so
    only the emoticon carries the label; otherwise the body itself uses
    category keywords and no emoji are added.
    """
    if n < 4:
        raise ValueError(f"need at least 4 tweets, got {n}")
    rng = random.Random(seed)
    tweets = []
    for i in range(n):
        label = CATEGORY_CODES[i % 4]
        if emoticon_informative:
            body = rng.choice(_NEUTRAL_BODIES)
            emoticons = [
                rng.choice(EMOTICON_FAMILIES[label])
                for _ in range(rng.choice((1, 2)))
            ]
            text = body + " " + " ".join(emoticons)
        else:
            body = rng.choice(_KEYWORD_BODIES[label])
            if rng.random() < 0.5:
                text = rng.choice(_NEUTRAL_BODIES) + " " + body
            else:
                text = body
        tweets.append(Tweet(text=text, label=label))
    return tweets
