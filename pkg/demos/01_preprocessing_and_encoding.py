# coding: utf-8
"""From a raw post to a fixed-length integer sequence, one step at a time.

Run from the repository root:  python3 demos/01_preprocessing_and_encoding.py
"""

from emoticnn import (
    MODE_EMOTICON_TEXT,
    MODE_TEXT_ONLY,
    EmoticonLexicon,
    clean,
    encode,
    fit_vocabulary,
    pad,
    preprocess,
    replace_emoticons,
    strip_emoticons,
)

# ------------------------------------------------------------------
# 1. Cleaning. Lowercase, drop @mentions and URLs, drop ASCII
#    punctuation (keeping word-internal apostrophes and the '#' tag
#    text), collapse whitespace. Emoji survive untouched.
# ------------------------------------------------------------------

raw = "@Anna OMG!! Check https://t.co/x #MondayMood ... I can't even 😭😭"
print("raw:      ", raw)
print("clean:    ", clean(raw))

# ------------------------------------------------------------------
# 2. The emoticon lexicon. Each known emoji maps to a lowercase word
#    phrase; matching walks extended grapheme clusters with
#    longest-key-first preference, so multi-codepoint emoji behave.
# ------------------------------------------------------------------

lexicon = EmoticonLexicon.default()
print(f"\nlexicon holds {len(lexicon)} emoticons, e.g.:")
for emoji, phrase in list(lexicon.items())[:4]:
    print(f"   {emoji}  ->  {phrase!r}")

text = clean(raw)
print("\nreplaced: ", replace_emoticons(text, lexicon))
print("stripped: ", strip_emoticons(text, lexicon))

# preprocess() is clean + one of the two treatments, chosen by mode.
print("\nmode =", MODE_EMOTICON_TEXT, "->", preprocess(raw, lexicon, MODE_EMOTICON_TEXT))
print("mode =", MODE_TEXT_ONLY, "    ->", preprocess(raw, lexicon, MODE_TEXT_ONLY))

# ------------------------------------------------------------------
# 3. Integer encoding. A vocabulary maps words to indices by
#    descending corpus frequency starting at 2; index 0 is reserved
#    for padding and index 1 for out-of-vocabulary words.
# ------------------------------------------------------------------

corpus = [
    "crying face crying face i miss you",
    "smiling face what a great morning",
    "i love the morning",
]
vocab = fit_vocabulary(corpus)
print(f"\nvocabulary of {vocab.size} indices (2 reserved):")
print("   first words by rank:", vocab.words()[:6])

sentence = "i miss the great unknownword"
ids = encode(sentence, vocab)
print(f"\nencode({sentence!r}) -> {ids}   (1 marks the unknown word)")

# ------------------------------------------------------------------
# 4. Pre-padding. Zeros go in FRONT so the words sit at the end of
#    the window next to the classifier; overlong sequences keep
#    their last L tokens.
# ------------------------------------------------------------------

print("\npad to length 10:", pad(ids, 10))
print("pad to length 3: ", pad(ids, 3), "  (keeps the tail)")
