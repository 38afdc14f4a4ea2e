"""Frozen preprocessing lexicon: stopword list and lemmatizer rules.

Everything in this module is versioned data. The stopword list and the
suffix rules fully determine every downstream vocabulary, so any edit
here changes TF-IDF vocabularies, sequence encodings, and therefore all
trained models. Bump LEXICON_VERSION when changing anything and expect
previously reported numbers to move.

The lemmatizer is deliberately small: an exception table for common
irregular forms, then ordered suffix rules applied at most once per
token (first rule whose guards pass wins; no cascading). It is not a
dictionary lemmatizer and makes documented approximations, e.g.
"hoping" -> "hop" (no silent-e restoration).
"""

LEXICON_VERSION = "1"

# Common English function words, lowercase, matched after cleaning (which
# keeps apostrophes, so contractions appear in their surface form).
STOPWORDS = frozenset("""
a about above after again against ain all am an and any are aren aren't as
at be because been before being below between both but by can couldn
couldn't d did didn didn't do does doesn doesn't doing don don't down
during each few for from further had hadn hadn't has hasn hasn't have
haven haven't having he her here hers herself him himself his how i if in
into is isn isn't it it's its itself just ll m ma me mightn mightn't more
most mustn mustn't my myself needn needn't no nor not now o of off on once
only or other our ours ourselves out over own re s same shan shan't she
she's should should've shouldn shouldn't so some such t than that that'll
the their theirs them themselves then there these they this those through
to too under until up ve very was wasn wasn't we were weren weren't what
when where which while who whom why will with won won't wouldn wouldn't y
you you'd you'll you're you've your yours yourself yourselves
""".split())

# Irregular forms resolved before any suffix rule is tried. Mapping a word
# to itself pins it against the suffix rules.
LEMMA_EXCEPTIONS = {
    "ate": "eat",
    "broke": "break",
    "broken": "break",
    "came": "come",
    "children": "child",
    "chose": "choose",
    "chosen": "choose",
    "died": "die",
    "dying": "die",
    "feet": "foot",
    "felt": "feel",
    "found": "find",
    "gave": "give",
    "given": "give",
    "gone": "go",
    "got": "get",
    "gotten": "get",
    "heard": "hear",
    "held": "hold",
    "kept": "keep",
    "knew": "know",
    "known": "know",
    "left": "leave",
    "lost": "lose",
    "lying": "lie",
    "made": "make",
    "men": "man",
    "met": "meet",
    "mice": "mouse",
    "paid": "pay",
    "ran": "run",
    "said": "say",
    "sat": "sit",
    "saw": "see",
    "seen": "see",
    "slept": "sleep",
    "spoke": "speak",
    "stood": "stand",
    "taken": "take",
    "teeth": "tooth",
    "thought": "think",
    "told": "tell",
    "took": "take",
    "went": "go",
    "woke": "wake",
    "women": "woman",
    "wore": "wear",
    "written": "write",
    "wrote": "write",
}

# Ordered suffix rules: (suffix, replacement, min_stem_chars, undouble,
# stem_must_end_with, word_must_not_end_with). The first rule whose suffix
# matches and whose guards pass is applied; if its guards fail the scan
# continues to later rules. min_stem_chars counts the stem left after
# removing the suffix.
SUFFIX_RULES = (
    ("sses", "ss", 1, False, None, None),
    ("ies", "y", 2, False, None, None),
    ("ied", "y", 2, False, None, None),
    ("ing", "", 3, True, None, None),
    ("ed", "", 3, True, None, None),
    ("es", "", 2, False, ("ss", "x", "z", "ch", "sh"), None),
    ("s", "", 3, False, None, ("ss", "us", "is")),
)

# Final doubled consonants kept as-is when undoubling ("falling" -> "fall",
# "missing" -> "miss"); anything else is undoubled ("running" -> "run").
_KEEP_DOUBLED = frozenset("lszfeo")


def _undouble(stem: str) -> str:
    if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in _KEEP_DOUBLED:
        return stem[:-1]
    return stem


def lemmatize(token: str) -> str:
    """Reduce a lowercase token to its lemma using the frozen rule table."""
    hit = LEMMA_EXCEPTIONS.get(token)
    if hit is not None:
        return hit
    for suffix, repl, min_stem, undouble, stem_ends, word_not_ends in SUFFIX_RULES:
        if not token.endswith(suffix):
            continue
        stem = token[: len(token) - len(suffix)]
        if len(stem) < min_stem:
            continue
        if stem_ends is not None and not stem.endswith(stem_ends):
            continue
        if word_not_ends is not None and token.endswith(word_not_ends):
            continue
        if undouble:
            stem = _undouble(stem)
        return stem + repl
    return token
