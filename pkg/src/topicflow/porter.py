"""Porter suffix-stripping stemmer.

Implements the classic rule-based English stemmer in the form distributed
by its author, i.e. including the two step-2 amendments to the 1980 rule
table (``bli -> ble`` in place of ``abli -> able``, plus ``logi -> log``)
and the convention that words of one or two letters are left untouched.
This variant produces the familiar stems "testimoni", "poetri", "librari",
"philolog", "ontolog".
"""

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y is a vowel when preceded by a consonant, a consonant otherwise
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences in [C](VC)^m[V]."""
    m = 0
    i = 0
    n = len(stem)
    while i < n and _is_consonant(stem, i):
        i += 1
    while i < n:
        while i < n and not _is_consonant(stem, i):
            i += 1
        if i == n:
            break
        while i < n and _is_consonant(stem, i):
            i += 1
        m += 1
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(stem: str) -> bool:
    # consonant-vowel-consonant where the final consonant is not w, x or y
    return (
        len(stem) >= 3
        and _is_consonant(stem, len(stem) - 3)
        and not _is_consonant(stem, len(stem) - 2)
        and _is_consonant(stem, len(stem) - 1)
        and stem[-1] not in "wxy"
    )


def _apply_first_match(word, rules):
    """Try rules in order; the first whose suffix matches controls the step.

    Each rule is (suffix, replacement, min_measure). Rules must be ordered
    longest suffix first so the longest match wins.
    """
    for suffix, replacement, min_m in rules:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if _measure(stem) > min_m - 1:
                return stem + replacement
            return word
    return word


def _step1a(word):
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word):
    if word.endswith("eed"):
        stem = word[:-3]
        if _measure(stem) > 0:
            return stem + "ee"
        return word
    for suffix in ("ed", "ing"):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if not _contains_vowel(stem):
                return word
            if stem.endswith(("at", "bl", "iz")):
                return stem + "e"
            if _ends_double_consonant(stem) and stem[-1] not in "lsz":
                return stem[:-1]
            if _measure(stem) == 1 and _ends_cvc(stem):
                return stem + "e"
            return stem
    return word


def _step1c(word):
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_STEP2_RULES = [
    ("ational", "ate", 1),
    ("ization", "ize", 1),
    ("iveness", "ive", 1),
    ("fulness", "ful", 1),
    ("ousness", "ous", 1),
    ("tional", "tion", 1),
    ("biliti", "ble", 1),
    ("entli", "ent", 1),
    ("ousli", "ous", 1),
    ("ation", "ate", 1),
    ("alism", "al", 1),
    ("aliti", "al", 1),
    ("iviti", "ive", 1),
    ("enci", "ence", 1),
    ("anci", "ance", 1),
    ("izer", "ize", 1),
    ("alli", "al", 1),
    ("ator", "ate", 1),
    ("logi", "log", 1),
    ("bli", "ble", 1),
    ("eli", "e", 1),
]

_STEP3_RULES = [
    ("icate", "ic", 1),
    ("ative", "", 1),
    ("alize", "al", 1),
    ("iciti", "ic", 1),
    ("ical", "ic", 1),
    ("ness", "", 1),
    ("ful", "", 1),
]

_STEP4_RULES = [
    ("ement", "", 2),
    ("ance", "", 2),
    ("ence", "", 2),
    ("able", "", 2),
    ("ible", "", 2),
    ("ment", "", 2),
    ("ant", "", 2),
    ("ent", "", 2),
    ("ism", "", 2),
    ("ate", "", 2),
    ("iti", "", 2),
    ("ous", "", 2),
    ("ive", "", 2),
    ("ize", "", 2),
    ("ion", "", 2),  # handled specially: stem must end in s or t
    ("al", "", 2),
    ("er", "", 2),
    ("ic", "", 2),
    ("ou", "", 2),
]


def _step4(word):
    for suffix, replacement, min_m in _STEP4_RULES:
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if suffix == "ion" and not stem.endswith(("s", "t")):
                return word
            if _measure(stem) > min_m - 1:
                return stem + replacement
            return word
    return word


def _step5a(word):
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1:
            return stem
        if m == 1 and not _ends_cvc(stem):
            return stem
    return word


def _step5b(word):
    if _measure(word) > 1 and _ends_double_consonant(word) and word[-1] == "l":
        return word[:-1]
    return word


def stem(word: str) -> str:
    """Stem a single lowercase word."""
    if len(word) <= 2:
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _apply_first_match(word, _STEP2_RULES)
    word = _apply_first_match(word, _STEP3_RULES)
    word = _step4(word)
    word = _step5a(word)
    word = _step5b(word)
    return word
