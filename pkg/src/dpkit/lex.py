"""Deterministic English inflection and preposition lookup.

Rule-based past participles and gerunds, plus a small preposition lexicon
keyed on the head noun of an entity label.  Exceptions ship as editable TSV
files next to this module (see docs/format.md for the file schemas).
"""

from importlib import resources
from pathlib import Path

VOWELS = "aeiou"

ARTICLES = ("the", "a", "an")


def _load_tsv(name: str) -> dict[str, str]:
    text = resources.files("dpkit.data").joinpath(name).read_text("utf-8")
    return _parse_tsv(text)


_HEADER_KEYS = ("LEMMA", "NOUN", "SENSE")


def _parse_tsv(text: str) -> dict[str, str]:
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("\t")
        if not sep:
            continue
        key = key.strip()
        if key in _HEADER_KEYS:
            continue
        table[key] = value.strip()
    return table


_PARTICIPLE_EXC = _load_tsv("participle_exceptions.tsv")

_GERUND_EXC = {
    "be": "being",
    "dye": "dyeing",
    "singe": "singeing",
}


def _cvc_monosyllable(word: str) -> bool:
    """One vowel group, consonant-vowel-consonant tail, final not w/x/y."""
    if len(word) < 3:
        return False
    if word[-1] in VOWELS or word[-1] in "wxy":
        return False
    if word[-2] not in VOWELS or word[-3] in VOWELS:
        return False
    groups = 0
    in_group = False
    for ch in word:
        if ch in VOWELS:
            if not in_group:
                groups += 1
            in_group = True
        else:
            in_group = False
    return groups == 1


def participle(lemma: str, exceptions: dict[str, str] | None = None) -> str:
    """Past participle of a verb lemma; rules plus the exception table."""
    if not lemma:
        raise ValueError("empty lemma")
    word = lemma.strip()
    table = _PARTICIPLE_EXC if exceptions is None else exceptions
    if word.lower() in table:
        return table[word.lower()]
    if word.endswith("e"):
        return word + "d"
    if word.endswith("y") and len(word) > 1 and word[-2] not in VOWELS:
        return word[:-1] + "ied"
    if _cvc_monosyllable(word):
        return word + word[-1] + "ed"
    return word + "ed"


def gerund(lemma: str) -> str:
    if not lemma:
        raise ValueError("empty lemma")
    word = lemma.strip()
    if word.lower() in _GERUND_EXC:
        return _GERUND_EXC[word.lower()]
    if word.endswith("ie"):
        return word[:-2] + "ying"
    if word.endswith("e") and len(word) > 1 and word[-2] not in "eo":
        return word[:-1] + "ing"
    if _cvc_monosyllable(word):
        return word + word[-1] + "ing"
    return word + "ing"


def singularize(noun: str) -> str:
    word = noun.strip()
    lower = word.lower()
    if lower.endswith("ies") and len(word) > 3:
        return word[:-3] + "y"
    if lower.endswith(("ches", "shes", "sses", "xes", "zes")):
        return word[:-2]
    if lower.endswith("s") and not lower.endswith("ss"):
        return word[:-1]
    return word


def strip_article(text: str) -> str:
    first, _, rest = text.partition(" ")
    if first.lower() in ARTICLES and rest:
        return rest
    return text


def starts_with_article(text: str) -> bool:
    first = text.split(" ", 1)[0].lower()
    return first in ARTICLES


def definite(text: str) -> str:
    """Prefix "the" unless the phrase already carries an article."""
    if starts_with_article(text):
        return text
    return "the " + text


def head_noun(label: str) -> str:
    """Lexicon key for a phrase: last word, lowercased and singularized."""
    words = [w for w in strip_article(label).split(" ") if w]
    if not words:
        return ""
    return singularize(words[-1].lower())


class PrepLexicon:
    """Preposition choices for habitat and tool phrases.

    Habitats default to "in" with per-noun overrides from the TSV; tools
    take "with" ("using" when fronted, which the paraphrase emitter
    handles itself).
    """

    def __init__(self, habitat_overrides: dict[str, str] | None = None):
        self.habitat_overrides = dict(habitat_overrides or {})

    @classmethod
    def default(cls) -> "PrepLexicon":
        return cls(_load_tsv("prepositions.tsv"))

    @classmethod
    def from_tsv(cls, path: str | Path) -> "PrepLexicon":
        return cls(_parse_tsv(Path(path).read_text("utf-8")))

    def habitat(self, label: str) -> str:
        return self.habitat_overrides.get(head_noun(label), "in")

    def tool(self, label: str) -> str:
        return "with"
