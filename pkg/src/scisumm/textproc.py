"""Text normalization, sentence splitting, and tokenization.

Everything here is pure and deterministic: the same input string always
yields the same output, so results can be recomputed from any worker
process. Splitting and tokenization are self-contained rules (terminator
plus whitespace boundaries with an abbreviation exception list; ASCII
punctuation detachment) rather than bindings to a heavyweight NLP toolkit,
so counts can differ from toolkit-based pipelines by small margins.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, Iterable, Iterator

NUMBER_MASK = "#"

_URL_RE = re.compile(r"\S*://\S*|(?<!\S)www\.\S+")
# A digit run (optionally signed, with decimal points or thousands
# separators) is masked unless it touches a letter, so identifiers such as
# "cd14" survive while "25", "-3.5", and "1,000" become "#".
_NUMBER_RE = re.compile(
    r"(?:^|(?<=\s))[+-]\d+(?:[.,]\d+)*(?!\w)|(?<!\w)\d+(?:[.,]\d+)*(?!\w)"
)
_SPACE_RE = re.compile(r"\s+")

# ASCII punctuation split off as standalone tokens. Hyphens and apostrophes
# stay attached so hyphenated words and contractions remain single tokens;
# "#" stays attached because it is the number mask.
_DETACHED = frozenset('!"$%&()*+,./:;<=>?@[\\]^`{|}~')

_TERMINATORS = frozenset(".!?")
_CLOSERS = frozenset(")]}\"'")
_OPENERS = "([{\"'"

# Words whose trailing period does not end a sentence.
_ABBREVIATIONS = frozenset(
    {
        "al.", "approx.", "ca.", "cf.", "dr.", "e.g.", "ed.", "eds.", "eq.",
        "eqs.", "fig.", "figs.", "i.e.", "inc.", "mr.", "mrs.", "ms.", "no.",
        "nos.", "p.", "pp.", "prof.", "ref.", "refs.", "resp.", "sec.",
        "st.", "tab.", "vol.", "vols.", "vs.",
    }
)


class TokenKind(Enum):
    WORD = "word"
    NUMBER_MASK = "number_mask"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind

    def __post_init__(self):
        if not self.surface or _SPACE_RE.search(self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")
        if (self.kind is TokenKind.NUMBER_MASK) != (self.surface == NUMBER_MASK):
            raise ValueError(
                f"kind {self.kind.value} inconsistent with surface {self.surface!r}"
            )


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    char_span: tuple[int, int]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")
        start, end = self.char_span
        if start < 0 or end < start:
            raise ValueError(f"invalid char span {self.char_span!r}")

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(token.surface for token in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class TokenizedText:
    sentences: tuple[Sentence, ...]

    @property
    def token_count(self) -> int:
        return sum(len(sentence) for sentence in self.sentences)

    @property
    def tokens(self) -> tuple[Token, ...]:
        return tuple(tok for sentence in self.sentences for tok in sentence.tokens)

    def surfaces(self) -> Iterator[str]:
        for sentence in self.sentences:
            for token in sentence.tokens:
                yield token.surface


def classify_surface(surface: str) -> TokenKind:
    if surface == NUMBER_MASK:
        return TokenKind.NUMBER_MASK
    if any(ch.isalnum() for ch in surface):
        return TokenKind.WORD
    return TokenKind.PUNCTUATION


def make_token(surface: str) -> Token:
    return Token(surface, classify_surface(surface))


def normalize(raw: str) -> str:
    """Lowercase, drop URLs, mask standalone numbers, collapse whitespace.

    Idempotent: applying the function twice equals applying it once.
    """
    text = raw.lower()
    text = _URL_RE.sub(" ", text)
    text = _NUMBER_RE.sub(NUMBER_MASK, text)
    return _SPACE_RE.sub(" ", text).strip()


def _chunk_surfaces(chunk: str) -> Iterator[str]:
    buf: list[str] = []
    for ch in chunk:
        if ch in _DETACHED:
            if buf:
                yield "".join(buf)
                buf.clear()
            yield ch
        else:
            buf.append(ch)
    if buf:
        yield "".join(buf)


def _tokenize(text: str) -> tuple[Token, ...]:
    return tuple(
        make_token(surface)
        for chunk in text.split()
        for surface in _chunk_surfaces(chunk)
    )


def _blocks_split(text: str, period_pos: int) -> bool:
    """True when the period at ``period_pos`` belongs to an abbreviation."""
    start = period_pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start : period_pos + 1].lstrip(_OPENERS).lower()
    if word in _ABBREVIATIONS:
        return True
    # single letters read as initials, e.g. "j. biol. chem."
    return len(word) == 2 and word[0].isalpha()


def split_sentences(text: str) -> TokenizedText:
    """Split into sentences at ``.!?`` before whitespace, then tokenize.

    A period boundary is suppressed when the preceding word is a known
    abbreviation or a single letter. Sentence spans index into ``text``,
    never overlap, and appear in source order. Blank input yields zero
    sentences; any non-blank input yields at least one.
    """
    n = len(text)
    spans: list[tuple[int, int]] = []
    start = 0
    while start < n and text[start].isspace():
        start += 1
    i = start
    while i < n:
        ch = text[i]
        if ch in _TERMINATORS:
            j = i + 1
            while j < n and text[j] in _CLOSERS:
                j += 1
            boundary = j >= n or text[j].isspace()
            if boundary and not (ch == "." and _blocks_split(text, i)):
                spans.append((start, j))
                start = j
                while start < n and text[start].isspace():
                    start += 1
                i = start
                continue
        i += 1
    if start < n:
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
    sentences = []
    for lo, hi in spans:
        tokens = _tokenize(text[lo:hi])
        if tokens:
            sentences.append(Sentence(tokens, (lo, hi)))
    return TokenizedText(tuple(sentences))


def as_single_sentence(text: str) -> TokenizedText:
    """Tokenize without sentence splitting, e.g. for titles."""
    tokens = _tokenize(text)
    if not tokens:
        return TokenizedText(())
    return TokenizedText((Sentence(tokens, (0, len(text))),))


def prepare(raw: str) -> TokenizedText:
    """Normalize and sentence-split in one step."""
    return split_sentences(normalize(raw))


def is_content(token: Token, stopwords: AbstractSet[str]) -> bool:
    """Word tokens outside the stopword list; masks and punctuation excluded."""
    return token.kind is TokenKind.WORD and token.surface not in stopwords


def desegment_surfaces(surfaces: Iterable[str]) -> list[str]:
    """Merge byte-pair-encoded pieces: a trailing ``@@`` joins to the next token."""
    merged: list[str] = []
    carry = ""
    for surface in surfaces:
        if surface.endswith("@@"):
            carry += surface[:-2]
            continue
        merged.append(carry + surface)
        carry = ""
    if carry:
        merged.append(carry)
    return merged


def to_plain_text(text: TokenizedText) -> str:
    """Serialize as newline-separated sentences of space-separated tokens."""
    return "\n".join(" ".join(sentence.surfaces) for sentence in text.sentences)


def from_plain_text(serialized: str) -> TokenizedText:
    """Parse the ``to_plain_text`` form back, preserving sentence boundaries."""
    sentences = []
    offset = 0
    for line in serialized.split("\n"):
        tokens = tuple(make_token(s) for s in line.split(" ") if s)
        if tokens:
            sentences.append(Sentence(tokens, (offset, offset + len(line))))
        offset += len(line) + 1
    return TokenizedText(tuple(sentences))
