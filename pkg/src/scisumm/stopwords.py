"""Built-in English stopword list and override loading."""

from __future__ import annotations

import os

ENV_VAR = "SCISUMM_STOPWORDS"

# General-English function words; kept deliberately small and domain-neutral.
DEFAULT_STOPWORDS = frozenset(
    """
    a about above after again against all also am an and any are as at
    back be because been before being below between both but by can cannot
    could did do does doing down during each either few for from further
    had has have having he her here hers herself him himself his how i
    if in into is it its itself just may me might more most much must my
    myself neither no nor not now of off on once only onto or other our
    ours ourselves out over own per same shall she should so some such
    than that the their theirs them themselves then there these they this
    those through thus to too under until up upon us very was we were what
    when where whether which while who whom why will with within without
    would you your yours yourself yourselves
    """.split()
)


def load_stopwords(path: str) -> frozenset[str]:
    """Read a stopword file: one token per line, ``#`` lines are comments.

    Entries are lowercased, since every token they could match is."""
    words = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            word = line.strip()
            if not word or word.startswith("#"):
                continue
            words.append(word.lower())
    return frozenset(words)


def resolve_stopwords(path: str | None = None) -> frozenset[str]:
    """Pick the stopword set: explicit path, then environment, then built-in."""
    if path:
        return load_stopwords(path)
    env_path = os.environ.get(ENV_VAR)
    if env_path:
        return load_stopwords(env_path)
    return DEFAULT_STOPWORDS
