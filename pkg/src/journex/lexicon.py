"""Journal-name dictionary with greedy leftmost-longest matching.

The scan walks a character trie: at each position it emits the longest
entry starting there (if any) and resumes after its end, so matches never
overlap and nested entries are suppressed.
"""

from __future__ import annotations

from dataclasses import dataclass

_TERMINAL = ""  # key holding the original entry at a terminal trie node

# Default seed dictionary: two journals in their common spelling variants.
DEFAULT_SEEDS = (
    "Scientific Reports",
    "サイエンティフィック・リポーツ",
    "サイエンティフィック・リポーツ（Scientific Reports）",
    "サイエンティフィックリポーツ",
    "サイエンティフィックリポーツ（Scientific Reports）",
    "PLOS ONE",
    "プロス・ワン",
    "プロス・ワン（PLOS ONE）",
    "プロスワン",
    "プロスワン（PLOS ONE）",
)


class EmptyLexiconError(ValueError):
    """A lexicon must contain at least one entry."""


def _fold_char(c: str) -> str:
    # Length-preserving simple case fold; full folds that change the scalar
    # count (e.g. İ) would break character-offset arithmetic, so keep those
    # characters as-is.
    low = c.lower()
    return low if len(low) == 1 else c


def fold_text(text: str) -> str:
    return "".join(_fold_char(c) for c in text)


@dataclass(frozen=True)
class Match:
    article_id: str
    start: int
    length: int
    entry: str


class Lexicon:
    """Immutable-per-generation set of names; additions produce a new one."""

    def __init__(self, entries, generation: int = 0):
        entries = frozenset(entries)
        if not entries:
            raise EmptyLexiconError("lexicon has no entries")
        if any(not e for e in entries):
            raise ValueError("empty string cannot be a lexicon entry")
        self.entries = entries
        self.generation = generation
        self._tries: dict[bool, dict] = {}

    def __contains__(self, text: str) -> bool:
        return text in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def add_entries(self, names) -> "Lexicon":
        """Union with ``names``; bumps the generation once per call."""
        names = list(names)
        if any(not n for n in names):
            raise ValueError("empty string cannot be a lexicon entry")
        return Lexicon(self.entries.union(names), self.generation + 1)

    def sorted_entries(self) -> list[str]:
        return sorted(self.entries)

    def _trie(self, case_insensitive: bool) -> dict:
        trie = self._tries.get(case_insensitive)
        if trie is None:
            trie = {}
            # Sorted insertion keeps the reported entry deterministic when
            # two entries collide under case folding (smallest original wins
            # because later duplicates do not overwrite).
            for entry in sorted(self.entries):
                key = fold_text(entry) if case_insensitive else entry
                node = trie
                for c in key:
                    node = node.setdefault(c, {})
                node.setdefault(_TERMINAL, entry)
            self._tries[case_insensitive] = trie
        return trie


def load_lexicon(lines) -> Lexicon:
    """One entry per non-empty trimmed line; duplicates collapse."""
    entries = {line.strip() for line in lines}
    entries.discard("")
    if not entries:
        raise EmptyLexiconError("no entries in lexicon input")
    return Lexicon(entries)


def load_lexicon_file(path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return load_lexicon(fh)


def save_lexicon_file(lexicon: Lexicon, path) -> None:
    """Canonical serialization: sorted entries, one per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for entry in lexicon.sorted_entries():
            fh.write(entry + "\n")


def longest_match_scan(
    seq,
    lexicon: Lexicon,
    *,
    case_insensitive: bool = False,
    article_id: str = "",
) -> list[Match]:
    """Greedy leftmost-longest scan of a character sequence.

    ``seq`` may be a string or a list of single characters.  Case folding
    (when enabled) applies to comparison only; Match.entry reports the
    lexicon form.
    """
    text = seq if isinstance(seq, str) else "".join(seq)
    haystack = fold_text(text) if case_insensitive else text
    trie = lexicon._trie(case_insensitive)
    matches: list[Match] = []
    n = len(haystack)
    pos = 0
    while pos < n:
        node = trie
        best_end = -1
        best_entry = None
        i = pos
        while i < n:
            node = node.get(haystack[i])
            if node is None:
                break
            i += 1
            entry = node.get(_TERMINAL)
            if entry is not None:
                best_end = i
                best_entry = entry
        if best_entry is not None:
            matches.append(Match(article_id, pos, best_end - pos, best_entry))
            pos = best_end
        else:
            pos += 1
    return matches
