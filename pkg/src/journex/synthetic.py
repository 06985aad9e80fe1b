"""Deterministic synthetic corpus for end-to-end runs and demos.

Fake journal names (katakana strings, mutually substring-free) are planted
inside the two dominant context templates around journal names, 学誌「…」に
発表 and 論文誌「…」電子版, between runs of distractor text drawn from a
separate hiragana/kanji vocabulary, so the planted contexts are the only
strongly predictive ones.  Seeds occur only in the first template; a few
target names occur only in the second, so they become reachable only after
the first round has grown the dictionary, a miniature of the bootstrap
progression.  Everything derives from one RNG seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import Article, ArticleSet

_KATAKANA = (
    "アイウエオカキクケコサシスセソタチツテトナニヌネノ"
    "ハヒフヘホマミムメモヤユヨラリルレロワガギグゲゴ"
    "ザジズゼゾダデドバビブベボパピプペポー"
)
_DISTRACTOR_CHARS = (
    "あいうえおかきくけこさしすせそたちつてとなぬねのはひふへほ"
    "まみむめもやゆよらりるれろわをんがぎぐげござじずぜぞだづ"
    "でどばびぶべぼ研究者界結果報告調査分析手法理論実験観測"
)
_TEMPLATE_HEAD = "学誌「"
_TEMPLATE_HEAD_ALT = "論文誌「"
_TEMPLATE_TAIL = "」に発表した"
_TEMPLATE_TAIL_ALT = "」電子版に掲載した"


@dataclass(frozen=True)
class SyntheticDataset:
    articles: ArticleSet
    seeds: tuple[str, ...]
    targets: tuple[str, ...]

    @property
    def answer_names(self) -> frozenset[str]:
        return frozenset(self.targets)


def _make_names(rng: random.Random, count: int) -> list[str]:
    names: list[str] = []
    while len(names) < count:
        length = rng.randint(4, 8)
        name = "".join(rng.choice(_KATAKANA) for _ in range(length))
        if any(name in other or other in name for other in names):
            continue
        names.append(name)
    return names


def _make_vocab(rng: random.Random, count: int = 100) -> list[str]:
    vocab: list[str] = []
    while len(vocab) < count:
        length = rng.randint(2, 4)
        word = "".join(rng.choice(_DISTRACTOR_CHARS) for _ in range(length))
        if word not in vocab:
            vocab.append(word)
    return vocab


def _padding(rng: random.Random, vocab: list[str]) -> str:
    # Zipf-ish word choice keeps the global frequency spectrum gap-free.
    words = []
    for _ in range(rng.randint(1, 3)):
        rank = min(int(rng.paretovariate(1.0)), len(vocab)) - 1
        words.append(vocab[rank])
    return "".join(words)


def generate_corpus(
    n_articles: int = 500,
    n_targets: int = 60,
    n_seeds: int = 5,
    *,
    rng_seed: int = 20160901,
    plantings_per_article: int = 2,
    second_template_only: int = 4,
) -> SyntheticDataset:
    """Build the synthetic article set.

    ``second_template_only`` target names never occur in the first
    template, so a seeded first round cannot reach them; names accepted in
    round one teach the second template's right context and pull them in.
    """
    rng = random.Random(rng_seed)
    names = _make_names(rng, n_seeds + n_targets)
    seeds = tuple(names[:n_seeds])
    targets = tuple(names[n_seeds:])
    holdout = set(targets[:second_template_only])
    # Targets seen in both templates teach the second tail in round two.
    bridge = set(targets[second_template_only : second_template_only + n_targets // 3])
    vocab = _make_vocab(rng)

    slots: list[str] = []
    while len(slots) < n_articles * plantings_per_article:
        batch = list(names)
        rng.shuffle(batch)
        slots.extend(batch)
    slots = slots[: n_articles * plantings_per_article]

    def sentence(name: str) -> str:
        if name in holdout:
            alt = True
        elif name in bridge:
            alt = rng.random() < 0.5
        else:
            alt = False
        head = _TEMPLATE_HEAD_ALT if alt else _TEMPLATE_HEAD
        tail = _TEMPLATE_TAIL_ALT if alt else _TEMPLATE_TAIL
        return head + name + tail + "。"

    articles: list[Article] = []
    for i in range(n_articles):
        planted = slots[i * plantings_per_article : (i + 1) * plantings_per_article]
        parts = [_padding(rng, vocab)]
        for name in planted:
            parts.append(sentence(name))
            parts.append(_padding(rng, vocab))
        body = "".join(parts)
        articles.append(
            Article(
                id=f"syn{i:04d}",
                body=body,
                meta={
                    "url": f"https://news.example.test/{i}",
                    "title": f"記事{i}",
                    "posted": "2016-09-01",
                    "field_id": "1",
                },
            )
        )
    return SyntheticDataset(ArticleSet(tuple(articles)), seeds, targets)


def write_dataset_files(dataset: SyntheticDataset, directory) -> dict[str, str]:
    """Write corpus.tsv / seeds.txt / answers.txt under ``directory``."""
    import os

    from .corpus import serialize_corpus

    os.makedirs(directory, exist_ok=True)
    paths = {
        "corpus": os.path.join(directory, "corpus.tsv"),
        "seeds": os.path.join(directory, "seeds.txt"),
        "answers": os.path.join(directory, "answers.txt"),
    }
    with open(paths["corpus"], "w", encoding="utf-8") as fh:
        fh.write(serialize_corpus(dataset.articles))
    with open(paths["seeds"], "w", encoding="utf-8") as fh:
        fh.write("".join(s + "\n" for s in dataset.seeds))
    with open(paths["answers"], "w", encoding="utf-8") as fh:
        fh.write("".join(t + "\n" for t in sorted(dataset.targets)))
    return paths
