"""Global re-linearization of dependency trees by constituent length.

Each node's constituent is rebuilt bottom-up as the concatenation of its
children's constituents sorted by constituent token length: ascending for
short-first, descending for long-first, and a per-head coin flip for
random-first. The sort is stable, so equal-length siblings keep their
original relative order. In the non-head-final modes the head token is
reinserted at its original rank among the node's members; in the
head-final mode the head goes last and children are sorted descending.

The inversion metrics measure how far a corpus already is from a length
ordering: per head with two or more dependents, the number of dependent
pairs whose constituent lengths are strictly out of order, which equals
the number of adjacent swaps needed to sort them.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .treebank import DepTree, Token

SHORT_FIRST = "short_first"
LONG_FIRST = "long_first"
RANDOM_FIRST = "random_first"
LONG_FIRST_HEADFINAL = "long_first_headfinal"
ORDERS = (SHORT_FIRST, LONG_FIRST, RANDOM_FIRST, LONG_FIRST_HEADFINAL)


@dataclass(frozen=True)
class LinearizationMode:
    order: str
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.order not in ORDERS:
            raise ValueError(f"unknown order {self.order!r}; expected one of {ORDERS}")


def _as_mode(mode: LinearizationMode | str) -> LinearizationMode:
    if isinstance(mode, str):
        return LinearizationMode(mode)
    return mode


def _sentence_rng(seed: int, sentence_id: str) -> random.Random:
    # Per-sentence seeding keeps parallel corpus runs order independent.
    digest = hashlib.sha256(sentence_id.encode("utf-8")).digest()
    return random.Random(seed ^ int.from_bytes(digest[:8], "big"))


def _subtree_sizes(tree: DepTree) -> dict[int, int]:
    sizes = {tok.index: 1 for tok in tree.tokens}
    for node in _nodes_deepest_first(tree):
        for child in tree.children(node):
            sizes[node] += sizes[child]
    return sizes


def _nodes_deepest_first(tree: DepTree) -> list[int]:
    depth = {tree.root: 0}
    queue = [tree.root]
    while queue:
        node = queue.pop()
        for child in tree.children(node):
            depth[child] = depth[node] + 1
            queue.append(child)
    return sorted(depth, key=lambda n: (-depth[n], n))


def _ascending_flags(tree: DepTree, mode: LinearizationMode, nodes: Sequence[int]) -> dict[int, bool]:
    if mode.order == SHORT_FIRST:
        return {n: True for n in nodes}
    if mode.order in (LONG_FIRST, LONG_FIRST_HEADFINAL):
        return {n: False for n in nodes}
    rng = _sentence_rng(mode.rng_seed, tree.sentence_id)
    flags = {}
    for node in nodes:
        # One flip per head whose ordering matters.
        if len(tree.children(node)) >= 2:
            flags[node] = rng.random() < 0.5
        else:
            flags[node] = True
    return flags


def _ordered_children(tree: DepTree, node: int, sizes: dict[int, int], ascending: bool) -> list[int]:
    kids = tree.children(node)
    if ascending:
        return sorted(kids, key=lambda k: sizes[k])
    return sorted(kids, key=lambda k: -sizes[k])


def _head_rank(tree: DepTree, node: int) -> int:
    return sum(1 for k in tree.children(node) if k < node)


def relinearize_permutation(tree: DepTree, mode: LinearizationMode | str) -> list[int]:
    """Token indices of the tree in re-linearized surface order."""
    mode = _as_mode(mode)
    nodes = _nodes_deepest_first(tree)
    sizes = _subtree_sizes(tree)
    flags = _ascending_flags(tree, mode, nodes)
    arrangement: dict[int, list[int]] = {}
    for node in nodes:
        kids = tree.children(node)
        if not kids:
            arrangement[node] = [node]
            continue
        ordered = _ordered_children(tree, node, sizes, flags[node])
        if mode.order == LONG_FIRST_HEADFINAL:
            seq: list[int] = []
            for kid in ordered:
                seq.extend(arrangement[kid])
            seq.append(node)
        else:
            rank = _head_rank(tree, node)
            seq = []
            for pos, kid in enumerate(ordered):
                if pos == rank:
                    seq.append(node)
                seq.extend(arrangement[kid])
            if rank == len(ordered):
                seq.append(node)
        arrangement[node] = seq
    return arrangement[tree.root]


def relinearize(tree: DepTree, mode: LinearizationMode | str) -> list[str]:
    """Surface forms of the tree in re-linearized order."""
    return [tree.token(i).form for i in relinearize_permutation(tree, mode)]


def relinearize_tree(tree: DepTree, mode: LinearizationMode | str) -> DepTree:
    """A new tree in re-linearized order with head links carried through."""
    permutation = relinearize_permutation(tree, mode)
    new_index = {old: pos + 1 for pos, old in enumerate(permutation)}
    tokens = []
    for pos, old in enumerate(permutation, start=1):
        tok = tree.token(old)
        tokens.append(
            Token(
                index=pos,
                form=tok.form,
                lemma=tok.lemma,
                upos=tok.upos,
                head=0 if tok.head == 0 else new_index[tok.head],
                deprel=tok.deprel,
            )
        )
    return DepTree(tokens=tokens, sentence_id=tree.sentence_id, metadata=dict(tree.metadata))


def relinearize_bracketed(tree: DepTree, mode: LinearizationMode | str) -> str:
    """Debug rendering: children of multi-child heads appear in brackets."""
    mode = _as_mode(mode)
    nodes = _nodes_deepest_first(tree)
    sizes = _subtree_sizes(tree)
    flags = _ascending_flags(tree, mode, nodes)
    texts: dict[int, str] = {}
    for node in nodes:
        kids = tree.children(node)
        head_form = tree.token(node).form
        if not kids:
            texts[node] = head_form
            continue
        wrap = len(kids) >= 2
        ordered = _ordered_children(tree, node, sizes, flags[node])
        pieces = [f"[{texts[k]}]" if wrap else texts[k] for k in ordered]
        if mode.order == LONG_FIRST_HEADFINAL:
            pieces.append(head_form)
        else:
            pieces.insert(_head_rank(tree, node), head_form)
        texts[node] = " ".join(pieces)
    return texts[tree.root]


@dataclass(frozen=True)
class InversionReport:
    """Out-of-order dependent pairs, summed over heads with >= 2 dependents."""

    inversions: int
    max_inversions: int
    eligible_heads: int

    @property
    def normalized(self) -> float:
        if self.max_inversions == 0:
            return 0.0
        return self.inversions / self.max_inversions


def inversion_score(tree: DepTree, direction: str) -> InversionReport:
    """Count dependent pairs whose constituent lengths violate ``direction``.

    Equal lengths are never out of order; the per-head count equals the
    number of adjacent swaps needed to sort that head's dependents.
    """
    if direction not in (SHORT_FIRST, LONG_FIRST):
        raise ValueError(f"direction must be {SHORT_FIRST} or {LONG_FIRST}")
    sizes = _subtree_sizes(tree)
    inversions = 0
    max_inversions = 0
    eligible = 0
    for tok in tree.tokens:
        kids = tree.children(tok.index)
        n = len(kids)
        if n < 2:
            continue
        eligible += 1
        max_inversions += n * (n - 1) // 2
        lengths = [sizes[k] for k in kids]
        for i in range(n):
            for j in range(i + 1, n):
                if direction == SHORT_FIRST and lengths[i] > lengths[j]:
                    inversions += 1
                elif direction == LONG_FIRST and lengths[i] < lengths[j]:
                    inversions += 1
    return InversionReport(inversions, max_inversions, eligible)


@dataclass(frozen=True)
class OrderReport:
    """Corpus-level length-ordering summary.

    A sentence counts as short-first when it has zero short-first
    inversions (trivial sentences count as both orders); the excl_trivial
    fractions and the normalized means cover only sentences where some head
    has two or more dependents.
    """

    sentences: int
    eligible_sentences: int
    fraction_short_first: float
    fraction_long_first: float
    fraction_short_first_excl_trivial: float
    fraction_long_first_excl_trivial: float
    mean_normalized_to_short: float
    mean_normalized_to_long: float

    def to_dict(self) -> dict:
        return {
            "sentences": self.sentences,
            "eligible_sentences": self.eligible_sentences,
            "fraction_short_first": self.fraction_short_first,
            "fraction_long_first": self.fraction_long_first,
            "fraction_short_first_excl_trivial": self.fraction_short_first_excl_trivial,
            "fraction_long_first_excl_trivial": self.fraction_long_first_excl_trivial,
            "mean_normalized_to_short": self.mean_normalized_to_short,
            "mean_normalized_to_long": self.mean_normalized_to_long,
        }


def corpus_order_report(trees: Iterable[DepTree]) -> OrderReport:
    total = 0
    short_zero = 0
    long_zero = 0
    eligible = 0
    eligible_short_zero = 0
    eligible_long_zero = 0
    sum_norm_short = 0.0
    sum_norm_long = 0.0
    for tree in trees:
        total += 1
        short = inversion_score(tree, SHORT_FIRST)
        long_ = inversion_score(tree, LONG_FIRST)
        if short.inversions == 0:
            short_zero += 1
        if long_.inversions == 0:
            long_zero += 1
        if short.eligible_heads >= 1:
            eligible += 1
            eligible_short_zero += short.inversions == 0
            eligible_long_zero += long_.inversions == 0
            sum_norm_short += short.normalized
            sum_norm_long += long_.normalized
    if total == 0:
        raise ValueError("corpus order report needs a non-empty corpus")
    return OrderReport(
        sentences=total,
        eligible_sentences=eligible,
        fraction_short_first=short_zero / total,
        fraction_long_first=long_zero / total,
        fraction_short_first_excl_trivial=(eligible_short_zero / eligible) if eligible else 0.0,
        fraction_long_first_excl_trivial=(eligible_long_zero / eligible) if eligible else 0.0,
        mean_normalized_to_short=(sum_norm_short / eligible) if eligible else 0.0,
        mean_normalized_to_long=(sum_norm_long / eligible) if eligible else 0.0,
    )
