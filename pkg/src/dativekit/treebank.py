"""CoNLL-U treebank reading, validation, writing, and subtree extraction.

Parsing is streaming and never aborts on dirty input: malformed rows and
invalid head structures cause the offending sentence to be skipped and
reported through an error sink, so corpus-scale runs always finish.
Multiword-token ranges (``3-4``) and empty nodes (``3.1``) are skipped.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

N_COLUMNS = 10


@dataclass(frozen=True)
class Token:
    """One syntactic word. ``head`` is a 1-based token index, 0 for the root."""

    index: int
    form: str
    lemma: str
    upos: str
    head: int
    deprel: str


@dataclass
class DepTree:
    """A parsed sentence: tokens in surface order plus comment metadata.

    Treat instances as immutable once constructed; the children table is
    built lazily and cached.
    """

    tokens: list[Token]
    sentence_id: str = ""
    metadata: dict[str, str] = field(default_factory=dict)
    _children: dict[int, list[int]] | None = field(
        default=None, repr=False, compare=False
    )

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, index: int) -> Token:
        if not 1 <= index <= len(self.tokens):
            raise ValueError(
                f"token index {index} out of range 1..{len(self.tokens)}"
            )
        return self.tokens[index - 1]

    @property
    def root(self) -> int:
        for tok in self.tokens:
            if tok.head == 0:
                return tok.index
        raise ValueError(f"tree {self.sentence_id!r} has no root")

    def children(self, index: int) -> list[int]:
        """Direct dependents of ``index``, in surface order."""
        if self._children is None:
            table: dict[int, list[int]] = {tok.index: [] for tok in self.tokens}
            for tok in self.tokens:
                if tok.head != 0:
                    table[tok.head].append(tok.index)
            self._children = table
        if index not in self._children:
            raise ValueError(f"token index {index} not in tree")
        return self._children[index]

    def forms(self) -> list[str]:
        return [tok.form for tok in self.tokens]

    def text(self) -> str:
        return " ".join(tok.form for tok in self.tokens)


@dataclass(frozen=True)
class Span:
    """A head-rooted constituent: the head token plus everything it dominates."""

    token_indices: tuple[int, ...]
    head_index: int

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.token_indices)))
        object.__setattr__(self, "token_indices", ordered)
        if not ordered:
            raise ValueError("empty span")
        if self.head_index not in ordered:
            raise ValueError("span head must be a member of the span")

    def __len__(self) -> int:
        return len(self.token_indices)

    @property
    def start(self) -> int:
        return self.token_indices[0]

    @property
    def end(self) -> int:
        return self.token_indices[-1]

    @property
    def is_contiguous(self) -> bool:
        return self.end - self.start + 1 == len(self.token_indices)


@dataclass(frozen=True)
class ParseError:
    """A diagnostic for one skipped sentence or row."""

    line: int
    message: str
    sentence_id: str = ""


def validate_tree(tokens: Sequence[Token]) -> str | None:
    """Return an error message if the token list is not a well-formed tree."""
    if not tokens:
        return "sentence has no token rows"
    n = len(tokens)
    for pos, tok in enumerate(tokens, start=1):
        if tok.index != pos:
            return f"token ids not contiguous at position {pos} (saw {tok.index})"
        if not tok.form:
            return f"token {pos} has an empty form"
        if tok.head == tok.index:
            return f"token {pos} is its own head"
        if not 0 <= tok.head <= n:
            return f"token {pos} has head {tok.head} out of range 0..{n}"
    roots = [tok.index for tok in tokens if tok.head == 0]
    if len(roots) != 1:
        return f"expected exactly one root, found {len(roots)}"
    # Every token must reach the root; anything else is a head cycle.
    reaches_root = {0}
    for tok in tokens:
        path = []
        cur = tok.index
        while cur not in reaches_root:
            if cur in path:
                return f"head cycle involving token {cur}"
            path.append(cur)
            cur = tokens[cur - 1].head
        reaches_root.update(path)
    return None


def _numbered_lines(source: str | bytes | Path | IO) -> Iterator[tuple[int, str]]:
    if isinstance(source, Path):
        with source.open("r", encoding="utf-8") as handle:
            yield from enumerate(handle, start=1)
        return
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        yield from enumerate(io.StringIO(source), start=1)
        return
    yield from enumerate(source, start=1)


def _parse_block(
    block: list[tuple[int, str]], ordinal: int, errors: list[ParseError]
) -> DepTree | None:
    sentence_id = ""
    metadata: dict[str, str] = {}
    tokens: list[Token] = []
    first_line = block[0][0]
    for line_no, line in block:
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                key, value = key.strip(), value.strip()
                if key == "sent_id":
                    sentence_id = value
                else:
                    metadata[key] = value
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            errors.append(
                ParseError(
                    line_no,
                    f"expected {N_COLUMNS} tab-separated columns, got {len(cols)}",
                    sentence_id,
                )
            )
            return None
        if "-" in cols[0] or "." in cols[0]:
            continue  # multiword-token range or empty node
        try:
            index = int(cols[0])
            head = int(cols[6])
        except ValueError:
            errors.append(
                ParseError(line_no, f"non-integer id or head: {cols[0]!r}/{cols[6]!r}", sentence_id)
            )
            return None
        tokens.append(
            Token(
                index=index,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                head=head,
                deprel=cols[7],
            )
        )
    if not sentence_id:
        sentence_id = f"s{ordinal}"
    problem = validate_tree(tokens)
    if problem is not None:
        errors.append(ParseError(first_line, problem, sentence_id))
        return None
    return DepTree(tokens=tokens, sentence_id=sentence_id, metadata=metadata)


def parse_treebank(
    source: str | bytes | Path | IO,
    errors: list[ParseError] | None = None,
) -> Iterator[DepTree]:
    """Yield one :class:`DepTree` per sentence block of a CoNLL-U stream.

    ``source`` may be a :class:`~pathlib.Path`, an open text handle, or the
    document content itself as ``str``/``bytes``. Sentences that fail to
    parse or validate are skipped and recorded in ``errors`` (if given);
    content problems never raise.
    """
    sink = errors if errors is not None else []
    block: list[tuple[int, str]] = []
    ordinal = 0
    for line_no, raw in _numbered_lines(source):
        line = raw.rstrip("\r\n")
        if line.strip() == "":
            if block:
                ordinal += 1
                tree = _parse_block(block, ordinal, sink)
                if tree is not None:
                    yield tree
                block = []
            continue
        block.append((line_no, line))
    if block:
        ordinal += 1
        tree = _parse_block(block, ordinal, sink)
        if tree is not None:
            yield tree


def load_treebank(path: Path | str) -> tuple[list[DepTree], list[ParseError]]:
    """Read a whole file, returning the parsed trees and the error log."""
    errors: list[ParseError] = []
    trees = list(parse_treebank(Path(path), errors))
    return trees, errors


def emit_sentence(tree: DepTree) -> str:
    lines = []
    if tree.sentence_id:
        lines.append(f"# sent_id = {tree.sentence_id}")
    for key, value in tree.metadata.items():
        lines.append(f"# {key} = {value}")
    for tok in tree.tokens:
        lemma = tok.lemma if tok.lemma else "_"
        lines.append(
            f"{tok.index}\t{tok.form}\t{lemma}\t{tok.upos}\t_\t_\t{tok.head}\t{tok.deprel}\t_\t_"
        )
    return "\n".join(lines) + "\n\n"


def emit_treebank(trees: Iterable[DepTree]) -> str:
    """Serialize trees to CoNLL-U text; ``parse_treebank`` round-trips it."""
    return "".join(emit_sentence(tree) for tree in trees)


def write_treebank(trees: Iterable[DepTree], path: Path | str) -> int:
    count = 0
    with Path(path).open("w", encoding="utf-8") as handle:
        for tree in trees:
            handle.write(emit_sentence(tree))
            count += 1
    return count


def subtree_span(tree: DepTree, node: int) -> Span:
    """All tokens reachable from ``node`` through the head relation."""
    tree.token(node)  # range check
    reach = [node]
    stack = [node]
    while stack:
        current = stack.pop()
        for child in tree.children(current):
            reach.append(child)
            stack.append(child)
    return Span(tuple(reach), node)
