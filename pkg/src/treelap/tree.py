"""Index arithmetic for regular m-branching rooted trees truncated at a depth.

Nodes are addressed by their digit path from the root: the root is the empty
path, and the children of ``x`` are ``x`` with one more digit in
``{0, .., m-1}`` appended.  A :class:`TruncatedTree` fixes the breadth-first
node order (levels ascending, digits ascending within a level), which makes
the parent of the node at flat index ``i > 0`` sit at ``(i - 1) // m`` and
its children at ``m*i + 1 .. m*i + m`` -- the usual heap layout.

The boundary of the infinite tree is modelled by a ghost level ``depth + 1``
on which every function is identically zero (homogeneous Dirichlet).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Tuple

from .errors import BoundsError, ConfigurationError, DomainError, FileFormatError

MAX_NODE_COUNT = 1 << 26  # refuse trees that cannot sensibly fit in memory


@dataclass(frozen=True)
class NodeId:
    """A tree vertex, identified by its digit path from the root."""

    path: Tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.path:
            if not isinstance(d, int) or d < 0:
                raise DomainError(f"path digits must be non-negative ints, got {d!r}")

    @property
    def level(self) -> int:
        return len(self.path)

    @property
    def is_root(self) -> bool:
        return not self.path


ROOT = NodeId()


def parent(node: NodeId) -> NodeId:
    """Immediate predecessor; the root has none."""
    if node.is_root:
        raise DomainError("the root has no parent")
    return NodeId(node.path[:-1])


def children(node: NodeId, m: int) -> list[NodeId]:
    """The m successors of ``node``, in ascending digit order."""
    _check_m(m)
    return [NodeId(node.path + (i,)) for i in range(m)]


def psi(node: NodeId, m: int) -> float:
    """Boundary coordinate of the branch through ``node`` padded with zeros.

    Computed exactly as a rational sum of digit/m^k terms and converted to
    float only on return.
    """
    _check_m(m)
    _check_digits(node.path, m)
    acc = Fraction(0)
    den = 1
    for d in node.path:
        den *= m
        acc += Fraction(d, den)
    return float(acc)


def psi_fraction(node: NodeId, m: int) -> Fraction:
    """Exact rational value of :func:`psi`."""
    _check_m(m)
    _check_digits(node.path, m)
    acc = Fraction(0)
    den = 1
    for d in node.path:
        den *= m
        acc += Fraction(d, den)
    return acc


def format_path(node: NodeId) -> str:
    """Dot-separated digit text; the root formats as the empty string."""
    return ".".join(str(d) for d in node.path)


def parse_path(text: str, m: int) -> NodeId:
    """Inverse of :func:`format_path`; validates digits against ``m``."""
    _check_m(m)
    if text == "":
        return ROOT
    digits = []
    for part in text.split("."):
        try:
            d = int(part)
        except ValueError:
            raise FileFormatError(f"invalid path component {part!r} in {text!r}") from None
        if not 0 <= d < m:
            raise FileFormatError(f"digit {d} out of range for branching factor {m} in {text!r}")
        digits.append(d)
    return NodeId(tuple(digits))


def _check_m(m: int) -> None:
    if not isinstance(m, int) or m < 2:
        raise DomainError(f"branching factor must be an int >= 2, got {m!r}")


def _check_digits(path: Sequence[int], m: int) -> None:
    for d in path:
        if d >= m:
            raise DomainError(f"digit {d} invalid for branching factor {m}")


@dataclass(frozen=True)
class TruncatedTree:
    """A depth-``depth`` truncation of the regular m-branching tree.

    ``level_start[k]`` is the flat index of the first level-k node;
    ``level_start[depth + 1]`` equals the node count.
    """

    m: int
    depth: int
    level_start: Tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        _check_m(self.m)
        if not isinstance(self.depth, int) or self.depth < 0:
            raise DomainError(f"depth must be a non-negative int, got {self.depth!r}")
        starts = [0]
        size = 1
        for _ in range(self.depth + 1):
            starts.append(starts[-1] + size)
            size *= self.m
        if starts[-1] > MAX_NODE_COUNT:
            raise ConfigurationError(
                f"tree with m={self.m}, depth={self.depth} has {starts[-1]} nodes; "
                f"limit is {MAX_NODE_COUNT}")
        object.__setattr__(self, "level_start", tuple(starts))

    @property
    def n_nodes(self) -> int:
        return self.level_start[-1]

    def level_size(self, k: int) -> int:
        self._check_level(k)
        return self.level_start[k + 1] - self.level_start[k]

    def level_slice(self, k: int) -> slice:
        self._check_level(k)
        return slice(self.level_start[k], self.level_start[k + 1])

    def node_index(self, node: NodeId) -> int:
        """Breadth-first flat index of ``node``; root is 0."""
        k = node.level
        self._check_level(k)
        _check_digits(node.path, self.m)
        rank = 0
        for d in node.path:
            rank = rank * self.m + d
        return self.level_start[k] + rank

    def index_node(self, index: int) -> NodeId:
        """Inverse of :meth:`node_index`."""
        if not 0 <= index < self.n_nodes:
            raise BoundsError(f"index {index} outside 0..{self.n_nodes - 1}")
        k = 0
        while self.level_start[k + 1] <= index:
            k += 1
        rank = index - self.level_start[k]
        digits = [0] * k
        for pos in range(k - 1, -1, -1):
            rank, digits[pos] = divmod(rank, self.m)
        return NodeId(tuple(digits))

    def parent_index(self, index: int) -> int:
        if index == 0:
            raise DomainError("the root has no parent")
        if not 0 < index < self.n_nodes:
            raise BoundsError(f"index {index} outside 1..{self.n_nodes - 1}")
        return (index - 1) // self.m

    def child_indices(self, index: int) -> range:
        if not 0 <= index < self.level_start[self.depth]:
            raise BoundsError(f"node {index} has no in-tree children")
        return range(self.m * index + 1, self.m * index + self.m + 1)

    def level_of(self, index: int) -> int:
        if not 0 <= index < self.n_nodes:
            raise BoundsError(f"index {index} outside 0..{self.n_nodes - 1}")
        k = 0
        while self.level_start[k + 1] <= index:
            k += 1
        return k

    def iter_nodes(self) -> Iterator[NodeId]:
        for i in range(self.n_nodes):
            yield self.index_node(i)

    def _check_level(self, k: int) -> None:
        if not 0 <= k <= self.depth:
            raise BoundsError(f"level {k} outside 0..{self.depth}")
