"""The weighted tree Laplacian and the function types it acts on.

At the root the operator is the plain mean of the children minus the root
value; away from the root it is

    (beta * u(parent) + (1 - beta)/m * sum(children) - u(x)) * p**(-level)

with the weight ratio ``p = beta / (1 - beta)`` (``p = 1`` at ``beta = 0``).
Functions restricted to level-constant values close under the operator, where
it reduces to a three-term chain that never reads the branching factor.

Truncation semantics: every function carries an implicit ghost level
``depth + 1`` pinned to zero, so operator applications are total.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .errors import ConfigurationError, DomainError, FileFormatError
from .tree import TruncatedTree, format_path, parse_path

_DBL_MAX = float(np.finfo(np.float64).max)


@dataclass(frozen=True)
class BetaWeight:
    """The weight parameter together with its derived parent/child ratio."""

    beta: float
    p: float

    def inv_p_powers(self, depth: int) -> np.ndarray:
        """Table of p**(-k) for k = 0..depth; rejects overflowing pairs."""
        require_admissible(self, depth)
        return self.p ** -np.arange(depth + 1, dtype=float)

    def p_powers(self, depth: int) -> np.ndarray:
        require_admissible(self, depth)
        return self.p ** np.arange(depth + 1, dtype=float)


def make_beta(beta: float) -> BetaWeight:
    """Validate ``beta`` and attach the two-case weight ratio."""
    beta = float(beta)
    if not 0.0 <= beta < 1.0 or math.isnan(beta):
        raise DomainError(f"beta must lie in [0, 1), got {beta}")
    p = 1.0 if beta == 0.0 else beta / (1.0 - beta)
    return BetaWeight(beta=beta, p=p)


def max_admissible_depth(bw: BetaWeight) -> int:
    """Largest depth whose level-weight table p**(-k) stays finite.

    For p >= 1 the inverse powers only shrink, and the positive powers used
    by the shooting recurrence cap the depth instead.
    """
    if bw.p == 1.0:
        return 1 << 30
    base = max(bw.p, 1.0 / bw.p)
    return int(math.floor(math.log(_DBL_MAX) / math.log(base)))


def require_admissible(bw: BetaWeight, depth: int) -> None:
    if depth < 0:
        raise DomainError(f"depth must be >= 0, got {depth}")
    limit = max_admissible_depth(bw)
    if depth > limit:
        raise ConfigurationError(
            f"depth {depth} inadmissible at beta={bw.beta}: the level weight table "
            f"overflows double precision beyond depth {limit}")


@dataclass(frozen=True)
class LevelFunction:
    """A function constant on each level, stored as the values at levels
    0..depth with an implicit zero ghost level below."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise DomainError("a level function needs a 1-d, non-empty value array")
        if not np.all(np.isfinite(v)):
            raise DomainError("level function values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def depth(self) -> int:
        return self.values.size - 1


@dataclass(frozen=True)
class TreeFunction:
    """A function on every node of a truncated tree, in breadth-first order."""

    tree: TruncatedTree
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.tree.n_nodes,):
            raise DomainError(
                f"value count {v.size} does not match the {self.tree.n_nodes}-node tree")
        if not np.all(np.isfinite(v)):
            raise DomainError("tree function values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def depth(self) -> int:
        return self.tree.depth

    def level_values(self, k: int) -> np.ndarray:
        return self.values[self.tree.level_slice(k)]

    def is_level_constant(self) -> bool:
        """True when all nodes of each level share one value (exact compare)."""
        t = self.tree
        for k in range(t.depth + 1):
            lv = self.values[t.level_slice(k)]
            if lv.size and not np.all(lv == lv[0]):
                return False
        return True


def embed_level_function(tree: TruncatedTree, lf: LevelFunction) -> TreeFunction:
    """Spread level values over all nodes of a tree of the same depth."""
    if lf.depth != tree.depth:
        raise DomainError(f"level function depth {lf.depth} != tree depth {tree.depth}")
    out = np.empty(tree.n_nodes)
    for k in range(tree.depth + 1):
        out[tree.level_slice(k)] = lf.values[k]
    return TreeFunction(tree, out)


def apply_laplacian_tree(tree: TruncatedTree, bw: BetaWeight, u: TreeFunction) -> TreeFunction:
    """Apply the operator node-wise; ghost children below the last level read 0."""
    if u.tree != tree:
        raise DomainError("function is not defined on the given tree")
    require_admissible(bw, tree.depth)
    out = kernels.impl.tree_laplacian(u.values, tree.m, tree.depth, bw.beta, bw.p)
    return TreeFunction(tree, out)


def apply_laplacian_level(bw: BetaWeight, u: LevelFunction) -> LevelFunction:
    """Chain form on level-constant functions; independent of the branching factor."""
    require_admissible(bw, u.depth)
    out = kernels.impl.chain_laplacian(u.values, bw.beta, bw.p)
    return LevelFunction(out)


def level_average(tree: TruncatedTree, u: TreeFunction) -> LevelFunction:
    """Average over each level: the projection commuting with the operator."""
    if u.tree != tree:
        raise DomainError("function is not defined on the given tree")
    out = np.empty(tree.depth + 1)
    for k in range(tree.depth + 1):
        lv = u.values[tree.level_slice(k)]
        out[k] = lv.sum() / lv.size
    return LevelFunction(out)


@dataclass(frozen=True)
class ResidualReport:
    """Sup-norm of (Delta + lambda) u split into the interior levels
    0..depth-1 and the truncation-biased last level."""

    interior: float
    last_level: float


def residual_sup(bw: BetaWeight,
                 lam: float,
                 u: Union[LevelFunction, TreeFunction]) -> ResidualReport:
    """Residual sup-norms of the eigen-equation for ``lam``.

    The last level is reported separately: the ghost Dirichlet row
    intentionally perturbs the equation there.
    """
    if not math.isfinite(lam):
        raise DomainError(f"lambda must be finite, got {lam}")
    if isinstance(u, LevelFunction):
        res = apply_laplacian_level(bw, u).values + lam * u.values
        interior = float(np.max(np.abs(res[:-1]))) if u.depth >= 1 else 0.0
        last = float(abs(res[-1]))
        return ResidualReport(interior=interior, last_level=last)
    tree = u.tree
    res = apply_laplacian_tree(tree, bw, u).values + lam * u.values
    if tree.depth >= 1:
        interior = float(np.max(np.abs(res[: tree.level_start[tree.depth]])))
    else:
        interior = 0.0
    last = float(np.max(np.abs(res[tree.level_slice(tree.depth)])))
    return ResidualReport(interior=interior, last_level=last)


# ---------------------------------------------------------------------------
# CSV formats
# ---------------------------------------------------------------------------

def write_level_csv(path: str, lf: LevelFunction) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["level", "value"])
        for k, v in enumerate(lf.values):
            w.writerow([k, repr(float(v))])


def read_level_csv(path: str) -> LevelFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["level", "value"]:
        raise FileFormatError(f"{path}: expected header 'level,value'")
    vals = []
    for i, row in enumerate(rows[1:]):
        if len(row) != 2:
            raise FileFormatError(f"{path}: row {i + 1} does not have 2 columns")
        try:
            k, v = int(row[0]), float(row[1])
        except ValueError:
            raise FileFormatError(f"{path}: bad row {row!r}") from None
        if k != i:
            raise FileFormatError(f"{path}: expected level {i}, found {k}")
        vals.append(v)
    if not vals:
        raise FileFormatError(f"{path}: no data rows")
    return LevelFunction(np.array(vals))


def write_tree_csv(path: str, tf: TreeFunction) -> None:
    tree = tf.tree
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["path", "value"])
        for i in range(tree.n_nodes):
            w.writerow([format_path(tree.index_node(i)), repr(float(tf.values[i]))])


def read_tree_csv(path: str, tree: TruncatedTree) -> TreeFunction:
    """Rows may come in any order; every node must appear exactly once."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["path", "value"]:
        raise FileFormatError(f"{path}: expected header 'path,value'")
    values = np.full(tree.n_nodes, np.nan)
    for row in rows[1:]:
        if len(row) != 2:
            raise FileFormatError(f"{path}: row {row!r} does not have 2 columns")
        node = parse_path(row[0], tree.m)
        if node.level > tree.depth:
            raise FileFormatError(f"{path}: node {row[0]!r} is deeper than the tree")
        idx = tree.node_index(node)
        if not np.isnan(values[idx]):
            raise FileFormatError(f"{path}: duplicate node {row[0]!r}")
        try:
            values[idx] = float(row[1])
        except ValueError:
            raise FileFormatError(f"{path}: bad value {row[1]!r}") from None
    missing = np.isnan(values)
    if missing.any():
        idx = int(np.argmax(missing))
        raise FileFormatError(
            f"{path}: missing node {format_path(tree.index_node(idx))!r}")
    return TreeFunction(tree, values)
