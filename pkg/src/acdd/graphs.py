"""Defense/attack network structures: construction, validation, normalization,
random perturbation, and spectral extremes of the row-normalized matrix.

Edges are ordered pairs (u, v) meaning u influences v, so v's in-neighbors
are {u : (u, v) in E}. Undirected graphs store both orientations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    DuplicateEdge,
    EigenSolverFailure,
    GenerationFailed,
    IsolatedNode,
    NotEnoughEdges,
    NotEnoughNonEdges,
    SelfLoop,
)

DENSE_EIG_LIMIT = 2048
ITERATIVE_TOL = 1e-10
ITERATIVE_MAX_ITER = 100_000


@dataclass(frozen=True)
class Graph:
    """Simple directed or undirected graph; undirected edge sets are symmetric."""

    node_count: int
    directed: bool
    edges: frozenset[tuple[int, int]]
    in_degree: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        deg = [0] * self.node_count
        for u, v in self.edges:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.node_count}")
            deg[v] += 1
        object.__setattr__(self, "in_degree", tuple(deg))

    @property
    def edge_count(self) -> int:
        """Number of edges; an undirected edge counts once."""
        return len(self.edges) // 2 if not self.directed else len(self.edges)

    def in_neighbors(self, v: int) -> list[int]:
        return sorted(u for u, w in self.edges if w == v)

    def canonical_edges(self) -> list[tuple[int, int]]:
        """Sorted edge list; undirected edges listed once as (min, max)."""
        if self.directed:
            return sorted(self.edges)
        return sorted({(min(u, v), max(u, v)) for u, v in self.edges})


@dataclass(frozen=True)
class EdgeDelta:
    """Edges removed from and added to a graph (canonical orientation)."""

    removed: tuple[tuple[int, int], ...]
    added: tuple[tuple[int, int], ...]


class RowStochasticMatrix:
    """C = D^-1 A for a validated graph; every row sums to 1."""

    def __init__(self, matrix: sp.csr_matrix):
        matrix = sp.csr_matrix(matrix)
        n1, n2 = matrix.shape
        if n1 != n2:
            raise ValueError("row-stochastic matrix must be square")
        sums = np.asarray(matrix.sum(axis=1)).ravel()
        if not np.allclose(sums, 1.0, atol=1e-12, rtol=0):
            raise ValueError("rows must sum to 1 within 1e-12")
        data = matrix.data
        if data.size and (data.min() < 0 or data.max() > 1):
            raise ValueError("entries must lie in [0, 1]")
        self.matrix = matrix
        self.n = n1

    def dot(self, x: np.ndarray) -> np.ndarray:
        return self.matrix.dot(x)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


def _undirected_pairs(edges) -> frozenset[tuple[int, int]]:
    sym = set()
    for u, v in edges:
        sym.add((u, v))
        sym.add((v, u))
    return frozenset(sym)


def make_graph(node_count: int, directed: bool, edges) -> Graph:
    """Build and validate a Graph from an iterable of edges.

    For undirected graphs the input may list each edge once; the symmetric
    closure is stored.
    """
    edge_list = [tuple(e) for e in edges]
    seen = set()
    for e in edge_list:
        key = e if directed else (min(e), max(e))
        if key in seen:
            raise DuplicateEdge(*e)
        seen.add(key)
    edge_set = frozenset(edge_list)
    if not directed:
        edge_set = _undirected_pairs(edge_set)
    g = Graph(node_count=node_count, directed=directed, edges=edge_set)
    validate(g)
    return g


def validate(g: Graph) -> None:
    """Raise unless g is simple, self-loop-free, with min in-degree >= 1."""
    for u, v in g.edges:
        if u == v:
            raise SelfLoop(u)
    if not g.directed:
        for u, v in g.edges:
            if (v, u) not in g.edges:
                raise ValueError(f"undirected graph missing reverse edge ({v}, {u})")
    isolated = [v for v in range(g.node_count) if g.in_degree[v] == 0]
    if isolated:
        raise IsolatedNode(isolated)


def generate_er(n: int, p: float, directed: bool, seed: int,
                max_retries: int = 100) -> Graph:
    """Erdos-Renyi G(n, p), resampled wholesale until no node is isolated."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        if directed:
            mask = rng.random((n, n)) < p
            np.fill_diagonal(mask, False)
            us, vs = np.nonzero(mask)
            edge_set = frozenset(zip(us.tolist(), vs.tolist()))
        else:
            mask = rng.random((n, n)) < p
            mask = np.triu(mask, k=1)
            us, vs = np.nonzero(mask)
            pairs = list(zip(us.tolist(), vs.tolist()))
            edge_set = _undirected_pairs(pairs)
        g = Graph(node_count=n, directed=directed, edges=edge_set)
        if min(g.in_degree) >= 1:
            validate(g)
            return g
    raise GenerationFailed(
        f"no isolated-node-free ER({n}, {p}) instance in {max_retries} attempts")


def row_normalized(g: Graph) -> RowStochasticMatrix:
    """C[v][u] = 1/deg(v) for each in-neighbor u of v."""
    validate(g)
    n = g.node_count
    rows, cols, vals = [], [], []
    deg = g.in_degree
    for u, v in g.edges:
        rows.append(v)
        cols.append(u)
        vals.append(1.0 / deg[v])
    c = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return RowStochasticMatrix(c)


def spectrum_extremes(c: RowStochasticMatrix) -> tuple[complex, complex]:
    """Eigenvalues of C with the largest and smallest real parts.

    The largest must be 1 (Perron-Frobenius for a row-stochastic matrix);
    a violation beyond 1e-8 is reported as a solver failure.
    """
    if c.n <= DENSE_EIG_LIMIT:
        eigs = np.linalg.eigvals(c.toarray())
        mu_max = eigs[np.argmax(eigs.real)]
        mu_min = eigs[np.argmin(eigs.real)]
    else:
        mu_max = _power_iteration(c.matrix)
        # shifted spectrum: eig(2I - C) = 2 - eig(C), dominated by 2 - mu_min
        shifted = 2.0 * sp.identity(c.n, format="csr") - c.matrix
        mu_min = 2.0 - _power_iteration(shifted)
    if abs(mu_max.real - 1.0) > 1e-8:
        raise EigenSolverFailure(
            f"leading eigenvalue {mu_max} deviates from 1 beyond 1e-8")
    return complex(mu_max), complex(mu_min)


def _power_iteration(m: sp.csr_matrix) -> complex:
    rng = np.random.default_rng(0)
    x = rng.standard_normal(m.shape[0])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(ITERATIVE_MAX_ITER):
        y = m.dot(x)
        norm = np.linalg.norm(y)
        if norm == 0.0:
            raise EigenSolverFailure("power iteration hit the zero vector")
        y /= norm
        lam_new = y.dot(m.dot(y))
        if abs(lam_new - lam) <= ITERATIVE_TOL:
            return complex(lam_new)
        lam, x = lam_new, y
    raise EigenSolverFailure("power iteration did not converge")


def perturb_edges(g: Graph, delete_count: int, add_count: int,
                  seed: int) -> tuple[Graph, EdgeDelta]:
    """Delete/add edges uniformly at random without replacement.

    Raises IsolatedNode if deletions strand a node; callers wishing to
    resample should retry with a fresh seed.
    """
    rng = np.random.default_rng(seed)
    current = g.canonical_edges()
    if delete_count > len(current):
        raise NotEnoughEdges(f"cannot delete {delete_count} of {len(current)} edges")

    n = g.node_count
    total_pairs = n * (n - 1) if g.directed else n * (n - 1) // 2
    if add_count > total_pairs - len(current):
        raise NotEnoughNonEdges(
            f"cannot add {add_count} edges; only {total_pairs - len(current)} absent pairs")

    removed_idx = rng.choice(len(current), size=delete_count, replace=False)
    removed = tuple(current[i] for i in sorted(removed_idx.tolist()))
    removed_set = set(removed)
    kept = [e for e in current if e not in removed_set]

    present = set(kept)
    added = []
    while len(added) < add_count:
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u == v:
            continue
        if not g.directed and u > v:
            u, v = v, u
        if (u, v) in present:
            continue
        present.add((u, v))
        added.append((u, v))

    return make_graph(n, g.directed, kept + added), EdgeDelta(tuple(removed), tuple(added))


def apply_delta(g: Graph, delta: EdgeDelta) -> Graph:
    edges = set(g.canonical_edges())
    for e in delta.removed:
        edges.discard(e)
    edges.update(delta.added)
    return make_graph(g.node_count, g.directed, edges)


def reverse_delta(g: Graph, delta: EdgeDelta) -> Graph:
    """Undo a delta previously applied to produce g."""
    edges = set(g.canonical_edges())
    for e in delta.added:
        edges.discard(e)
    edges.update(delta.removed)
    return make_graph(g.node_count, g.directed, edges)


# -- graph file format --------------------------------------------------------
# first line: "n <count> directed <0|1>", then "u v" per edge (undirected once)

def write_graph_file(g: Graph, path) -> None:
    lines = [f"n {g.node_count} directed {1 if g.directed else 0}"]
    lines += [f"{u} {v}" for u, v in g.canonical_edges()]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_graph_file(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"empty graph file: {path}")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "directed":
        raise ValueError(f"bad graph header: {lines[0]!r}")
    n = int(head[1])
    directed = bool(int(head[3]))
    edges = []
    for ln in lines[1:]:
        u, v = ln.split()
        edges.append((int(u), int(v)))
    return make_graph(n, directed, edges)
