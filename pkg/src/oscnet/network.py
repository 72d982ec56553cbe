"""Harmonic quantum networks: graphs, Laplacians and node entanglement.

Each node of an undirected simple graph carries a unit-mass, unit-frequency
oscillator and neighbours are coupled through the graph Laplacian ``L``::

    H = 1/2 (p^T p + x^T (I + 2 c L) x)

For the (pure) ground state the entropy of a single node equals its
entanglement with the rest of the network.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import GenerationFailure, InvalidParameter, NonPositivePotential
from .gaussian import QuadraticHamiltonian, ground_state, mode_entropy

SeedLike = Union[int, np.random.Generator, None]

MODELS = ("er", "rrg", "sf-conf", "sf-ba")


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``0..n_nodes-1``.

    Edges are stored as sorted ``(u, v)`` pairs with ``u < v``.
    """

    n_nodes: int
    edges: frozenset

    def __post_init__(self):
        if self.n_nodes < 1:
            raise InvalidParameter("a graph needs at least one node")
        clean = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidParameter(f"self-loop at node {u}")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise InvalidParameter(f"edge ({u}, {v}) out of range")
            clean.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n_nodes, frozenset(edges))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n_nodes, self.n_nodes))
        if self.edges:
            u, v = np.array(self.sorted_edges()).T
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_nodes, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def to_edgelist(self) -> str:
        """Text edge list: a ``# nodes=<n>`` header then one ``u v`` per line."""
        lines = [f"# nodes={self.n_nodes}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "Graph":
        n_nodes = None
        edges = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key.strip() == "nodes":
                    n_nodes = int(value)
                continue
            u, v = line.split()
            edges.append((int(u), int(v)))
        if n_nodes is None:
            raise InvalidParameter("edge list is missing the '# nodes=<n>' header")
        keys = {(min(e), max(e)) for e in edges}
        if len(keys) != len(edges):
            raise InvalidParameter("edge list contains repeated edges")
        return cls(n_nodes, frozenset(edges))

    def write(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write(self.to_edgelist())

    @classmethod
    def read(cls, path) -> "Graph":
        with open(path) as fh:
            return cls.from_edgelist(fh.read())


def laplacian(g: Graph) -> np.ndarray:
    """``L = diag(k) - A``."""
    a = g.adjacency()
    return np.diag(a.sum(axis=1)) - a


def network_hamiltonian(g: Graph, c: float) -> QuadraticHamiltonian:
    """Unit masses and potential ``I + 2 c L``."""
    lap = laplacian(g)
    if c < 0:
        top = np.linalg.eigvalsh(lap)[-1]
        if 1.0 + 2.0 * c * top <= 0:
            raise NonPositivePotential(
                f"c={c} violates the stability bound c > {-1.0 / (2.0 * top):.6g}"
            )
    return QuadraticHamiltonian(np.eye(g.n_nodes) + 2.0 * c * lap)


# -- generators ---------------------------------------------------------------


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def path(n: int) -> Graph:
    if n < 2:
        raise InvalidParameter("path needs n >= 2")
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def ring(n: int) -> Graph:
    if n < 3:
        raise InvalidParameter("ring needs n >= 3")
    return Graph(n, frozenset((min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)))


def star(n_leaves: int) -> Graph:
    """Node 0 joined to ``n_leaves`` leaves."""
    return Graph(n_leaves + 1, frozenset((0, i) for i in range(1, n_leaves + 1)))


def erdos_renyi(n: int, mean_degree: float, seed: SeedLike = None) -> Graph:
    """G(n, p) with ``p = mean_degree / (n - 1)``."""
    if n < 1 or not (0 <= mean_degree <= max(n - 1, 0)):
        raise InvalidParameter(f"need 0 <= mean_degree <= n-1, got {mean_degree} for n={n}")
    if n == 1:
        return empty_graph(1)
    p = mean_degree / (n - 1)
    rng = _rng(seed)
    u, v = np.triu_indices(n, k=1)
    keep = rng.random(u.size) < p
    return Graph(n, frozenset(zip(u[keep].tolist(), v[keep].tolist())))


def configuration_model(
    degrees, seed: SeedLike = None, max_restarts: int = 1000
) -> Graph:
    """Simple graph with exactly the given degree sequence.

    Stubs are paired at random; a pair that would form a self-loop or repeat
    an edge is rejected and its stubs go back into the pool for the next
    round. When no admissible pair is left the whole matching restarts.
    """
    deg = np.asarray(degrees, dtype=int)
    n = deg.size
    if np.any(deg < 0) or deg.sum() % 2:
        raise InvalidParameter("degree sequence must be nonnegative with an even sum")
    if n and deg.max(initial=0) >= n:
        raise InvalidParameter("a degree is not smaller than the number of nodes")
    rng = _rng(seed)
    base_stubs = np.repeat(np.arange(n), deg)
    for _ in range(max_restarts):
        edges = _try_matching(base_stubs, rng)
        if edges is not None:
            return Graph(n, frozenset(edges))
    raise GenerationFailure(f"stub matching failed after {max_restarts} restarts")


def _try_matching(stubs: np.ndarray, rng: np.random.Generator) -> set | None:
    edges: set[tuple[int, int]] = set()
    while stubs.size:
        stubs = rng.permutation(stubs)
        left: dict[int, int] = defaultdict(int)
        for s1, s2 in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                left[s1] += 1
                left[s2] += 1
        if not left:
            return edges
        if not _has_admissible_pair(left, edges):
            return None
        stubs = np.repeat(np.fromiter(left.keys(), dtype=int), list(left.values()))
    return edges


def _has_admissible_pair(left: dict[int, int], edges: set) -> bool:
    nodes = sorted(left)
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if (u, v) not in edges:
                return True
    return False


def random_regular(n: int, k: int, seed: SeedLike = None, max_restarts: int = 1000) -> Graph:
    if k < 0 or k >= n or (n * k) % 2:
        raise InvalidParameter(f"random regular graph needs n*k even and 0 <= k < n (n={n}, k={k})")
    if k == 0:
        return empty_graph(n)
    return configuration_model(np.full(n, k), seed, max_restarts)


def barabasi_albert(n: int, m: int, seed: SeedLike = None) -> Graph:
    """Preferential attachment grown from an ``m``-node clique.

    Every new node links to ``m`` distinct existing nodes chosen with
    probability proportional to their current degree.
    """
    if not (1 <= m < n):
        raise InvalidParameter(f"need 1 <= m < n, got m={m}, n={n}")
    rng = _rng(seed)
    edges = {(u, v) for u in range(m) for v in range(u + 1, m)}
    deg = np.zeros(n)
    deg[:m] = m - 1
    for new in range(m, n):
        weights = deg[:new]
        total = weights.sum()
        if total == 0:
            # the one-node seed of m=1 has no edges yet
            targets = rng.choice(new, size=m, replace=False)
        else:
            targets = rng.choice(new, size=m, replace=False, p=weights / total)
        for t in targets.tolist():
            edges.add((t, new))
            deg[t] += 1
        deg[new] = m
    return Graph(n, frozenset(edges))


def power_law_weights(k_min: int, k_max: int, exponent: float = 3.0) -> tuple[np.ndarray, np.ndarray]:
    """Support and normalized probabilities of ``P(k) ~ k^-exponent``."""
    support = np.arange(k_min, k_max + 1)
    w = support.astype(float) ** (-exponent)
    return support, w / w.sum()


def sf_configuration(
    n: int,
    k_min: int,
    seed: SeedLike = None,
    exponent: float = 3.0,
    k_max: int | None = None,
    max_restarts: int = 1000,
) -> Graph:
    """Scale-free configuration-model graph.

    Degrees are drawn from ``P(k) ~ k^-exponent`` on ``[k_min, k_max]`` where
    ``k_max`` defaults to ``floor(sqrt(n))``. An odd degree sum is fixed by
    redrawing the degree of one random node until the parity flips.
    """
    if k_max is None:
        k_max = math.isqrt(n)
    if k_min < 1 or k_max < k_min or k_max >= n:
        raise InvalidParameter(f"invalid degree support [{k_min}, {k_max}] for n={n}")
    rng = _rng(seed)
    support, prob = power_law_weights(k_min, k_max, exponent)
    deg = rng.choice(support, size=n, p=prob)
    if deg.sum() % 2:
        victim = int(rng.integers(n))
        old = deg[victim]
        if not np.any((support - old) % 2):
            raise GenerationFailure("every admissible degree sequence has an odd sum")
        for _ in range(10_000):
            new = rng.choice(support, p=prob)
            if (new - old) % 2:
                deg[victim] = new
                break
        else:
            raise GenerationFailure("could not make the degree sum even")
    return configuration_model(deg, rng, max_restarts)


# -- entanglement --------------------------------------------------------------


def node_entropies(g: Graph, c: float) -> np.ndarray:
    """Ground-state entropy (nats) of every single node."""
    state = ground_state(network_hamiltonian(g, c))
    nu = np.sqrt(np.clip(np.diag(state.sigma_xx) * np.diag(state.sigma_pp), 0.25, None))
    return mode_entropy(nu)


def node_entropy_profile(g: Graph, c: float) -> list[tuple[int, int, float]]:
    """``(node, degree, S_i)`` for every node."""
    s = node_entropies(g, c)
    deg = g.degrees()
    return [(i, int(deg[i]), float(s[i])) for i in range(g.n_nodes)]


@dataclass(frozen=True)
class EnsembleSpec:
    """A random graph model and its size/degree parameter.

    ``param`` is the mean degree (``er``), the degree (``rrg``), ``m``
    (``sf-ba``) or ``k_min`` (``sf-conf``).
    """

    model: str
    n: int
    param: float

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidParameter(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.n < 1:
            raise InvalidParameter("n must be positive")

    def sample(self, seed: SeedLike) -> Graph:
        if self.model == "er":
            return erdos_renyi(self.n, float(self.param), seed)
        if self.model == "rrg":
            return random_regular(self.n, _as_int(self.param), seed)
        if self.model == "sf-ba":
            return barabasi_albert(self.n, _as_int(self.param), seed)
        return sf_configuration(self.n, _as_int(self.param), seed)


def _as_int(value) -> int:
    if float(value) != int(value):
        raise InvalidParameter(f"expected an integer parameter, got {value}")
    return int(value)


def realization_seed(master_seed: int, index: int) -> int:
    """Seed of realization ``index``, mixed from ``master_seed`` by
    :class:`numpy.random.SeedSequence` (stable across platforms)."""
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class DegreeStats:
    mean: float
    std: float
    count: int


class DegreeProfile(dict):
    """``degree -> DegreeStats`` for ensemble-averaged node entropies."""

    def degrees(self) -> list[int]:
        return sorted(self)

    def means(self, min_count: int = 1) -> tuple[np.ndarray, np.ndarray]:
        ks = [k for k in self.degrees() if self[k].count >= min_count]
        return np.array(ks, dtype=int), np.array([self[k].mean for k in ks])

    def rows(self) -> Iterator[tuple[int, float, float, int]]:
        for k in self.degrees():
            st = self[k]
            yield k, st.mean, st.std, st.count

    @property
    def total_count(self) -> int:
        return sum(st.count for st in self.values())


def aggregate_by_degree(samples: Iterable[tuple[int, float]]) -> DegreeProfile:
    groups: dict[int, list[float]] = defaultdict(list)
    for k, s in samples:
        groups[int(k)].append(float(s))
    profile = DegreeProfile()
    for k in sorted(groups):
        vals = np.sort(np.array(groups[k]))
        profile[k] = DegreeStats(float(vals.mean()), float(vals.std()), int(vals.size))
    return profile


def degree_profile(
    ensemble: EnsembleSpec, c: float, realizations: int, seed: int = 0
) -> DegreeProfile:
    """Mean node entropy per exact degree, pooled over seeded realizations."""
    if realizations < 1:
        raise InvalidParameter("realizations must be >= 1")
    samples = []
    for r in range(realizations):
        g = ensemble.sample(realization_seed(seed, r))
        s = node_entropies(g, c)
        samples.extend(zip(g.degrees().tolist(), s.tolist()))
    return aggregate_by_degree(samples)
