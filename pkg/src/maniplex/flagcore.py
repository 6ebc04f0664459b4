"""Premaniplexes as arrays of involutions on a dense flag set.

A rank ``n`` premaniplex on ``m`` flags is stored as an ``(n, m)`` int64
array ``conns`` with ``conns[i, f]`` the ``i``-adjacent flag of ``f``.  A
semi-edge of colour ``i`` at ``f`` is a fixed point ``conns[i, f] == f``.

Objects are immutable once built; the arrays handed out are read-only.
"""
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import (CommutationFailure, Disconnected, EmptyInterval,
                     NotInvolution, OutOfRange, ValidationError)


def _check_connections(conns):
    n, m = conns.shape
    if n < 1 or m < 1:
        raise ValidationError("need rank >= 1 and at least one flag")
    if conns.min() < 0 or conns.max() >= m:
        bad = np.argwhere((conns < 0) | (conns >= m))[0]
        raise NotInvolution(int(bad[0]), int(bad[1]),
                            f"connection {bad[0]} maps flag {bad[1]} out of range")
    ident = np.arange(m)
    for i in range(n):
        bad = np.flatnonzero(conns[i][conns[i]] != ident)
        if bad.size:
            raise NotInvolution(i, int(bad[0]))
    for i in range(n):
        for j in range(i + 2, n):
            bad = np.flatnonzero(conns[i][conns[j]] != conns[j][conns[i]])
            if bad.size:
                raise CommutationFailure(i, j, int(bad[0]))
    labels = kernels.components(conns, range(n))
    k = int(labels.max()) + 1
    if k != 1:
        raise Disconnected(k)


class Premaniplex:
    """Connected edge-coloured graph whose colour classes are involutions.

    Build one with :func:`validate` or ``Premaniplex(connections)``; both run
    the full axiom check (involutions, distant colours commute, connected).
    """

    __slots__ = ("_conns", "_key")

    def __init__(self, connections):
        conns = np.array(connections, dtype=np.int64, copy=True)
        if conns.ndim != 2:
            raise ValidationError("connections must be a 2-d array (rank x flag_count)")
        _check_connections(conns)
        self._set(conns)

    @classmethod
    def _trusted(cls, conns):
        # for results of operations that preserve the axioms by construction
        obj = cls.__new__(cls)
        obj._set(np.ascontiguousarray(conns, dtype=np.int64))
        return obj

    def _set(self, conns):
        conns.setflags(write=False)
        self._conns = conns
        self._key = None

    @property
    def rank(self) -> int:
        return self._conns.shape[0]

    @property
    def flag_count(self) -> int:
        return self._conns.shape[1]

    @property
    def connections(self) -> np.ndarray:
        return self._conns

    def rooted(self, base_flag=0):
        return RootedPremaniplex(self, base_flag)

    def __eq__(self, other):
        if isinstance(other, RootedPremaniplex):
            other = other.premaniplex
        if not isinstance(other, Premaniplex):
            return NotImplemented
        return self._conns.shape == other._conns.shape and bool(
            np.array_equal(self._conns, other._conns))

    def __hash__(self):
        if self._key is None:
            self._key = hash((self._conns.shape, self._conns.tobytes()))
        return self._key

    def __repr__(self):
        return f"Premaniplex(rank={self.rank}, flag_count={self.flag_count})"


@dataclass(frozen=True)
class RootedPremaniplex:
    premaniplex: Premaniplex
    base_flag: int = 0

    def __post_init__(self):
        b = int(self.base_flag)
        if not 0 <= b < self.premaniplex.flag_count:
            raise OutOfRange(f"base flag {b} not in [0, {self.premaniplex.flag_count})")
        object.__setattr__(self, "base_flag", b)

    @property
    def rank(self):
        return self.premaniplex.rank

    @property
    def flag_count(self):
        return self.premaniplex.flag_count

    @property
    def connections(self):
        return self.premaniplex.connections

    def __repr__(self):
        return (f"RootedPremaniplex(rank={self.rank}, flag_count={self.flag_count}, "
                f"base_flag={self.base_flag})")


def validate(rank, flag_count, connections) -> Premaniplex:
    """Check raw data against the declared shape, then the premaniplex axioms."""
    rows = list(connections)
    if len(rows) != rank:
        raise ValidationError(f"expected {rank} connection rows, got {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != flag_count:
            raise ValidationError(f"connection {i} has length {len(row)}, expected {flag_count}")
    return Premaniplex(np.asarray(rows, dtype=np.int64).reshape(rank, flag_count))


def as_premaniplex(x) -> Premaniplex:
    return x.premaniplex if isinstance(x, RootedPremaniplex) else x


def as_rooted(x) -> RootedPremaniplex:
    """Rooted view; a bare premaniplex is rooted at flag 0."""
    return x if isinstance(x, RootedPremaniplex) else RootedPremaniplex(x, 0)


def colorset(colors: Iterable[int], rank: int) -> frozenset:
    cs = frozenset(int(c) for c in colors)
    for c in cs:
        if not 0 <= c < rank:
            raise ValueError(f"colour {c} out of range for rank {rank}")
    return cs


def interval(i, j):
    """The colour set ``[i, j]`` (empty when ``j < i``)."""
    return frozenset(range(i, j + 1))


def is_maniplex(p) -> bool:
    """No semi-edges and no multiple edges: every s_i and s_i s_j fixed-point-free."""
    c = as_premaniplex(p).connections
    ident = np.arange(c.shape[1])
    for i in range(c.shape[0]):
        if np.any(c[i] == ident):
            return False
        for j in range(i + 1, c.shape[0]):
            if np.any(c[i] == c[j]):
                return False
    return True


class OrbitPartition:
    """Block id per flag, blocks numbered by their smallest flag."""

    __slots__ = ("labels", "count")

    def __init__(self, labels):
        labels = np.asarray(labels, dtype=np.int64)
        labels.setflags(write=False)
        self.labels = labels
        self.count = int(labels.max()) + 1 if labels.size else 0

    def __len__(self):
        return self.count

    def block_of(self, f):
        return np.flatnonzero(self.labels == self.labels[f])

    def blocks(self):
        order = np.argsort(self.labels, kind="stable")
        cuts = np.flatnonzero(np.diff(self.labels[order])) + 1
        return np.split(order, cuts)

    def sizes(self):
        return np.bincount(self.labels, minlength=self.count)

    def refines(self, other) -> bool:
        """Every block of ``self`` lies inside a block of ``other``."""
        o = other.labels if isinstance(other, OrbitPartition) else np.asarray(other)
        rep = np.full(self.count, -1, dtype=np.int64)
        rep[self.labels] = o
        return bool(np.array_equal(rep[self.labels], o))

    def __eq__(self, other):
        return isinstance(other, OrbitPartition) and np.array_equal(self.labels, other.labels)

    def __repr__(self):
        return f"OrbitPartition(count={self.count}, flags={self.labels.size})"


def interval_orbits(p, colors) -> OrbitPartition:
    """Components of the subgraph keeping only edges whose colour is in ``colors``."""
    pm = as_premaniplex(p)
    cs = sorted(colorset(colors, pm.rank))
    return OrbitPartition(kernels.components(pm.connections, cs))


@dataclass(frozen=True)
class Face:
    rank: int
    flags: np.ndarray

    def __len__(self):
        return len(self.flags)


def faces(p, i) -> list:
    pm = as_premaniplex(p)
    if not 0 <= i < pm.rank:
        raise ValueError(f"face rank {i} out of range for rank {pm.rank}")
    part = interval_orbits(pm, [c for c in range(pm.rank) if c != i])
    return [Face(i, blk) for blk in part.blocks()]


def dual(p):
    """Recolour ``i -> n-1-i``.  Keeps the base flag of a rooted input."""
    if isinstance(p, RootedPremaniplex):
        return RootedPremaniplex(dual(p.premaniplex), p.base_flag)
    return Premaniplex._trusted(p.connections[::-1].copy())


def _interval_bounds(colors, rank):
    cs = sorted(colorset(colors, rank))
    if not cs:
        raise EmptyInterval("section needs a nonempty colour interval")
    if cs != list(range(cs[0], cs[-1] + 1)):
        raise EmptyInterval(f"colours {cs} do not form an interval")
    return cs[0], cs[-1]


def section_flags(rp, colors):
    """Ambient flags of the section through the base flag, in increasing order."""
    rp = as_rooted(rp)
    i, j = _interval_bounds(colors, rp.rank)
    labels = kernels.components(rp.connections, range(i, j + 1))
    return np.flatnonzero(labels == labels[rp.base_flag])


def section(rp, colors) -> RootedPremaniplex:
    """Component of the base flag under ``colors = [i, j]``, recoloured to ``[0, j-i]``.

    Section flags keep the relative order of their ambient indices; the base
    flag of the result is the ambient base flag.
    """
    rp = as_rooted(rp)
    i, j = _interval_bounds(colors, rp.rank)
    return _section_from_labels(rp, i, j, kernels.components(rp.connections, range(i, j + 1)))


def _section_from_labels(rp, i, j, labels):
    """``section`` with the ``[i, j]`` component labels already computed."""
    flags = np.flatnonzero(labels == labels[rp.base_flag])
    local = np.full(rp.flag_count, -1, dtype=np.int64)
    local[flags] = np.arange(flags.size)
    conns = local[rp.connections[i:j + 1][:, flags]]
    base = int(local[rp.base_flag])
    return RootedPremaniplex(Premaniplex._trusted(conns), base)


def facet(rp):
    n = as_rooted(rp).rank
    return section(rp, interval(0, n - 2))


def vertex_figure(rp):
    n = as_rooted(rp).rank
    return section(rp, interval(1, n - 1))


def medial_section(rp):
    n = as_rooted(rp).rank
    return section(rp, interval(1, n - 2))


def canonical_form(p) -> np.ndarray:
    """Connections renumbered in BFS order from the base flag.

    Two rooted premaniplexes are isomorphic (base to base) exactly when
    their canonical forms are equal.
    """
    rp = as_rooted(p)
    order = kernels.bfs_tree(rp.connections, rp.base_flag)[0]
    pos = np.empty(rp.flag_count, dtype=np.int64)
    pos[order] = np.arange(order.size)
    return pos[rp.connections[:, order]]


def canonical_key(p) -> tuple:
    """Hashable version of :func:`canonical_form`."""
    c = canonical_form(p)
    return c.shape, c.tobytes()
