"""Automorphisms, flag orbits, symmetry type graphs and orientability.

Automorphisms act on the right: ``(a b)[f] = b[a[f]]``.  The automorphism
group of a premaniplex acts freely on flags, so an automorphism is pinned
down by where it sends one flag; every search here exploits that by
extending a single root image along a BFS tree.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NotASubgroup, RankMismatch
from .flagcore import (OrbitPartition, Premaniplex, RootedPremaniplex,
                       as_premaniplex, as_rooted, canonical_form, colorset)


def _semi_pattern(conns):
    """Bitmask per flag of the colours carrying a semi-edge there."""
    n, m = conns.shape
    ident = np.arange(m)
    mask = np.zeros(m, dtype=np.int64)
    for i in range(n):
        mask |= (conns[i] == ident).astype(np.int64) << i
    return mask


def homomorphisms_from(src, src_base, tgt, targets=None):
    """All colour-preserving maps ``src -> tgt`` (as image arrays) from ``src_base``.

    ``targets`` restricts the candidate images of ``src_base``.  Since the
    source is connected, each candidate gives at most one map.
    Returns ``(hits, images)``.
    """
    src = np.ascontiguousarray(src, dtype=np.int64)
    tgt = np.ascontiguousarray(tgt, dtype=np.int64)
    if targets is None:
        targets = np.arange(tgt.shape[1])
    targets = np.asarray(targets, dtype=np.int64)
    # a semi-edge must map to a semi-edge
    need = _semi_pattern(src)[src_base]
    have = _semi_pattern(tgt)[targets]
    targets = targets[(have & need) == need]
    tree = kernels.bfs_tree(src, src_base)
    return kernels.extend(src, tree, tgt, targets)


def covering_map(a, b):
    """Image array of the base-respecting covering ``a -> b``, or None."""
    a, b = as_rooted(a), as_rooted(b)
    if a.rank != b.rank:
        raise RankMismatch(a.rank, b.rank)
    if a.flag_count % b.flag_count:
        return None
    hits, images = homomorphisms_from(a.connections, a.base_flag, b.connections,
                                      [b.base_flag])
    return images[0] if hits.size else None


def _inverse(perm):
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.size)
    return inv


def _generator_orbits(m, generators):
    """Orbit labels (numbered by smallest flag) of the group generated by ``generators``."""
    if not generators:
        return np.arange(m, dtype=np.int64)
    maps = np.array([g for g in generators] + [_inverse(g) for g in generators],
                    dtype=np.int64)
    return kernels.components(maps, range(maps.shape[0]))


def _flag_signature(conns):
    """Per-flag integer code that every automorphism preserves: the semi-edge
    pattern and the sizes of the two-coloured components through the flag."""
    n, m = conns.shape
    cols = [_semi_pattern(conns)]
    for i in range(n):
        for j in range(i + 1, n):
            lab = kernels.components(conns, [i, j])
            cols.append(np.bincount(lab)[lab])
    _, code = np.unique(np.stack(cols, axis=1), axis=0, return_inverse=True)
    return code.reshape(-1).astype(np.int64)


class AutomorphismGroup:
    """A group of automorphisms, stored by generators.

    The action on flags is free, so an element is determined by where it
    sends flag 0; ``images`` lists those images in increasing order (0
    first) and ``order == images.size``.  Full element arrays are built only
    on request (:attr:`elements`, iteration, indexing), in the order of
    ``images``.
    """

    def __init__(self, premaniplex, generators=()):
        self.premaniplex = as_premaniplex(premaniplex)
        m = self.premaniplex.flag_count
        ident = np.arange(m)
        gens = [np.asarray(g, dtype=np.int64) for g in generators]
        self.generators = [g for g in gens if not np.array_equal(g, ident)]
        self._orbits = OrbitPartition(_generator_orbits(m, self.generators))
        images = np.flatnonzero(self._orbits.labels == self._orbits.labels[0])
        images.setflags(write=False)
        self.images = images
        self._pos = {int(x): k for k, x in enumerate(images)}
        self._elements = None
        self._trees = {}

    @property
    def order(self) -> int:
        return int(self.images.size)

    def __len__(self):
        return self.order

    @property
    def elements(self) -> np.ndarray:
        """All elements as an ``(order, flag_count)`` array (identity first)."""
        if self._elements is None:
            c = self.premaniplex.connections
            _, imgs = kernels.extend(c, self._tree(0), c, self.images)
            imgs.setflags(write=False)
            self._elements = imgs
        return self._elements

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k):
        return self.elements[k]

    def _tree(self, f):
        if f not in self._trees:
            self._trees[f] = kernels.bfs_tree(self.premaniplex.connections, f)
        return self._trees[f]

    def element_sending(self, f, g):
        """The element mapping flag ``f`` to ``g``, or None."""
        f, g = int(f), int(g)
        lab = self._orbits.labels
        if lab[f] != lab[g]:
            return None
        if self._elements is not None and f == 0:
            return self._elements[self._pos[g]]
        c = self.premaniplex.connections
        hits, imgs = kernels.extend(c, self._tree(f), c, [g])
        return imgs[0] if hits.size else None

    def index_of(self, perm):
        perm = np.asarray(perm, dtype=np.int64)
        k = self._pos.get(int(perm[0]))
        if k is None:
            return None
        c = self.premaniplex.connections
        if perm.shape != (c.shape[1],) or np.any(c[:, perm] != perm[c]):
            return None
        return k

    def __contains__(self, perm):
        return self.index_of(perm) is not None

    @property
    def orbits(self) -> OrbitPartition:
        return self._orbits

    @property
    def orbit_count(self) -> int:
        return self._orbits.count

    def __repr__(self):
        return f"AutomorphismGroup(order={self.order}, orbits={self.orbit_count})"


def orbit_labels(elements):
    """Orbit ids of a permutation group given by its element rows."""
    low = np.asarray(elements).min(axis=0)
    _, inv = np.unique(low, return_inverse=True)
    return inv.astype(np.int64)


def automorphisms(p) -> AutomorphismGroup:
    """The full automorphism group.

    Candidate images of flag 0 are tested by extension along a BFS tree, but
    only one candidate per orbit of the group generated so far: a success
    adds a generator (and settles its whole orbit), a failure rules out its
    whole orbit.  Candidates must also match flag 0's signature.
    """
    pm = as_premaniplex(p)
    c = pm.connections
    m = pm.flag_count
    sig = _flag_signature(c)
    candidate = sig == sig[0]
    tree = kernels.bfs_tree(c, 0)
    gens = []
    lab = np.arange(m, dtype=np.int64)
    failed = []
    batch = 1
    while True:
        decided = np.isin(lab, lab[[0] + failed])
        todo = np.flatnonzero(candidate & ~decided)
        if todo.size == 0:
            break
        # one representative per current orbit, a growing batch at a time
        _, first = np.unique(lab[todo], return_index=True)
        chunk = todo[np.sort(first)][:batch]
        hits, imgs = kernels.extend(c, tree, c, chunk)
        failed.extend(int(x) for x in np.setdiff1d(chunk, hits))
        if hits.size:
            gens.extend(imgs)
            lab = _generator_orbits(m, gens)
            batch = 1
        else:
            batch = min(2 * batch, 1 << 12)
    return AutomorphismGroup(pm, gens)


def compose(a, b):
    """``a`` then ``b``."""
    return np.asarray(b)[np.asarray(a)]


def generate_subgroup(p, generators) -> AutomorphismGroup:
    """Subgroup generated by ``generators`` (each must be an automorphism of ``p``)."""
    pm = as_premaniplex(p)
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    for g in gens:
        _check_automorphism(pm, g)
    return AutomorphismGroup(pm, gens)


def _check_automorphism(pm, g):
    c = pm.connections
    m = pm.flag_count
    if g.shape != (m,) or not np.array_equal(np.sort(g), np.arange(m)):
        raise NotASubgroup("element is not a permutation of the flags")
    if np.any(c[:, g] != g[c]):
        raise NotASubgroup("element does not commute with the connections")


def _as_group(pm, subgroup):
    """A group object from an explicit list of elements, which must be closed."""
    if isinstance(subgroup, AutomorphismGroup):
        return subgroup
    elems = np.asarray(subgroup, dtype=np.int64).reshape(-1, pm.flag_count)
    for g in elems:
        _check_automorphism(pm, g)
    keys = {}
    for g in elems:
        keys[int(g[0])] = g
    if 0 not in keys or not np.array_equal(keys[0], np.arange(pm.flag_count)):
        raise NotASubgroup("subgroup must contain the identity")
    for a in keys.values():
        for b in keys.values():
            ab = compose(a, b)
            c = keys.get(int(ab[0]))
            if c is None or not np.array_equal(c, ab):
                raise NotASubgroup("element set is not closed under composition")
    return AutomorphismGroup(pm, list(keys.values()))


def symmetry_type_graph(p, subgroup=None) -> RootedPremaniplex:
    """Quotient of ``p`` by a group of automorphisms (default: all of them).

    Quotient flags are numbered by the smallest flag in each orbit; the base
    is the orbit of the base flag of ``p``.
    """
    rp = as_rooted(p)
    pm = rp.premaniplex
    group = automorphisms(pm) if subgroup is None else _as_group(pm, subgroup)
    return quotient(rp, group.orbits.labels)


def quotient(rp, labels) -> RootedPremaniplex:
    """Quotient by a flag partition that the connections respect."""
    rp = as_rooted(rp)
    labels = np.asarray(labels, dtype=np.int64)
    _, rep = np.unique(labels, return_index=True)
    conns = labels[rp.connections[:, rep]]
    return RootedPremaniplex(Premaniplex._trusted(conns), int(labels[rp.base_flag]))


@dataclass(frozen=True)
class TwoOrbitClass:
    """Orbit data: ``kind`` is "regular", "two-orbit" or "k-orbit".

    For two-orbit inputs ``I`` is the set of colours whose neighbour of the
    base flag stays in the base flag's orbit.
    """
    kind: str
    orbit_count: int
    I: frozenset = frozenset()


def two_orbit_class(p) -> TwoOrbitClass:
    rp = as_rooted(p)
    orbits = automorphisms(rp).orbits
    k = orbits.count
    if k == 1:
        return TwoOrbitClass("regular", 1, frozenset(range(rp.rank)))
    if k > 2:
        return TwoOrbitClass("k-orbit", k)
    lab = orbits.labels
    b = rp.base_flag
    I = frozenset(i for i in range(rp.rank) if lab[rp.connections[i, b]] == lab[b])
    return TwoOrbitClass("two-orbit", 2, I)


def I_parity(p, I):
    """Parity array of the 2-colouring flipping exactly on colours outside ``I``.

    Parity 0 is the base flag's class.  None if the colouring does not exist.
    """
    rp = as_rooted(p)
    I = colorset(I, rp.rank)
    flips = np.array([0 if i in I else 1 for i in range(rp.rank)], dtype=np.int8)
    ok, par = kernels.parity(rp.connections, flips, rp.base_flag)
    return par if ok else None


def is_I_orientable(p, I) -> bool:
    """Flags split into two classes with colours outside ``I`` switching class
    and colours in ``I`` keeping it."""
    return I_parity(p, I) is not None


def is_orientable(p) -> bool:
    return is_I_orientable(p, ())


def i_even_automorphisms(p, I) -> AutomorphismGroup:
    """Automorphisms preserving the ``I``-parity classes (all of them when the
    premaniplex is not ``I``-orientable)."""
    rp = as_rooted(p)
    group = automorphisms(rp)
    par = I_parity(rp, I)
    if par is None:
        return group
    odd = [g for g in group.generators if par[g[0]] != par[0]]
    if not odd:
        return group
    # Schreier generators for the index-2 subgroup, transversal {1, t}
    t = odd[0]
    t_inv = _inverse(t)
    gens = []
    for g in group.generators:
        if par[g[0]] == par[0]:
            gens += [g, compose(compose(t, g), t_inv)]
        else:
            gens += [compose(g, t_inv), compose(t, g)]
    return AutomorphismGroup(rp, gens)


def chain_transitive(p, colors) -> bool:
    """True when the automorphism group acts transitively on the chains of
    type ``colors``: the symmetry type graph stays connected after removing
    the edges of colours in ``colors``."""
    rp = as_rooted(p)
    cs = colorset(colors, rp.rank)
    stg = symmetry_type_graph(rp)
    keep = [i for i in range(rp.rank) if i not in cs]
    return int(kernels.components(stg.connections, keep).max()) == 0


def is_T_admissible(m, t) -> bool:
    """``m`` covers ``t`` base-to-base, and the fibre over the base of ``t``
    lies in one automorphism orbit of ``m``."""
    m, t = as_rooted(m), as_rooted(t)
    if m.rank != t.rank:
        raise RankMismatch(m.rank, t.rank)
    cov = covering_map(m, t)
    if cov is None:
        return False
    fiber = np.flatnonzero(cov == t.base_flag)
    lab = automorphisms(m).orbits.labels
    return bool(np.all(lab[fiber] == lab[m.base_flag]))


def rooted_isomorphic(a, b) -> bool:
    a, b = as_rooted(a), as_rooted(b)
    if a.rank != b.rank or a.flag_count != b.flag_count:
        return False
    return covering_map(a, b) is not None
