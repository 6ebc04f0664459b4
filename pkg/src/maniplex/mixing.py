"""Coverings, the mix of rooted premaniplexes, I-doubles and regular covers."""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .catalog import two_orbit_stg
from .errors import EmptyList, OutOfRange, RankMismatch
from .flagcore import Premaniplex, RootedPremaniplex, as_rooted, colorset
from .symmetry import automorphisms, covering_map


@dataclass(frozen=True, eq=False)
class Covering:
    source: RootedPremaniplex
    target: RootedPremaniplex
    map: np.ndarray

    def verify(self) -> bool:
        """Colour-preserving, surjective and base-respecting."""
        s, t, f = self.source, self.target, self.map
        if f.shape != (s.flag_count,) or f[s.base_flag] != t.base_flag:
            return False
        if np.any(t.connections[:, f] != f[s.connections]):
            return False
        return np.unique(f).size == t.flag_count

    def fiber(self, g) -> np.ndarray:
        return np.flatnonzero(self.map == g)


def find_covering(source, target):
    """The unique base-respecting covering ``source -> target``, or None."""
    source, target = as_rooted(source), as_rooted(target)
    f = covering_map(source, target)
    if f is None:
        return None
    f.setflags(write=False)
    return Covering(source, target, f)


def rebase(m, f) -> RootedPremaniplex:
    m = as_rooted(m)
    f = int(f)
    if not 0 <= f < m.flag_count:
        raise OutOfRange(f"flag {f} not in [0, {m.flag_count})")
    return RootedPremaniplex(m.premaniplex, f)


@dataclass(frozen=True, eq=False)
class MixResult:
    """The mix with its two projections; ``pair_labels[k] = (left, right)`` of mix flag ``k``."""
    mix: RootedPremaniplex
    left_proj: Covering
    right_proj: Covering
    pair_labels: np.ndarray = field(repr=False)

    @property
    def flag_count(self):
        return self.mix.flag_count

    def index_of(self, f1, f2):
        """Mix flag labelled ``(f1, f2)``, or None if that pair is not in the mix."""
        hit = np.flatnonzero((self.pair_labels[:, 0] == f1) & (self.pair_labels[:, 1] == f2))
        return int(hit[0]) if hit.size else None


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def mix(a, b) -> MixResult:
    """Component of ``(base_a, base_b)`` in the coordinatewise product.

    Mix flags are numbered in BFS discovery order (colours scanned 0..n-1),
    so flag 0 is the base pair.  Working memory is one index slot per pair,
    i.e. ``flag_count(a) * flag_count(b)``.
    """
    a, b = as_rooted(a), as_rooted(b)
    if a.rank != b.rank:
        raise RankMismatch(a.rank, b.rank)
    conns, left, right = kernels.mix(a.connections, b.connections, a.base_flag, b.base_flag)
    q = RootedPremaniplex(Premaniplex._trusted(conns), 0)
    left, right = _readonly(left), _readonly(right)
    return MixResult(q, Covering(q, a, left), Covering(q, b, right),
                     _readonly(np.stack([left, right], axis=1)))


@dataclass(frozen=True, eq=False)
class MixChain:
    """Iterated left-associated mix; ``projections[k]`` maps the result onto ``factors[k]``."""
    mix: RootedPremaniplex
    factors: tuple
    projections: tuple


def mix_many(items) -> MixChain:
    items = [as_rooted(x) for x in items]
    if not items:
        raise EmptyList("mix_many needs at least one premaniplex")
    ranks = {x.rank for x in items}
    if len(ranks) > 1:
        raise RankMismatch(*[x.rank for x in items])
    cur = items[0]
    projs = [np.arange(cur.flag_count)]
    for x in items[1:]:
        r = mix(cur, x)
        projs = [p[r.left_proj.map] for p in projs] + [r.right_proj.map]
        cur = r.mix
    projections = tuple(Covering(cur, f, _readonly(p)) for f, p in zip(items, projs))
    return MixChain(cur, tuple(items), projections)


def i_double(m, I) -> RootedPremaniplex:
    """Mix with ``2_I^n``: ``m`` itself when I-orientable, else twice as many flags."""
    m = as_rooted(m)
    return mix(m, two_orbit_stg(m.rank, colorset(I, m.rank))).mix


def orbit_representatives(m):
    """One flag per automorphism orbit: the base flag first, then the smallest
    flag of each remaining orbit in increasing order."""
    m = as_rooted(m)
    lab = automorphisms(m).orbits.labels
    _, first = np.unique(lab, return_index=True)
    reps = [m.base_flag] + [int(f) for f in first if lab[f] != lab[m.base_flag]]
    return reps


def smallest_regular_cover(m) -> RootedPremaniplex:
    """Mix of ``m`` rooted once in every automorphism orbit."""
    m = as_rooted(m)
    reps = orbit_representatives(m)
    if len(reps) == 1:
        return m
    return mix_many([rebase(m, f) for f in reps]).mix
