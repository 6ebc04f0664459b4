"""Extra premaniplexes for the test suites, built independently of the catalog.

Regular polytopes come from faithful permutation representations of their
automorphism groups (fed to ``from_involutions``) or from affine reflections
modulo a lattice; non-regular ones from explicit flag-graph constructions.
"""
import itertools
from functools import lru_cache
from math import gcd

import numpy as np

from maniplex import automorphisms, catalog, dual, rebase
from maniplex.flagcore import Premaniplex, RootedPremaniplex


def rooted(rows, base=0):
    return RootedPremaniplex(Premaniplex(np.asarray(rows, dtype=np.int64)), base)


# ---------------------------------------------------------------- group actions

def point_action(maps, seeds, projective=False):
    """Permutations induced by ``maps`` (integer matrices or callables) on the
    orbit of ``seeds``.  With ``projective`` points are taken up to sign."""
    maps = [m if callable(m) else (lambda v, a=np.asarray(m, dtype=np.int64): a @ v)
            for m in maps]

    def norm(v):
        v = tuple(int(x) for x in v)
        if projective:
            return max(v, tuple(-x for x in v))
        return v

    pts = [norm(s) for s in seeds]
    index = {p: k for k, p in enumerate(pts)}
    k = 0
    while k < len(pts):
        for f in maps:
            q = norm(f(np.array(pts[k])))
            if q not in index:
                index[q] = len(pts)
                pts.append(q)
        k += 1
    perms = [[index[norm(f(np.array(p)))] for p in pts] for f in maps]
    return np.array(perms, dtype=np.int64)


def reflection(root):
    """Reflection in ``root`` as an exact map on integer points of a root lattice."""
    r = np.asarray(root, dtype=np.int64)
    rr = int(r @ r)

    def apply(v):
        c = 2 * int(v @ r)
        assert c % rr == 0
        return v - (c // rr) * r
    return apply


def flag_action_generators(p):
    """The distinguished generators of a regular premaniplex, acting on its flags."""
    group = automorphisms(p)
    assert group.orbit_count == 1
    base = p.base_flag
    return np.array([group.element_sending(base, p.connections[i, base])
                     for i in range(p.rank)])


def disjoint(*blocks):
    """Stack generator lists acting on disjoint point sets (identity elsewhere)."""
    total = sum(b.shape[1] for b in blocks)
    gens = []
    off = 0
    for b in blocks:
        for g in b:
            row = np.arange(total)
            row[off:off + b.shape[1]] = g + off
            gens.append(row)
        off += b.shape[1]
    return np.array(gens)


# ---------------------------------------------------------------- regular families

@lru_cache(maxsize=None)
def hemicube(n):
    """{4,3,...,3} modulo the central inversion (B_n on antipodal vertex pairs)."""
    mats = []
    r0 = np.eye(n, dtype=np.int64)
    r0[0, 0] = -1
    mats.append(r0)
    for i in range(1, n):
        r = np.eye(n, dtype=np.int64)
        r[[i - 1, i]] = r[[i, i - 1]]
        mats.append(r)
    seed = [tuple([1] * n)]
    return catalog.from_involutions(point_action(mats, seed, projective=True))


@lru_cache(maxsize=None)
def cell24():
    """{3,4,3} from the F4 reflection group acting on doubled roots."""
    roots = [(0, 2, -2, 0), (0, 0, 2, -2), (0, 0, 0, 2), (1, -1, -1, -1)]
    mats = [reflection(r) for r in roots]
    seeds = [(2, 2, 0, 0)]
    return catalog.from_involutions(point_action(mats, seeds))


@lru_cache(maxsize=None)
def p2r(p, r):
    """{p,2,r}: product of a p-gon and an r-gon."""
    a = flag_action_generators(catalog.polygon(p))
    b = flag_action_generators(catalog.polygon(r))
    return catalog.from_involutions(disjoint(a, b))


@lru_cache(maxsize=None)
def regular_ditope(k):
    """{K,2} for a regular premaniplex ``k``, via the group of K times C2."""
    return catalog.from_involutions(disjoint(flag_action_generators(k), np.array([[1, 0]])))


def prism(p):
    """{p,2}."""
    return regular_ditope(catalog.polygon(p))


def affine_quotient(refls, modulus):
    """Flag graph of a cubic tiling quotient: flags are isometries ``(M, t mod s)``.

    ``refls`` lists ``(matrix, translation)`` for the base reflections.
    """
    refls = [(np.asarray(m, dtype=np.int64), np.asarray(u, dtype=np.int64)) for m, u in refls]
    d = refls[0][0].shape[0]

    def key(mat, t):
        return (mat.tobytes(), tuple(int(x) for x in t % modulus))

    start = (np.eye(d, dtype=np.int64), np.zeros(d, dtype=np.int64))
    index = {key(*start): 0}
    flags = [start]
    rows = [[] for _ in refls]
    k = 0
    while k < len(flags):
        mat, t = flags[k]
        for i, (r, u) in enumerate(refls):
            nm, nt = mat @ r, (mat @ u + t) % modulus
            kk = key(nm, nt)
            j = index.get(kk)
            if j is None:
                j = index[kk] = len(flags)
                flags.append((nm, nt))
            rows[i].append(j)
        k += 1
    return rooted(rows)


def _swap(d, a, b):
    m = np.eye(d, dtype=np.int64)
    m[[a, b]] = m[[b, a]]
    return m


def _neg(d, a):
    m = np.eye(d, dtype=np.int64)
    m[a, a] = -1
    return m


@lru_cache(maxsize=None)
def square_torus(s):
    """{4,4}_(s,0) by the affine route, an independent check on the catalog."""
    refls = [(_neg(2, 0), (1, 0)), (_swap(2, 0, 1), (0, 0)), (_neg(2, 1), (0, 0))]
    return affine_quotient(refls, s)


@lru_cache(maxsize=None)
def cubic_toroid(s):
    """{4,3,4}_(s,0,0): the cubic tiling modulo s Z^3."""
    refls = [(_neg(3, 0), (1, 0, 0)), (_swap(3, 0, 1), (0, 0, 0)),
             (_swap(3, 1, 2), (0, 0, 0)), (_neg(3, 2), (0, 0, 0))]
    return affine_quotient(refls, s)


# ---------------------------------------------------------------- non-regular constructions

def medial(m):
    """Medial map of a rank-3 premaniplex.

    Flag ``(f, 0)`` keeps the face of ``f``, ``(f, 1)`` its vertex; the new
    vertices are the old edges.
    """
    c = m.connections
    k = m.flag_count
    s0 = np.concatenate([c[1], c[1] + k])
    s1 = np.concatenate([c[0], c[2] + k])
    s2 = np.concatenate([np.arange(k) + k, np.arange(k)])
    return rooted([s0, s1, s2], m.base_flag)


def ditope(k):
    """{K,2}: two copies of ``k`` glued along a new top colour."""
    c = k.connections
    m = k.flag_count
    rows = [np.concatenate([r, r + m]) for r in c]
    rows.append(np.concatenate([np.arange(m) + m, np.arange(m)]))
    return rooted(rows, k.base_flag)


def dual_ditope(k):
    """{2,K}."""
    return dual(ditope(dual(k)))


# ---------------------------------------------------------------- corpora

def rank3_regular():
    items = {f"torus_44({b},{c})": catalog.torus_44(b, c)
             for b, c in [(2, 0), (3, 0), (2, 2)]}
    items["cube(3)"] = catalog.cube(3)
    items["simplex(3)"] = catalog.simplex(3)
    items["octahedron"] = dual(catalog.cube(3))
    items["prism(5)"] = prism(5)
    items["hemicube(3)"] = hemicube(3)
    return items


def rank4_regular():
    return {
        "simplex(4)": catalog.simplex(4),
        "cube(4)": catalog.cube(4),
        "cross(4)": dual(catalog.cube(4)),
        "hemicube(4)": hemicube(4),
        "hemicross(4)": dual(hemicube(4)),
        "toroid(2)": cubic_toroid(2),
        "toroid(3)": cubic_toroid(3),
        "p2r(3,4)": p2r(3, 4),
        "p2r(4,4)": p2r(4, 4),
        "p2r(2,3)": p2r(2, 3),
        "ditope(cube)": regular_ditope(catalog.cube(3)),
        "ditope(torus(2,0))": regular_ditope(catalog.torus_44(2, 0)),
        "dual_ditope(hemicube)": dual(regular_ditope(dual(hemicube(3)))),
        "cell24": cell24(),
    }


def chiral_tori():
    return {f"torus_44({b},{c})": catalog.torus_44(b, c) for b, c in [(1, 2), (2, 1), (1, 3), (3, 1)]}


def rebased_chiral():
    """Chiral maps rooted in both orbits."""
    out = {}
    for name, t in chiral_tori().items():
        out[name] = t
        out[name + "^0"] = rebase(t, t.connections[0, t.base_flag])
    return out


def pairs(items):
    names = sorted(items)
    return [(a, b) for a, b in itertools.combinations_with_replacement(names, 2)]


def lcm(a, b):
    return a * b // gcd(a, b)
