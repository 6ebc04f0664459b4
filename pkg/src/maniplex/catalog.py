"""Constructors for the premaniplexes used throughout: polygons, 2_I^n, Cayley
graphs of string groups, cubes and simplices, {4,4} torus maps, and the two
3-orbit rank-4 premaniplexes 3^{1,2} and 3^2."""
import re
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, IImproper, NotSggi
from .flagcore import Premaniplex, RootedPremaniplex, colorset


def _rooted(conns, base=0):
    return RootedPremaniplex(Premaniplex(conns), base)


def polygon(p: int) -> RootedPremaniplex:
    """The p-gon: a 2p-cycle with colours alternating 0, 1."""
    if p < 2:
        raise BadParameter(f"polygon needs p >= 2, got {p}")
    m = 2 * p
    f = np.arange(m)
    s0 = f ^ 1
    s1 = np.where(f % 2 == 1, (f + 1) % m, (f - 1) % m)
    return _rooted([s0, s1])


def two_orbit_stg(n: int, I=()) -> RootedPremaniplex:
    """``2_I^n``: two flags joined by every colour outside ``I``, semi-edges for ``I``."""
    if n < 1:
        raise BadParameter(f"rank must be >= 1, got {n}")
    I = colorset(I, n)
    if len(I) == n:
        raise IImproper(f"I must be a proper subset of the {n} colours")
    rows = [[0, 1] if i in I else [1, 0] for i in range(n)]
    return _rooted(rows)


def point(n: int) -> RootedPremaniplex:
    """One flag carrying n semi-edges."""
    if n < 1:
        raise BadParameter(f"rank must be >= 1, got {n}")
    return _rooted([[0]] * n)


def _check_sggi(gens):
    n, d = gens.shape
    ident = np.arange(d)
    for i in range(n):
        if np.any(np.sort(gens[i]) != ident):
            raise NotSggi(f"generator {i} is not a permutation")
        if np.any(gens[i][gens[i]] != ident):
            raise NotSggi(f"generator {i} is not an involution")
    for i in range(n):
        for j in range(i + 2, n):
            if np.any(gens[i][gens[j]] != gens[j][gens[i]]):
                raise NotSggi(f"generators {i} and {j} do not commute")


def group_closure(gens):
    """All products of ``gens`` (rows of an int array), identity first.

    Returns ``(elements, right)`` where ``right[i, k]`` is the index of
    ``elements[k] * gens[i]`` and ``(g * x)[p] = x[g[p]]``.
    """
    gens = np.asarray(gens, dtype=np.int64)
    n, d = gens.shape
    ident = np.arange(d, dtype=np.int64)
    index = {ident.tobytes(): 0}
    elems = [ident]
    frontier = ident[None, :]
    while frontier.size:
        fresh = []
        for i in range(n):
            prod = gens[i][frontier]
            for row in prod:
                key = row.tobytes()
                if key not in index:
                    index[key] = len(elems)
                    elems.append(row)
                    fresh.append(row)
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, d)
    elems = np.array(elems, dtype=np.int64)
    right = np.empty((n, len(elems)), dtype=np.int64)
    for i in range(n):
        prod = gens[i][elems]
        right[i] = [index[row.tobytes()] for row in prod]
    return elems, right


def from_involutions(perms) -> RootedPremaniplex:
    """Cayley graph of the string group generated by involutions ``perms``.

    Flags are group elements, ``s_i(g) = g x_i``, base flag the identity.  The
    result is a maniplex exactly when every x_i and x_i x_j is nontrivial.
    """
    gens = np.asarray(perms, dtype=np.int64)
    if gens.ndim != 2 or gens.shape[0] < 1:
        raise NotSggi("need a nonempty list of equal-length permutations")
    _check_sggi(gens)
    _, right = group_closure(gens)
    return RootedPremaniplex(Premaniplex._trusted(right), 0)


def cube_generators(n: int):
    """Signed-permutation involutions of B_n acting on the 2n points +-e_k.

    Point ``2k`` is ``+e_k`` and ``2k+1`` is ``-e_k``.
    """
    pts = np.arange(2 * n)
    gens = []
    r0 = pts.copy()
    r0[0], r0[1] = 1, 0
    gens.append(r0)
    for i in range(1, n):
        r = pts.copy()
        for s in (0, 1):
            a, b = 2 * (i - 1) + s, 2 * i + s
            r[a], r[b] = b, a
        gens.append(r)
    return np.array(gens)


def simplex_generators(n: int):
    """Adjacent transpositions on n+1 points (Coxeter group A_n)."""
    gens = []
    for i in range(n):
        r = np.arange(n + 1)
        r[i], r[i + 1] = i + 1, i
        gens.append(r)
    return np.array(gens)


def cube(n: int) -> RootedPremaniplex:
    if n < 2:
        raise BadParameter(f"cube needs n >= 2, got {n}")
    return from_involutions(cube_generators(n))


def simplex(n: int) -> RootedPremaniplex:
    if n < 2:
        raise BadParameter(f"simplex needs n >= 2, got {n}")
    return from_involutions(simplex_generators(n))


# reflections of the unit-square tiling fixing all of the base flag but one face:
# (linear part, translation) of x -> R x + u
_SQ_REFL = (
    ((-1, 0, 0, 1), (1, 0)),   # rho_0: x1 -> 1 - x1
    ((0, 1, 1, 0), (0, 0)),    # rho_1: swap coordinates
    ((1, 0, 0, -1), (0, 0)),   # rho_2: x2 -> -x2
)


def torus_44(b: int, c: int) -> RootedPremaniplex:
    """The map {4,4}_(b,c): unit-square tiling modulo the lattice <(b,c), (-c,b)>.

    A flag is an isometry ``x -> M x + t`` of the tiling (``t`` reduced mod the
    lattice) applied to the base flag; ``s_i`` is right multiplication by the
    reflection ``rho_i``.  There are ``8(b^2 + c^2)`` flags.
    """
    b, c = int(b), int(c)
    d = b * b + c * c
    if d == 0:
        raise BadParameter("torus_44 needs (b, c) != (0, 0)")
    v1, v2 = (b, c), (-c, b)

    def reduce(t):
        qa = (t[0] * v1[0] + t[1] * v1[1]) // d
        qb = (t[0] * v2[0] + t[1] * v2[1]) // d
        return (t[0] - qa * v1[0] - qb * v2[0], t[1] - qa * v1[1] - qb * v2[1])

    def step(flag, i):
        (m00, m01, m10, m11), (t0, t1) = flag
        (r00, r01, r10, r11), (u0, u1) = _SQ_REFL[i]
        mat = (m00 * r00 + m01 * r10, m00 * r01 + m01 * r11,
               m10 * r00 + m11 * r10, m10 * r01 + m11 * r11)
        t = reduce((m00 * u0 + m01 * u1 + t0, m10 * u0 + m11 * u1 + t1))
        return (mat, t)

    start = ((1, 0, 0, 1), (0, 0))
    index = {start: 0}
    flags = [start]
    rows = [[], [], []]
    k = 0
    while k < len(flags):
        fl = flags[k]
        for i in range(3):
            g = step(fl, i)
            j = index.get(g)
            if j is None:
                j = index[g] = len(flags)
                flags.append(g)
            rows[i].append(j)
        k += 1
    if len(flags) != 8 * d:
        raise AssertionError(f"torus_44({b},{c}) built {len(flags)} flags, expected {8 * d}")
    return _rooted(rows)


def three_orbit_pair():
    """The 3-orbit rank-4 premaniplexes ``(3^{1,2}, 3^2)``.

    3^{1,2}: A-B by colour 1, B-C by colour 2.  3^2: 1-2 by colour 2, 2-3 by
    colours 1 and 3.  Every other colour incidence is a semi-edge.
    """
    st3_12 = _rooted([
        [0, 1, 2],
        [1, 0, 2],
        [0, 2, 1],
        [0, 1, 2],
    ])
    st3_2 = _rooted([
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [0, 2, 1],
    ])
    return st3_12, st3_2


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: tuple
    result: RootedPremaniplex


def _two_orbit_entry(n, *I):
    return two_orbit_stg(n, I)


BUILDERS = {
    "polygon": polygon,
    "point": point,
    "two_orbit_stg": _two_orbit_entry,
    "cube": cube,
    "simplex": simplex,
    "torus_44": torus_44,
    "st3_12": lambda: three_orbit_pair()[0],
    "st3_2": lambda: three_orbit_pair()[1],
}

_SPEC_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def build(spec: str) -> CatalogEntry:
    """Instantiate a built-in from text such as ``"torus_44(1,2)"`` or ``"two_orbit_stg(4,0,3)"``."""
    mt = _SPEC_RE.match(spec)
    if not mt or mt.group(1) not in BUILDERS:
        raise BadParameter(f"unknown catalog entry {spec!r}; known: {', '.join(sorted(BUILDERS))}")
    name, args = mt.group(1), mt.group(2)
    try:
        params = tuple(int(a) for a in args.split(",") if a.strip()) if args else ()
    except ValueError:
        raise BadParameter(f"catalog parameters must be integers: {spec!r}") from None
    try:
        result = BUILDERS[name](*params)
    except TypeError as exc:
        raise BadParameter(f"bad parameters for {name}: {exc}") from None
    return CatalogEntry(name, params, result)
