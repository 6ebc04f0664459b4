"""Polytopality of maniplexes and of mixes, variance and chirality groups.

Notation used below: for a flag of an n-premaniplex its facet, vertex-figure
and medial section are the sections through it under colours ``[0, n-2]``,
``[1, n-1]`` and ``[1, n-2]`` (called K, L and N).
"""
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .catalog import _check_sggi, group_closure, two_orbit_stg
from .errors import (ModePreconditionViolated, NotAdmissible, NotAManiplex,
                     NotPolytope, NotSggi, NotTwoOrbit, PreconditionViolated,
                     RankMismatch)
from .flagcore import (_section_from_labels, as_rooted, canonical_key, colorset, interval,
                       is_maniplex, section, section_flags)
from .mixing import mix, rebase
from .symmetry import (automorphisms, chain_transitive, compose, covering_map,
                       is_I_orientable, is_T_admissible, two_orbit_class)

K_COLORS = "facet"
L_COLORS = "vertex-figure"
N_COLORS = "medial"


def _section_colors(n):
    return {K_COLORS: interval(0, n - 2), L_COLORS: interval(1, n - 1),
            N_COLORS: interval(1, n - 2)}


# ---------------------------------------------------------------------------
# path intersection property
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PipResult:
    """Verdict of a polytopality check.  ``witness`` is ``(flag, other, i, j)``
    for a failure: the flags share a ``[0, j]``-orbit and an ``[i, n-1]``-orbit
    but not an ``[i, j]``-orbit."""
    verdict: bool
    witness: tuple = None

    def __bool__(self):
        return self.verdict


class _Orbits:
    """Interval-orbit labels of one premaniplex, computed on demand."""

    def __init__(self, conns):
        self.conns = conns
        self.cache = {}

    def __call__(self, i, j):
        key = (i, j)
        if key not in self.cache:
            self.cache[key] = kernels.components(self.conns, range(i, j + 1))
        return self.cache[key]


def _refinement_failure(a, b, c):
    """First flag pair agreeing in labels ``a`` and ``b`` but not in ``c``."""
    code = a * (int(b.max()) + 1) + b
    _, first, inv = np.unique(code, return_index=True, return_inverse=True)
    bad = np.flatnonzero(c != c[first[inv]])
    if bad.size == 0:
        return None
    f = int(bad[0])
    return int(first[inv[f]]), f


def _require_maniplex(p):
    if not is_maniplex(p):
        raise NotAManiplex("polytopality is only defined for maniplexes")


def pip_check(p) -> PipResult:
    """Path intersection property.

    For every pair of colours ``i, j``: flags joined by a ``[0, j]``-path and
    by an ``[i, n-1]``-path are joined by an ``[i, j]``-path, where the empty
    interval (``i > j``) means the two flags coincide.  Pairs with ``i = 0``
    or ``j = n-1`` hold trivially and are skipped.
    """
    rp = as_rooted(p)
    _require_maniplex(rp)
    n = rp.rank
    orb = _Orbits(rp.connections)
    same = np.arange(rp.flag_count, dtype=np.int64)
    for i in range(1, n):
        for j in range(0, n - 1):
            inner = orb(i, j) if i <= j else same
            hit = _refinement_failure(orb(0, j), orb(i, n - 1), inner)
            if hit is not None:
                return PipResult(False, (hit[0], hit[1], i, j))
    return PipResult(True)


MODES = ("facet", "facet-and-vertex", "medial-transitive")


def _sections_polytopal(rp, colors, mode, memo):
    """Every section of ``rp`` under ``colors`` passes ``pip_check_recursive``."""
    cs = sorted(colors)
    labels = kernels.components(rp.connections, cs)
    _, reps = np.unique(labels, return_index=True)
    for f in reps:
        sec = _section_from_labels(rebase(rp, int(f)), cs[0], cs[-1], labels)
        key = canonical_key(sec)
        if key not in memo:
            memo[key] = _pip_recursive(sec, mode, memo)
        if not memo[key]:
            return False
    return True


def _pip_recursive(rp, mode, memo):
    n = rp.rank
    if n <= 2:
        return True
    c = _section_colors(n)
    orb = _Orbits(rp.connections)
    if mode == "facet":
        if not _sections_polytopal(rp, c[K_COLORS], "facet", memo):
            return False
        for i in range(1, n - 1):
            if _refinement_failure(orb(0, n - 2), orb(i, n - 1), orb(i, n - 2)) is not None:
                return False
        return True
    # "facet-and-vertex"; the medial-transitive mode only changes the top level
    if not _sections_polytopal(rp, c[K_COLORS], "facet-and-vertex", memo):
        return False
    if not _sections_polytopal(rp, c[L_COLORS], "facet-and-vertex", memo):
        return False
    return _refinement_failure(orb(0, n - 2), orb(1, n - 1), orb(1, n - 2)) is None


def pip_check_recursive(p, mode="facet-and-vertex") -> bool:
    """Polytopality decided recursively through sections.

    ``facet``: facets polytopal, plus ``[0,n-2] & [i,n-1] => [i,n-2]`` for all i.
    ``facet-and-vertex``: facets and vertex-figures polytopal, plus
    ``[0,n-2] & [1,n-1] => [1,n-2]``.
    ``medial-transitive``: as above but the last condition is checked at the
    base flag only; requires the automorphism group to be transitive on
    medial sections (symmetry type graph connected without colours 0, n-1).
    """
    rp = as_rooted(p)
    _require_maniplex(rp)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    n = rp.rank
    memo = {}
    if mode != "medial-transitive":
        return _pip_recursive(rp, mode, memo)
    if n <= 2:
        return True
    if not chain_transitive(rp, {0, n - 1}):
        raise ModePreconditionViolated(
            "automorphism group is not transitive on medial sections")
    c = _section_colors(n)
    if not _sections_polytopal(rp, c[K_COLORS], "facet-and-vertex", memo):
        return False
    if not _sections_polytopal(rp, c[L_COLORS], "facet-and-vertex", memo):
        return False
    orb = _Orbits(rp.connections)
    k, l, m = orb(0, n - 2), orb(1, n - 1), orb(1, n - 2)
    b = rp.base_flag
    same = (k == k[b]) & (l == l[b])
    return bool(np.all(m[same] == m[b]))


# ---------------------------------------------------------------------------
# string C-groups
# ---------------------------------------------------------------------------

def _elements_set(gens, d):
    if len(gens) == 0:
        return {np.arange(d, dtype=np.int64).tobytes()}
    elems, _ = group_closure(np.asarray(gens))
    return {row.tobytes() for row in elems}


def _string_c(gens, d, memo):
    n = len(gens)
    key = tuple(g.tobytes() for g in gens)
    if key in memo:
        return memo[key]
    if n <= 1:
        ok = True
    elif n == 2:
        # <x0> & <x1> must be trivial
        ok = not (np.array_equal(gens[0], gens[1]) and
                  not np.array_equal(gens[0], np.arange(d)))
    else:
        ok = (_string_c(gens[:-1], d, memo) and _string_c(gens[1:], d, memo)
              and (_elements_set(gens[:-1], d) & _elements_set(gens[1:], d))
              == _elements_set(gens[1:-1], d))
    memo[key] = ok
    return ok


def sggi_string_c_check(generators) -> bool:
    """Intersection condition for a string group generated by involutions,
    decided recursively: both end subgroups are string C-groups and they
    intersect in the middle subgroup."""
    gens = np.asarray(generators, dtype=np.int64)
    if gens.ndim != 2 or gens.shape[0] < 1:
        raise NotSggi("need a nonempty list of equal-length permutations")
    _check_sggi(gens)
    return _string_c(list(gens), gens.shape[1], {})


# ---------------------------------------------------------------------------
# variance groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VarianceGroup:
    """Lower variance group of ``host`` with respect to ``other``.

    ``images`` lists where each element sends the host's base flag (identity
    first); ``elements`` holds the automorphisms themselves.  When the group
    is not well defined, ``witness`` is a host flag in the fibre that is not
    in the base flag's orbit (or ``None`` if only closure failed) and
    ``elements`` contains only the fibre flags that do come from automorphisms.
    """
    host: object
    images: np.ndarray
    elements: np.ndarray = field(repr=False)
    well_defined: bool
    witness: object = None

    @property
    def order(self) -> int:
        return int(self.images.size)

    def __len__(self):
        return self.order


def fiber_images(a, b):
    """Host flags ``x`` with ``(x, base_b)`` in the mix of ``a`` and ``b``,
    sorted with the base flag of ``a`` first."""
    a, b = as_rooted(a), as_rooted(b)
    if a.rank != b.rank:
        raise RankMismatch(a.rank, b.rank)
    r = mix(a, b)
    left = r.pair_labels[:, 0][r.pair_labels[:, 1] == b.base_flag]
    rest = np.sort(left[left != a.base_flag])
    return np.concatenate([[a.base_flag], rest]).astype(np.int64)


def variance_group_lower(a, b) -> VarianceGroup:
    """``{g in Aut(a) : (base_a g, base_b) in mix(a, b)}``."""
    a, b = as_rooted(a), as_rooted(b)
    imgs = fiber_images(a, b)
    group = automorphisms(a)
    base = a.base_flag
    elems = []
    witness = None
    for x in imgs:
        g = group.element_sending(base, x)
        if g is None:
            if witness is None:
                witness = int(x)
            continue
        elems.append(g)
    elems = np.array(elems, dtype=np.int64).reshape(-1, a.flag_count)
    well = witness is None
    if well:
        have = set(int(x) for x in imgs)
        for g in elems:
            for h in elems:
                if int(compose(g, h)[base]) not in have:
                    well = False
                    break
            if not well:
                break
    return VarianceGroup(a, imgs, elems, well, witness)


def chirality_group_order(m) -> int:
    """Order of the chirality group: variance of ``m`` against itself rebased
    across its base 0-edge."""
    m = as_rooted(m)
    if not is_T_admissible(m, two_orbit_stg(m.rank, ())):
        raise NotAdmissible("chirality groups need a chiral, or regular orientable, premaniplex")
    other = rebase(m, int(m.connections[0, m.base_flag]))
    return variance_group_lower(m, other).order


# ---------------------------------------------------------------------------
# polytopality of mixes
# ---------------------------------------------------------------------------

@dataclass
class PolytopalityReport:
    verdict: bool
    facets_polytopal: bool
    vertex_figures_polytopal: bool
    variance_condition: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict


def section_variance_images(m2, f2, m1, f1, colors):
    """``X(S2 | S1)`` for the sections under ``colors`` through ``f2`` in ``m2``
    and ``f1`` in ``m1``, as ambient flags of ``m2`` (images of ``f2``).

    Returns ``(images, well_defined)``.
    """
    r2, r1 = rebase(m2, f2), rebase(m1, f1)
    s2, s1 = section(r2, colors), section(r1, colors)
    vg = variance_group_lower(s2, s1)
    amb = section_flags(r2, colors)
    return frozenset(int(x) for x in amb[vg.images]), vg.well_defined


def pathwise_variance_images(result, q, colors):
    """Flags ``L2`` with ``(P1, L2)`` joined to mix flag ``q = (P1, P2)`` by a
    path using only ``colors``."""
    conns = result.mix.connections
    lab = kernels.components(conns, sorted(colors))
    left, right = result.pair_labels[:, 0], result.pair_labels[:, 1]
    sel = (left == left[q]) & (lab == lab[q])
    return frozenset(int(x) for x in right[sel])


def _flag_conditions(p1, p2, f1, f2, *, need_sections=True):
    """The three mix-polytopality conditions at the mix flag ``(f1, f2)``."""
    n = p1.rank
    c = _section_colors(n)
    out = {}
    if need_sections:
        for name in (K_COLORS, L_COLORS):
            s1 = section(rebase(p1, f1), c[name])
            s2 = section(rebase(p2, f2), c[name])
            out[name] = pip_check(mix(s1, s2).mix).verdict
    else:
        out[K_COLORS] = out[L_COLORS] = True
    xs, well = {}, True
    for name in (K_COLORS, L_COLORS, N_COLORS):
        xs[name], ok = section_variance_images(p2, f2, p1, f1, c[name])
        well &= ok
    bad = sorted((xs[K_COLORS] & xs[L_COLORS]) - xs[N_COLORS])
    out["variance"] = not bad
    out["bad"] = bad
    out["well_defined"] = well
    return out


def _evaluate(p1, p2, r, flags, *, need_sections=True):
    facets = vfigs = var = True
    witnesses = []
    for q in flags:
        f1, f2 = (int(x) for x in r.pair_labels[q])
        res = _flag_conditions(p1, p2, f1, f2, need_sections=need_sections)
        if not res["well_defined"]:
            raise AssertionError(f"variance group not well defined at mix flag {q}")
        if not res[K_COLORS]:
            facets = False
            witnesses.append({"condition": "facet", "mix_flag": q, "pair": (f1, f2)})
        if not res[L_COLORS]:
            vfigs = False
            witnesses.append({"condition": "vertex-figure", "mix_flag": q, "pair": (f1, f2)})
        if not res["variance"]:
            var = False
            witnesses.append({"condition": "variance", "mix_flag": q, "pair": (f1, f2),
                              "image": res["bad"][0]})
    return PolytopalityReport(facets and vfigs and var, facets, vfigs, var, witnesses,
                              {"flags_checked": [int(q) for q in flags]})


def theorem_mix_polytopality(p1, p2, t, *, fast_path=True) -> PolytopalityReport:
    """Decide whether ``mix(p1, p2)`` is a polytope from its sections.

    ``p1`` must be a polytope and both inputs admissible for ``t``.  The
    conditions are: facets and vertex-figures of the mix are polytopes, and
    at every mix flag ``(f1, f2)`` the facet and vertex-figure variance
    groups of ``p2`` against ``p1`` intersect inside the medial one.  The
    conditions only depend on the automorphism orbits of ``f1`` and ``f2``,
    so one flag per occurring orbit pair is evaluated.  When ``t`` stays
    connected without colours 0 and n-1 the base flag alone suffices.
    """
    p1, p2, t = as_rooted(p1), as_rooted(p2), as_rooted(t)
    if not p1.rank == p2.rank == t.rank:
        raise RankMismatch(p1.rank, p2.rank, t.rank)
    if not is_maniplex(p1) or not pip_check(p1):
        raise PreconditionViolated("p1 polytope", "first argument must be a polytope")
    if not is_T_admissible(p1, t):
        raise PreconditionViolated("p1 admissible", "first argument is not admissible for t")
    if not is_T_admissible(p2, t):
        raise PreconditionViolated("p2 admissible", "second argument is not admissible for t")
    n = p1.rank
    r = mix(p1, p2)
    if n <= 2:
        return PolytopalityReport(True, True, True, True, [], {"path": "rank<=2"})
    t_labels = kernels.components(t.connections, range(1, n - 1))
    if fast_path and int(t_labels.max()) == 0:
        flags, path = [0], "medial-transitive"
    else:
        lab1 = automorphisms(p1).orbits.labels
        lab2 = automorphisms(p2).orbits.labels
        key = lab1[r.pair_labels[:, 0]] * (int(lab2.max()) + 1) + lab2[r.pair_labels[:, 1]]
        _, first = np.unique(key, return_index=True)
        flags, path = sorted(int(q) for q in first), "orbit-pairs"
    rep = _evaluate(p1, p2, r, flags)
    rep.details["path"] = path
    return rep


# ---------------------------------------------------------------------------
# I-doubles of regular polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IDoubleVerdict:
    verdict: bool
    case: str
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict


def shifted_color_sets(I, n):
    """``(I_{n-1}, I_0, I_{0,n-1})``: colour sets seen by the facet, the
    vertex-figure and the medial section."""
    I = colorset(I, n)
    i_top = frozenset(i for i in I if i != n - 1)
    i_bot = frozenset(i - 1 for i in I if i >= 1)
    i_mid = frozenset(i - 1 for i in I if 1 <= i <= n - 2)
    return i_top, i_bot, i_mid


def i_double_polytopality(p, I) -> IDoubleVerdict:
    """Predict whether the I-double of a regular, I-non-orientable polytope is
    a polytope, from the orientability of its sections.

    Case ``a``: facet or vertex-figure orientable for the shifted set -> yes.
    Case ``b``: neither, but the medial section is -> no.
    Case ``c``: otherwise, yes iff the shifted doubles of the facet and of the
    vertex-figure are both polytopes.
    """
    from .mixing import i_double

    p = as_rooted(p)
    n = p.rank
    I = colorset(I, n)
    if automorphisms(p).orbit_count != 1:
        raise PreconditionViolated("regular", "input must be regular")
    if not is_maniplex(p) or not pip_check(p):
        raise PreconditionViolated("polytope", "input must be a polytope")
    if is_I_orientable(p, I):
        raise PreconditionViolated("I-non-orientable", "input is I-orientable")
    if n <= 2:
        return IDoubleVerdict(True, "rank<=2")
    i_top, i_bot, i_mid = shifted_color_sets(I, n)
    c = _section_colors(n)
    k, l, m = section(p, c[K_COLORS]), section(p, c[L_COLORS]), section(p, c[N_COLORS])
    details = {"I_top": sorted(i_top), "I_bottom": sorted(i_bot), "I_middle": sorted(i_mid)}
    if is_I_orientable(k, i_top) or is_I_orientable(l, i_bot):
        return IDoubleVerdict(True, "a", details)
    if is_I_orientable(m, i_mid):
        return IDoubleVerdict(False, "b", details)
    kd = pip_check(i_double(k, i_top)).verdict
    ld = pip_check(i_double(l, i_bot)).verdict
    details.update(facet_double_polytopal=kd, vertex_figure_double_polytopal=ld)
    return IDoubleVerdict(kd and ld, "c", details)


# ---------------------------------------------------------------------------
# smallest regular covers of two-orbit polytopes
# ---------------------------------------------------------------------------

def src_polytopality_report(p) -> PolytopalityReport:
    """Decide whether the smallest regular cover of a two-orbit polytope is a
    polytope, without building it beyond the mix with the rebased copy.

    The rebased copy uses the neighbour of the base flag along the smallest
    colour ``j`` outside I (recorded in ``details``).  Medial-section-
    transitive inputs are checked at the base flag only, and when I avoids
    both 0 and n-1 only the variance containment is evaluated (facets and
    vertex-figures of the cover are then automatically polytopes).  The
    remaining shapes of I are checked at the base flag and its j-neighbour,
    which covers both orbit pairs of the mix.
    """
    p = as_rooted(p)
    cls = two_orbit_class(p)
    if cls.kind != "two-orbit":
        raise NotTwoOrbit(f"input has {cls.orbit_count} flag orbits")
    if not is_maniplex(p) or not pip_check(p):
        raise NotPolytope("input must be a polytope")
    n = p.rank
    I = cls.I
    j = min(i for i in range(n) if i not in I)
    pbar = rebase(p, int(p.connections[j, p.base_flag]))
    r = mix(p, pbar)
    details = {"I": sorted(I), "rebase_color": j}
    need_sections = True
    if chain_transitive(p, {0, n - 1}):
        flags = [0]
        if not I & {0, n - 1}:
            case = "medial-transitive, I avoids 0 and n-1"
            need_sections = False
        else:
            case = "medial-transitive"
    else:
        flags = [0, int(r.mix.connections[j, 0])]
        if I == interval(1, n - 2):
            case = "I=[1,n-2]"
        elif I == interval(0, n - 2):
            case = "I=[0,n-2]"
        elif I == interval(1, n - 1):
            case = "I=[1,n-1]"
        else:  # pragma: no cover - every two-orbit class falls in one of the above
            case = "general"
            lab = automorphisms(p).orbits.labels
            key = lab[r.pair_labels[:, 0]] * 2 + lab[r.pair_labels[:, 1]]
            _, first = np.unique(key, return_index=True)
            flags = sorted(int(q) for q in first)
    rep = _evaluate(p, pbar, r, flags, need_sections=need_sections)
    rep.details.update(details, case=case, cover_flag_count=r.flag_count)
    return rep


def covers(a, b) -> bool:
    """Base-respecting covering ``a -> b`` exists."""
    return covering_map(a, b) is not None
