"""Hot loops over flag arrays.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version.  Both produce bit-identical output, including the numbering of
flags, so callers never need to know which one ran.

The backend is picked once at import.  Set ``MANIPLEX_PURE_NUMPY=1`` to
force the numpy path (numba is also skipped if it cannot be imported).

Conventions shared by all kernels:

* ``conns`` is a C-contiguous int64 array of shape ``(rank, flag_count)``
  with ``conns[i, f]`` the ``i``-adjacent flag of ``f``.
* BFS always scans the queue in order and colors ``0..rank-1`` in order.
"""
import os

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("MANIPLEX_PURE_NUMPY", "").lower() not in (
    "1", "true", "yes", "on")

# chunk size (rows) for the vectorised extension of many candidate images
_EXTEND_CHUNK = 1 << 21


def _as_conns(a):
    return np.ascontiguousarray(a, dtype=np.int64)


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def components_numpy(conns, colors):
    """Connected components under ``colors``; block ids ordered by smallest flag."""
    m = conns.shape[1]
    labels = np.arange(m, dtype=np.int64)
    colors = [int(c) for c in colors]
    if not colors:
        return labels
    while True:
        new = labels
        for c in colors:
            new = np.minimum(new, labels[conns[c]])
        new = new[new]  # pointer jumping
        if np.array_equal(new, labels):
            break
        labels = new
    _, inv = np.unique(labels, return_inverse=True)
    return inv.astype(np.int64)


def bfs_tree_numpy(conns, base):
    n, m = conns.shape
    parent = np.full(m, -1, dtype=np.int64)
    pcolor = np.full(m, -1, dtype=np.int64)
    seen = np.zeros(m, dtype=bool)
    seen[base] = True
    order = [np.array([base], dtype=np.int64)]
    level_ptr = [0, 1]
    frontier = order[0]
    colors = np.arange(n, dtype=np.int64)
    while frontier.size:
        cand = conns[:, frontier].T.ravel()
        par = np.repeat(frontier, n)
        col = np.tile(colors, frontier.size)
        fresh = ~seen[cand]
        cand, par, col = cand[fresh], par[fresh], col[fresh]
        if cand.size == 0:
            break
        _, first = np.unique(cand, return_index=True)
        first.sort()
        nxt = cand[first]
        seen[nxt] = True
        parent[nxt] = par[first]
        pcolor[nxt] = col[first]
        order.append(nxt)
        level_ptr.append(level_ptr[-1] + nxt.size)
        frontier = nxt
    return (np.concatenate(order), parent, pcolor,
            np.asarray(level_ptr, dtype=np.int64))


def extend_numpy(src, order, parent, pcolor, level_ptr, tgt, targets):
    """Try every ``targets[k]`` as the image of the BFS root.

    Returns ``(ok, images)``; ``images[k]`` is only meaningful where ``ok[k]``.
    """
    n, m = src.shape
    targets = np.asarray(targets, dtype=np.int64)
    k_all = targets.size
    ok = np.zeros(k_all, dtype=bool)
    images = np.full((k_all, m), -1, dtype=np.int64)
    if k_all == 0:
        return ok, images
    if order.size < m:
        return ok, images
    step = max(1, _EXTEND_CHUNK // max(m, 1))
    for lo in range(0, k_all, step):
        hi = min(k_all, lo + step)
        img = np.empty((hi - lo, m), dtype=np.int64)
        img[:, order[0]] = targets[lo:hi]
        for lv in range(1, level_ptr.size - 1):
            nodes = order[level_ptr[lv]:level_ptr[lv + 1]]
            img[:, nodes] = tgt[pcolor[nodes], img[:, parent[nodes]]]
        good = np.ones(hi - lo, dtype=bool)
        for i in range(n):
            good &= np.all(tgt[i][img] == img[:, src[i]], axis=1)
        ok[lo:hi] = good
        images[lo:hi] = img
    return ok, images


def mix_numpy(a, b, a0, b0):
    """Component of ``(a0, b0)`` in the coordinatewise product, BFS-numbered."""
    n = a.shape[0]
    mb = b.shape[1]
    index = np.full(a.shape[1] * mb, -1, dtype=np.int64)
    start = a0 * mb + b0
    index[start] = 0
    codes = [np.array([start], dtype=np.int64)]
    frontier = codes[0]
    count = 1
    while frontier.size:
        x, y = np.divmod(frontier, mb)
        cand = (a[:, x] * mb + b[:, y]).T.ravel()
        fresh = cand[index[cand] < 0]
        if fresh.size == 0:
            break
        _, first = np.unique(fresh, return_index=True)
        first.sort()
        nxt = fresh[first]
        index[nxt] = np.arange(count, count + nxt.size)
        count += nxt.size
        codes.append(nxt)
        frontier = nxt
    allc = np.concatenate(codes)
    left, right = np.divmod(allc, mb)
    out = np.empty((n, allc.size), dtype=np.int64)
    for i in range(n):
        out[i] = index[a[i, left] * mb + b[i, right]]
    return out, left, right


def parity_numpy(conns, flips, base):
    """2-colouring where colour ``i`` edges switch class iff ``flips[i]``.

    Returns ``(ok, parity)``.  ``ok`` is False when no such colouring exists
    (a semi-edge of a flipping colour makes it impossible outright); the
    parity array is then all zeros.
    """
    order, parent, pcolor, level_ptr = bfs_tree_numpy(conns, base)
    m = conns.shape[1]
    flips = np.asarray(flips, dtype=np.int8)
    par = np.zeros(m, dtype=np.int8)
    for lv in range(1, level_ptr.size - 1):
        nodes = order[level_ptr[lv]:level_ptr[lv + 1]]
        par[nodes] = par[parent[nodes]] ^ flips[pcolor[nodes]]
    for i in range(conns.shape[0]):
        if np.any(par[conns[i]] != (par ^ flips[i])):
            return False, np.zeros(m, dtype=np.int8)
    return True, par


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _find(uf, x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    @njit(cache=True)
    def _components_nb(conns, colors):
        m = conns.shape[1]
        uf = np.arange(m)
        for c in colors:
            row = conns[c]
            for f in range(m):
                g = row[f]
                if g > f:
                    rf = _find(uf, f)
                    rg = _find(uf, g)
                    if rf != rg:
                        if rf < rg:
                            uf[rg] = rf
                        else:
                            uf[rf] = rg
        labels = np.empty(m, dtype=np.int64)
        blockid = np.full(m, -1, dtype=np.int64)
        nb = 0
        for f in range(m):
            r = _find(uf, f)
            if blockid[r] < 0:
                blockid[r] = nb
                nb += 1
            labels[f] = blockid[r]
        return labels

    @njit(cache=True)
    def _bfs_tree_nb(conns, base):
        n, m = conns.shape
        parent = np.full(m, -1, dtype=np.int64)
        pcolor = np.full(m, -1, dtype=np.int64)
        seen = np.zeros(m, dtype=np.bool_)
        order = np.empty(m, dtype=np.int64)
        level_ptr = np.empty(m + 2, dtype=np.int64)
        order[0] = base
        seen[base] = True
        level_ptr[0] = 0
        level_ptr[1] = 1
        nlev = 2
        head = 0
        tail = 1
        while head < tail:
            lvl_end = tail
            while head < lvl_end:
                f = order[head]
                head += 1
                for i in range(n):
                    g = conns[i, f]
                    if not seen[g]:
                        seen[g] = True
                        parent[g] = f
                        pcolor[g] = i
                        order[tail] = g
                        tail += 1
            if tail > lvl_end:
                level_ptr[nlev] = tail
                nlev += 1
        return order[:tail].copy(), parent, pcolor, level_ptr[:nlev].copy()

    @njit(cache=True)
    def _extend_nb(src, order, parent, pcolor, tgt, targets):
        n, m = src.shape
        k_all = targets.shape[0]
        ok = np.zeros(k_all, dtype=np.bool_)
        images = np.full((k_all, m), -1, dtype=np.int64)
        if order.shape[0] < m:
            return ok, images
        for k in range(k_all):
            img = images[k]
            img[order[0]] = targets[k]
            for t in range(1, m):
                f = order[t]
                img[f] = tgt[pcolor[f], img[parent[f]]]
            good = True
            for i in range(n):
                if not good:
                    break
                for f in range(m):
                    if tgt[i, img[f]] != img[src[i, f]]:
                        good = False
                        break
            ok[k] = good
        return ok, images

    @njit(cache=True)
    def _mix_nb(a, b, a0, b0):
        n = a.shape[0]
        ma = a.shape[1]
        mb = b.shape[1]
        index = np.full(ma * mb, -1, dtype=np.int64)
        cap = 1024
        left = np.empty(cap, dtype=np.int64)
        right = np.empty(cap, dtype=np.int64)
        out = np.empty((n, cap), dtype=np.int64)
        index[a0 * mb + b0] = 0
        left[0] = a0
        right[0] = b0
        count = 1
        head = 0
        while head < count:
            x = left[head]
            y = right[head]
            for i in range(n):
                u = a[i, x]
                v = b[i, y]
                code = u * mb + v
                j = index[code]
                if j < 0:
                    if count == cap:
                        cap *= 2
                        nl = np.empty(cap, dtype=np.int64)
                        nr = np.empty(cap, dtype=np.int64)
                        no = np.empty((n, cap), dtype=np.int64)
                        nl[:count] = left[:count]
                        nr[:count] = right[:count]
                        no[:, :count] = out[:, :count]
                        left, right, out = nl, nr, no
                    j = count
                    index[code] = j
                    left[j] = u
                    right[j] = v
                    count += 1
                out[i, head] = j
            head += 1
        return out[:, :count].copy(), left[:count].copy(), right[:count].copy()

    @njit(cache=True)
    def _parity_nb(conns, flips, base):
        n, m = conns.shape
        par = np.zeros(m, dtype=np.int8)
        seen = np.zeros(m, dtype=np.bool_)
        queue = np.empty(m, dtype=np.int64)
        queue[0] = base
        seen[base] = True
        head = 0
        tail = 1
        while head < tail:
            f = queue[head]
            head += 1
            for i in range(n):
                g = conns[i, f]
                want = par[f] ^ flips[i]
                if not seen[g]:
                    seen[g] = True
                    par[g] = want
                    queue[tail] = g
                    tail += 1
                elif par[g] != want:
                    return False, np.zeros(m, dtype=np.int8)
        return True, par

    def components_numba(conns, colors):
        return _components_nb(_as_conns(conns), np.asarray(list(colors), dtype=np.int64))

    def bfs_tree_numba(conns, base):
        return _bfs_tree_nb(_as_conns(conns), np.int64(base))

    def extend_numba(src, order, parent, pcolor, level_ptr, tgt, targets):
        return _extend_nb(_as_conns(src), order, parent, pcolor, _as_conns(tgt),
                          np.asarray(targets, dtype=np.int64))

    def mix_numba(a, b, a0, b0):
        return _mix_nb(_as_conns(a), _as_conns(b), np.int64(a0), np.int64(b0))

    def parity_numba(conns, flips, base):
        return _parity_nb(_as_conns(conns), np.asarray(flips, dtype=np.int8), np.int64(base))


BACKENDS = {
    "numpy": dict(components=components_numpy, bfs_tree=bfs_tree_numpy,
                  extend=extend_numpy, mix=mix_numpy, parity=parity_numpy),
}
if HAVE_NUMBA:
    BACKENDS["numba"] = dict(components=components_numba, bfs_tree=bfs_tree_numba,
                             extend=extend_numba, mix=mix_numba, parity=parity_numba)

BACKEND = "numba" if USE_NUMBA else "numpy"


def components(conns, colors):
    return BACKENDS[BACKEND]["components"](conns, colors)


def bfs_tree(conns, base):
    return BACKENDS[BACKEND]["bfs_tree"](conns, base)


def extend(src, tree, tgt, targets):
    """Extend root images along ``tree`` (output of :func:`bfs_tree` on ``src``).

    Each candidate root image in ``targets`` is pushed through the tree and
    every edge of ``src`` is then checked against ``tgt``.  Returns
    ``(hits, images)``: the successful targets and their full image arrays.
    Candidates are processed in chunks so only successes are kept in memory.
    """
    order, parent, pcolor, level_ptr = tree
    fn = BACKENDS[BACKEND]["extend"]
    targets = np.asarray(targets, dtype=np.int64)
    m = src.shape[1]
    step = max(1, _EXTEND_CHUNK // max(m, 1))
    hits, images = [], []
    for lo in range(0, targets.size, step):
        chunk = targets[lo:lo + step]
        ok, img = fn(src, order, parent, pcolor, level_ptr, tgt, chunk)
        hits.append(chunk[ok])
        images.append(img[ok])
    if not hits:
        return targets[:0], np.empty((0, m), dtype=np.int64)
    return np.concatenate(hits), np.concatenate(images)


def mix(a, b, a0, b0):
    return BACKENDS[BACKEND]["mix"](a, b, a0, b0)


def parity(conns, flips, base):
    return BACKENDS[BACKEND]["parity"](conns, flips, base)


def use_backend(name):
    """Switch backend at runtime (benchmarks and cross-checks only)."""
    global BACKEND
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}")
    BACKEND = name
