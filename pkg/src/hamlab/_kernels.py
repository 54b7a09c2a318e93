"""Array kernels behind the graph, pruning and search layers.

A graph lives in three arrays:

* ``nbr[v, :deg[v]]`` - neighbors of ``v`` in list order
* ``pos[u, v]``       - index of ``v`` in ``nbr[u]``, or -1 when absent
* ``deg[v]``          - current degree

Deletion swaps the victim with the last list entry.  The journal row
``(u, v, iu, iv)`` remembers the original slots so that undoing deletions
in LIFO order restores the lists element for element.

Everything here is compiled by numba unless ``HAMLAB_NO_JIT`` is set, so
the code sticks to the numba-supported subset: scalar loops, numpy arrays,
tuples of ints.
"""

import numpy as np

from ._jit import kernel

# prune / certificate codes
REDUCED = 0
MIN_DEGREE = 1
TRI_FORCED = 2
DISCONNECTED = 3
CUT_POINT = 4
ODD_FORCED_DEGREE = 5

# search status
PAUSED = 0
FOUND = 1
EXHAUSTED = 2
BUDGET = 3

# neighbor ordering
LOW_FIRST = 0
HIGH_FIRST = 1
RANDOM_ORDER = 2

_ENTER_OK = 0
_ENTER_FOUND = 1
_ENTER_FAIL = 2

_MASK32 = 0xFFFFFFFF


@kernel
def _unlink(nbr, pos, deg, u, v, i):
    last = deg[u] - 1
    w = nbr[u, last]
    nbr[u, i] = w
    pos[u, w] = i
    nbr[u, last] = v
    pos[u, v] = -1
    deg[u] = last


@kernel
def _relink(nbr, pos, deg, u, v, i):
    slot = deg[u]
    w = nbr[u, i]
    nbr[u, slot] = w
    pos[u, w] = slot
    nbr[u, i] = v
    pos[u, v] = i
    deg[u] = slot + 1


@kernel
def delete_edge(nbr, pos, deg, u, v, jrn, jtop):
    iu = pos[u, v]
    iv = pos[v, u]
    _unlink(nbr, pos, deg, u, v, iu)
    _unlink(nbr, pos, deg, v, u, iv)
    t = jtop[0]
    jrn[t, 0] = u
    jrn[t, 1] = v
    jrn[t, 2] = iu
    jrn[t, 3] = iv
    jtop[0] = t + 1


@kernel
def restore(nbr, pos, deg, jrn, jtop, target):
    t = jtop[0]
    while t > target:
        t -= 1
        u = jrn[t, 0]
        v = jrn[t, 1]
        _relink(nbr, pos, deg, v, u, jrn[t, 3])
        _relink(nbr, pos, deg, u, v, jrn[t, 2])
    jtop[0] = t


@kernel
def prune(nbr, pos, deg, n, jrn, jtop, mark, cnt, hits, stamp):
    """Run both pruning rules to a fixpoint.

    Returns ``(code, passes)`` where ``passes`` counts sweeps that deleted
    at least one edge.
    """
    passes = 0
    while True:
        before = jtop[0]

        # a vertex with two degree-2 neighbours keeps only those two edges
        stamp[0] += 1
        sid = stamp[0]
        nh = 0
        for a in range(n):
            if deg[a] == 2:
                for t in range(2):
                    x = nbr[a, t]
                    if mark[x] != sid:
                        mark[x] = sid
                        cnt[x] = 0
                    cnt[x] += 1
                    if cnt[x] == 2:
                        hits[nh] = x
                        nh += 1
        for h in range(nh):
            x = hits[h]
            live = 0
            for t in range(deg[x]):
                if deg[nbr[x, t]] == 2:
                    live += 1
            if live >= 3:
                return TRI_FORCED, passes
            if live == 2 and deg[x] > 2:
                t = deg[x] - 1
                while t >= 0:
                    y = nbr[x, t]
                    if deg[y] != 2:
                        delete_edge(nbr, pos, deg, x, y, jrn, jtop)
                    t -= 1

        # a forced path on fewer than n vertices cannot be closed by its end edge
        stamp[0] += 1
        sid = stamp[0]
        for s in range(n):
            if deg[s] != 2 or mark[s] == sid:
                continue
            mark[s] = sid
            k = 1
            prev = s
            cur = nbr[s, 0]
            while cur != s and deg[cur] == 2:
                mark[cur] = sid
                k += 1
                nxt = nbr[cur, 0]
                if nxt == prev:
                    nxt = nbr[cur, 1]
                prev = cur
                cur = nxt
            if cur == s:
                if k < n:
                    return MIN_DEGREE, passes
                continue
            e1 = cur
            prev = s
            cur = nbr[s, 1]
            while deg[cur] == 2:
                mark[cur] = sid
                k += 1
                nxt = nbr[cur, 0]
                if nxt == prev:
                    nxt = nbr[cur, 1]
                prev = cur
                cur = nxt
            e2 = cur
            if e1 != e2 and k + 2 < n and pos[e1, e2] >= 0:
                delete_edge(nbr, pos, deg, e1, e2, jrn, jtop)

        for v in range(n):
            if deg[v] < 2:
                return MIN_DEGREE, passes
        if jtop[0] == before:
            return REDUCED, passes
        passes += 1


@kernel
def label_components(nbr, deg, n, comp, stk):
    for v in range(n):
        comp[v] = -1
    ncomp = 0
    for root in range(n):
        if comp[root] >= 0:
            continue
        comp[root] = ncomp
        sp = 1
        stk[0] = root
        while sp > 0:
            sp -= 1
            v = stk[sp]
            for t in range(deg[v]):
                w = nbr[v, t]
                if comp[w] < 0:
                    comp[w] = ncomp
                    stk[sp] = w
                    sp += 1
        ncomp += 1
    return ncomp


@kernel
def count_components_without(nbr, deg, n, removed, comp, stk):
    """Number of components after deleting the vertices flagged in ``removed``."""
    for v in range(n):
        comp[v] = -1
    ncomp = 0
    for root in range(n):
        if comp[root] >= 0 or removed[root]:
            continue
        comp[root] = ncomp
        sp = 1
        stk[0] = root
        while sp > 0:
            sp -= 1
            v = stk[sp]
            for t in range(deg[v]):
                w = nbr[v, t]
                if comp[w] < 0 and not removed[w]:
                    comp[w] = ncomp
                    stk[sp] = w
                    sp += 1
        ncomp += 1
    return ncomp


@kernel
def articulation(nbr, deg, n, disc, low, parent, itr, stk, is_art):
    """Iterative low-link DFS over every component.

    Fills ``is_art`` and returns ``(n_cut_points, n_components)``.
    """
    for v in range(n):
        disc[v] = -1
        is_art[v] = 0
    clock = 0
    ncomp = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        ncomp += 1
        disc[root] = clock
        low[root] = clock
        clock += 1
        parent[root] = -1
        itr[root] = 0
        stk[0] = root
        sp = 1
        root_children = 0
        while sp > 0:
            v = stk[sp - 1]
            if itr[v] < deg[v]:
                w = nbr[v, itr[v]]
                itr[v] += 1
                if disc[w] < 0:
                    parent[w] = v
                    disc[w] = clock
                    low[w] = clock
                    clock += 1
                    itr[w] = 0
                    stk[sp] = w
                    sp += 1
                    if v == root:
                        root_children += 1
                elif w != parent[v] and disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                sp -= 1
                p = parent[v]
                if p >= 0:
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if p != root and low[v] >= disc[p]:
                        is_art[p] = 1
        if root_children >= 2:
            is_art[root] = 1
    count = 0
    for v in range(n):
        count += is_art[v]
    return count, ncomp


@kernel
def forced_parity(nbr, deg, n, comp, fdeg, stk):
    """Components of G minus its forced edges and their forced degrees.

    An edge is forced when either endpoint has degree 2.  Returns
    ``(odd_component, n_components)`` with ``odd_component = -1`` when every
    forced degree is even.
    """
    for v in range(n):
        comp[v] = -1
    ncomp = 0
    for root in range(n):
        if comp[root] >= 0:
            continue
        comp[root] = ncomp
        stk[0] = root
        sp = 1
        while sp > 0:
            sp -= 1
            v = stk[sp]
            for t in range(deg[v]):
                w = nbr[v, t]
                if deg[v] == 2 or deg[w] == 2:
                    continue
                if comp[w] < 0:
                    comp[w] = ncomp
                    stk[sp] = w
                    sp += 1
        ncomp += 1
    for c in range(ncomp):
        fdeg[c] = 0
    for v in range(n):
        for t in range(deg[v]):
            w = nbr[v, t]
            if deg[v] == 2 or deg[w] == 2:
                fdeg[comp[v]] += 1
    for c in range(ncomp):
        if fdeg[c] % 2 == 1:
            return c, ncomp
    return -1, ncomp


@kernel
def hash32(x):
    x = int(x) & _MASK32
    x ^= x >> 16
    x = (x * 0x7FEB352D) & _MASK32
    x ^= x >> 15
    x = (x * 0x846CA68B) & _MASK32
    x ^= x >> 16
    return x


@kernel
def order_candidates(row, cnt, deg, heuristic, seed, keys):
    """Sort ``row[:cnt]`` in place; ties always fall back to ascending id."""
    for i in range(cnt):
        v = int(row[i])
        if heuristic == LOW_FIRST:
            keys[i] = (int(deg[v]) << 32) | v
        elif heuristic == HIGH_FIRST:
            keys[i] = ((0x7FFFFFFF - int(deg[v])) << 32) | v
        else:
            h = hash32(hash32(seed) ^ v) & 0x7FFFFFFF
            keys[i] = (h << 32) | v
    for i in range(1, cnt):
        k = keys[i]
        v = row[i]
        j = i - 1
        while j >= 0 and keys[j] > k:
            keys[j + 1] = keys[j]
            row[j + 1] = row[j]
            j -= 1
        keys[j + 1] = k
        row[j + 1] = v


@kernel
def _enter(nbr, pos, deg, n, jrn, jtop, path, on_path, marks, cand, ncand, ci,
           mark, cnt, hits, stamp, comp, stk, disc, low, parent, itr, is_art,
           keys, w, nd, start, nodes, heuristic, check_comp, check_cut, seed):
    path[nd] = w
    on_path[w] = 1
    marks[nd] = jtop[0]
    if nd >= 2:
        # the previous endpoint becomes interior: only its two path edges survive
        u = path[nd - 1]
        p = path[nd - 2]
        t = deg[u] - 1
        while t >= 0:
            y = nbr[u, t]
            if y != p and y != w:
                delete_edge(nbr, pos, deg, u, y, jrn, jtop)
            t -= 1
    code, _ = prune(nbr, pos, deg, n, jrn, jtop, mark, cnt, hits, stamp)
    ok = code == REDUCED
    if ok and nd + 1 == n:
        if pos[w, start] >= 0:
            return _ENTER_FOUND
        ok = False
    if ok and check_cut:
        nart, ncomp = articulation(nbr, deg, n, disc, low, parent, itr, stk, is_art)
        if nart > 0 or ncomp > 1:
            ok = False
    elif ok and check_comp:
        if label_components(nbr, deg, n, comp, stk) > 1:
            ok = False
    if ok:
        c = 0
        for t in range(deg[w]):
            y = nbr[w, t]
            if on_path[y] == 0:
                cand[nd, c] = y
                c += 1
        order_candidates(cand[nd], c, deg, heuristic, hash32(seed ^ (nodes & _MASK32)), keys)
        ncand[nd] = c
        ci[nd] = 0
        return _ENTER_OK
    restore(nbr, pos, deg, jrn, jtop, marks[nd])
    on_path[w] = 0
    return _ENTER_FAIL


@kernel
def search(nbr, pos, deg, n, jrn, jtop, path, on_path, marks, cand, ncand, ci,
           mark, cnt, hits, stamp, comp, stk, disc, low, parent, itr, is_art,
           keys, ctl, heuristic, check_comp, check_cut, seed, node_cap, pause_at):
    """Resumable depth-first path extension.

    ``ctl`` holds ``[depth, nodes, start]``; depth -1 means the root has not
    been placed yet.  Every placed vertex costs one node.  The call returns
    PAUSED once ``pause_at`` nodes have been spent (state is kept in the
    arrays and a later call continues), BUDGET at ``node_cap``, FOUND with
    the cycle in ``path`` and EXHAUSTED when the tree is done.
    """
    d = ctl[0]
    nodes = ctl[1]
    start = ctl[2]
    if d == -1:
        nodes += 1
        r = _enter(nbr, pos, deg, n, jrn, jtop, path, on_path, marks, cand, ncand, ci,
                   mark, cnt, hits, stamp, comp, stk, disc, low, parent, itr, is_art,
                   keys, start, 0, start, nodes, heuristic, check_comp, check_cut, seed)
        if r == _ENTER_FOUND:
            ctl[0] = 0
            ctl[1] = nodes
            return FOUND
        if r == _ENTER_FAIL:
            ctl[0] = -2
            ctl[1] = nodes
            return EXHAUSTED
        d = 0
    while d >= 0:
        i = ci[d]
        if i < ncand[d]:
            if nodes >= node_cap:
                ctl[0] = d
                ctl[1] = nodes
                return BUDGET
            if nodes >= pause_at:
                ctl[0] = d
                ctl[1] = nodes
                return PAUSED
            w = cand[d, i]
            ci[d] = i + 1
            nodes += 1
            r = _enter(nbr, pos, deg, n, jrn, jtop, path, on_path, marks, cand, ncand, ci,
                       mark, cnt, hits, stamp, comp, stk, disc, low, parent, itr, is_art,
                       keys, w, d + 1, start, nodes, heuristic, check_comp, check_cut, seed)
            if r == _ENTER_FOUND:
                ctl[0] = d + 1
                ctl[1] = nodes
                return FOUND
            if r == _ENTER_OK:
                d += 1
        else:
            restore(nbr, pos, deg, jrn, jtop, marks[d])
            on_path[path[d]] = 0
            d -= 1
    ctl[0] = -2
    ctl[1] = nodes
    return EXHAUSTED


def scratch(n):
    """Allocate the per-graph work arrays used by :func:`prune` and friends."""
    return {
        "mark": np.zeros(n, dtype=np.int64),
        "cnt": np.zeros(n, dtype=np.int32),
        "hits": np.zeros(n, dtype=np.int32),
        "stamp": np.zeros(1, dtype=np.int64),
        "comp": np.zeros(n, dtype=np.int32),
        "stk": np.zeros(max(n, 1), dtype=np.int32),
        "disc": np.zeros(n, dtype=np.int32),
        "low": np.zeros(n, dtype=np.int32),
        "parent": np.zeros(n, dtype=np.int32),
        "itr": np.zeros(n, dtype=np.int32),
        "is_art": np.zeros(n, dtype=np.int32),
        "keys": np.zeros(max(n, 1), dtype=np.int64),
    }
