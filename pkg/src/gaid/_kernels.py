"""Compiled reachability kernels.

All graph traversals run over a CSR layout: per relation (parents, children,
undirected neighbors) an ``int64`` offset array of length p+1 and a sorted
``int32`` index array. Walk-status-aware searches keep a flat visited bit
array indexed by (arrival edge class, walk status, node), so every state is
expanded at most once and each kernel is O(p + m) with small constants.

Kernels are ``nogil`` so worker threads parallelize across treatment nodes.
"""

import numpy as np
from numba import njit

# Arrival edge classes: how the walk stepped onto the current node.
ARR_DIR_IN = 0  # via an edge pointing into the node (... -> V)
ARR_DIR_OUT = 1  # via an edge pointing out of the node (... <- V)
ARR_UND = 2  # via an undirected edge (... -- V)

# Walk statuses for adjustment verification.
ST_PD_TO_OPEN = 0  # possibly directed, started T ->, no Z node passed
ST_PD_TO_BLOCKED = 1  # possibly directed, started T ->, passed through Z
ST_PD_UN_OPEN = 2  # possibly directed, started T --, no Z node passed
ST_PD_UN_BLOCKED = 3  # possibly directed, started T --, passed through Z
ST_NONCAUSAL = 4  # took a backward edge; kept only while open given Z

N_ARRIVALS = 3
N_STATUSES = 5

STRAT_PARENT = 0
STRAT_ANCESTOR = 1


@njit(inline="always")
def _next_status(status, move, blocked):
    """Status transition for one step; -1 means the walk is dropped.

    ``move`` is the arrival class the step would create at the next node and
    ``blocked`` the step's blocking flag: V in Z for non-collider steps,
    V not in Z for collider steps (arrived ->, continuing to a parent).
    Blocked statuses never turn open again and NonCausal absorbs.
    """
    if status == ST_PD_TO_OPEN or status == ST_PD_TO_BLOCKED:
        if move == ARR_DIR_IN or move == ARR_UND:
            if blocked:
                return ST_PD_TO_BLOCKED
            return status
        if status == ST_PD_TO_OPEN and not blocked:
            return ST_NONCAUSAL
        return -1
    if status == ST_PD_UN_OPEN or status == ST_PD_UN_BLOCKED:
        if move == ARR_DIR_IN or move == ARR_UND:
            if blocked:
                return ST_PD_UN_BLOCKED
            return status
        if status == ST_PD_UN_OPEN and not blocked:
            return ST_NONCAUSAL
        return -1
    # ST_NONCAUSAL
    if not blocked:
        return ST_NONCAUSAL
    return -1


@njit(cache=True, nogil=True)
def reach(ptr, idx, seeds, out, stack):
    """Mark everything reachable from ``seeds`` along one CSR relation."""
    top = 0
    for i in range(seeds.shape[0]):
        s = seeds[i]
        if not out[s]:
            out[s] = True
            stack[top] = s
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for e in range(ptr[v], ptr[v + 1]):
            w = idx[e]
            if not out[w]:
                out[w] = True
                stack[top] = w
                top += 1


@njit(cache=True, nogil=True)
def reach2(ptr_a, idx_a, ptr_b, idx_b, seeds, out, stack):
    """Mark everything reachable from ``seeds`` along two CSR relations."""
    top = 0
    for i in range(seeds.shape[0]):
        s = seeds[i]
        if not out[s]:
            out[s] = True
            stack[top] = s
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for e in range(ptr_a[v], ptr_a[v + 1]):
            w = idx_a[e]
            if not out[w]:
                out[w] = True
                stack[top] = w
                top += 1
        for e in range(ptr_b[v], ptr_b[v + 1]):
            w = idx_b[e]
            if not out[w]:
                out[w] = True
                stack[top] = w
                top += 1


@njit(cache=True, nogil=True)
def reach_avoiding(ptr, idx, seed, avoid, out, stack):
    """Mark nodes reachable from ``seed`` along one relation, never
    stepping onto a node flagged in ``avoid``. The seed must not be flagged."""
    top = 0
    out[seed] = True
    stack[top] = seed
    top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for e in range(ptr[v], ptr[v + 1]):
            w = idx[e]
            if not out[w] and not avoid[w]:
                out[w] = True
                stack[top] = w
                top += 1


@njit(cache=True, nogil=True)
def parents_of_set(pa_ptr, pa_idx, members, out):
    """Union of direct parents over all flagged member nodes."""
    p = members.shape[0]
    for v in range(p):
        if members[v]:
            for e in range(pa_ptr[v], pa_ptr[v + 1]):
                out[pa_idx[e]] = True


@njit(cache=True, nogil=True)
def non_amenable(ch_ptr, ch_idx, un_ptr, un_idx, t_nodes, t_mask, nam, stack):
    """Nodes reached by a proper possibly directed walk from T whose first
    edge is undirected. ``nam`` doubles as the visited mask; T is never
    re-entered."""
    top = 0
    for i in range(t_nodes.shape[0]):
        t = t_nodes[i]
        for e in range(un_ptr[t], un_ptr[t + 1]):
            w = un_idx[e]
            if not t_mask[w] and not nam[w]:
                nam[w] = True
                stack[top] = w
                top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        for e in range(un_ptr[v], un_ptr[v + 1]):
            w = un_idx[e]
            if not t_mask[w] and not nam[w]:
                nam[w] = True
                stack[top] = w
                top += 1
        for e in range(ch_ptr[v], ch_ptr[v + 1]):
            w = ch_idx[e]
            if not t_mask[w] and not nam[w]:
                nam[w] = True
                stack[top] = w
                top += 1


@njit(cache=True, nogil=True)
def verify_adjustment(
    pa_ptr,
    pa_idx,
    ch_ptr,
    ch_idx,
    un_ptr,
    un_idx,
    t_nodes,
    t_mask,
    z_mask,
    nam,
    nva,
    visited,
    stack,
):
    """Walk-status-aware adjustment verification.

    Seeds every T node with status init, then runs a depth-first search over
    (arrival, node, status) records. A node lands in ``nva`` when reached
    with a blocked or non-causal status and in ``nam`` (plus ``nva``) when
    reached by a walk that started with an undirected edge. ``nva`` must be
    preset to Z by the caller; ``visited`` has 15*p cleared slots.

    Returns the number of record expansions (pops), for instrumentation.
    """
    p = t_mask.shape[0]
    top = 0
    # Seeding: walks out of T start PD-open, backward edges start non-causal.
    for i in range(t_nodes.shape[0]):
        t = t_nodes[i]
        for e in range(pa_ptr[t], pa_ptr[t + 1]):
            w = pa_idx[e]
            if t_mask[w]:
                continue
            s = (ARR_DIR_OUT * N_STATUSES + ST_NONCAUSAL) * p + w
            if not visited[s]:
                visited[s] = True
                stack[top] = s
                top += 1
        for e in range(un_ptr[t], un_ptr[t + 1]):
            w = un_idx[e]
            if t_mask[w]:
                continue
            s = (ARR_UND * N_STATUSES + ST_PD_UN_OPEN) * p + w
            if not visited[s]:
                visited[s] = True
                stack[top] = s
                top += 1
        for e in range(ch_ptr[t], ch_ptr[t + 1]):
            w = ch_idx[e]
            if t_mask[w]:
                continue
            s = (ARR_DIR_IN * N_STATUSES + ST_PD_TO_OPEN) * p + w
            if not visited[s]:
                visited[s] = True
                stack[top] = s
                top += 1
    expansions = 0
    while top > 0:
        top -= 1
        s = stack[top]
        expansions += 1
        v = s % p
        rest = s // p
        status = rest % N_STATUSES
        arrived = rest // N_STATUSES
        if status == ST_PD_UN_OPEN or status == ST_PD_UN_BLOCKED:
            nam[v] = True
            nva[v] = True
        elif status == ST_NONCAUSAL or status == ST_PD_TO_BLOCKED:
            nva[v] = True
        v_in_z = z_mask[v]
        # Steps to parents; omitted entirely when arrived undirected (--V<-W).
        if arrived == ARR_DIR_IN:
            ns = _next_status(status, ARR_DIR_OUT, not v_in_z)  # collider ->V<-W
        elif arrived == ARR_DIR_OUT:
            ns = _next_status(status, ARR_DIR_OUT, v_in_z)  # <-V<-W
        else:
            ns = -1
        if ns >= 0:
            for e in range(pa_ptr[v], pa_ptr[v + 1]):
                w = pa_idx[e]
                if t_mask[w]:
                    continue
                s2 = (ARR_DIR_OUT * N_STATUSES + ns) * p + w
                if not visited[s2]:
                    visited[s2] = True
                    stack[top] = s2
                    top += 1
        # Steps along undirected edges (*V--W).
        ns = _next_status(status, ARR_UND, v_in_z)
        if ns >= 0:
            for e in range(un_ptr[v], un_ptr[v + 1]):
                w = un_idx[e]
                if t_mask[w]:
                    continue
                s2 = (ARR_UND * N_STATUSES + ns) * p + w
                if not visited[s2]:
                    visited[s2] = True
                    stack[top] = s2
                    top += 1
        # Steps to children (*V->W).
        ns = _next_status(status, ARR_DIR_IN, v_in_z)
        if ns >= 0:
            for e in range(ch_ptr[v], ch_ptr[v + 1]):
                w = ch_idx[e]
                if t_mask[w]:
                    continue
                s2 = (ARR_DIR_IN * N_STATUSES + ns) * p + w
                if not visited[s2]:
                    visited[s2] = True
                    stack[top] = s2
                    top += 1
    return expansions


@njit(cache=True, nogil=True)
def d_connected(
    pa_ptr,
    pa_idx,
    ch_ptr,
    ch_idx,
    un_ptr,
    un_idx,
    t_nodes,
    t_mask,
    z_mask,
    reached,
    visited,
    stack,
):
    """All nodes d-connected to T given Z via definite-status walks.

    Local rule table: --V--W is treated as definite status and ->V--W never
    continues; colliders ->V<-W continue only when V is in Z, every other
    case only when V is not in Z. States are (arrival class, node) pairs.
    """
    p = t_mask.shape[0]
    top = 0
    for i in range(t_nodes.shape[0]):
        t = t_nodes[i]
        for e in range(ch_ptr[t], ch_ptr[t + 1]):
            w = ch_idx[e]
            if t_mask[w]:
                continue
            reached[w] = True
            s = ARR_DIR_IN * p + w
            if not visited[s]:
                visited[s] = True
                stack[top] = s
                top += 1
        for e in range(pa_ptr[t], pa_ptr[t + 1]):
            w = pa_idx[e]
            if t_mask[w]:
                continue
            reached[w] = True
            s = ARR_DIR_OUT * p + w
            if not visited[s]:
                visited[s] = True
                stack[top] = s
                top += 1
        for e in range(un_ptr[t], un_ptr[t + 1]):
            w = un_idx[e]
            if t_mask[w]:
                continue
            reached[w] = True
            s = ARR_UND * p + w
            if not visited[s]:
                visited[s] = True
                stack[top] = s
                top += 1
    while top > 0:
        top -= 1
        s = stack[top]
        v = s % p
        arrived = s // p
        v_in_z = z_mask[v]
        if not v_in_z:
            for e in range(ch_ptr[v], ch_ptr[v + 1]):
                w = ch_idx[e]
                if t_mask[w]:
                    continue
                reached[w] = True
                s2 = ARR_DIR_IN * p + w
                if not visited[s2]:
                    visited[s2] = True
                    stack[top] = s2
                    top += 1
        if (arrived == ARR_DIR_IN and v_in_z) or (arrived == ARR_DIR_OUT and not v_in_z):
            for e in range(pa_ptr[v], pa_ptr[v + 1]):
                w = pa_idx[e]
                if t_mask[w]:
                    continue
                reached[w] = True
                s2 = ARR_DIR_OUT * p + w
                if not visited[s2]:
                    visited[s2] = True
                    stack[top] = s2
                    top += 1
        if arrived != ARR_DIR_IN and not v_in_z:
            for e in range(un_ptr[v], un_ptr[v + 1]):
                w = un_idx[e]
                if t_mask[w]:
                    continue
                reached[w] = True
                s2 = ARR_UND * p + w
                if not visited[s2]:
                    visited[s2] = True
                    stack[top] = s2
                    top += 1


@njit(cache=True, nogil=True)
def aid_local_kernel(
    strategy,
    tr_pa_ptr,
    tr_pa_idx,
    tr_ch_ptr,
    tr_ch_idx,
    tr_un_ptr,
    tr_un_idx,
    tr_has_un,
    gu_pa_ptr,
    gu_pa_idx,
    gu_ch_ptr,
    gu_ch_idx,
    gu_un_ptr,
    gu_un_idx,
    gu_has_un,
    treatments,
    y_mask,
):
    """Mistake count for the parent or ancestor strategy over one treatment
    chunk. Both strategies share a single adjustment set per treatment, so
    one verification pass covers all adjustment claims of that treatment."""
    p = y_mask.shape[0]
    t_mask = np.zeros(p, np.bool_)
    z_mask = np.zeros(p, np.bool_)
    nam_g = np.zeros(p, np.bool_)
    de_g = np.zeros(p, np.bool_)
    nam_t = np.zeros(p, np.bool_)
    d_prime = np.zeros(p, np.bool_)
    nam_out = np.zeros(p, np.bool_)
    nva = np.zeros(p, np.bool_)
    visited = np.zeros(N_ARRIVALS * N_STATUSES * p, np.bool_)
    stack = np.empty(N_ARRIVALS * N_STATUSES * p + 1, np.int64)
    small_stack = np.empty(p + 1, np.int64)
    seeds = np.empty(1, np.int32)
    count = 0
    for i in range(treatments.shape[0]):
        t = treatments[i]
        t_mask[t] = True
        seeds[0] = t
        # Identification strategy on the guess graph.
        nam_g[:] = False
        if gu_has_un:
            non_amenable(gu_ch_ptr, gu_ch_idx, gu_un_ptr, gu_un_idx, seeds, t_mask, nam_g, small_stack)
        z_mask[:] = False
        if strategy == STRAT_PARENT:
            for e in range(gu_pa_ptr[t], gu_pa_ptr[t + 1]):
                z_mask[gu_pa_idx[e]] = True
        else:
            de_g[:] = False
            reach(gu_ch_ptr, gu_ch_idx, seeds, de_g, small_stack)
            reach(gu_pa_ptr, gu_pa_idx, seeds, z_mask, small_stack)
            z_mask[t] = False
        # Verification inputs on the true graph.
        nam_t[:] = False
        if tr_has_un:
            non_amenable(tr_ch_ptr, tr_ch_idx, tr_un_ptr, tr_un_idx, seeds, t_mask, nam_t, small_stack)
        d_prime[:] = False
        if tr_has_un:
            reach2(tr_ch_ptr, tr_ch_idx, tr_un_ptr, tr_un_idx, seeds, d_prime, small_stack)
        else:
            reach(tr_ch_ptr, tr_ch_idx, seeds, d_prime, small_stack)
        any_adjust = False
        for v in range(p):
            if v == t:
                continue
            if nam_g[v]:
                # Non-identifiability claim: wrong wherever the true graph is amenable.
                if y_mask[v] and not nam_t[v]:
                    count += 1
            elif (strategy == STRAT_PARENT and z_mask[v]) or (
                strategy == STRAT_ANCESTOR and not de_g[v]
            ):
                # Zero-effect claim: wrong for true possible descendants.
                if y_mask[v] and d_prime[v]:
                    count += 1
            else:
                any_adjust = True
        if any_adjust:
            visited[:] = False
            nam_out[:] = False
            for v in range(p):
                nva[v] = z_mask[v]
            verify_adjustment(
                tr_pa_ptr,
                tr_pa_idx,
                tr_ch_ptr,
                tr_ch_idx,
                tr_un_ptr,
                tr_un_idx,
                seeds,
                t_mask,
                z_mask,
                nam_out,
                nva,
                visited,
                stack,
            )
            for v in range(p):
                if v == t or not y_mask[v] or nam_g[v]:
                    continue
                if (strategy == STRAT_PARENT and z_mask[v]) or (
                    strategy == STRAT_ANCESTOR and not de_g[v]
                ):
                    continue
                if nva[v]:
                    count += 1
        t_mask[t] = False
    return count


@njit(inline="always")
def _rows_equal(zs, a, b, p):
    for w in range(p):
        if zs[a, w] != zs[b, w]:
            return False
    return True


@njit(cache=True, nogil=True)
def aid_oset_kernel(
    tr_pa_ptr,
    tr_pa_idx,
    tr_ch_ptr,
    tr_ch_idx,
    tr_un_ptr,
    tr_un_idx,
    tr_has_un,
    gu_pa_ptr,
    gu_pa_idx,
    gu_ch_ptr,
    gu_ch_idx,
    gu_un_ptr,
    gu_un_idx,
    gu_has_un,
    treatments,
    y_mask,
):
    """Mistake count for the optimal-set strategy over one treatment chunk.

    Adjustment sets depend on the target, so per treatment the kernel builds
    one candidate set per causal target (parents of the causal nodes minus
    descendants of the treatment), groups identical sets by content hash and
    runs one verification pass per distinct set."""
    p = y_mask.shape[0]
    t_mask = np.zeros(p, np.bool_)
    nam_g = np.zeros(p, np.bool_)
    de_g = np.zeros(p, np.bool_)
    prop_an = np.zeros(p, np.bool_)
    nam_t = np.zeros(p, np.bool_)
    d_prime = np.zeros(p, np.bool_)
    nam_out = np.zeros(p, np.bool_)
    nva = np.zeros(p, np.bool_)
    visited = np.zeros(N_ARRIVALS * N_STATUSES * p, np.bool_)
    stack = np.empty(N_ARRIVALS * N_STATUSES * p + 1, np.int64)
    small_stack = np.empty(p + 1, np.int64)
    seeds = np.empty(1, np.int32)
    targets = np.empty(p, np.int32)
    count = 0
    for i in range(treatments.shape[0]):
        t = treatments[i]
        t_mask[t] = True
        seeds[0] = t
        nam_g[:] = False
        if gu_has_un:
            non_amenable(gu_ch_ptr, gu_ch_idx, gu_un_ptr, gu_un_idx, seeds, t_mask, nam_g, small_stack)
        de_g[:] = False
        reach(gu_ch_ptr, gu_ch_idx, seeds, de_g, small_stack)
        nam_t[:] = False
        if tr_has_un:
            non_amenable(tr_ch_ptr, tr_ch_idx, tr_un_ptr, tr_un_idx, seeds, t_mask, nam_t, small_stack)
        d_prime[:] = False
        if tr_has_un:
            reach2(tr_ch_ptr, tr_ch_idx, tr_un_ptr, tr_un_idx, seeds, d_prime, small_stack)
        else:
            reach(tr_ch_ptr, tr_ch_idx, seeds, d_prime, small_stack)
        k = 0
        for v in range(p):
            if v == t:
                continue
            if nam_g[v]:
                if y_mask[v] and not nam_t[v]:
                    count += 1
            elif not de_g[v]:
                if y_mask[v] and d_prime[v]:
                    count += 1
            else:
                targets[k] = v
                k += 1
        if k > 0:
            zs = np.zeros((k, p), np.bool_)
            hashes = np.empty(k, np.int64)
            for j in range(k):
                y = targets[j]
                prop_an[:] = False
                reach_avoiding(gu_pa_ptr, gu_pa_idx, y, t_mask, prop_an, small_stack)
                for v in range(p):
                    if de_g[v] and prop_an[v]:
                        for e in range(gu_pa_ptr[v], gu_pa_ptr[v + 1]):
                            zs[j, gu_pa_idx[e]] = True
                h = np.int64(-3750763034362895579)  # FNV-1a offset basis, wrapped
                for v in range(p):
                    if zs[j, v]:
                        if de_g[v]:
                            zs[j, v] = False
                        else:
                            h = (h ^ np.int64(v + 1)) * np.int64(1099511628211)
                hashes[j] = h
            order = np.argsort(hashes)
            consumed = np.zeros(k, np.bool_)
            run_lo = 0
            while run_lo < k:
                run_hi = run_lo
                while run_hi < k and hashes[order[run_hi]] == hashes[order[run_lo]]:
                    run_hi += 1
                for a in range(run_lo, run_hi):
                    ja = order[a]
                    if consumed[ja]:
                        continue
                    visited[:] = False
                    nam_out[:] = False
                    for v in range(p):
                        nva[v] = zs[ja, v]
                    verify_adjustment(
                        tr_pa_ptr,
                        tr_pa_idx,
                        tr_ch_ptr,
                        tr_ch_idx,
                        tr_un_ptr,
                        tr_un_idx,
                        seeds,
                        t_mask,
                        zs[ja],
                        nam_out,
                        nva,
                        visited,
                        stack,
                    )
                    for b in range(a, run_hi):
                        jb = order[b]
                        if consumed[jb] or not _rows_equal(zs, ja, jb, p):
                            continue
                        consumed[jb] = True
                        y = targets[jb]
                        if y_mask[y] and nva[y]:
                            count += 1
                run_lo = run_hi
        t_mask[t] = False
    return count
