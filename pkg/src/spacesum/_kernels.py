"""Compiled hot loops.

Every function here is plain numba-compatible Python.  The collision
search core takes its step function as an argument, so the same source
serves the compiled List Disjointness loop and, through ``py_func``, the
generic :func:`spacesum.collide.collide` on arbitrary Python callables.

Conventions: vertices and list indices are 1-based; 0 marks an empty
slot in the marked-vertex table.
"""

import numpy as np
from numba import njit

U64 = np.uint64
GOLDEN = U64(0x9E3779B97F4A7C15)
MIX1 = U64(0xBF58476D1CE4E5B9)
MIX2 = U64(0x94D049BB133111EB)
SUBSEED_SALT = U64(0xD1B54A32D192ED03)

HASH_PRF = 0
HASH_MODULAR = 1

# loop cursors, counters and bounds held by one collide invocation
CURSOR_WORDS = 16
# key, successor, distance, predecessor head, predecessor count
WORDS_PER_MARK = 5
WORDS_PER_PRED = 2


# ---------------------------------------------------------------------------
# pseudorandomness


@njit(cache=True)
def mix64(z):
    z = (z ^ (z >> U64(30))) * MIX1
    z = (z ^ (z >> U64(27))) * MIX2
    return z ^ (z >> U64(31))


@njit(cache=True)
def prf_word(seed, v, ctr):
    x = mix64(U64(v) ^ seed)
    return mix64(x + U64(ctr + 1) * GOLDEN)


@njit(cache=True)
def bit_width(n):
    b = 0
    while (1 << b) < n:
        b += 1
    return b


@njit(cache=True)
def hash_eval(mode, seed, shift, n, bits, v):
    if mode == HASH_MODULAR:
        return (v % n + shift) % n + 1
    mask = (U64(1) << U64(bits)) - U64(1)
    ctr = 0
    while True:
        w = prf_word(seed, v, ctr) & mask
        if w < U64(n):
            return np.int64(w) + 1
        ctr += 1


@njit(cache=True)
def hash_many(mode, seed, shift, n, values):
    bits = bit_width(n)
    out = np.empty(values.shape[0], dtype=np.int64)
    for k in range(values.shape[0]):
        out[k] = hash_eval(mode, seed, shift, n, bits, values[k])
    return out


@njit(cache=True)
def derive_subseed(seed, label):
    return mix64(mix64(seed ^ SUBSEED_SALT) + U64(label) * GOLDEN)


@njit(cache=True)
def rekey(seed, shift, n, label):
    """Hash key and modular shift for restart ``label``; label 0 keeps the input."""
    if label == 0:
        return seed, shift
    sub = derive_subseed(seed, label)
    return sub, np.int64(sub % U64(n))


@njit(cache=True)
def rng_next(state):
    state = state + GOLDEN
    return state, mix64(state)


@njit(cache=True)
def rng_below(state, n):
    mask = (U64(1) << U64(bit_width(n))) - U64(1)
    while True:
        state, w = rng_next(state)
        w = w & mask
        if w < U64(n):
            return state, np.int64(w)


# ---------------------------------------------------------------------------
# lists: value(i) = offset + sign * sum_c tables[c, digit_c(i - 1)]


@njit(cache=True, _nrt=False)
def list_value(tables, radices, sign, offset, idx):
    if radices.shape[0] == 1:
        return offset + sign * tables[0, idx - 1]
    r = idx - 1
    acc = 0
    for c in range(radices.shape[0]):
        rad = radices[c]
        if rad == 2:
            acc += tables[c, r & 1]
            r >>= 1
        else:
            acc += tables[c, r % rad]
            r //= rad
    return offset + sign * acc


@njit(cache=True)
def parity(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit(cache=True, _nrt=False)
def merged_value(xt, xr, xs, xo, yt, yr, ys, yo, ra, rb, i):
    take_y = parity(ra & i) ^ rb
    if xr.shape[0] == 1 and yr.shape[0] == 1:
        # two cheap reads and a select beat a mispredicted branch
        a = xt[0, i - 1]
        return xo + xs * a + take_y * (yo + ys * yt[0, i - 1] - xo - xs * a)
    if take_y:
        return list_value(yt, yr, ys, yo, i)
    return list_value(xt, xr, xs, xo, i)


# ---------------------------------------------------------------------------
# marked-vertex table (open addressing, linear probing)


@njit(cache=True, _nrt=False)
def _slot(keys, v):
    mask = keys.shape[0] - 1
    i = (v * 2654435761) & mask
    while keys[i] != 0:
        if keys[i] == v:
            return i
        i = (i + 1) & mask
    return -1


@njit(cache=True, _nrt=False)
def _insert(keys, nxt, dist, phead, pcount, v, succ, d):
    mask = keys.shape[0] - 1
    i = (v * 2654435761) & mask
    while keys[i] != 0:
        i = (i + 1) & mask
    keys[i] = v
    nxt[i] = succ
    dist[i] = d
    phead[i] = -1
    pcount[i] = 0
    return i


@njit(cache=True, _nrt=False)
def _add_pred(phead, pcount, pred_v, pred_next, slot, u, npreds):
    pred_v[npreds] = u
    pred_next[npreds] = phead[slot]
    phead[slot] = npreds
    pcount[slot] += 1
    return npreds + 1


def table_capacity(s):
    cap = 8
    while cap < 4 * s + 4:
        cap *= 2
    return cap


def new_workspace(s):
    cap = table_capacity(s)
    npred = 2 * s + 4
    return (
        np.zeros(cap, dtype=np.int64),
        np.zeros(cap, dtype=np.int64),
        np.zeros(cap, dtype=np.int64),
        np.zeros(cap, dtype=np.int64),
        np.zeros(cap, dtype=np.int64),
        np.zeros(npred, dtype=np.int64),
        np.zeros(npred, dtype=np.int64),
    )


# ---------------------------------------------------------------------------
# multi-start collision search


@njit(_nrt=False)
def collide_core(step, ctx, K, L, keys, nxt, dist, phead, pcount, pred_v, pred_next):
    """Walk from each start in ``K`` in turn and record merge points.

    The visited set is kept implicitly as disjoint segments
    ``[m, nxt[m])`` hanging off marked vertices (starts and merge points).
    Returns ``(steps, peak_words, prefix, visited, npreds)``; the table
    arrays hold the result.
    """
    s = K.shape[0]
    keys[:] = 0
    nmarked = 0
    npreds = 0
    steps = 0
    visited = 0
    prefix = 0
    peak = s + CURSOR_WORDS

    for idx in range(s):
        k = K[idx]
        remaining = L - visited
        if _slot(keys, k) >= 0:
            prefix = idx + 1
            continue
        # A usable marked hit lies within L steps; Brent closes a usable
        # cycle before position 3 * remaining + 3.
        limit = max(L, 3 * remaining + 3)

        # Brent's search on the new walk, stopping early at any marked vertex
        power = 1
        lam = 1
        tort = k
        prev = k
        hare = step(ctx, k)
        steps += 1
        pos = 1
        outcome = 0
        while True:
            if _slot(keys, hare) >= 0:
                outcome = 1
                break
            if hare == tort:
                outcome = 2
                break
            if pos >= limit:
                outcome = 3
                break
            if power == lam:
                tort = hare
                power *= 2
                lam = 0
            prev = hare
            hare = step(ctx, hare)
            steps += 1
            pos += 1
            lam += 1
        if outcome == 3:
            break

        if outcome == 2:
            # own rho: lam is the cycle length, find the tail length
            a = k
            b = k
            pb = k
            for _ in range(lam):
                pb = b
                b = step(ctx, b)
                steps += 1
            pa = k
            mu = 0
            while a != b:
                pa = a
                pb = b
                a = step(ctx, a)
                b = step(ctx, b)
                steps += 2
                mu += 1
            if mu + lam > remaining:
                break
            visited += mu + lam
            if mu == 0:
                sk = _insert(keys, nxt, dist, phead, pcount, k, k, lam)
                npreds = _add_pred(phead, pcount, pred_v, pred_next, sk, pb, npreds)
                nmarked += 1
            else:
                _insert(keys, nxt, dist, phead, pcount, k, a, mu)
                se = _insert(keys, nxt, dist, phead, pcount, a, a, lam)
                npreds = _add_pred(phead, pcount, pred_v, pred_next, se, pa, npreds)
                npreds = _add_pred(phead, pcount, pred_v, pred_next, se, pb, npreds)
                nmarked += 2
        else:
            # marked hit at walk position c; find where the walk joined
            m = hare
            c = pos
            entry_pos = c
            entry = m
            walk_pred = prev
            seg_pred = -1
            seg_slot = -1
            seg_pos = 0
            ucur = k
            uprev = k
            upos = 0
            last_d = -1
            last_slot = -1
            while True:
                # next candidate segment ending at m, by decreasing length
                best = -1
                for j in range(keys.shape[0]):
                    if keys[j] == 0 or nxt[j] != m:
                        continue
                    dj = dist[j]
                    if last_d >= 0 and (dj > last_d or (dj == last_d and j >= last_slot)):
                        continue
                    if best < 0 or dj > dist[best] or (dj == dist[best] and j > best):
                        best = j
                if best < 0:
                    break
                last_d = dist[best]
                last_slot = best
                a0 = c - last_d
                b0 = 0
                if a0 < 0:
                    b0 = -a0
                    a0 = 0
                while upos < a0:
                    uprev = ucur
                    ucur = step(ctx, ucur)
                    steps += 1
                    upos += 1
                bcur = keys[best]
                bprev = -1
                for _ in range(b0):
                    bprev = bcur
                    bcur = step(ctx, bcur)
                    steps += 1
                acur = ucur
                aprev = uprev
                met = False
                for t in range(c - a0):
                    if acur == bcur:
                        met = True
                        entry_pos = a0 + t
                        entry = acur
                        walk_pred = aprev
                        seg_pred = bprev
                        seg_slot = best
                        seg_pos = b0 + t
                        break
                    aprev = acur
                    bprev = bcur
                    acur = step(ctx, acur)
                    bcur = step(ctx, bcur)
                    steps += 2
                if met:
                    break

            if entry_pos > remaining:
                break
            visited += entry_pos
            if entry_pos > 0:
                if seg_slot < 0:
                    _insert(keys, nxt, dist, phead, pcount, k, m, c)
                    sm = _slot(keys, m)
                    npreds = _add_pred(phead, pcount, pred_v, pred_next, sm, walk_pred, npreds)
                    nmarked += 1
                else:
                    old_next = nxt[seg_slot]
                    old_dist = dist[seg_slot]
                    nxt[seg_slot] = entry
                    dist[seg_slot] = seg_pos
                    se = _insert(keys, nxt, dist, phead, pcount, entry, old_next, old_dist - seg_pos)
                    npreds = _add_pred(phead, pcount, pred_v, pred_next, se, seg_pred, npreds)
                    npreds = _add_pred(phead, pcount, pred_v, pred_next, se, walk_pred, npreds)
                    _insert(keys, nxt, dist, phead, pcount, k, entry, entry_pos)
                    nmarked += 2

        prefix = idx + 1
        words = s + CURSOR_WORDS + WORDS_PER_MARK * nmarked + WORDS_PER_PRED * npreds
        if words > peak:
            peak = words

    return steps, peak, prefix, visited, npreds


@njit(_nrt=False)
def _array_step(ctx, v):
    return ctx[0][v - 1]


@njit
def collide_array(f, K, L, keys, nxt, dist, phead, pcount, pred_v, pred_next):
    """Compiled collide on an explicit successor array (``f[v-1]``)."""
    return collide_core(_array_step, (f,), K, L, keys, nxt, dist, phead, pcount, pred_v, pred_next)


# ---------------------------------------------------------------------------
# List Disjointness search loop


@njit(_nrt=False)
def _ld_step(ctx, v):
    xt, xr, xs, xo, yt, yr, ys, yo, ra, rb, hmode, hseed, hshift, hn, hbits = ctx
    z = merged_value(xt, xr, xs, xo, yt, yr, ys, yo, ra, rb, v)
    return hash_eval(hmode, hseed, hshift, hn, hbits, z)


@njit
def ld_kernel(xt, xr, xs, xo, yt, yr, ys, yo, n, s, L, hmode, hseed, hshift0, master, budget):
    """Diagonal pre-check followed by restarts of merge / collide / scan.

    Each restart draws a fresh selector and seeds and rekeys the hash
    (restart 0 uses the caller's key), so restarts succeed independently.

    Returns ``(found, i, j, step_evals, list_accesses, restarts, peak_words)``
    where ``x[i] == y[j]`` when ``found`` is 1.  Work is step evaluations
    plus list accesses made outside step evaluation; the loop stops once
    it reaches ``budget``.
    """
    hbits = bit_width(n)
    step_evals = 0
    extra = 0
    for i in range(1, n + 1):
        extra += 2
        if list_value(xt, xr, xs, xo, i) == list_value(yt, yr, ys, yo, i):
            return 1, i, i, step_evals, extra, 0, 4

    width = bit_width(n + 1)
    amask = (1 << width) - 1
    cap = 8
    while cap < 4 * s + 4:
        cap *= 2
    keys = np.zeros(cap, dtype=np.int64)
    nxt = np.zeros(cap, dtype=np.int64)
    dist = np.zeros(cap, dtype=np.int64)
    phead = np.zeros(cap, dtype=np.int64)
    pcount = np.zeros(cap, dtype=np.int64)
    pred_v = np.zeros(2 * s + 4, dtype=np.int64)
    pred_next = np.zeros(2 * s + 4, dtype=np.int64)
    K = np.zeros(s, dtype=np.int64)
    members = np.zeros(2 * s + 4, dtype=np.int64)
    zvals = np.zeros(2 * s + 4, dtype=np.int64)

    peak = 0
    restarts = 0
    while step_evals + extra < budget:
        st = derive_subseed(master, restarts)
        restarts += 1
        st, w = rng_next(st)
        ra = np.int64(w & U64(amask))
        st, w = rng_next(st)
        rb = np.int64(w & U64(1))
        for q in range(s):
            st, kq = rng_below(st, n)
            K[q] = kq + 1
        hs, hshift = rekey(hseed, hshift0, n, restarts - 1)
        ctx = (xt, xr, xs, xo, yt, yr, ys, yo, ra, rb, hmode, hs, hshift, n, hbits)
        steps, words, _, _, _ = collide_core(
            _ld_step, ctx, K, L, keys, nxt, dist, phead, pcount, pred_v, pred_next
        )
        step_evals += steps

        for slot in range(cap):
            if keys[slot] == 0 or pcount[slot] < 2:
                continue
            size = 0
            e = phead[slot]
            while e >= 0:
                members[size] = pred_v[e]
                size += 1
                e = pred_next[e]
            have_x = False
            have_y = False
            for q in range(size):
                if parity(ra & members[q]) == rb:
                    have_x = True
                else:
                    have_y = True
            if not (have_x and have_y):
                continue
            for q in range(size):
                zvals[q] = merged_value(xt, xr, xs, xo, yt, yr, ys, yo, ra, rb, members[q])
                extra += 1
            if words + 2 * size > peak:
                peak = words + 2 * size
            for a in range(size):
                pa = parity(ra & members[a])
                for b in range(a + 1, size):
                    if pa != parity(ra & members[b]) and zvals[a] == zvals[b]:
                        ia = members[a]
                        ib = members[b]
                        if pa != rb:
                            ia, ib = ib, ia
                        extra += 2
                        if list_value(xt, xr, xs, xo, ia) == list_value(yt, yr, ys, yo, ib):
                            return 1, ia, ib, step_evals, step_evals + extra, restarts, peak
        if words > peak:
            peak = words
    return 0, 0, 0, step_evals, step_evals + extra, restarts, peak


# ---------------------------------------------------------------------------
# root-of-unity subset counting over a prime field (q < 2**32)


@njit(cache=True)
def _powmod(b, e, q):
    r = U64(1)
    b = U64(b) % U64(q)
    e = np.int64(e)
    qq = U64(q)
    while e > 0:
        if e & 1:
            r = (r * b) % qq
        b = (b * b) % qq
        e >>= 1
    return r


@njit(cache=True)
def _mulmod(a, b, q, inv_q):
    # q < 2**32: the float quotient is off by at most one either way
    x = a * b
    k = U64(float(a) * float(b) * inv_q)
    r = np.int64(x - k * q)
    if r < 0:
        r += np.int64(q)
    elif r >= np.int64(q):
        r -= np.int64(q)
    return U64(r)


@njit(cache=True)
def residue_count(wr, nitems, tr, mu, q, omega, budget):
    """Number of subsets of ``wr[:nitems]`` with sum = tr (mod mu), in F_q.

    Requires ``q < 2**32``.  Returns ``(count, work)``; ``count`` is -1
    when the work (one unit per item per root) would exceed ``budget``.
    """
    work = mu * nitems
    if work > budget:
        return -1, 0
    qq = U64(q)
    inv_q = 1.0 / float(q)
    gens = np.empty(nitems, dtype=np.uint64)
    pows = np.ones(nitems, dtype=np.uint64)
    for i in range(nitems):
        gens[i] = _powmod(omega, wr[i], q)
    tgen = _powmod(omega, (mu - tr) % mu, q)
    tpow = U64(1)
    total = U64(0)
    for _ in range(mu):
        prod = U64(1)
        for i in range(nitems):
            f = pows[i] + U64(1)
            if f >= qq:
                f -= qq
            prod = _mulmod(prod, f, qq, inv_q)
            pows[i] = _mulmod(pows[i], gens[i], qq, inv_q)
        total += _mulmod(prod, tpow, qq, inv_q)
        if total >= qq:
            total -= qq
        tpow = _mulmod(tpow, tgen, qq, inv_q)
    inv_mu = _powmod(mu, q - 2, q)
    return np.int64((total * inv_mu) % qq), work
