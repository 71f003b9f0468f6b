"""Compiled depth-first kernels.

All kernels are iterative with an explicit stack held in caller-owned arrays,
so a call can stop after ``node_limit`` expansions and be resumed later (or
written to a checkpoint) by calling again with the same arrays.

Common conventions:

* ``state[0]`` is the current level, ``state[1]`` the node counter and
  ``state[2]`` the prune counter.  Counters are accumulated, the level is
  saved on every return.
* ``base`` is the first free level; marks below it are a fixed prefix (used
  to hand subtrees to worker processes).  Backtracking below ``base`` ends
  the search.
* Return codes: 0 exhausted, 1 solution in ``marks`` (the kernel has already
  stepped back so a further call continues the enumeration), 2 node limit.

"Pinned" kernels look for m-element sets with least element 0 and largest
element exactly L.  ``lb[j]`` must be a lower bound for the diameter of any
j-element set with the same property; every subset of a valid set is valid,
so sub-runs of marks are pruned against it.
"""

from __future__ import annotations

import numpy as np
from numba import njit

DONE = 0
FOUND = 1
PAUSED = 2


@njit(cache=True)
def _suffix_fits(used, room, r, top, pref):
    # r gaps remain, r+1 marks (the current one included) span at most room.
    # Differences inside the suffix are distinct and unused, and for every u
    # the differences of index distance <= u sum to at most (1+..+u)*room.
    if r <= 0:
        return True
    need = r * (r + 1) // 2
    cnt = 0
    s = 0
    d = 1
    while cnt < need and d <= top:
        if not used[d]:
            cnt += 1
            s += d
            pref[cnt] = s
        d += 1
    if cnt < need:
        return False
    tri = 0
    nu = 0
    for u in range(1, r + 1):
        tri += u
        nu += r + 1 - u
        if pref[nu] > tri * room:
            return False
    return True


@njit(cache=True)
def _reflect_cap(i, m, L, marks, hi):
    # a_1 <= L - a_{m-2}: one of every mirror pair satisfies it
    if i == 1:
        r = L // 2 if m == 3 else (L - 1) // 2
    else:
        r = L - marks[1]
    return r if r < hi else hi


@njit(cache=True)
def sidon_pinned(L, m, lb, marks, cand, used, state, base, node_limit, pref, sym, suffix):
    """Sidon sets {0 = a_0 < ... < a_{m-1} = L} via the used-difference table."""
    i = state[0]
    nodes = 0
    prunes = 0
    while True:
        if i == m - 1:
            i -= 1
            x = marks[i]
            for j in range(i):
                used[x - marks[j]] = False
            used[L - x] = False
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return FOUND
        x = cand[i]
        if x < lb[i + 1]:
            x = lb[i + 1]
        hi = L - lb[m - i]
        if sym:
            hi = _reflect_cap(i, m, L, marks, hi)
        placed = False
        while x <= hi:
            nodes += 1
            dl = L - x
            ok = not used[dl]
            if ok:
                for j in range(i):
                    d = x - marks[j]
                    if used[d] or d == dl or d < lb[i - j + 1]:
                        ok = False
                        break
            if ok:
                for j in range(i):
                    used[x - marks[j]] = True
                if suffix and not _suffix_fits(used, dl, m - 1 - i, L, pref):
                    prunes += 1
                    for j in range(i):
                        used[x - marks[j]] = False
                    x += 1
                    continue
                # L - x is itself a suffix difference, so it joins the table only now
                used[dl] = True
                marks[i] = x
                cand[i] = x + 1
                i += 1
                cand[i] = x + 1
                placed = True
                break
            x += 1
        if not placed:
            i -= 1
            if i < base:
                state[0] = base
                state[1] += nodes
                state[2] += prunes
                return DONE
            x = marks[i]
            for j in range(i):
                used[x - marks[j]] = False
            used[L - x] = False
        if nodes > node_limit:
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return PAUSED


@njit(cache=True)
def pair_pinned(L, m, g, lb, marks, cand, cnt, state, base, node_limit, sym):
    """h = 2, any g: ``cnt[s]`` is the ordered representation count of s."""
    i = state[0]
    nodes = 0
    prunes = 0
    while True:
        if i == m - 1:
            i -= 1
            x = marks[i]
            for j in range(i):
                cnt[x + marks[j]] -= 2
            cnt[x + L] -= 2
            cnt[2 * x] -= 1
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return FOUND
        x = cand[i]
        if x < lb[i + 1]:
            x = lb[i + 1]
        hi = L - lb[m - i]
        if sym:
            hi = _reflect_cap(i, m, L, marks, hi)
        placed = False
        while x <= hi:
            nodes += 1
            ok = cnt[2 * x] + 1 <= g and cnt[x + L] + 2 <= g
            if ok:
                for j in range(i):
                    if cnt[x + marks[j]] + 2 > g or x - marks[j] < lb[i - j + 1]:
                        ok = False
                        break
            if ok:
                for j in range(i):
                    cnt[x + marks[j]] += 2
                cnt[x + L] += 2
                cnt[2 * x] += 1
                marks[i] = x
                cand[i] = x + 1
                i += 1
                cand[i] = x + 1
                placed = True
                break
            x += 1
        if not placed:
            i -= 1
            if i < base:
                state[0] = base
                state[1] += nodes
                state[2] += prunes
                return DONE
            x = marks[i]
            for j in range(i):
                cnt[x + marks[j]] -= 2
            cnt[x + L] -= 2
            cnt[2 * x] -= 1
        if nodes > node_limit:
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return PAUSED


@njit(cache=True)
def levels_add(lev, x, h, binom, n):
    # lev[t, s]: ordered t-tuples summing to s; n > 0 means sums are mod n
    size = lev.shape[1]
    for t in range(h, 0, -1):
        for s in range(size):
            acc = 0
            for j in range(1, t + 1):
                src = s - j * x
                if n > 0:
                    src %= n
                elif src < 0:
                    break
                acc += binom[t, j] * lev[t - j, src]
            lev[t, s] += acc


@njit(cache=True)
def levels_remove(lev, x, h, binom, n):
    size = lev.shape[1]
    for t in range(1, h + 1):
        for s in range(size):
            acc = 0
            for j in range(1, t + 1):
                src = s - j * x
                if n > 0:
                    src %= n
                elif src < 0:
                    break
                acc += binom[t, j] * lev[t - j, src]
            lev[t, s] -= acc


@njit(cache=True)
def _levels_ok(lev, h, g):
    for s in range(lev.shape[1]):
        if lev[h, s] > g:
            return False
    return True


@njit(cache=True)
def general_pinned(L, m, h, g, lb, marks, cand, lev, binom, state, base, node_limit, sym):
    """Any h: full count levels, rebuilt incrementally on every add/remove."""
    i = state[0]
    nodes = 0
    prunes = 0
    while True:
        if i == m - 1:
            i -= 1
            levels_remove(lev, marks[i], h, binom, 0)
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return FOUND
        x = cand[i]
        if x < lb[i + 1]:
            x = lb[i + 1]
        hi = L - lb[m - i]
        if sym:
            hi = _reflect_cap(i, m, L, marks, hi)
        placed = False
        while x <= hi:
            nodes += 1
            ok = True
            for j in range(i):
                if x - marks[j] < lb[i - j + 1]:
                    ok = False
                    break
            if ok:
                levels_add(lev, x, h, binom, 0)
                if _levels_ok(lev, h, g):
                    marks[i] = x
                    cand[i] = x + 1
                    i += 1
                    cand[i] = x + 1
                    placed = True
                    break
                levels_remove(lev, x, h, binom, 0)
            x += 1
        if not placed:
            i -= 1
            if i < base:
                state[0] = base
                state[1] += nodes
                state[2] += prunes
                return DONE
            levels_remove(lev, marks[i], h, binom, 0)
        if nodes > node_limit:
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return PAUSED


@njit(cache=True)
def _modular_step_ok(i, x, n, els, rub, lb, target, sym, maxgap, units, nonunit):
    # 0 = fine, 1 = x fails, 2 = neither x nor any larger candidate can work
    if i + 1 + rub[n - 1 - x] < target:
        return 2
    # read as integers the elements form a B*_h[g] set, so every run of
    # consecutive elements spans at least the integer minimal diameter
    for j in range(i):
        if x - els[j] < lb[i - j + 1]:
            return 1
        if nonunit and units[x - els[j]]:
            return 1
    if sym:
        gap = x - els[i - 1]
        # every gap is at most the closing gap n - a_last <= n - x
        if gap > n - x:
            return 2
        if i + 1 == target:
            mg = maxgap[i - 1]
            if gap > mg:
                mg = gap
            if n - x < mg:
                return 2
    return 0


@njit(cache=True)
def _too_few_left(n, x, i, g, els, cnt, need, nonunit, units):
    # forward check: fewer later candidates fit beside the placed set
    # (elements els[0..i-1] and x) than elements are still needed
    avail = 0
    for y in range(x + 1, n):
        if cnt[(2 * y) % n] + 1 > g or cnt[(x + y) % n] + 2 > g:
            continue
        if nonunit and units[y - x]:
            continue
        ok = True
        for j in range(i):
            if cnt[(y + els[j]) % n] + 2 > g or (nonunit and units[y - els[j]]):
                ok = False
                break
        if ok:
            avail += 1
            if avail >= need:
                return False
    return True


@njit(cache=True)
def modular_pair(n, target, g, rub, lb, els, cand, cnt, maxgap, state, base, node_limit, sym, units, nonunit, fc):
    """h = 2 modulo n: sets of exactly ``target`` elements.

    ``els[:base]`` is a fixed prefix starting with 0.  With ``sym`` the set
    is translated so its largest cyclic gap closes the circle (ends at
    n = 0).  With ``nonunit`` no two elements may differ by a unit of Z/n.
    ``fc`` turns on forward checking.
    """
    i = state[0]
    nodes = 0
    prunes = 0
    while True:
        if i == target:
            i -= 1
            x = els[i]
            for j in range(i):
                cnt[(x + els[j]) % n] -= 2
            cnt[(2 * x) % n] -= 1
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return FOUND
        x = cand[i]
        placed = False
        while x < n:
            nodes += 1
            st = _modular_step_ok(i, x, n, els, rub, lb, target, sym, maxgap, units, nonunit)
            if st == 2:
                prunes += 1
                break
            if st == 1:
                prunes += 1
                x += 1
                continue
            # add, then check: sums may coincide with each other mod n
            for j in range(i):
                cnt[(x + els[j]) % n] += 2
            cnt[(2 * x) % n] += 1
            bad = cnt[(2 * x) % n] > g
            for j in range(i):
                if cnt[(x + els[j]) % n] > g:
                    bad = True
            if not bad and fc and target - i - 1 >= 2:
                bad = _too_few_left(n, x, i, g, els, cnt, target - i - 1, nonunit, units)
            if bad:
                for j in range(i):
                    cnt[(x + els[j]) % n] -= 2
                cnt[(2 * x) % n] -= 1
                x += 1
                continue
            els[i] = x
            gap = x - els[i - 1]
            maxgap[i] = gap if gap > maxgap[i - 1] else maxgap[i - 1]
            cand[i] = x + 1
            i += 1
            cand[i] = x + 1
            placed = True
            break
        if not placed:
            i -= 1
            if i < base:
                state[0] = base
                state[1] += nodes
                state[2] += prunes
                return DONE
            x = els[i]
            for j in range(i):
                cnt[(x + els[j]) % n] -= 2
            cnt[(2 * x) % n] -= 1
        if nodes > node_limit:
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return PAUSED


@njit(cache=True)
def modular_general(n, target, h, g, rub, lb, els, cand, lev, binom, maxgap, state, base, node_limit, sym, units, nonunit):
    """Any h modulo n; same layout as ``modular_pair``."""
    i = state[0]
    nodes = 0
    prunes = 0
    while True:
        if i == target:
            i -= 1
            levels_remove(lev, els[i], h, binom, n)
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return FOUND
        x = cand[i]
        placed = False
        while x < n:
            nodes += 1
            st = _modular_step_ok(i, x, n, els, rub, lb, target, sym, maxgap, units, nonunit)
            if st == 2:
                prunes += 1
                break
            if st == 1:
                prunes += 1
                x += 1
                continue
            levels_add(lev, x, h, binom, n)
            if _levels_ok(lev, h, g):
                els[i] = x
                gap = x - els[i - 1]
                maxgap[i] = gap if gap > maxgap[i - 1] else maxgap[i - 1]
                cand[i] = x + 1
                i += 1
                cand[i] = x + 1
                placed = True
                break
            levels_remove(lev, x, h, binom, n)
            x += 1
        if not placed:
            i -= 1
            if i < base:
                state[0] = base
                state[1] += nodes
                state[2] += prunes
                return DONE
            levels_remove(lev, els[i], h, binom, n)
        if nodes > node_limit:
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return PAUSED


@njit(cache=True)
def sidon_bounded(Lmax, m, lb, marks, cand, used, state, node_limit, pref):
    """Sidon sets {0 = a_0 < ... < a_{m-1}} with a_{m-1} <= Lmax.

    Used to refute: DONE means no such set exists, so the minimal diameter
    of an m-element Sidon set exceeds Lmax.
    """
    i = state[0]
    nodes = 0
    prunes = 0
    while True:
        if i == m:
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return FOUND
        x = cand[i]
        if x < lb[i + 1]:
            x = lb[i + 1]
        hi = Lmax - lb[m - i]
        placed = False
        while x <= hi:
            nodes += 1
            ok = True
            for j in range(i):
                d = x - marks[j]
                if used[d] or d < lb[i - j + 1]:
                    ok = False
                    break
            if ok:
                for j in range(i):
                    used[x - marks[j]] = True
                if not _suffix_fits(used, Lmax - x, m - 1 - i, Lmax, pref):
                    prunes += 1
                    for j in range(i):
                        used[x - marks[j]] = False
                    x += 1
                    continue
                marks[i] = x
                cand[i] = x + 1
                i += 1
                cand[i] = x + 1
                placed = True
                break
            x += 1
        if not placed:
            i -= 1
            if i < 1:
                state[0] = 1
                state[1] += nodes
                state[2] += prunes
                return DONE
            x = marks[i]
            for j in range(i):
                used[x - marks[j]] = False
        if nodes > node_limit:
            state[0] = i
            state[1] += nodes
            state[2] += prunes
            return PAUSED


def binomials(h: int) -> np.ndarray:
    out = np.zeros((h + 1, h + 1), dtype=np.int64)
    for t in range(h + 1):
        out[t, 0] = 1
        for j in range(1, t + 1):
            out[t, j] = out[t - 1, j - 1] + (out[t - 1, j] if j <= t - 1 else 0)
    return out
