"""Numba kernels for the hot paths: legality, apply, playouts, evaluation.

All kernels operate on the flat state arrays owned by
:class:`tetrislink.engine.GameState`:

* ``grid``        int8[20, 10], -1 empty, else player id (row 0 = bottom)
* ``piece_grid``  int16[20, 10], -1 empty, else global piece index
* ``heights``     int8[10], top occupied row + 1 per column
* ``col_occ``     int8[10], occupied cell count per column
* ``inventory``   int8[P, 5], pieces left per shape
* ``penalties``   int32[P], accumulated minus points
* ``uf_parent`` / ``comp_size``  union-find over placed pieces (per player,
  pieces of different players are never unioned)
* ``group_points`` int32[P], incrementally tracked group score
* ``group_size``   int32[P], pieces connected to >= 1 other own piece
* ``misc``         int32[2] = [piece_count, turn_slots]

``turn_slots`` counts turns including skipped turns (playout kernels
update it; the Python engine tracks the same count via its history).

Gravity: a piece dropped from the top rests at the lowest base row such
that each of its columns sits on (or above) that column's current stack
top, so column heights fully determine the rest row.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .shapes import (
    BOARD_HEIGHT,
    BOARD_WIDTH,
    NUM_ACTIONS,
    NUM_TEMPLATES,
    TMPL_BOTTOM,
    TMPL_CELLS,
    TMPL_SHAPE,
    TMPL_TOP,
    TMPL_WIDTH,
)

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def next_rand(state):
    # xorshift64*; state is a uint64 scalar, returns (new_state, uint64)
    s = state
    s ^= s >> np.uint64(12)
    s ^= s << np.uint64(25)
    s ^= s >> np.uint64(27)
    s &= np.uint64(0xFFFFFFFFFFFFFFFF)
    return s, (s * np.uint64(2685821657736338717)) & np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(**_JIT)
def rand_below(state, n):
    s, r = next_rand(state)
    return s, np.int64(r % np.uint64(n))


@njit(**_JIT)
def rest_row(heights, template, column):
    """Base row where the template rests, or -1 if it will not fit in height.

    Caller guarantees column + width <= 10.
    """
    w = TMPL_WIDTH[template]
    r = 0
    for dc in range(w):
        need = heights[column + dc] - TMPL_BOTTOM[template, dc]
        if need > r:
            r = need
    for dc in range(w):
        if r + TMPL_TOP[template, dc] >= BOARD_HEIGHT:
            return -1
    return r


@njit(**_JIT)
def action_legal(heights, inv_row, action):
    t = action // BOARD_WIDTH
    c = action % BOARD_WIDTH
    if c + TMPL_WIDTH[t] > BOARD_WIDTH:
        return False
    if inv_row[TMPL_SHAPE[t]] <= 0:
        return False
    return rest_row(heights, t, c) >= 0


@njit(**_JIT)
def legal_mask(heights, inv_row, out):
    n = 0
    for a in range(NUM_ACTIONS):
        ok = action_legal(heights, inv_row, a)
        out[a] = ok
        if ok:
            n += 1
    return n


@njit(**_JIT)
def legal_actions(heights, inv_row, out):
    n = 0
    for a in range(NUM_ACTIONS):
        if action_legal(heights, inv_row, a):
            out[n] = a
            n += 1
    return n


@njit(**_JIT)
def has_legal(heights, inv_row):
    for a in range(NUM_ACTIONS):
        if action_legal(heights, inv_row, a):
            return True
    return False


@njit(**_JIT)
def uf_find(uf_parent, i):
    root = i
    while uf_parent[root] != root:
        root = uf_parent[root]
    while uf_parent[i] != root:
        nxt = uf_parent[i]
        uf_parent[i] = root
        i = nxt
    return root


@njit(**_JIT)
def apply_action(
    grid,
    piece_grid,
    heights,
    col_occ,
    inventory,
    penalties,
    uf_parent,
    comp_size,
    group_points,
    group_size,
    misc,
    player,
    action,
):
    """Write the piece, update all incremental stats.

    Returns (rest, new_holes); legality is the caller's responsibility.
    """
    t = action // BOARD_WIDTH
    col = action % BOARD_WIDTH
    w = TMPL_WIDTH[t]
    rest = rest_row(heights, t, col)

    new_holes = 0
    for dc in range(w):
        new_holes += rest + TMPL_BOTTOM[t, dc] - heights[col + dc]

    piece = misc[0]
    misc[0] = piece + 1
    uf_parent[piece] = piece
    comp_size[piece] = 1

    for k in range(4):
        cc = col + TMPL_CELLS[t, k, 0]
        rr = rest + TMPL_CELLS[t, k, 1]
        grid[rr, cc] = player
        piece_grid[rr, cc] = piece
        col_occ[cc] += 1
    for dc in range(w):
        h = rest + TMPL_TOP[t, dc] + 1
        if h > heights[col + dc]:
            heights[col + dc] = h

    # union with adjacent own pieces, maintaining the group aggregates
    for k in range(4):
        cc = col + TMPL_CELLS[t, k, 0]
        rr = rest + TMPL_CELLS[t, k, 1]
        for d in range(4):
            nc = cc + (1 if d == 0 else -1 if d == 1 else 0)
            nr = rr + (1 if d == 2 else -1 if d == 3 else 0)
            if nc < 0 or nc >= BOARD_WIDTH or nr < 0 or nr >= BOARD_HEIGHT:
                continue
            if grid[nr, nc] != player:
                continue
            other = piece_grid[nr, nc]
            if other == piece:
                continue
            ra = uf_find(uf_parent, piece)
            rb = uf_find(uf_parent, other)
            if ra == rb:
                continue
            sa = comp_size[ra]
            sb = comp_size[rb]
            # group_size counts pieces in components of size >= 2
            if sa == 1:
                group_size[player] += 1
            if sb == 1:
                group_size[player] += 1
            # group_points counts pieces in components of size >= 3
            pa = sa if sa >= 3 else 0
            pb = sb if sb >= 3 else 0
            s = sa + sb
            group_points[player] += (s if s >= 3 else 0) - pa - pb
            uf_parent[rb] = ra
            comp_size[ra] = s

    inventory[player, TMPL_SHAPE[t]] -= 1
    pen = new_holes if new_holes < 2 else 2
    penalties[player] += pen
    return rest, new_holes


@njit(**_JIT)
def advance(heights, inventory, current, nplayers):
    """(next player with a legal move or -1, turn slots consumed by skips).

    When nobody can move, every player passes once, so the skip count is
    nplayers; otherwise it is the number of players skipped over.
    """
    for k in range(1, nplayers + 1):
        cand = (current + k) % nplayers
        if has_legal(heights, inventory[cand]):
            return cand, k - 1
    return -1, nplayers


@njit(**_JIT)
def playout_random(
    grid,
    piece_grid,
    heights,
    col_occ,
    inventory,
    penalties,
    uf_parent,
    comp_size,
    group_points,
    group_size,
    misc,
    current,
    nplayers,
    seed,
    actions_out,
    players_out,
    totals_out,
):
    """Play uniformly random legal moves until no piece fits anywhere.

    Mutates the state arrays in place (callers pass copies).  Returns the
    number of recorded moves; totals_out receives per-player final scores.
    """
    rng = seed | np.uint64(1)
    n = 0
    slots = 0
    legal = np.empty(NUM_ACTIONS, dtype=np.int16)
    while current >= 0:
        cnt = legal_actions(heights, inventory[current], legal)
        if cnt == 0:
            current, skipped = advance(heights, inventory, current, nplayers)
            slots += skipped
            continue
        rng, idx = rand_below(rng, cnt)
        a = legal[idx]
        apply_action(
            grid, piece_grid, heights, col_occ, inventory, penalties,
            uf_parent, comp_size, group_points, group_size, misc,
            current, a,
        )
        actions_out[n] = a
        players_out[n] = current
        n += 1
        slots += 1
        current, skipped = advance(heights, inventory, current, nplayers)
        slots += skipped
    misc[1] = slots
    for p in range(nplayers):
        totals_out[p] = group_points[p] - penalties[p]
    return n


@njit(**_JIT)
def eval_moves(
    grid,
    piece_grid,
    heights,
    inventory,
    uf_parent,
    comp_size,
    player,
    weights,
    values_out,
):
    """Heuristic one-ply value of every action for `player`, -inf if illegal.

    Values are the four weighted feature deltas of the post-move state
    relative to the current state; the constant base cancels in argmax,
    so the ranking equals ranking by full post-move feature evaluation.
    """
    w_edges = weights[0]
    w_group = weights[1]
    w_score = weights[2]
    w_block = weights[3]
    inv_row = inventory[player]
    roots = np.empty(4, dtype=np.int64)
    ucols = np.empty(16, dtype=np.int64)
    urows = np.empty(16, dtype=np.int64)
    for a in range(NUM_ACTIONS):
        t = a // BOARD_WIDTH
        col = a % BOARD_WIDTH
        if col + TMPL_WIDTH[t] > BOARD_WIDTH or inv_row[TMPL_SHAPE[t]] <= 0:
            values_out[a] = -np.inf
            continue
        rest = rest_row(heights, t, col)
        if rest < 0:
            values_out[a] = -np.inf
            continue

        new_holes = 0
        for dc in range(TMPL_WIDTH[t]):
            new_holes += rest + TMPL_BOTTOM[t, dc] - heights[col + dc]
        pen = new_holes if new_holes < 2 else 2

        d_conn = 0.0
        d_block = 0.0
        n_roots = 0
        n_u = 0
        for k in range(4):
            cc = col + TMPL_CELLS[t, k, 0]
            rr = rest + TMPL_CELLS[t, k, 1]
            # this cell was empty; if it had an own neighbor it was counted
            # as a connectable edge and no longer is
            had_own = False
            for d in range(4):
                nc = cc + (1 if d == 0 else -1 if d == 1 else 0)
                nr = rr + (1 if d == 2 else -1 if d == 3 else 0)
                if nc < 0 or nc >= BOARD_WIDTH or nr < 0 or nr >= BOARD_HEIGHT:
                    continue
                v = grid[nr, nc]
                if v == player:
                    had_own = True
                    root = uf_find(uf_parent, piece_grid[nr, nc])
                    found = False
                    for j in range(n_roots):
                        if roots[j] == root:
                            found = True
                            break
                    if not found:
                        roots[n_roots] = root
                        n_roots += 1
                elif v >= 0:
                    d_block += 1.0
                else:
                    # empty neighbor: candidate new connectable edge,
                    # unless it is itself part of the placed piece
                    in_piece = False
                    for m in range(4):
                        if (col + TMPL_CELLS[t, m, 0] == nc
                                and rest + TMPL_CELLS[t, m, 1] == nr):
                            in_piece = True
                            break
                    if not in_piece:
                        dup = False
                        for j in range(n_u):
                            if ucols[j] == nc and urows[j] == nr:
                                dup = True
                                break
                        if not dup:
                            ucols[n_u] = nc
                            urows[n_u] = nr
                            n_u += 1
            if had_own:
                d_conn -= 1.0
        for j in range(n_u):
            nc = ucols[j]
            nr = urows[j]
            already = False
            for d in range(4):
                mc = nc + (1 if d == 0 else -1 if d == 1 else 0)
                mr = nr + (1 if d == 2 else -1 if d == 3 else 0)
                if mc < 0 or mc >= BOARD_WIDTH or mr < 0 or mr >= BOARD_HEIGHT:
                    continue
                if grid[mr, mc] == player:
                    already = True
                    break
            if not already:
                d_conn += 1.0

        d_gsize = 0.0
        d_gpts = 0.0
        if n_roots > 0:
            merged = 1
            old_pts = 0
            singletons = 0
            for j in range(n_roots):
                s = comp_size[roots[j]]
                merged += s
                if s >= 3:
                    old_pts += s
                if s == 1:
                    singletons += 1
            d_gsize = 1.0 + singletons
            d_gpts = (merged if merged >= 3 else 0) - old_pts
        d_score = d_gpts - pen

        values_out[a] = (
            w_edges * d_conn + w_group * d_gsize + w_score * d_score + w_block * d_block
        )
    return 0


@njit(**_JIT)
def playout_heuristic(
    grid,
    piece_grid,
    heights,
    col_occ,
    inventory,
    penalties,
    uf_parent,
    comp_size,
    group_points,
    group_size,
    misc,
    current,
    nplayers,
    weights,
    seed,
    actions_out,
    players_out,
    totals_out,
):
    """Playout where every player picks a heuristic argmax move.

    All players use the same weight vector; argmax ties are broken
    uniformly at random.
    """
    rng = seed | np.uint64(1)
    n = 0
    slots = 0
    values = np.empty(NUM_ACTIONS, dtype=np.float64)
    ties = np.empty(NUM_ACTIONS, dtype=np.int16)
    while current >= 0:
        eval_moves(
            grid, piece_grid, heights, inventory, uf_parent, comp_size,
            current, weights, values,
        )
        best = -np.inf
        n_ties = 0
        for a in range(NUM_ACTIONS):
            v = values[a]
            if v == -np.inf:
                continue
            if v > best:
                best = v
                ties[0] = a
                n_ties = 1
            elif v == best:
                ties[n_ties] = a
                n_ties += 1
        if n_ties == 0:
            current, skipped = advance(heights, inventory, current, nplayers)
            slots += skipped
            continue
        rng, idx = rand_below(rng, n_ties)
        a = ties[idx]
        apply_action(
            grid, piece_grid, heights, col_occ, inventory, penalties,
            uf_parent, comp_size, group_points, group_size, misc,
            current, a,
        )
        actions_out[n] = a
        players_out[n] = current
        n += 1
        slots += 1
        current, skipped = advance(heights, inventory, current, nplayers)
        slots += skipped
    misc[1] = slots
    for p in range(nplayers):
        totals_out[p] = group_points[p] - penalties[p]
    return n


@njit(**_JIT)
def uct_select(counts, values, vloss, rave_counts, rave_values, total, cp, beta):
    """Child index maximizing the (RAVE-mixed) UCT score.

    beta <= 0 selects plain UCT.  Unvisited children score +inf and are
    taken in index order.  Virtual losses count as played-and-lost.
    """
    best = -np.inf
    best_i = -1
    log_total = np.log(total) if total > 1 else 0.0
    for i in range(counts.shape[0]):
        n = counts[i] + vloss[i]
        if beta > 0.0:
            # RAVE: an unvisited child with RAVE evidence is scored by it
            # rather than force-visited, so wide roots don't burn the
            # whole budget on one visit per child
            rn = rave_counts[i]
            if n == 0 and rn == 0:
                return i
            alpha = (beta - rn) / beta
            if alpha < 0.0:
                alpha = 0.0
            q = values[i] / n if n > 0 else 0.5
            q_rave = rave_values[i] / rn if rn > 0 else 0.5
            n_eff = n if n > 0 else 1.0
            score = (1.0 - alpha) * q + alpha * q_rave
            score += cp * np.sqrt(log_total / n_eff) * alpha
        else:
            if n == 0:
                return i
            score = values[i] / n + cp * np.sqrt(log_total / n)
        if score > best:
            best = score
            best_i = i
    return best_i
