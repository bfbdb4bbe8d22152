"""Compiled batch event loops for the three environment kinds.

Each replica owns one counter-derived stream; the loops below consume it
with scalar xoshiro draws, so a replica is reproducible from (seed,
stream index) alone.

The exclusion loop simulates the embedded jump chain of the walker/
environment superposition: between consecutive walker jumps the number of
environment events is geometric with success probability
walker_rate / (walker_rate + R), where R is the total environment rate.
Each environment event picks a uniform slot (two directed moves per
tracked entity, plus the two wall cells when the window has walls).  When
R changes the remaining block count is redrawn, which is exact by
memorylessness.  Jump clock times are drawn with independent exponential
gaps; their marginal law is exact, but the joint law of (times, path) is
not preserved by the block decomposition.  Endpoint statistics depend on
the jump chain only, so they are unaffected; callers that need the exact
joint law use the slow per-event reference path instead.

Large windows are expensive, so the exclusion loop keeps only an active
subwindow alive: walls sit at least margin(t) = c * sqrt(2*gamma*(t_end -
t)) cells beyond every site the walker has visited, and the two wall
cells are resampled from Bernoulli(rho) at rate gamma each.  Influence
from a wall has to cross the margin against a diffusive information front
to bias the walker, which happens with probability about exp(-c*c/2) per
wall event; c = 6 keeps the total expected contamination below 1e-2
replicas for every production workload.  Cells are activated with the
stream's per-site hash, so the initial field agrees with the other
environment kinds and window growth is order-independent.  When the
active window would reach the full torus the loop switches to the exact
full dynamics.
"""

import math

import numpy as np
from numba import njit
from numba.types import float64, int64, uint8, uint64

from .rng import next_exponential, next_u53, site_hash_u64, threshold_u64, xo_next

UNSET = np.uint8(255)  # lazy-init sentinel for static cells
MARGIN_C = 6.0
MARGIN_FLOOR = 16


@njit(int64(uint64[:], uint8[:], int64, uint64, uint64, uint64, uint64, int64,
            int64[:], float64[:], float64), cache=True, nogil=True)
def static_walk(state, occ, origin, site_key, thr_rho, thr_occ, thr_vac, n,
                positions, times, walker_rate):
    """Walk n jumps on a lazily hashed static field; returns the endpoint.

    ``occ`` must be pre-filled with the UNSET sentinel; visited cells are
    materialised from the per-site hash on first read.  ``positions`` and
    ``times`` of length n turn on trajectory recording (times are only
    drawn when recording, the static walk itself is clock-free).
    """
    x = int64(0)
    record = positions.size > 0
    t = 0.0
    for k in range(n):
        i = x + origin
        v = occ[i]
        if v == UNSET:
            v = uint8(1) if site_hash_u64(site_key, x) < thr_rho else uint8(0)
            occ[i] = v
        thr = thr_occ if v == uint8(1) else thr_vac
        if xo_next(state) < thr:
            x += 1
        else:
            x -= 1
        if record:
            t += next_exponential(state, walker_rate)
            positions[k] = x
            times[k] = t
    return x


@njit(cache=True, nogil=True)
def isf_walk(state, value, since, origin, site_key, thr_rho, thr_occ, thr_vac,
             gamma, rho, walker_rate, n, positions, times):
    """Walk n jumps over lazily propagated spin flip cells.

    ``since`` must be zeroed per replica; a cell with since == 0 has never
    been read and takes its time-0 value from the per-site hash (query
    times are strictly positive, so 0 is a safe sentinel).  Returns
    (endpoint, duration).
    """
    x = int64(0)
    t = 0.0
    relax = gamma / rho
    record = positions.size > 0
    for k in range(n):
        t += next_exponential(state, walker_rate)
        i = x + origin
        if since[i] == 0.0:
            v = uint8(1) if site_hash_u64(site_key, x) < thr_rho else uint8(0)
        else:
            v = value[i]
        if gamma > 0.0:
            decay = math.exp(-relax * (t - since[i]))
            if v == uint8(1):
                stay = rho + (1.0 - rho) * decay
            else:
                stay = (1.0 - rho) + rho * decay
            if next_u53(state) >= stay:
                v = uint8(1) - v
        value[i] = v
        since[i] = t
        thr = thr_occ if v == uint8(1) else thr_vac
        if xo_next(state) < thr:
            x += 1
        else:
            x -= 1
        if record:
            positions[k] = x
            times[k] = t
    return x, t


@njit(cache=True, inline="always")
def _activate(occ, idx_of, pos, site_key, origin, lo, hi, thr_rho, minority, K):
    """Hash-fill buffer cells [lo, hi], appending minority entities."""
    for i in range(lo, hi + 1):
        v = uint8(1) if site_hash_u64(site_key, i - origin) < thr_rho else uint8(0)
        occ[i] = v
        if v == minority:
            idx_of[i] = K
            pos[K] = i
            K += 1
    return K


@njit(cache=True, inline="always")
def _margin(gamma, t_end, t):
    rem = t_end - t
    if rem < 0.0:
        rem = 0.0
    need = int64(MARGIN_C * math.sqrt(2.0 * gamma * rem)) + 1
    if need < MARGIN_FLOOR:
        need = MARGIN_FLOOR
    return need


@njit(cache=True, nogil=True)
def sse_walk(state, site_key, occ, idx_of, pos, origin, half0, full_torus,
             thr_rho, thr_occ, thr_vac, gamma, rho, walker_rate, n, t_end,
             positions, times):
    """Walk n jumps over exclusion particles; returns (endpoint, duration).

    Buffers ``occ``/``idx_of``/``pos`` span the full window and need no
    per-replica clearing: the loop only reads cells it has activated.  The
    active window starts at [-half0, half0] around the walker; pass half0
    covering the whole buffer to run the exact full dynamics from the
    start.  ``full_torus`` selects what the fully grown window is: the
    torus, or a walled window whose outer cells keep resampling.
    """
    size = occ.size
    track_holes = rho > 0.5
    minority = uint8(0) if track_holes else uint8(1)
    two_g = 2.0 * gamma

    alo = origin - half0
    ahi = origin + half0
    if alo < 0:
        alo = int64(0)
    if ahi > size - 1:
        ahi = int64(size - 1)
    walls = not (full_torus and alo == 0 and ahi == size - 1)
    K = _activate(occ, idx_of, pos, site_key, origin, alo, ahi, thr_rho,
                  minority, int64(0))

    x = origin
    xmin = x
    xmax = x
    t = 0.0
    jumps = int64(0)
    record = positions.size > 0

    R = two_g * K + (two_g if walls else 0.0)
    lnq = math.log(R / (R + walker_rate)) if R > 0.0 else 0.0
    budget = int64(-1)

    while jumps < n:
        # environment block before the next walker jump
        while True:
            if budget < 0:
                if R <= 0.0:
                    budget = int64(0)
                else:
                    budget = int64(math.log(next_u53(state)) / lnq)
            if budget == 0:
                break
            budget -= 1
            slots = 2 * K + (2 if walls else 0)
            u = xo_next(state)
            j = int64(float64(u >> uint64(11)) * 1.1102230246251565e-16 * slots)
            if j >= slots:
                j = slots - 1
            if j < 2 * K:
                e = j >> 1
                a = pos[e]
                b = a + 1 if (j & 1) == 1 else a - 1
                if walls:
                    if b < alo or b > ahi:
                        continue  # blocked at the wall
                else:
                    if b < 0:
                        b += size
                    elif b >= size:
                        b -= size
                if occ[b] != occ[a]:
                    occ[b] = minority
                    occ[a] = uint8(1) - minority
                    pos[e] = b
                    idx_of[b] = e
            else:
                cell = alo if j == 2 * K else ahi
                v = uint8(1) if xo_next(state) < thr_rho else uint8(0)
                if v != occ[cell]:
                    occ[cell] = v
                    if v == minority:
                        idx_of[cell] = K
                        pos[K] = cell
                        K += 1
                    else:
                        e = idx_of[cell]
                        last = pos[K - 1]
                        pos[e] = last
                        idx_of[last] = e
                        K -= 1
                    R = two_g * K + two_g
                    lnq = math.log(R / (R + walker_rate)) if R > 0.0 else 0.0
                    budget = int64(-1)

        # walker jump
        t += next_exponential(state, walker_rate)
        thr = thr_occ if occ[x] == uint8(1) else thr_vac
        if xo_next(state) < thr:
            x += 1
        else:
            x -= 1
        jumps += 1
        budget = int64(-1)
        if record:
            positions[jumps - 1] = x - origin
            times[jumps - 1] = t

        # keep the walls at least margin(t) beyond the visited range
        if walls and (x < xmin or x > xmax):
            if x < xmin:
                xmin = x
            else:
                xmax = x
            need = _margin(gamma, t_end, t)
            if xmin - alo < need or ahi - xmax < need:
                new_alo = xmin - need - (need >> 1)
                new_ahi = xmax + need + (need >> 1)
                if new_alo < 0:
                    new_alo = int64(0)
                if new_ahi > size - 1:
                    new_ahi = int64(size - 1)
                if full_torus and new_alo == 0 and new_ahi == size - 1:
                    # grown to the full window: run the exact torus
                    K = _activate(occ, idx_of, pos, site_key, origin,
                                  new_alo, alo - 1, thr_rho, minority, K)
                    K = _activate(occ, idx_of, pos, site_key, origin,
                                  ahi + 1, new_ahi, thr_rho, minority, K)
                    walls = False
                    R = two_g * K
                else:
                    if new_alo < alo:
                        K = _activate(occ, idx_of, pos, site_key, origin,
                                      new_alo, alo - 1, thr_rho, minority, K)
                    if new_ahi > ahi:
                        K = _activate(occ, idx_of, pos, site_key, origin,
                                      ahi + 1, new_ahi, thr_rho, minority, K)
                    R = two_g * K + two_g
                alo = new_alo
                ahi = new_ahi
                lnq = math.log(R / (R + walker_rate)) if R > 0.0 else 0.0
                budget = int64(-1)

    return x - origin, t
