"""Monte Carlo engine for the gated lattice walk.

M independent walkers move on sites 1..n0+n1 (bulk then layer), lazy on
the layer, reflected at site 1, and are absorbed through the last site
while the gate is open.  Per cycle i the engine tallies the absorption
count F_i, the occupancy time U_i of the sampling site n0, and the
walker-steps spent on the layer.

Two implementation choices matter for reproducibility and speed:

* every walker owns a counter-seeded xoshiro256++ stream, so results are
  bit-identical for a given (disc, cycles, seed) no matter how the work
  is scheduled, and a run can be resumed mid-stream;

* inside regions where the walk is translation invariant and no tally
  can trigger, the walker is advanced many steps at once by sampling the
  exact displacement law (a Binomial for the bulk, reflected across the
  left edge by half-integer folding; a lazy-walk composition on the
  layer).  The jump never touches the sampling site, the gate, or the
  layer boundary, so the law of every recorded observable is exactly
  that of the step-by-step chain.  ``bulk_jumps=False`` switches the
  shortcut off for cross-checks.

Move draws compare raw 64-bit words against integer thresholds
round(p * 2**64); the pure-Python mirror (``compiled=False``) performs
the same integer arithmetic and reproduces the compiled path bit for
bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .params import DiscreteParams
from .exact import closed_stationary

NCHUNKS = 256

U64 = np.uint64
_TWO53_INV = 2.0 ** -53


# ---------------------------------------------------------------------------
# per-walker RNG: splitmix64 seeding, xoshiro256++ streams


def _splitmix64_py(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return state, z ^ (z >> 31)


def seed_states(seed: int, M: int) -> np.ndarray:
    """(M, 4) xoshiro states drawn from one splitmix64 sequence."""
    out = np.empty((M, 4), dtype=np.uint64)
    st = seed & 0xFFFFFFFFFFFFFFFF
    for w in range(M):
        for k in range(4):
            st, val = _splitmix64_py(st)
            out[w, k] = val
    return out


@njit(cache=True)
def _next_u64(s):
    s0, s1, s2, s3 = s[0], s[1], s[2], s[3]
    tmp = s0 + s3
    res = ((tmp << U64(23)) | (tmp >> U64(41))) + s0
    t = s1 << U64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = (s3 << U64(45)) | (s3 >> U64(19))
    s[0], s[1], s[2], s[3] = s0, s1, s2, s3
    return res


def _next_u64_py(s: list[int]) -> int:
    mask = 0xFFFFFFFFFFFFFFFF
    s0, s1, s2, s3 = s
    tmp = (s0 + s3) & mask
    res = ((((tmp << 23) | (tmp >> 41)) & mask) + s0) & mask
    t = (s1 << 17) & mask
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = ((s3 << 45) | (s3 >> 19)) & mask
    s[0], s[1], s[2], s[3] = s0, s1, s2, s3
    return res


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> U64(1)) & U64(0x5555555555555555))
    x = (x & U64(0x3333333333333333)) + ((x >> U64(2)) & U64(0x3333333333333333))
    x = (x + (x >> U64(4))) & U64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * U64(0x0101010101010101)) >> U64(56))


# ---------------------------------------------------------------------------
# move thresholds


def _thr64(p: float) -> int:
    # round(p * 2**64) in exact rational arithmetic
    from fractions import Fraction

    f = Fraction(p) * (1 << 64)
    return int(f + Fraction(1, 2))


@dataclass(frozen=True)
class MoveTables:
    """Integer draw thresholds and jump limits for one parameter set."""

    half: int            # P(move) split for the plain walk
    layer_left: int      # left hop on the layer, width (1-r)/2
    layer_right: int     # left + right interval end
    gate_hop: int        # left hop at the gate site, width (1-rb)/2
    gate_exit: int       # hop + exit interval end (open phase only)
    q_inv: float         # min(r, 1-r), inversion parameter for layer jumps
    r_le_half: bool
    jcap: int            # largest layer jump the inversion can start safely

    @classmethod
    def build(cls, disc: DiscreteParams) -> "MoveTables":
        r = disc.r
        rb = r if disc.n1 > 0 else 0.0
        lay = _thr64((1.0 - r) / 2.0)
        gat = _thr64((1.0 - rb) / 2.0)
        q = min(r, 1.0 - r)
        if q > 1e-12:
            jcap = max(1, int(640.0 / -math.log1p(-q)))
        else:
            jcap = 1 << 62
        # doubled interval ends clip to 2**64 - 1; this shaves 2**-64 off
        # one hop probability, far below any observable resolution
        top = (1 << 64) - 1
        return cls(half=1 << 63, layer_left=lay,
                   layer_right=min(2 * lay, top),
                   gate_hop=gat, gate_exit=min(2 * gat, top), q_inv=q,
                   r_le_half=(r <= 0.5), jcap=jcap)


def step_kernel(site: int, open_gate: bool, disc: DiscreteParams,
                draw: float) -> int:
    """Single-site transition rule; returns the next site, 0 if absorbed.

    ``draw`` is uniform on [0, 1).  The interval layout matches the
    engine: a left hop occupies [0, (1-r(x))/2), a right hop (or the
    exit, at the gate while open) the next interval of the same width,
    and the stay probability the remainder.
    """
    if not 0.0 <= draw < 1.0:
        raise ValueError("draw must lie in [0, 1)")
    n0, n1 = disc.n0, disc.n1
    nb = n0 + n1
    if not 1 <= site <= nb:
        raise ValueError(f"site {site} outside 1..{nb}")
    r = disc.r
    if site == nb:
        rb = r if n1 > 0 else 0.0
        hop = (1.0 - rb) / 2.0
        if draw < hop:
            return site - 1
        if open_gate and draw < 2.0 * hop:
            return 0
        return site
    if site == 1:
        return 1 if draw < 0.5 else 2
    if site <= n0:
        return site - 1 if draw < 0.5 else site + 1
    hop = (1.0 - r) / 2.0
    if draw < hop:
        return site - 1
    if draw < 2.0 * hop:
        return site + 1
    return site


# ---------------------------------------------------------------------------
# compiled walker loop


@njit(cache=True)
def _binom_half(s, n):
    # Binomial(n, 1/2) from raw random bits
    b = np.int64(0)
    nw = n >> 6
    for _ in range(nw):
        b += _popcount(_next_u64(s))
    rem = n & np.int64(63)
    if rem != 0:
        x = _next_u64(s) >> U64(64 - rem)
        b += _popcount(x)
    return b


@njit(cache=True)
def _binom_inv(s, n, q):
    # Binomial(n, q) by CDF inversion, q <= 1/2, n capped by the caller
    # so the starting pmf (1-q)**n stays representable
    u = np.float64(_next_u64(s) >> U64(11)) * _TWO53_INV
    pmf = math.exp(n * math.log1p(-q))
    cdf = pmf
    k = np.int64(0)
    ratio = q / (1.0 - q)
    while u > cdf and k < n:
        k += 1
        pmf *= ((n - k + 1) / k) * ratio
        cdf += pmf
    return k


@njit(cache=True)
def _run_chunk(pos, rng, alive, lo, hi, cycles, tau_bar, sigma_bar, n0, n1,
               thr_layer_l, thr_layer_r, thr_gate_h, thr_gate_e,
               q_inv, r_le_half, jcap, use_jumps, Fc, Uc, Vc):
    nb = n0 + n1
    half = U64(1) << U64(63)
    s = np.empty(4, dtype=np.uint64)
    for w in range(lo, hi):
        if not alive[w]:
            continue
        s[0] = rng[w, 0]
        s[1] = rng[w, 1]
        s[2] = rng[w, 2]
        s[3] = rng[w, 3]
        p = pos[w]
        cyc = np.int64(0)
        tc = np.int64(0)
        ok = True
        while cyc < cycles:
            # jumps clip at the cycle boundary, so resumed runs replay
            # the same draw sequence as one long run
            if use_jumps and p <= n0 - 2:
                j = n0 - 1 - p
                rem = tau_bar - tc
                if j > rem:
                    j = rem
                b = _binom_half(s, j)
                y = p + 2 * b - j
                if y < 1:
                    y = 1 - y
                p = y
                tc += j
                if tc == tau_bar:
                    tc = 0
                    cyc += 1
            elif use_jumps and n1 >= 4 and p >= n0 + 2 and p <= nb - 2:
                j = p - (n0 + 1)
                if nb - 1 - p < j:
                    j = nb - 1 - p
                if j > jcap:
                    j = jcap
                rem = tau_bar - tc
                if j > rem:
                    j = rem
                k = _binom_inv(s, j, q_inv)
                m = (j - k) if r_le_half else k
                b = _binom_half(s, m)
                p += 2 * b - m
                Vc[cyc] += j
                tc += j
                if tc == tau_bar:
                    tc = 0
                    cyc += 1
            else:
                x = _next_u64(s)
                if p == nb:
                    if tc < sigma_bar:
                        if x < thr_gate_h:
                            p -= 1
                        elif x < thr_gate_e:
                            Fc[cyc] += 1
                            ok = False
                    else:
                        if x < thr_gate_h:
                            p -= 1
                elif p == 1:
                    if x >= half:
                        p += 1
                elif p <= n0:
                    if x < half:
                        p -= 1
                    else:
                        p += 1
                else:
                    if x < thr_layer_l:
                        p -= 1
                    elif x < thr_layer_r:
                        p += 1
                if ok:
                    if p == n0:
                        Uc[cyc] += 1
                    elif p > n0:
                        Vc[cyc] += 1
                tc += 1
                if tc == tau_bar:
                    tc = 0
                    cyc += 1
                if not ok:
                    break
        pos[w] = p
        rng[w, 0] = s[0]
        rng[w, 1] = s[1]
        rng[w, 2] = s[2]
        rng[w, 3] = s[3]
        alive[w] = ok


@njit(cache=True, parallel=True)
def _run_kernel(pos, rng, alive, cycles, tau_bar, sigma_bar, n0, n1,
                thr_layer_l, thr_layer_r, thr_gate_h, thr_gate_e,
                q_inv, r_le_half, jcap, use_jumps, F, Uacc, V):
    M = pos.shape[0]
    for c in prange(NCHUNKS):
        lo = c * M // NCHUNKS
        hi = (c + 1) * M // NCHUNKS
        _run_chunk(pos, rng, alive, lo, hi, cycles, tau_bar, sigma_bar,
                   n0, n1, thr_layer_l, thr_layer_r, thr_gate_h, thr_gate_e,
                   q_inv, r_le_half, jcap, use_jumps,
                   F[c], Uacc[c], V[c])


def _run_python(pos, rng, alive, cycles, tau_bar, sigma_bar, n0, n1,
                thr_layer_l, thr_layer_r, thr_gate_h, thr_gate_e,
                q_inv, r_le_half, jcap, use_jumps, F, Uacc, V):
    # line-for-line mirror of _run_kernel on Python integers; the draw
    # order and all threshold comparisons are identical, so the two
    # paths must agree bit for bit
    M = pos.shape[0]
    nb = n0 + n1
    half = 1 << 63

    def binom_half(s, n):
        b = 0
        for _ in range(n >> 6):
            b += bin(_next_u64_py(s)).count("1")
        rem = n & 63
        if rem:
            b += bin(_next_u64_py(s) >> (64 - rem)).count("1")
        return b

    def binom_inv(s, n, q):
        u = (_next_u64_py(s) >> 11) * _TWO53_INV
        pmf = math.exp(n * math.log1p(-q))
        cdf = pmf
        k = 0
        ratio = q / (1.0 - q)
        while u > cdf and k < n:
            k += 1
            pmf *= ((n - k + 1) / k) * ratio
            cdf += pmf
        return k

    for c in range(NCHUNKS):
        lo = c * M // NCHUNKS
        hi = (c + 1) * M // NCHUNKS
        for w in range(lo, hi):
            if not alive[w]:
                continue
            s = [int(rng[w, k]) for k in range(4)]
            p = int(pos[w])
            cyc = 0
            tc = 0
            ok = True
            while cyc < cycles:
                # jumps clip at the cycle boundary, so resumed runs replay
                # the same draw sequence as one long run
                if use_jumps and p <= n0 - 2:
                    j = min(n0 - 1 - p, tau_bar - tc)
                    b = binom_half(s, j)
                    y = p + 2 * b - j
                    if y < 1:
                        y = 1 - y
                    p = y
                    tc += j
                    if tc == tau_bar:
                        tc = 0
                        cyc += 1
                elif use_jumps and n1 >= 4 and n0 + 2 <= p <= nb - 2:
                    j = min(p - (n0 + 1), nb - 1 - p, jcap, tau_bar - tc)
                    k = binom_inv(s, j, q_inv)
                    m = (j - k) if r_le_half else k
                    b = binom_half(s, m)
                    p += 2 * b - m
                    V[c, cyc] += j
                    tc += j
                    if tc == tau_bar:
                        tc = 0
                        cyc += 1
                else:
                    x = _next_u64_py(s)
                    if p == nb:
                        if tc < sigma_bar:
                            if x < thr_gate_h:
                                p -= 1
                            elif x < thr_gate_e:
                                F[c, cyc] += 1
                                ok = False
                        else:
                            if x < thr_gate_h:
                                p -= 1
                    elif p == 1:
                        if x >= half:
                            p += 1
                    elif p <= n0:
                        p += -1 if x < half else 1
                    else:
                        if x < thr_layer_l:
                            p -= 1
                        elif x < thr_layer_r:
                            p += 1
                    if ok:
                        if p == n0:
                            Uacc[c, cyc] += 1
                        elif p > n0:
                            V[c, cyc] += 1
                    tc += 1
                    if tc == tau_bar:
                        tc = 0
                        cyc += 1
                    if not ok:
                        break
            pos[w] = p
            for k in range(4):
                rng[w, k] = s[k]
            alive[w] = ok


# ---------------------------------------------------------------------------
# public API


@dataclass(frozen=True)
class Schedule:
    """Gate schedule: the first sigma_bar steps of each cycle are open."""

    tau_bar: int
    sigma_bar: int

    def is_open(self, t: int) -> bool:
        return (t % self.tau_bar) < self.sigma_bar


@dataclass(frozen=True)
class CycleRecord:
    cycle: int
    F: int
    U: int
    residual: int
    k_i: float
    v_mean: float


@dataclass
class WalkerState:
    """Resumable ensemble state after an integer number of cycles."""

    pos: np.ndarray        # int64 sites, 1-based
    rng: np.ndarray        # (M, 4) uint64 xoshiro states
    alive: np.ndarray      # bool
    cycles_done: int

    @property
    def n_alive(self) -> int:
        return int(self.alive.sum())


@dataclass
class RunResult:
    disc: DiscreteParams
    seed: int
    cycles_requested: int
    F: np.ndarray          # int64 per retained cycle
    U: np.ndarray
    V: np.ndarray          # walker-steps on the layer
    residual: np.ndarray
    truncated: bool
    state: WalkerState
    chunk_F: np.ndarray | None = None
    chunk_U: np.ndarray | None = None

    @property
    def n_cycles(self) -> int:
        return len(self.F)

    @property
    def k(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.U > 0, self.F / np.maximum(self.U, 1), np.nan)

    @property
    def v_mean(self) -> np.ndarray:
        if self.disc.n1 == 0:
            return np.full(self.n_cycles, np.nan)
        return self.V / (self.disc.n1 * float(self.disc.tau_bar))

    @property
    def records(self) -> list[CycleRecord]:
        k = self.k
        v = self.v_mean
        return [
            CycleRecord(cycle=i, F=int(self.F[i]), U=int(self.U[i]),
                        residual=int(self.residual[i]), k_i=float(k[i]),
                        v_mean=float(v[i]))
            for i in range(self.n_cycles)
        ]


def initial_positions(disc: DiscreteParams, rng_states: np.ndarray) -> np.ndarray:
    """Sample each walker's start site from the gate-closed stationary law.

    Consumes one draw from every walker's stream (the first), keeping
    the sampling independent of scheduling.
    """
    M = rng_states.shape[0]
    pos = np.empty(M, dtype=np.int64)
    r = disc.r
    z = (1.0 - r) * disc.n0 + disc.n1
    w0 = (1.0 - r) * disc.n0
    for w in range(M):
        s = [int(rng_states[w, k]) for k in range(4)]
        u = (_next_u64_py(s) >> 11) * _TWO53_INV
        x = u * z
        if x < w0:
            site = 1 + int(x / (1.0 - r))
            if site > disc.n0:
                site = disc.n0
        else:
            site = disc.n0 + 1 + int(x - w0)
            if site > disc.n_sites:
                site = disc.n_sites
        pos[w] = site
        for k in range(4):
            rng_states[w, k] = s[k]
    return pos


def _fresh_state(disc: DiscreteParams, seed: int) -> WalkerState:
    rng = seed_states(seed, disc.M)
    pos = initial_positions(disc, rng)
    alive = np.ones(disc.M, dtype=np.bool_)
    return WalkerState(pos=pos, rng=rng, alive=alive, cycles_done=0)


def run(disc: DiscreteParams, cycles: int, seed: int, *,
        bulk_jumps: bool = True, compiled: bool = True,
        state: WalkerState | None = None,
        keep_chunks: bool = False) -> RunResult:
    """Simulate ``cycles`` gate cycles of the full ensemble.

    Deterministic in (disc, cycles, seed): walkers own their random
    streams, and the per-chunk tallies are integers, so neither thread
    scheduling nor the chunk count being larger than the worker count
    can change any output.  Passing ``state`` resumes a previous run;
    the concatenated records equal those of one longer run bit for bit.

    Returns a RunResult whose records stop early (``truncated=True``)
    if every walker has been absorbed.
    """
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    tab = MoveTables.build(disc)
    if state is None:
        state = _fresh_state(disc, seed)
    alive_at_start = state.n_alive
    F = np.zeros((NCHUNKS, cycles), dtype=np.int64)
    Uacc = np.zeros((NCHUNKS, cycles), dtype=np.int64)
    V = np.zeros((NCHUNKS, cycles), dtype=np.int64)
    args = (state.pos, state.rng, state.alive, cycles,
            disc.tau_bar, disc.sigma_bar, disc.n0, disc.n1,
            tab.layer_left, tab.layer_right, tab.gate_hop, tab.gate_exit,
            tab.q_inv, tab.r_le_half, tab.jcap, bulk_jumps, F, Uacc, V)
    if compiled:
        _run_kernel(*(_as_kernel_args(args)))
    else:
        _run_python(*args)
    state.cycles_done += cycles
    Fs = F.sum(axis=0)
    Us = Uacc.sum(axis=0)
    Vs = V.sum(axis=0)
    residual = alive_at_start - np.cumsum(Fs)
    truncated = False
    zero = np.flatnonzero(residual == 0)
    if len(zero) and zero[0] < cycles - 1:
        stop = zero[0] + 1
        Fs, Us, Vs, residual = Fs[:stop], Us[:stop], Vs[:stop], residual[:stop]
        F, Uacc = F[:, :stop], Uacc[:, :stop]
        truncated = True
    return RunResult(
        disc=disc, seed=seed, cycles_requested=cycles,
        F=Fs, U=Us, V=Vs, residual=residual, truncated=truncated,
        state=state,
        chunk_F=F if keep_chunks else None,
        chunk_U=Uacc if keep_chunks else None,
    )


def _as_kernel_args(args):
    (pos, rng, alive, cycles, tau_bar, sigma_bar, n0, n1,
     thr_ll, thr_lr, thr_gh, thr_ge, q_inv, r_le_half, jcap,
     use_jumps, F, Uacc, V) = args
    return (pos, rng, alive, np.int64(cycles), np.int64(tau_bar),
            np.int64(sigma_bar), np.int64(n0), np.int64(n1),
            U64(thr_ll), U64(thr_lr), U64(thr_gh), U64(thr_ge),
            np.float64(q_inv), r_le_half, np.int64(jcap),
            use_jumps, F, Uacc, V)


def run_until(disc: DiscreteParams, seed: int, *, min_population: int,
              cycle_cap: int = 2000, block: int = 64,
              bulk_jumps: bool = True) -> RunResult:
    """Run in blocks until the residual drops below ``min_population``
    or ``cycle_cap`` cycles have been simulated."""
    if min_population < 0 or cycle_cap < 1 or block < 1:
        raise ValueError("bad run_until bounds")
    pieces: list[RunResult] = []
    state = None
    done = 0
    while done < cycle_cap:
        n = min(block, cycle_cap - done)
        res = run(disc, n, seed, bulk_jumps=bulk_jumps, state=state)
        pieces.append(res)
        state = res.state
        done += n
        if res.truncated or res.residual[-1] < min_population:
            break
    first = pieces[0]
    return RunResult(
        disc=disc, seed=seed, cycles_requested=done,
        F=np.concatenate([p.F for p in pieces]),
        U=np.concatenate([p.U for p in pieces]),
        V=np.concatenate([p.V for p in pieces]),
        residual=np.concatenate([p.residual for p in pieces]),
        truncated=pieces[-1].truncated,
        state=state if state is not None else first.state,
    )


def occupancy_profile(disc: DiscreteParams, steps: int, seed: int
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Empirical per-site occupancy over ``steps`` steps, with a
    standard error per site estimated from independent walker chunks.

    Meant for gate-closed runs (sigma_bar = 0); occupancies are
    fractions of M*steps, comparable to the stationary law.
    """
    rng = seed_states(seed, disc.M)
    pos = initial_positions(disc, rng)
    tab = MoveTables.build(disc)
    hist = np.zeros((NCHUNKS, disc.n_sites), dtype=np.int64)
    _profile_kernel(pos, rng, np.int64(steps), np.int64(disc.tau_bar),
                    np.int64(disc.sigma_bar), np.int64(disc.n0),
                    np.int64(disc.n1), U64(tab.layer_left),
                    U64(tab.layer_right), U64(tab.gate_hop),
                    U64(tab.gate_exit), hist)
    M = disc.M
    denom = float(M * steps)
    mean = hist.sum(axis=0) / denom
    sizes = np.array([(c + 1) * M // NCHUNKS - c * M // NCHUNKS
                      for c in range(NCHUNKS)])
    chunk_means = hist / (sizes[:, None] * float(steps))
    se = chunk_means.std(axis=0, ddof=1) / math.sqrt(NCHUNKS)
    return mean, se


@njit(cache=True)
def _profile_chunk(pos, rng, lo, hi, steps, tau_bar, sigma_bar, n0, n1,
                   thr_layer_l, thr_layer_r, thr_gate_h, thr_gate_e, histc):
    nb = n0 + n1
    half = U64(1) << U64(63)
    s = np.empty(4, dtype=np.uint64)
    for w in range(lo, hi):
        s[0] = rng[w, 0]
        s[1] = rng[w, 1]
        s[2] = rng[w, 2]
        s[3] = rng[w, 3]
        p = pos[w]
        for t in range(steps):
            x = _next_u64(s)
            if p == nb:
                if (t % tau_bar) < sigma_bar:
                    if x < thr_gate_h:
                        p -= 1
                    elif x < thr_gate_e:
                        p = -1
                else:
                    if x < thr_gate_h:
                        p -= 1
            elif p == 1:
                if x >= half:
                    p += 1
            elif p <= n0:
                if x < half:
                    p -= 1
                else:
                    p += 1
            else:
                if x < thr_layer_l:
                    p -= 1
                elif x < thr_layer_r:
                    p += 1
            if p < 0:
                break
            histc[p - 1] += 1
        pos[w] = p
        rng[w, 0] = s[0]
        rng[w, 1] = s[1]
        rng[w, 2] = s[2]
        rng[w, 3] = s[3]


@njit(cache=True, parallel=True)
def _profile_kernel(pos, rng, steps, tau_bar, sigma_bar, n0, n1,
                    thr_layer_l, thr_layer_r, thr_gate_h, thr_gate_e, hist):
    M = pos.shape[0]
    for c in prange(NCHUNKS):
        lo = c * M // NCHUNKS
        hi = (c + 1) * M // NCHUNKS
        _profile_chunk(pos, rng, lo, hi, steps, tau_bar, sigma_bar, n0, n1,
                       thr_layer_l, thr_layer_r, thr_gate_h, thr_gate_e,
                       hist[c])


# ---------------------------------------------------------------------------
# cycle CSV interface


CSV_HEADER = "cycle,F,U,residual,k_i,v_mean"


def write_cycles_csv(path, result: RunResult) -> None:
    lines = [CSV_HEADER]
    for rec in result.records:
        lines.append(
            f"{rec.cycle},{rec.F},{rec.U},{rec.residual},"
            f"{rec.k_i!r},{rec.v_mean!r}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_cycles_csv(path) -> list[CycleRecord]:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected cycle CSV header: {header}")
        out = []
        for line in fh:
            c, f, u, res, k, v = line.strip().split(",")
            out.append(CycleRecord(cycle=int(c), F=int(f), U=int(u),
                                   residual=int(res), k_i=float(k),
                                   v_mean=float(v)))
    return out
