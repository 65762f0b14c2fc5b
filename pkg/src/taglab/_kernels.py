"""Compiled inner loops.

Word state lives in caller-owned arrays so that a run can be advanced in
chunks, grown, resumed and checkpointed from Python. The word occupies
``buf[head:head + length]``; appends go to the right and the buffer is
compacted to the left when the tail would overflow.

Word identity is a polynomial hash over absolute tape positions,
``sum((s + 1) * B**pos) mod 2**64``. Multiplying by ``B**-head`` (``B`` is odd,
hence invertible mod ``2**64``) gives a position-independent value equal to
``word_hash`` of the current word, maintained in O(v + |w|) per step.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# int64 state slots
HEAD, LEN, STEPS, MAXLEN, POWER, LAM, SAVED_LEN, SCAN_BASE = range(8)
N_ISTATE = 8
# uint64 state slots
HABS, POW_HEAD, POW_TAIL, INV_HEAD, SAVED_HASH = range(5)
N_HSTATE = 5

# advance() return codes
LIMIT, HALTED, LENGTH, CYCLE, FULL, TARGET = range(6)

HASH_BASE = 0x9E3779B97F4A7C15
HASH_INV = pow(HASH_BASE, -1, 1 << 64)
_B = np.uint64(HASH_BASE)
_IB = np.uint64(HASH_INV)


@njit(cache=True)
def word_hash(word):
    h = np.uint64(0)
    p = np.uint64(1)
    one = np.uint64(1)
    for j in range(word.shape[0]):
        h += (np.uint64(word[j]) + one) * p
        p *= _B
    return h


@njit(cache=True)
def init_state(buf, saved, ist, hst, word):
    """Load ``word`` at the start of ``buf`` and reset counters and Brent state."""
    n = word.shape[0]
    for j in range(n):
        buf[j] = word[j]
        saved[j] = word[j]
    h = np.uint64(0)
    p = np.uint64(1)
    one = np.uint64(1)
    for j in range(n):
        h += (np.uint64(word[j]) + one) * p
        p *= _B
    ist[HEAD] = 0
    ist[LEN] = n
    ist[STEPS] = 0
    ist[MAXLEN] = n
    ist[POWER] = 1
    ist[LAM] = 0
    ist[SAVED_LEN] = n
    ist[SCAN_BASE] = 0
    hst[HABS] = h
    hst[POW_HEAD] = one
    hst[POW_TAIL] = p
    hst[INV_HEAD] = one
    hst[SAVED_HASH] = h


@njit(cache=True)
def advance(buf, saved, ist, hst, app, off, alen, v, limit, max_length, detect, scan_out,
            seek, target, target_hash):
    """Step until ``limit`` total steps or a terminal condition; returns a code.

    With ``detect`` set, Brent's power-of-two schedule keeps one saved word and
    compares each new word to it (hash first, then symbol by symbol). On CYCLE
    the period is left in ``ist[LAM]``. When ``scan_out`` is non-empty the
    symbol scanned at step ``i`` is written to ``scan_out[i - ist[SCAN_BASE]]``.
    The hash state is only maintained while ``detect`` is set. With ``seek``
    (requires ``detect``) the run stops with TARGET on the first word equal to
    ``target``.
    """
    head = ist[HEAD]
    n = ist[LEN]
    steps = ist[STEPS]
    mx = ist[MAXLEN]
    power = ist[POWER]
    lam = ist[LAM]
    slen = ist[SAVED_LEN]
    sbase = ist[SCAN_BASE]
    habs = hst[HABS]
    ph = hst[POW_HEAD]
    pt = hst[POW_TAIL]
    ih = hst[INV_HEAD]
    sh = hst[SAVED_HASH]
    one = np.uint64(1)
    record = scan_out.shape[0] > 0
    tlen = target.shape[0]
    cap = buf.shape[0]
    code = LIMIT
    while True:
        if seek and n == tlen and habs * ih == target_hash:
            hit = True
            for j in range(n):
                if buf[head + j] != target[j]:
                    hit = False
                    break
            if hit:
                code = TARGET
                break
        if n > max_length:
            code = LENGTH
            break
        if n < v:
            code = HALTED
            break
        if detect and lam > 0:
            if n == slen and habs * ih == sh:
                same = True
                for j in range(n):
                    if buf[head + j] != saved[j]:
                        same = False
                        break
                if same:
                    code = CYCLE
                    break
            if lam == power:
                for j in range(n):
                    saved[j] = buf[head + j]
                slen = n
                sh = habs * ih
                power *= 2
                lam = 0
        if steps >= limit:
            code = LIMIT
            break
        a = buf[head]
        la = alen[a]
        if head + n + la > cap:
            if n + la > cap:
                code = FULL
                break
            for j in range(n):
                buf[j] = buf[head + j]
            head = 0
        o = off[a]
        t = head + n
        if detect:
            for j in range(la):
                s = app[o + j]
                buf[t + j] = s
                habs += (np.uint64(s) + one) * pt
                pt *= _B
            for j in range(v):
                habs -= (np.uint64(buf[head + j]) + one) * ph
                ph *= _B
                ih *= _IB
            lam += 1
        else:
            for j in range(la):
                buf[t + j] = app[o + j]
        if record:
            scan_out[steps - sbase] = a
        head += v
        n += la - v
        steps += 1
        if n > mx:
            mx = n
    ist[HEAD] = head
    ist[LEN] = n
    ist[STEPS] = steps
    ist[MAXLEN] = mx
    ist[POWER] = power
    ist[LAM] = lam
    ist[SAVED_LEN] = slen
    hst[HABS] = habs
    hst[POW_HEAD] = ph
    hst[POW_TAIL] = pt
    hst[INV_HEAD] = ih
    hst[SAVED_HASH] = sh
    return code


@njit(cache=True)
def tape_step(buf, ist, hst, app, off, alen, v):
    """One hashed step; caller guarantees ``LEN >= v`` and room for the append."""
    head = ist[HEAD]
    n = ist[LEN]
    a = buf[head]
    la = alen[a]
    if head + n + la > buf.shape[0]:
        for j in range(n):
            buf[j] = buf[head + j]
        head = 0
    one = np.uint64(1)
    habs = hst[HABS]
    pt = hst[POW_TAIL]
    ph = hst[POW_HEAD]
    ih = hst[INV_HEAD]
    o = off[a]
    t = head + n
    for j in range(la):
        s = app[o + j]
        buf[t + j] = s
        habs += (np.uint64(s) + one) * pt
        pt *= _B
    for j in range(v):
        habs -= (np.uint64(buf[head + j]) + one) * ph
        ph *= _B
        ih *= _IB
    hst[HABS] = habs
    hst[POW_TAIL] = pt
    hst[POW_HEAD] = ph
    hst[INV_HEAD] = ih
    ist[HEAD] = head + v
    ist[LEN] = n + la - v
    ist[STEPS] += 1
    return a


@njit(cache=True)
def _same_word(buf_a, ist_a, hst_a, buf_b, ist_b, hst_b):
    n = ist_a[LEN]
    if n != ist_b[LEN]:
        return False
    if hst_a[HABS] * hst_a[INV_HEAD] != hst_b[HABS] * hst_b[INV_HEAD]:
        return False
    ha = ist_a[HEAD]
    hb = ist_b[HEAD]
    for j in range(n):
        if buf_a[ha + j] != buf_b[hb + j]:
            return False
    return True


@njit(cache=True)
def find_entry(word, period, app, off, alen, v, cap):
    """Smallest ``mu`` with ``A_mu == A_(mu + period)``, by a lockstep pair of tapes.

    ``cap`` must be at least the largest word length on the trajectory plus the
    longest appendant.
    """
    buf_a = np.empty(cap, dtype=word.dtype)
    buf_b = np.empty(cap, dtype=word.dtype)
    sa = np.empty(cap, dtype=word.dtype)
    sb = np.empty(cap, dtype=word.dtype)
    ist_a = np.zeros(N_ISTATE, dtype=np.int64)
    ist_b = np.zeros(N_ISTATE, dtype=np.int64)
    hst_a = np.zeros(N_HSTATE, dtype=np.uint64)
    hst_b = np.zeros(N_HSTATE, dtype=np.uint64)
    init_state(buf_a, sa, ist_a, hst_a, word)
    init_state(buf_b, sb, ist_b, hst_b, word)
    for _ in range(period):
        tape_step(buf_b, ist_b, hst_b, app, off, alen, v)
    mu = 0
    while not _same_word(buf_a, ist_a, hst_a, buf_b, ist_b, hst_b):
        tape_step(buf_a, ist_a, hst_a, app, off, alen, v)
        tape_step(buf_b, ist_b, hst_b, app, off, alen, v)
        mu += 1
    return mu


@njit(cache=True)
def batch_cycles(words, woffs, wlens, app, off, alen, v, lmax, max_steps, max_length,
                 codes, steps_out, periods, keys):
    """Run every initial word with cycle detection.

    For periodic runs ``keys[i]`` is the smallest word hash over the orbit, so
    runs landing on the same orbit share ``(period, key)``.
    """
    longest = max_length
    for i in range(wlens.shape[0]):
        if wlens[i] > longest:
            longest = wlens[i]
    cap = 2 * (longest + lmax + v) + 16
    buf = np.empty(cap, dtype=words.dtype)
    saved = np.empty(cap, dtype=words.dtype)
    ist = np.zeros(N_ISTATE, dtype=np.int64)
    hst = np.zeros(N_HSTATE, dtype=np.uint64)
    empty = np.empty(0, dtype=words.dtype)
    for i in range(wlens.shape[0]):
        w = words[woffs[i]:woffs[i] + wlens[i]]
        init_state(buf, saved, ist, hst, w)
        code = advance(buf, saved, ist, hst, app, off, alen, v, max_steps, max_length, True, empty,
                       False, empty, np.uint64(0))
        codes[i] = code
        steps_out[i] = ist[STEPS]
        periods[i] = 0
        keys[i] = 0
        if code == CYCLE:
            p = ist[LAM]
            periods[i] = p
            best = hst[HABS] * hst[INV_HEAD]
            for _ in range(p):
                tape_step(buf, ist, hst, app, off, alen, v)
                h = hst[HABS] * hst[INV_HEAD]
                if h < best:
                    best = h
            keys[i] = best


@njit(cache=True)
def first_length_divergence(scan_a, scan_b, delta):
    """First step index at which two equal-length starts reach different lengths, or -1.

    Lengths follow from the scanned symbols alone: each step changes the
    length by ``delta[symbol]``.
    """
    la = 0
    lb = 0
    for i in range(min(scan_a.shape[0], scan_b.shape[0])):
        la += delta[scan_a[i]]
        lb += delta[scan_b[i]]
        if la != lb:
            return i + 1
    return -1
