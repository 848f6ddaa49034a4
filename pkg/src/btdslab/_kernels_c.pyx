# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitmask kernels; signatures mirror ``_kernels_py``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

ctypedef unsigned long long u64

BACKEND = "cython"

cdef enum:
    MAXN = 64


cdef inline int _load_mn(object mn, u64* out) except -1:
    cdef Py_ssize_t n = len(mn)
    if n > MAXN:
        raise ValueError("too many points for the compiled kernels")
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = <u64>mn[i]
    return <int>n


cdef inline u64 _closure(const u64* mn, int n, u64 a) nogil:
    cdef u64 out = 0
    cdef int p
    for p in range(n):
        if mn[p] & a:
            out |= (<u64>1) << p
    return out


cdef inline bint _is_open(const u64* mn, int n, u64 u) nogil:
    cdef int p
    for p in range(n):
        if (u >> p) & 1:
            if mn[p] & ~u:
                return False
    return True


cdef inline u64 _preimage(const int* table, int n, u64 b) nogil:
    cdef u64 out = 0
    cdef int x
    for x in range(n):
        if (b >> table[x]) & 1:
            out |= (<u64>1) << x
    return out


cdef inline u64 _image(const int* table, int n, u64 a) nogil:
    cdef u64 out = 0
    cdef int x
    for x in range(n):
        if (a >> x) & 1:
            out |= (<u64>1) << table[x]
    return out


def closure(mn, a):
    cdef u64 buf[MAXN]
    cdef int n = _load_mn(mn, buf)
    return _closure(buf, n, <u64>a)


def is_open(mn, u):
    cdef u64 buf[MAXN]
    cdef int n = _load_mn(mn, buf)
    return _is_open(buf, n, <u64>u)


def enumerate_opens(mn):
    cdef u64 buf[MAXN]
    cdef int n = _load_mn(mn, buf)
    if n > 20:
        raise ValueError("open enumeration limited to 20 points")
    cdef u64 u
    cdef u64 top = (<u64>1) << n
    out = []
    for u in range(top):
        if _is_open(buf, n, u):
            out.append(u)
    return out


def image(table, a):
    cdef int tab[MAXN]
    cdef int n = len(table)
    cdef int i
    for i in range(n):
        tab[i] = table[i]
    return _image(tab, n, <u64>a)


def preimage(table, b):
    cdef int tab[MAXN]
    cdef int n = len(table)
    cdef int i
    for i in range(n):
        tab[i] = table[i]
    return _preimage(tab, n, <u64>b)


def continuity_witness(mn_src, opens_dst, table):
    cdef u64 buf[MAXN]
    cdef int n = _load_mn(mn_src, buf)
    cdef int tab[MAXN]
    cdef int i
    for i in range(n):
        tab[i] = table[i]
    cdef u64 u
    for obj in opens_dst:
        u = <u64>obj
        if not _is_open(buf, n, _preimage(tab, n, u)):
            return obj
    return -1


def monotone_ok(mn_src, mn_dst, table):
    cdef u64 src[MAXN]
    cdef u64 dst[MAXN]
    cdef int n = _load_mn(mn_src, src)
    _load_mn(mn_dst, dst)
    cdef int tab[MAXN]
    cdef int x
    for x in range(n):
        tab[x] = table[x]
    for x in range(n):
        if _image(tab, n, src[x]) & ~dst[tab[x]]:
            return False
    return True


cdef bint _all_private(const u64* chosen, int k) nogil:
    cdef int i, j
    cdef u64 rest
    for i in range(k):
        rest = 0
        for j in range(k):
            if j != i:
                rest |= chosen[j]
        if not (chosen[i] & ~rest):
            return False
    return True


cdef void _irr_rec(const u64* opens, int k, u64 full, u64* chosen, int depth,
                   int start, u64 union_, list out):
    cdef int idx, t
    cdef u64 m, nu
    for idx in range(start, k):
        m = opens[idx]
        if not (m & ~union_):
            continue
        chosen[depth] = m
        if _all_private(chosen, depth + 1):
            nu = union_ | m
            if nu == full:
                out.append(tuple([chosen[t] for t in range(depth + 1)]))
            elif depth + 1 < MAXN:
                _irr_rec(opens, k, full, chosen, depth + 1, idx + 1, nu, out)


def irredundant_covers(opens, full):
    cdef Py_ssize_t k = len(opens)
    cdef u64* buf = <u64*>malloc((k + 1) * sizeof(u64))
    cdef u64 chosen[MAXN]
    cdef Py_ssize_t i
    out = []
    try:
        for i in range(k):
            buf[i] = <u64>opens[i]
        _irr_rec(buf, <int>k, <u64>full, chosen, 0, 0, 0, out)
    finally:
        free(buf)
    return out


cdef struct OracleCtx:
    int ncov
    int nstates
    int max_len
    int reps
    const int* offsets
    const u64* move_c
    const int* move_h
    const unsigned char* accept
    unsigned char* work
    int* word


cdef void _play(OracleCtx* ctx, const unsigned char* src, unsigned char* dst, int ci) nogil:
    cdef int S = ctx.nstates
    cdef unsigned char* cur = ctx.work
    cdef unsigned char* nxt = ctx.work + S
    cdef int r, s, m
    cdef u64 t
    memcpy(cur, src, S)
    for r in range(ctx.reps):
        memset(nxt, 0, S)
        for s in range(S):
            if cur[s]:
                for m in range(ctx.offsets[ci], ctx.offsets[ci + 1]):
                    t = (<u64>s) | (ctx.move_c[m] << 1) | (<u64>ctx.move_h[m])
                    nxt[t] = 1
        memcpy(cur, nxt, S)
    memcpy(dst, cur, S)


cdef int _oracle_rec(OracleCtx* ctx, unsigned char* levels, int depth, int start) nogil:
    # levels[depth*S] holds the state set before letter `depth`
    cdef int S = ctx.nstates
    cdef int ci, s, res
    cdef bint ok
    for ci in range(start, ctx.ncov):
        _play(ctx, levels + depth * S, levels + (depth + 1) * S, ci)
        ctx.word[depth] = ci
        ok = False
        for s in range(S):
            if levels[(depth + 1) * S + s] and ctx.accept[s]:
                ok = True
                break
        if not ok:
            return depth + 1
        if depth + 1 < ctx.max_len:
            res = _oracle_rec(ctx, levels, depth + 1, ci)
            if res:
                return res
    return 0


def oracle_search(choices, max_len, reps, accept):
    cdef int ncov = len(choices)
    cdef int S = len(accept)
    cdef int L = max_len
    cdef int total = 0
    for ch in choices:
        total += len(ch)
    cdef int* offsets = <int*>malloc((ncov + 1) * sizeof(int))
    cdef u64* move_c = <u64*>malloc((total + 1) * sizeof(u64))
    cdef int* move_h = <int*>malloc((total + 1) * sizeof(int))
    cdef unsigned char* acc = <unsigned char*>malloc(S)
    cdef unsigned char* work = <unsigned char*>malloc(2 * S)
    cdef unsigned char* levels = <unsigned char*>malloc((L + 1) * S)
    cdef int* word = <int*>malloc((L + 1) * sizeof(int))
    cdef OracleCtx ctx
    cdef int i, j, pos, found
    try:
        pos = 0
        for i in range(ncov):
            offsets[i] = pos
            for c, h in choices[i]:
                if (<u64>c << 1) >= <u64>S:
                    raise ValueError("move mask outside the state space")
                move_c[pos] = <u64>c
                move_h[pos] = 1 if h else 0
                pos += 1
        offsets[ncov] = pos
        for i in range(S):
            acc[i] = 1 if accept[i] else 0
        memset(levels, 0, (L + 1) * S)
        levels[0] = 1
        ctx.ncov = ncov
        ctx.nstates = S
        ctx.max_len = L
        ctx.reps = reps
        ctx.offsets = offsets
        ctx.move_c = move_c
        ctx.move_h = move_h
        ctx.accept = acc
        ctx.work = work
        ctx.word = word
        found = _oracle_rec(&ctx, levels, 0, 0)
        if found:
            return tuple([word[j] for j in range(found)])
        return None
    finally:
        free(offsets)
        free(move_c)
        free(move_h)
        free(acc)
        free(work)
        free(levels)
        free(word)
