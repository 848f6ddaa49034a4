"""Pure-Python bitmask kernels.

Every function here has a twin with an identical signature in the compiled
``_kernels_c`` extension. Point sets are ints (bit ``p`` set iff point ``p``
is a member); a topology is the tuple of its minimal open neighbourhoods.
"""

from __future__ import annotations

from typing import Sequence

BACKEND = "python"


def closure(mn: Sequence[int], a: int) -> int:
    out = 0
    for p, m in enumerate(mn):
        if m & a:
            out |= 1 << p
    return out


def is_open(mn: Sequence[int], u: int) -> bool:
    v = u
    while v:
        low = v & -v
        if mn[low.bit_length() - 1] & ~u:
            return False
        v ^= low
    return True


def enumerate_opens(mn: Sequence[int]) -> list[int]:
    return [u for u in range(1 << len(mn)) if is_open(mn, u)]


def image(table: Sequence[int], a: int) -> int:
    out = 0
    for x, y in enumerate(table):
        if (a >> x) & 1:
            out |= 1 << y
    return out


def preimage(table: Sequence[int], b: int) -> int:
    out = 0
    for x, y in enumerate(table):
        if (b >> y) & 1:
            out |= 1 << x
    return out


def continuity_witness(
    mn_src: Sequence[int], opens_dst: Sequence[int], table: Sequence[int]
) -> int:
    """First open of the target (in the given order) whose preimage is not open, or -1."""
    for u in opens_dst:
        if not is_open(mn_src, preimage(table, u)):
            return u
    return -1


def monotone_ok(mn_src: Sequence[int], mn_dst: Sequence[int], table: Sequence[int]) -> bool:
    for x, m in enumerate(mn_src):
        if image(table, m) & ~mn_dst[table[x]]:
            return False
    return True


def irredundant_covers(opens: Sequence[int], full: int) -> list[tuple[int, ...]]:
    """Covers of ``full`` drawn from ``opens`` in which every member has a private point.

    ``opens`` must be ascending and free of the empty set. Output is in
    lexicographic order of the member tuples.
    """
    out: list[tuple[int, ...]] = []
    k = len(opens)
    chosen: list[int] = []

    def all_private() -> bool:
        for i, m in enumerate(chosen):
            rest = 0
            for j, o in enumerate(chosen):
                if j != i:
                    rest |= o
            if not m & ~rest:
                return False
        return True

    def rec(start: int, union: int) -> None:
        for idx in range(start, k):
            m = opens[idx]
            if not m & ~union:
                continue
            chosen.append(m)
            if all_private():
                new_union = union | m
                if new_union == full:
                    out.append(tuple(chosen))
                else:
                    rec(idx + 1, new_union)
            chosen.pop()

    rec(0, 0)
    return out


def oracle_search(
    choices: Sequence[Sequence[tuple[int, int]]],
    max_len: int,
    reps: int,
    accept: Sequence[bool],
) -> tuple[int, ...] | None:
    """Exhaustive adversary search over cover words, DP over selector moves.

    ``choices[c]`` lists the moves available on cover ``c`` as
    ``(contribution_mask, anchor_hit)`` pairs. A state packs the accumulated
    mask and the anchor flag as ``acc << 1 | flag``. Each word (non-decreasing
    cover indices, length 1..max_len) is played ``reps`` rounds per letter.
    Returns the first word after which no accepting state is reachable, or
    None when the selector survives every word.
    """
    ncov = len(choices)

    def play(states: set[int], moves: Sequence[tuple[int, int]]) -> set[int]:
        for _ in range(reps):
            states = {s | (c << 1) | h for s in states for c, h in moves}
            if not states:
                break
        return states

    def rec(start: int, states: set[int], word: tuple[int, ...]) -> tuple[int, ...] | None:
        for ci in range(start, ncov):
            after = play(states, choices[ci])
            w = word + (ci,)
            if not any(accept[s] for s in after):
                return w
            if len(w) < max_len:
                found = rec(ci, after, w)
                if found is not None:
                    return found
        return None

    return rec(0, {0}, ())
