"""Fan-out-two carry circuits built from multi-input generate gates.

Instead of combining two-position signals pairwise, a generate gate merges
up to 2**r carry candidates at once: given block carries g_1..g_q (low to
high) and block propagate windows x_2..x_q between them, it computes

    g_q  or  (g_{q-1} and x_q)  or  ...  or  (g_1 and x_2 and ... and x_q)

— the carry out of the concatenated range.  Stacking k such rows over
blocks whose width multiplies by 2**r per row yields every carry of an
n = 2**(r*k) bit addition in depth O(k*r + r + k) at fan-out two.

The supporting cast keeps every wire at fan-out two:
  * pools     each produced value is emitted as 2**(r-1) duplicate copies,
              every copy serving at most two consumers;
  * boxes     rooted buffer trees that refill a pool for columns whose
              value is already final at the current row;
  * taps      rooted buffer trees over backward AND-windows of the
              propagate inputs, one pool of 2**r single-use leaves per
              column and row, supplying the gates' propagate ports;
  * windows   a shared AND-prefix lattice computing all the backward
              windows, one buffered repeat row plus r doubling rows per
              block so every tap leaf lands at its exact target depth.

Columns can be truncated: building only columns 1..w of the full
2**(r*k)-wide structure yields a w-bit carry circuit, which is how widths
that are not of the form 2**(r*k) are served.  The raw structure contains
dead scaffolding (unused duplicate copies, full-range AND chains) whose
removal is left to pruning; size formulas quoted in tests refer to the
unpruned structure, fan-out and verification to the pruned one.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .circuit import AND, BUF, OR, CircuitBuilder, lsb_carry, prune_dead


class MigParams(NamedTuple):
    r: int
    k: int
    full_width: int


def choose_params(n: int) -> MigParams:
    """Balanced block parameters: r = k = ceil(sqrt(ceil(ld n)))."""
    if n < 1:
        raise ValueError("width must be positive")
    ld = (n - 1).bit_length()
    side = 1 if ld <= 1 else math.isqrt(ld - 1) + 1
    return MigParams(side, side, 1 << (side * side))


class Pool:
    """Duplicate copies of one value, each dispensed a bounded number of
    times so that no copy ever exceeds fan-out two."""

    __slots__ = ("_items", "_takes", "_used")

    def __init__(self, items, takes_per_item=2):
        self._items = list(items)
        self._takes = takes_per_item
        self._used = 0

    def take(self) -> int:
        idx = self._used // self._takes
        if idx >= len(self._items):
            raise ValueError("pool exhausted: demand exceeded capacity")
        self._used += 1
        return self._items[idx]

    @property
    def remaining(self) -> int:
        return len(self._items) * self._takes - self._used


def _replicate(b: CircuitBuilder, src: int, leaves: int, rooted: bool):
    """Buffer tree turning one value into `leaves` copies (a power of two).

    Rooted trees spend one fan-out slot of src and cost 2*leaves - 1
    buffers; unrooted trees split src directly (both its slots) and cost
    2*leaves - 2, with the single-leaf case returning src itself.
    """
    cur = [b.add_gate(BUF, src)] if rooted else [src]
    while len(cur) < leaves:
        nxt = []
        for v in cur:
            nxt.append(b.add_gate(BUF, v))
            nxt.append(b.add_gate(BUF, v))
        cur = nxt
    return cur


def _and_suffix(b: CircuitBuilder, ports):
    """Running ANDs T_j = ports[j] & ... & ports[q-1] by recursive doubling.

    Every level touches every position (combine or buffer) except that
    finished positions pass through the last level untouched, so each
    port feeds at most two gates and T_1 (never consumed by a minterm)
    is a dead chain for pruning to reclaim.  A position that would reach
    the output untouched is buffered once to keep raw ports off the
    result list."""
    q = len(ports)
    prev = list(ports)
    levels = (q - 1).bit_length()
    touched = [False] * q
    for i in range(1, levels + 1):
        d = 1 << (i - 1)
        final = i == levels
        cur = []
        for j in range(q):
            if j + d < q:
                cur.append(b.add_gate(AND, prev[j], prev[j + d]))
                touched[j] = True
            elif not final or not touched[j]:
                cur.append(b.add_gate(BUF, prev[j]))
                touched[j] = True
            else:
                cur.append(prev[j])
        prev = cur
    return prev


def _dup_or(b: CircuitBuilder, leaves, copies: int):
    """`copies` duplicates of OR(leaves), each consumable at most twice.

    The leaf list splits contiguously at the largest power of two below
    its length; each recursion level emits `copies` ORs fed by half as
    many copies of either half, so the full case costs r * 2**(r-1) ORs
    and a single-copy request degenerates to a balanced OR tree."""
    if len(leaves) == 1:
        if copies == 1:
            return list(leaves)
        sub = _dup_or(b, leaves, (copies + 1) // 2)
        return [b.add_gate(BUF, sub[i // 2]) for i in range(copies)]
    h = 1 << ((len(leaves) - 1).bit_length() - 1)
    need = (copies + 1) // 2
    left = _dup_or(b, leaves[:h], need)
    right = _dup_or(b, leaves[h:], need)
    return [b.add_gate(OR, left[i // 2], right[i // 2]) for i in range(copies)]


def build_generate_gate(b: CircuitBuilder, r: int, gen_ports, prop_ports,
                        final_level=False):
    """One multi-input generate gate over q = len(gen_ports) blocks.

    gen_ports[i] carries the carry out of block i (low to high), and
    prop_ports[i] the AND-window between block i-1 and block i; the
    window below the lowest block (prop_ports[0]) is structurally dead.
    Returns the output copies: 2**(r-1) pooled duplicates on inner rows,
    a single balanced-tree output when final_level is set.
    """
    q = len(gen_ports)
    if q != len(prop_ports) or q < 2:
        raise ValueError("need matching gen/prop ports, at least two blocks")
    suffix = _and_suffix(b, prop_ports)
    minterms = [b.add_gate(AND, gen_ports[j], suffix[j + 1])
                for j in range(q - 1)]
    copies = 1 if final_level else 1 << (r - 1)
    last = gen_ports[q - 1]
    if copies > 1:
        # the duplication tree may wire a raw leaf twice; the highest gen
        # port was dispensed for a single wiring, so shield it
        last = b.add_gate(BUF, last)
    minterms.append(last)
    return _dup_or(b, minterms, copies)


def build_augmented_and_prefix(b: CircuitBuilder, xs, r: int, k: int,
                               omit_last_block=True):
    """Backward AND-windows of the propagate inputs, pooled for tapping.

    Returns {(c, lam): Pool} where the pool for column c at level lam
    holds 2**r single-use buffer leaves over the AND of columns
    (c - 2**(r*lam), c].  Level-0 taps root directly on the inputs; level
    lam >= 1 taps root on the last doubling row of block lam.  Each block
    is a buffered repeat row followed by r doubling rows (columns whose
    window already reaches column 1 are buffered through), which places
    every level-lam leaf at depth exactly (lam + 1) * (r + 1).

    The final block would only feed taps no gate reads, so it is omitted
    by default; with omit_last_block=False its (dead) repeat row is kept,
    completing the unpruned size formula w*r*(k-1) + w*k*2**(r+1).
    """
    w = len(xs)
    taps = {}
    for c in range(1, w + 1):
        taps[(c, 0)] = Pool(_replicate(b, xs[c - 1], 1 << r, rooted=True),
                            takes_per_item=1)
    cur = list(xs)
    length = 1
    last_block = k - 1 if omit_last_block else k
    for lam in range(1, last_block + 1):
        cur = [b.add_gate(BUF, v) for v in cur]  # repeat row
        if lam == k:
            break  # dead repeat row of the final block, kept for accounting
        for _ in range(r):
            nxt = []
            for c in range(1, w + 1):
                if c <= length:
                    nxt.append(b.add_gate(BUF, cur[c - 1]))
                else:
                    nxt.append(b.add_gate(AND, cur[c - 1],
                                          cur[c - 1 - length]))
            cur = nxt
            length *= 2
        for c in range(1, w + 1):
            taps[(c, lam)] = Pool(
                _replicate(b, cur[c - 1], 1 << r, rooted=True),
                takes_per_item=1)
    return taps


def _mig_carries(b: CircuitBuilder, pairs, r: int, k: int):
    """Emit the k-row generate-gate lattice onto a builder.

    pairs[i] = (x, y) node ids of position i+1; returns carry ids
    c_2..c_{w+1}.  Row l works over blocks of width 2**(r*(l-1)): columns
    beyond one block boundary get a gate merging up to 2**r pooled block
    carries, columns inside the first block re-pool their final value
    through a box (or surrender it to the output on the last row).
    """
    w = len(pairs)
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    taps = build_augmented_and_prefix(b, xs, r, k)
    half = 1 << (r - 1)
    pools = {t: Pool(_replicate(b, ys[t - 1], half, rooted=False))
             for t in range(1, w + 1)}
    carries = [None] * w
    for l in range(1, k + 1):
        delta = 1 << (r * (l - 1))
        final = l == k
        nxt = {}
        for t in range(1, w + 1):
            if t <= delta:
                src = pools[t].take()
                if final:
                    carries[t - 1] = src
                else:
                    nxt[t] = Pool(_replicate(b, src, half, rooted=True))
            else:
                q = min(1 << r, -(-t // delta))
                cols = [t - (q - i) * delta for i in range(1, q + 1)]
                gens = [pools[c].take() for c in cols]
                props = [taps[(c, l - 1)].take() for c in cols]
                outs = build_generate_gate(b, r, gens, props,
                                           final_level=final)
                if final:
                    carries[t - 1] = outs[0]
                else:
                    nxt[t] = Pool(outs)
        pools = nxt
    # the lowest carry is a plain copy of y_1; terminate it through the
    # absorbing y-or-(x-and-y) form so x_1 keeps a consumer after pruning
    carries[0] = lsb_carry(b, xs[0], carries[0])
    return carries


def build_mig_adder(n: int, r: int | None = None, k: int | None = None,
                    prune: bool = True):
    """Carry circuit over n positions built from multi-input generate gates.

    Parameters r (block merge width 2**r) and k (rows) default to the
    balanced choice; any n up to 2**(r*k) is built by column truncation.
    With prune=True (default) dead scaffolding is removed and the result
    validates cleanly at fan-out two; prune=False exposes the raw
    structure whose size the closed formulas describe.
    """
    if r is None and k is None:
        r, k, _ = choose_params(n)
    if r is None or k is None:
        raise ValueError("give both r and k, or neither")
    if r < 1 or k < 1:
        raise ValueError("r and k must be positive")
    if n < 1 or n > 1 << (r * k):
        raise ValueError(f"width {n} outside 1..2**(r*k)")
    b = CircuitBuilder(f"mig{n}-r{r}k{k}")
    pairs = [(b.add_input(), b.add_input()) for _ in range(n)]
    for cid in _mig_carries(b, pairs, r, k):
        b.mark_output(cid)
    c = b.build()
    return prune_dead(c) if prune else c
