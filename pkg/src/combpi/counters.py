"""Hierarchical sieve counters over one block of 2**L positions.

Cell k (1-indexed) covers the 2**l(k) positions (k - 2**l(k), k], where l(k)
is the number of trailing zero bits of k.  Each cell starts at the number of
initially present positions in its range and is decremented as positions are
removed, so prefix-presence counts and removals both cost O(L).

Two storage modes hold identical cell values: ``unpacked`` keeps one int64
per cell; ``packed`` gives cell k exactly l(k) + 1 bits (value range
0..2**l(k)), for a total payload of 2**(L+1) - 1 bits, an average of just
under 2 bits per counter.
"""

from __future__ import annotations

import numpy as np

UNPACKED = "unpacked"
PACKED = "packed"


def _levels(L: int) -> np.ndarray:
    """l(k) for k = 1..2**L (index 0 unused)."""
    k = np.arange(1 << L, dtype=np.int64) + 1
    lsb = k & -k
    return np.log2(lsb).astype(np.int64)


class CounterTree:
    """One block's counter hierarchy; owned by a single thread at a time."""

    def __init__(self, L: int, cells: np.ndarray | None, mode: str, payload: int = 0):
        self.L = L
        self.size = 1 << L
        self.mode = mode
        if mode == UNPACKED:
            assert cells is not None
            self.cells_arr = cells  # int64, length 2**L + 1, index 0 unused
            self.payload = 0
        else:
            self.cells_arr = None
            self.payload = payload
            self._init_packed_layout()

    def _init_packed_layout(self) -> None:
        lev = _levels(self.L)
        widths = lev + 1
        self.offsets = np.zeros(self.size + 1, dtype=np.int64)
        np.cumsum(widths, out=self.offsets[1:])
        self.widths = widths

    @property
    def payload_bits(self) -> int:
        """Total packed payload size in bits: sum over k of l(k) + 1."""
        if self.mode == PACKED:
            return int(self.offsets[-1])
        lev = _levels(self.L)
        return int((lev + 1).sum())

    # -- cell access -------------------------------------------------------

    def cell(self, k: int) -> int:
        if not 1 <= k <= self.size:
            raise IndexError(f"cell {k} out of range 1..{self.size}")
        if self.mode == UNPACKED:
            return int(self.cells_arr[k])
        off = int(self.offsets[k - 1])
        width = int(self.widths[k - 1])
        return (self.payload >> off) & ((1 << width) - 1)

    def _set_cell(self, k: int, value: int) -> None:
        off = int(self.offsets[k - 1])
        width = int(self.widths[k - 1])
        mask = ((1 << width) - 1) << off
        self.payload = (self.payload & ~mask) | (value << off)

    def cells(self) -> list[int]:
        """All cell values, k = 1..2**L (mode independent)."""
        if self.mode == UNPACKED:
            return [int(v) for v in self.cells_arr[1:]]
        return [self.cell(k) for k in range(1, self.size + 1)]

    # -- mutation and queries ----------------------------------------------

    def remove(self, pos: int) -> None:
        """Mark 1-based position pos absent: decrement every covering cell.

        The caller tracks presence with a companion bitmap; removing an
        absent position is a contract violation, caught here only insofar as
        a cell would go negative.
        """
        if not 1 <= pos <= self.size:
            raise IndexError(f"position {pos} out of range 1..{self.size}")
        k = pos
        if self.mode == UNPACKED:
            while k <= self.size:
                self.cells_arr[k] -= 1
                if self.cells_arr[k] < 0:
                    raise ValueError(f"cell {k} went negative: double removal")
                k += k & -k
        else:
            while k <= self.size:
                v = self.cell(k) - 1
                if v < 0:
                    raise ValueError(f"cell {k} went negative: double removal")
                self._set_cell(k, v)
                k += k & -k

    def count_leq(self, pos: int) -> int:
        """Number of present positions in [1, pos], 0 <= pos <= 2**L."""
        if not 0 <= pos <= self.size:
            raise IndexError(f"position {pos} out of range 0..{self.size}")
        total = 0
        k = pos
        if self.mode == UNPACKED:
            while k > 0:
                total += int(self.cells_arr[k])
                k &= k - 1
        else:
            while k > 0:
                total += self.cell(k)
                k &= k - 1
        return total

    # -- batch forms used by the sieve -------------------------------------

    def remove_batch(self, pos: np.ndarray) -> None:
        """Remove many (distinct, present) 1-based positions at once."""
        if self.mode != UNPACKED:
            for p in pos:
                self.remove(int(p))
            return
        q = np.asarray(pos, dtype=np.int64) - 1
        for lev in range(self.L + 1):
            shifted = q >> lev
            sel = (shifted & 1) == 0
            if lev == 0:
                k = q[sel] + 1
            else:
                k = ((shifted[sel] + 1) << lev)
            np.subtract.at(self.cells_arr, k, 1)

    def count_leq_batch(self, pos: np.ndarray) -> np.ndarray:
        if self.mode != UNPACKED:
            return np.array([self.count_leq(int(p)) for p in pos], dtype=np.int64)
        i = np.asarray(pos, dtype=np.int64)
        total = np.zeros(len(i), dtype=np.int64)
        for lev in range(self.L + 1):
            sel = ((i >> lev) & 1) == 1
            if sel.any():
                k = (i[sel] >> lev) << lev
                total[sel] += self.cells_arr[k]
        return total


def counter_init(L: int, present) -> CounterTree:
    """Build an unpacked tree whose cell k holds the popcount of the present
    flags over (k - 2**l(k), k]."""
    if not 2 <= L <= 31:
        raise ValueError(f"L must be in 2..31, got {L}")
    size = 1 << L
    flags = np.zeros(size, dtype=np.int64)
    present = np.asarray(present)
    if len(present) > size:
        raise ValueError(f"presence sequence longer than 2**L = {size}")
    flags[: len(present)] = present.astype(np.int64)
    prefix = np.zeros(size + 1, dtype=np.int64)
    np.cumsum(flags, out=prefix[1:])
    k = np.arange(1, size + 1, dtype=np.int64)
    lsb = k & -k
    cells = np.zeros(size + 1, dtype=np.int64)
    cells[1:] = prefix[k] - prefix[k - lsb]
    return CounterTree(L=L, cells=cells, mode=UNPACKED)


def counter_remove(t: CounterTree, pos: int) -> None:
    t.remove(pos)


def counter_count_leq(t: CounterTree, pos: int) -> int:
    return t.count_leq(pos)


def counter_pack_roundtrip(t: CounterTree) -> CounterTree:
    """Packed copy of an unpacked tree with identical cell values."""
    if t.mode != UNPACKED:
        raise ValueError("pack_roundtrip expects an unpacked tree")
    packed = CounterTree(L=t.L, cells=None, mode=PACKED, payload=0)
    payload = 0
    for k in range(1, t.size + 1):
        payload |= int(t.cells_arr[k]) << int(packed.offsets[k - 1])
    packed.payload = payload
    return packed
