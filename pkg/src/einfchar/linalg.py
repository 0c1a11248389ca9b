"""Dense F_2 linear algebra on rows packed into Python ints.

A vector of length n is an int whose bit j is coordinate j.
"""
from __future__ import annotations

from typing import Sequence


def rank(rows: Sequence[int]) -> int:
    return len(_echelon(rows)[0])


def _echelon(rows: Sequence[int]):
    """Reduced echelon form; returns (pivot rows, pivot bits, combination masks)."""
    pivots: list[int] = []
    bits: list[int] = []
    combos: list[int] = []
    for idx, row in enumerate(rows):
        combo = 1 << idx
        for p, b, c in zip(pivots, bits, combos):
            if row & b:
                row ^= p
                combo ^= c
        if row:
            low = row & -row
            for k in range(len(pivots)):
                if pivots[k] & low:
                    pivots[k] ^= row
                    combos[k] ^= combo
            pivots.append(row)
            bits.append(low)
            combos.append(combo)
    return pivots, bits, combos


def kernel(rows: Sequence[int]) -> list[int]:
    """Basis of {c : XOR of rows[i] for bits i of c == 0}."""
    out: list[int] = []
    pivots: list[int] = []
    bits: list[int] = []
    combos: list[int] = []
    for idx, row in enumerate(rows):
        combo = 1 << idx
        for p, b, c in zip(pivots, bits, combos):
            if row & b:
                row ^= p
                combo ^= c
        if row:
            pivots.append(row)
            bits.append(row & -row)
            combos.append(combo)
        else:
            out.append(combo)
    return out


def solve(rows: Sequence[int], target: int) -> int | None:
    """Some combination mask c with XOR_{i in c} rows[i] == target, or None."""
    pivots, bits, combos = _echelon(rows)
    combo = 0
    for p, b, c in zip(pivots, bits, combos):
        if target & b:
            target ^= p
            combo ^= c
    return combo if target == 0 else None


def transpose(rows: Sequence[int], ncols: int) -> list[int]:
    out = [0] * ncols
    for i, row in enumerate(rows):
        while row:
            low = row & -row
            out[low.bit_length() - 1] |= 1 << i
            row ^= low
    return out


def bits_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
