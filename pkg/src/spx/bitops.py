"""Bitmask helpers shared by the enumeration kernels.

Assignments over {-1,+1}^n are mirrored as n-bit masks where bit i set
means variable i+1 has sign -1.  All enumeration-heavy code works on
masks; the conversion helpers here are the single place where the
convention lives.
"""

from __future__ import annotations

import numpy as np

# 16-bit popcount table, used to popcount wide numpy arrays.
_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


def popcount(x: int) -> int:
    return bin(x).count("1")


def popcount_array(masks: np.ndarray) -> np.ndarray:
    """Per-element popcount of an unsigned integer array (up to 64 bits)."""
    m = masks.astype(np.uint64)
    out = np.zeros(m.shape, dtype=np.int64)
    while True:
        out += _POP16[(m & np.uint64(0xFFFF)).astype(np.int64)]
        if not m.any():
            break
        m >>= np.uint64(16)
        if not m.any():
            break
    return out


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def gray_flip_bit(i: int) -> int:
    """Bit flipped when stepping from gray_code(i-1) to gray_code(i), i >= 1."""
    return (i & -i).bit_length() - 1


def signs_to_mask(signs: tuple[int, ...]) -> int:
    mask = 0
    for i, s in enumerate(signs):
        if s == -1:
            mask |= 1 << i
    return mask


def mask_to_signs(mask: int, n: int) -> tuple[int, ...]:
    return tuple(-1 if (mask >> i) & 1 else 1 for i in range(n))
