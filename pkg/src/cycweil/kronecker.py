"""Kronecker substitution: multi-dimensional integer convolutions as one GMP product.

Nonnegative integer arrays are packed into fixed-width byte slots of a single
big integer; the product of two packed integers holds the convolution as long
as each slot is wide enough for the largest accumulated coefficient.
"""

from __future__ import annotations

from typing import Sequence

import gmpy2

_mpz_from_bytes = gmpy2.mpz.from_bytes


def slot_bytes(bound_a: int, bound_b: int, terms: int) -> int:
    """Bytes per slot so that sums of ``terms`` products a*b (a < bound_a, b < bound_b) fit."""
    top = max(1, bound_a - 1) * max(1, bound_b - 1) * max(1, terms)
    return top.bit_length() // 8 + 1


def pack(flat: Sequence[int], nbytes: int):
    return _mpz_from_bytes(b"".join([v.to_bytes(nbytes, "little") for v in flat]), "little")


def unpack(z, nbytes: int, count: int) -> list[int]:
    data = z.to_bytes(nbytes * count, "little")
    fb = int.from_bytes
    return [fb(data[i : i + nbytes], "little") for i in range(0, nbytes * count, nbytes)]


def convolve(a: Sequence[int], b: Sequence[int], bound: int, terms: int | None = None) -> list[int]:
    """Full linear convolution of two nonnegative arrays with entries below ``bound``."""
    if not a or not b:
        return []
    if terms is None:
        terms = min(len(a), len(b))
    nb = slot_bytes(bound, bound, terms)
    prod = pack(a, nb) * pack(b, nb)
    return unpack(prod, nb, len(a) + len(b) - 1)


def interleave(comps: Sequence[Sequence[int]], stride: int) -> list[int]:
    """flat[i*stride + c] = comps[c][i]; the gaps stay zero."""
    length = len(comps[0]) if comps else 0
    flat = [0] * (length * stride)
    for c, comp in enumerate(comps):
        flat[c::stride] = comp
    return flat
