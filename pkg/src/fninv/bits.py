"""Bit-string helpers for advice strings and protocol payloads.

Bit strings are plain ``str`` objects over ``{'0', '1'}``, most significant
bit first, so lengths are exact and concatenation is free.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def word_bits(n: int) -> int:
    """ceil(log2 n): bits needed for one label in [n]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n - 1).bit_length()


def int_to_bits(value: int, width: int) -> str:
    if value < 0 or (width < value.bit_length()):
        raise ValueError(f"{value} does not fit in {width} bits")
    return format(value, "b").zfill(width) if width else ""


def bits_to_int(bits: str) -> int:
    return int(bits, 2) if bits else 0


def pack_words(values: Iterable[int], width: int) -> str:
    return "".join(int_to_bits(v, width) for v in values)


def unpack_words(bits: str, width: int) -> list[int]:
    if width == 0:
        return []
    if len(bits) % width:
        raise ValueError("bit string length is not a multiple of the word width")
    return [int(bits[k : k + width], 2) for k in range(0, len(bits), width)]


def add_words(a: str, b: str, width: int, modulus: int) -> str:
    """Componentwise sum of packed words in Z_modulus."""
    if len(a) != len(b):
        raise ValueError("advice strings differ in length")
    xs, ys = unpack_words(a, width), unpack_words(b, width)
    return pack_words(((u + v) % modulus for u, v in zip(xs, ys)), width)


def bits_to_hex(bits: str) -> str:
    """Hex digits for ``bits`` (left-padded to a multiple of 4 bits)."""
    if not bits:
        return ""
    pad = (-len(bits)) % 4
    width = (len(bits) + pad) // 4
    return format(int(bits, 2), "x").zfill(width)


def hex_to_bits(hexstr: str, nbits: int) -> str:
    if nbits == 0:
        return ""
    value = int(hexstr, 16)
    if value.bit_length() > nbits:
        raise ValueError("hex payload exceeds declared bit count")
    return int_to_bits(value, nbits)


def concat(parts: Sequence[str]) -> str:
    return "".join(parts)
