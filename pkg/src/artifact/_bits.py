"""Bit-string helpers.

All wire payloads in this package are plain Python strings over {'0', '1'},
most-significant bit first. Integers that ride along (node ids, degrees,
counters) are framed at fixed widths so receivers can slice deterministically.
"""

from __future__ import annotations


def is_bits(s: object) -> bool:
    """True iff *s* is a str containing only '0'/'1' (empty string allowed)."""
    return isinstance(s, str) and not s.strip("01")


def encode_int(value: int, width: int) -> str:
    """Fixed-width big-endian encoding of a non-negative integer."""
    if value < 0:
        raise ValueError(f"cannot encode negative value {value}")
    if width < 0 or (width == 0 and value != 0):
        raise ValueError(f"value {value} does not fit in width {width}")
    if value >= (1 << width) and width > 0:
        raise ValueError(f"value {value} does not fit in width {width}")
    return format(value, f"0{width}b") if width else ""


def decode_int(bits: str) -> int:
    if bits == "":
        return 0
    return int(bits, 2)


def count_width(n: int) -> int:
    """Width for counter values in [0, n-1] (degrees, incidence counts)."""
    return max(1, (n - 1).bit_length())


def id_width(big_n: int) -> int:
    """Wire width for node ids drawn from [1, big_n] (encoded as id-1)."""
    if big_n < 1:
        raise ValueError("id space must contain at least one id")
    return max(1, (big_n - 1).bit_length())


def encode_id(node_id: int, big_n: int) -> str:
    if not 1 <= node_id <= big_n:
        raise ValueError(f"id {node_id} outside [1, {big_n}]")
    return encode_int(node_id - 1, id_width(big_n))


def decode_id(bits: str, big_n: int) -> int:
    value = decode_int(bits) + 1
    if not 1 <= value <= big_n:
        raise ValueError(f"decoded id {value} outside [1, {big_n}]")
    return value


def bytes_to_bits(data: bytes) -> str:
    return "".join(format(b, "08b") for b in data)


def bits_to_bytes(bits: str) -> bytes:
    if len(bits) % 8:
        raise ValueError("bit string length must be a multiple of 8")
    return bytes(int(bits[i : i + 8], 2) for i in range(0, len(bits), 8))


def bit_at(bits: str, index: int) -> bool:
    """1-indexed bit lookup: bit_at(x, j) is the j-th bit of x, MSB first."""
    if not 1 <= index <= len(bits):
        raise IndexError(f"index {index} outside [1, {len(bits)}]")
    return bits[index - 1] == "1"
