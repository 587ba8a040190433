"""Ground-set, subset, and set-interval-lattice primitives.

Elements carry 1-based ids 1..n everywhere in the public API and in text
formats; bit k-1 of the internal mask represents element k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import CapacityMismatch, CapExceeded

DEFAULT_ENUMERATION_CAP = 25


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the 1-based element ids set in ``mask``, ascending."""
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length()
        mask ^= lsb


@dataclass(frozen=True, slots=True)
class GroundSet:
    """The ground set {1, ..., n}."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"ground set needs n >= 1, got {self.n}")

    def elements(self) -> range:
        return range(1, self.n + 1)

    def empty(self) -> "SubsetBits":
        return SubsetBits(self.n, 0)

    def full(self) -> "SubsetBits":
        return SubsetBits(self.n, (1 << self.n) - 1)


@dataclass(frozen=True, slots=True)
class SubsetBits:
    """An immutable subset of {1..capacity} stored as a bit mask."""

    capacity: int
    mask: int = 0

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")
        if not 0 <= self.mask < (1 << self.capacity):
            raise ValueError("mask has bits outside capacity")

    @classmethod
    def empty(cls, capacity: int) -> "SubsetBits":
        return cls(capacity, 0)

    @classmethod
    def full(cls, capacity: int) -> "SubsetBits":
        return cls(capacity, (1 << capacity) - 1)

    @classmethod
    def from_members(cls, capacity: int, members: Iterable[int]) -> "SubsetBits":
        mask = 0
        for i in members:
            _check_element(capacity, i)
            mask |= 1 << (i - 1)
        return cls(capacity, mask)

    # -- element ops ------------------------------------------------------

    def add(self, i: int) -> "SubsetBits":
        _check_element(self.capacity, i)
        return SubsetBits(self.capacity, self.mask | (1 << (i - 1)))

    def remove(self, i: int) -> "SubsetBits":
        _check_element(self.capacity, i)
        return SubsetBits(self.capacity, self.mask & ~(1 << (i - 1)))

    def contains(self, i: int) -> bool:
        _check_element(self.capacity, i)
        return bool((self.mask >> (i - 1)) & 1)

    def __contains__(self, i: int) -> bool:
        return self.contains(i)

    # -- set ops ----------------------------------------------------------

    def union(self, other: "SubsetBits") -> "SubsetBits":
        _check_same_capacity(self, other)
        return SubsetBits(self.capacity, self.mask | other.mask)

    def intersection(self, other: "SubsetBits") -> "SubsetBits":
        _check_same_capacity(self, other)
        return SubsetBits(self.capacity, self.mask & other.mask)

    def difference(self, other: "SubsetBits") -> "SubsetBits":
        _check_same_capacity(self, other)
        return SubsetBits(self.capacity, self.mask & ~other.mask)

    def is_subset(self, other: "SubsetBits") -> bool:
        _check_same_capacity(self, other)
        return (self.mask & ~other.mask) == 0

    def complement(self) -> "SubsetBits":
        return SubsetBits(self.capacity, ~self.mask & ((1 << self.capacity) - 1))

    def cardinality(self) -> int:
        return self.mask.bit_count()

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def members(self) -> list[int]:
        return list(iter_bits(self.mask))

    def to_bool_array(self) -> np.ndarray:
        """Membership indicator as a numpy bool array of length capacity."""
        nbytes = (self.capacity + 7) // 8
        raw = np.frombuffer(self.mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.capacity].astype(bool)

    @classmethod
    def from_bool_array(cls, arr: np.ndarray) -> "SubsetBits":
        packed = np.packbits(np.asarray(arr, dtype=bool), bitorder="little")
        return cls(len(arr), int.from_bytes(packed.tobytes(), "little"))

    def __str__(self) -> str:
        return format_set(self)

    def __repr__(self) -> str:
        return f"SubsetBits({self.capacity}, {format_set(self)})"


def union(x: SubsetBits, y: SubsetBits) -> SubsetBits:
    return x.union(y)


def intersection(x: SubsetBits, y: SubsetBits) -> SubsetBits:
    return x.intersection(y)


def difference(x: SubsetBits, y: SubsetBits) -> SubsetBits:
    return x.difference(y)


def is_subset(x: SubsetBits, y: SubsetBits) -> bool:
    return x.is_subset(y)


def cardinality(x: SubsetBits) -> int:
    return x.cardinality()


def format_set(x: SubsetBits) -> str:
    """Render as the text literal used by the CLI and reports: ``{1,3,7}``."""
    return "{" + ",".join(str(i) for i in x) + "}"


def parse_set(text: str, capacity: int) -> SubsetBits:
    """Parse a set literal such as ``{1,3,7}`` or ``{}``."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"not a set literal: {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return SubsetBits.empty(capacity)
    try:
        ids = [int(tok) for tok in inner.split(",")]
    except ValueError as exc:
        raise ValueError(f"bad set literal {text!r}") from exc
    return SubsetBits.from_members(capacity, ids)


@dataclass(frozen=True, slots=True)
class IntervalLattice:
    """The interval [lower, upper] = all sets U with lower <= U <= upper."""

    lower: SubsetBits
    upper: SubsetBits

    def __post_init__(self) -> None:
        _check_same_capacity(self.lower, self.upper)

    @property
    def capacity(self) -> int:
        return self.lower.capacity

    def is_empty(self) -> bool:
        return not self.lower.is_subset(self.upper)

    def is_point(self) -> bool:
        return self.lower == self.upper

    def contains(self, x: SubsetBits) -> bool:
        _check_same_capacity(self.lower, x)
        return self.lower.is_subset(x) and x.is_subset(self.upper)

    def free_mask(self) -> int:
        return self.upper.mask & ~self.lower.mask

    def free_elements(self) -> list[int]:
        return list(iter_bits(self.free_mask()))

    def __repr__(self) -> str:
        return f"IntervalLattice({format_set(self.lower)}, {format_set(self.upper)})"


def lattice_contains(lattice: IntervalLattice, x: SubsetBits) -> bool:
    return lattice.contains(x)


def lattice_free_count(lattice: IntervalLattice) -> int:
    """Number of elements left undecided by the lattice; its size is 2**count."""
    if lattice.is_empty():
        raise ValueError("empty lattice has no free count")
    return lattice.free_mask().bit_count()


def enumerate_lattice(
    lattice: IntervalLattice, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[SubsetBits]:
    """Yield every member of the lattice exactly once, 2**free_count in total.

    Raises CapExceeded when more than 2**cap members would be produced.
    """
    free = lattice_free_count(lattice)
    if free > cap:
        raise CapExceeded(f"lattice has {free} free elements, cap is {cap}")
    positions = [i - 1 for i in lattice.free_elements()]
    base = lattice.lower.mask
    n = lattice.capacity
    for combo in range(1 << free):
        mask = base
        for j, pos in enumerate(positions):
            if (combo >> j) & 1:
                mask |= 1 << pos
        yield SubsetBits(n, mask)


def _check_element(capacity: int, i: int) -> None:
    if not 1 <= i <= capacity:
        raise ValueError(f"element id {i} out of range 1..{capacity}")


def _check_same_capacity(x: SubsetBits, y: SubsetBits) -> None:
    if x.capacity != y.capacity:
        raise CapacityMismatch(f"capacities differ: {x.capacity} vs {y.capacity}")
