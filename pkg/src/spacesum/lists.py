"""Read-only integer lists, merge selectors and pseudo-solution counts.

Every list, explicit or implicit, shares one compact representation that
the compiled kernels understand::

    value(i) = offset + sign * sum_c tables[c, digit_c(i - 1)]

where ``digit_c`` is the c-th digit of ``i - 1`` in the mixed radix
``radices``.  An explicit list is a single component whose table is the
list itself.  A half of a Subset Sum instance is one radix-2 component per
item, and a k-Sum half is one radix-n component per input list.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

INT64_LIMIT = 1 << 63


class IntegerList:
    """A 1-indexed, immutable list of signed integers."""

    __slots__ = ("tables", "radices", "sign", "offset", "length", "_components")

    def __init__(self, components: Sequence[Sequence[int]], sign: int = 1, offset: int = 0):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        comps = [tuple(int(v) for v in c) for c in components]
        if any(len(c) == 0 for c in comps):
            raise ValueError("empty component")
        bound = abs(offset) + sum(max(abs(v) for v in c) for c in comps)
        if bound >= INT64_LIMIT:
            raise OverflowError("list values do not fit in 64-bit words")
        width = max((len(c) for c in comps), default=1)
        tables = np.zeros((max(len(comps), 1), width), dtype=np.int64)
        for row, c in enumerate(comps):
            tables[row, : len(c)] = c
        self.tables = tables
        self.radices = np.array([len(c) for c in comps], dtype=np.int64)
        self.sign = int(sign)
        self.offset = int(offset)
        self.length = prod(len(c) for c in comps)
        self._components = comps

    @classmethod
    def explicit(cls, values: Iterable[int]) -> "IntegerList":
        values = list(values)
        if not values:
            raise ValueError("a list needs at least one entry")
        return cls([values])

    @property
    def is_explicit(self) -> bool:
        return len(self._components) == 1

    @property
    def access_cost(self) -> int:
        """Number of table lookups one access performs."""
        return max(len(self._components), 1)

    def __len__(self) -> int:
        return self.length

    def digits(self, i: int) -> list[int]:
        """Mixed-radix digits of ``i - 1``, least significant first."""
        self._check(i)
        r = i - 1
        out = []
        for c in self._components:
            out.append(r % len(c))
            r //= len(c)
        return out

    def __getitem__(self, i: int) -> int:
        acc = sum(c[d] for c, d in zip(self._components, self.digits(i)))
        return self.offset + self.sign * acc

    def __iter__(self):
        return (self[i] for i in range(1, self.length + 1))

    def to_list(self) -> list[int]:
        return list(self)

    def _check(self, i: int) -> None:
        if not 1 <= i <= self.length:
            raise IndexError(f"index {i} outside [1, {self.length}]")

    def kernel_args(self):
        return self.tables, self.radices, self.sign, self.offset

    def __repr__(self) -> str:
        kind = "explicit" if self.is_explicit else "implicit"
        return f"IntegerList({kind}, length={self.length})"


def implicit_subset_sum_list(
    w: Sequence[int], side_indices: Sequence[int], sign: int = 1, offset: int = 0
) -> IntegerList:
    """List of ``offset + sign * sum(w[e] for e in X)`` over subsets X of a side.

    ``side_indices`` are 1-based item indices.  Entry ``i`` corresponds to
    the subset given by the bits of ``i - 1``: bit b selects
    ``side_indices[b]``.
    """
    side = list(side_indices)
    if len(side) > 62:
        raise ValueError("side too large for a word-sized index")
    return IntegerList([(0, w[e - 1]) for e in side], sign=sign, offset=offset)


def decode_subset(side_indices: Sequence[int], i: int) -> list[int]:
    r = i - 1
    return [e for b, e in enumerate(side_indices) if (r >> b) & 1]


def mixed_radix_sum_list(lists: Sequence[Sequence[int]], sign: int = 1, offset: int = 0) -> IntegerList:
    """List of ``offset + sign * sum_c lists[c][s_c]`` over all index tuples."""
    return IntegerList(lists, sign=sign, offset=offset)


def selector_width(n: int) -> int:
    """Bits in ``r_a``: ceil(log2(n + 1))."""
    return max(n.bit_length(), 1)


@dataclass(frozen=True)
class MergeSelector:
    r_a: int
    r_b: int
    width: int

    def __post_init__(self):
        if self.r_b not in (0, 1):
            raise ValueError("r_b is a single bit")
        if not 0 <= self.r_a < (1 << self.width):
            raise ValueError("r_a wider than the selector")

    @classmethod
    def for_length(cls, n: int, r_a: int, r_b: int) -> "MergeSelector":
        return cls(r_a, r_b, selector_width(n))

    def takes_x(self, i: int) -> bool:
        return bin(self.r_a & i).count("1") % 2 == self.r_b


def merged_value(x: IntegerList, y: IntegerList, r: MergeSelector, i: int) -> int:
    if len(x) != len(y):
        raise ValueError("lists differ in length")
    return x[i] if r.takes_x(i) else y[i]


def pseudo_solution_count(z: IntegerList | Sequence[int]) -> int:
    """Number of ordered index pairs with equal values, i.e. sum of squared frequencies."""
    if isinstance(z, IntegerList):
        if not z.is_explicit and len(z) > 1 << 20:
            raise ValueError("implicit list too long to count")
        values = np.fromiter(z, dtype=np.int64, count=len(z)) if not z.is_explicit else z.tables[0]
    else:
        values = np.asarray(list(z), dtype=np.int64)
    if values.size == 0:
        return 0
    _, counts = np.unique(values, return_counts=True)
    return int(np.dot(counts, counts))


def pseudo_solution_pair(x: IntegerList, y: IntegerList) -> int:
    return pseudo_solution_count(x) + pseudo_solution_count(y)


def frequency_square_sum(values: Iterable[int]) -> int:
    """Dictionary-based twin of :func:`pseudo_solution_count` for streams."""
    return sum(c * c for c in Counter(values).values())

