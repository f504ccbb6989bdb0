"""Seeded hash oracles standing in for read-only random functions.

A :class:`HashOracle` maps integers into ``[1, n]``.  In ``prf`` mode the
value is a keyed 64-bit mix of ``(seed, v)`` reduced to ``[1, n]`` by
rejection, so the output is exactly uniform whenever the mixed word is.
In ``modular`` mode it is ``((v + shift) mod n) + 1`` with ``shift = 0``
by default, the seedless hash used for random k-Sum.

The arithmetic here is pure Python and mirrors the compiled twins in
:mod:`spacesum._kernels` bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SALT = 0xD1B54A32D192ED03

MODES = ("prf", "modular")


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def normalize_seed(seed: int | str) -> int:
    """Fold an arbitrary-width seed (int, decimal or hex string) to 64 bits."""
    if isinstance(seed, str):
        seed = int(seed, 0)
    if seed < 0:
        raise ValueError("seed must be non-negative")
    folded = 0
    while True:
        folded = mix64(folded ^ (seed & MASK64)) if folded else seed & MASK64
        seed >>= 64
        if not seed:
            return folded


def encode_value(v: int) -> int:
    """Fixed-width two's-complement encoding of a signed 64-bit value."""
    v = int(v)
    if not -(1 << 63) <= v < (1 << 63):
        raise OverflowError(f"value {v} does not fit in 64 bits")
    return v & MASK64


def prf_word(seed: int, v: int, ctr: int) -> int:
    x = mix64(encode_value(v) ^ seed)
    return mix64(x + (ctr + 1) * _GOLDEN)


def reduce_word(word: int, n: int) -> int | None:
    """Map a uniform word to ``[1, n]`` or reject it.

    Only the low ``ceil(log2 n)`` bits are used; values at or above ``n``
    are rejected, so every accepted output has the same number of
    preimages.
    """
    bits = max(n - 1, 0).bit_length()
    low = word & ((1 << bits) - 1)
    return low + 1 if low < n else None


def derive_subseed(seed: int, label: int) -> int:
    """Deterministic per-label subseed, e.g. one per restart."""
    return mix64(mix64(seed ^ _SALT) + label * _GOLDEN)


@dataclass(frozen=True)
class HashOracle:
    seed: int
    n: int
    mode: str = "prf"
    domain_size: int | None = None
    shift: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("range n must be positive")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "seed", normalize_seed(self.seed))
        object.__setattr__(self, "shift", self.shift % self.n)

    def eval(self, v: int) -> int:
        v = int(v)
        if self.mode == "modular":
            return (v + self.shift) % self.n + 1
        ctr = 0
        while True:
            out = reduce_word(prf_word(self.seed, v, ctr), self.n)
            if out is not None:
                return out
            ctr += 1

    __call__ = eval

    def eval_many(self, values) -> np.ndarray:
        """Compiled evaluation over an int64 array; agrees with :meth:`eval`."""
        arr = np.ascontiguousarray(values, dtype=np.int64)
        return _kernels.hash_many(self.mode_code, _kernels.U64(self.seed), self.shift, self.n, arr)

    def rekeyed(self, label: int) -> "HashOracle":
        """Independent-looking oracle for restart ``label``; label 0 is ``self``."""
        if label == 0:
            return self
        sub = derive_subseed(self.seed, label)
        return replace(self, seed=sub, shift=sub % self.n)

    @property
    def mode_code(self) -> int:
        return _kernels.HASH_MODULAR if self.mode == "modular" else _kernels.HASH_PRF


def eval(oracle: HashOracle, v: int) -> int:  # noqa: A001 - mirrors the operation name
    return oracle.eval(v)
