"""Deterministic RNG substream derivation.

Every random quantity in a run is drawn from a substream derived from the
64-bit master seed, a domain tag, and an index. Derivation is a SHA-256
hash of ``tag || 0x00 || index_le8 || master_le8``; the 256-bit digest
seeds numpy's PCG64 via SeedSequence. Substreams are therefore
collision-resistant, independent of evaluation order, and reproducible
from the run manifest alone. (Bit-equality of Gaussian draws across other
language runtimes is a non-goal; the derivation scheme itself is portable.)
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def substream_key(master_seed: int, tag: str, index: int = 0) -> int:
    """256-bit integer key for the (seed, tag, index) substream."""
    payload = (
        tag.encode("utf-8")
        + b"\x00"
        + int(index).to_bytes(8, "little", signed=False)
        + (int(master_seed) & _MASK64).to_bytes(8, "little", signed=False)
    )
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest, "little")


def seed_substream(master_seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Independent generator for one (tag, index) domain of a run."""
    key = substream_key(master_seed, tag, index)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def complex_gaussian(rng: np.random.Generator, shape, var: float) -> np.ndarray:
    """Circularly symmetric complex Gaussian array, entry variance ``var``.

    Real and imaginary parts are drawn as two consecutive blocks so the
    draw order, and hence reproducibility, does not depend on shape.
    """
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
