"""Seeded random streams.

Every random draw in the package goes through a generator returned by
:func:`derive_rng_stream`. A stream is a pure function of
``(master_seed, label, index)``, so results never depend on how work is
scheduled across threads or processes.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_rng_stream", "stream_key"]


def stream_key(master_seed: int, label: str, index: int) -> int:
    """128-bit key for a stream, from a SHA-256 digest of its identity."""
    payload = f"{int(master_seed) & 0xFFFFFFFFFFFFFFFF}\x1f{label}\x1f{int(index)}".encode()
    return int.from_bytes(hashlib.sha256(payload).digest()[:16], "little")


def derive_rng_stream(master_seed: int, label: str, index: int = 0) -> np.random.Generator:
    """Return an independent Philox generator keyed by ``(master_seed, label, index)``.

    Parameters
    ----------
    master_seed : int
        Run-level seed (taken modulo 2**64).
    label : str
        Purpose of the stream, e.g. ``"net"`` or ``"weather"``.
    index : int
        Replicate or chunk index.

    Returns
    -------
    numpy.random.Generator
    """
    seq = np.random.SeedSequence(stream_key(master_seed, label, index))
    return np.random.Generator(np.random.Philox(seq))
