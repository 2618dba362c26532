"""Stable derivation of per-call random generators from one master seed."""
from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(master: int, operation: str, *parts) -> int:
    h = hashlib.sha256()
    h.update(str(int(master)).encode())
    h.update(b"\x00" + operation.encode())
    for part in parts:
        h.update(b"\x00" + str(part).encode())
    return int.from_bytes(h.digest()[:8], "little")


def rng_for(master: int, operation: str, *parts) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, operation, *parts))
