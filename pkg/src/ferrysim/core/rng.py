"""Counter-based random streams keyed by (master seed, stream id).

Every subsystem (a node, a mobile, a channel path, an arrival process) pulls
its randomness from its own named stream, so adding or removing metrics or
reordering unrelated draws never perturbs another subsystem's sequence.
Philox is counter-based and numpy guarantees its stream is stable across
platforms and releases for a fixed key.
"""

import hashlib

import numpy as np


def _stream_key(master_seed: int, stream_id: str) -> list:
    digest = hashlib.sha256(("%d/%s" % (master_seed, stream_id)).encode("utf-8")).digest()
    words = [int.from_bytes(digest[i:i + 8], "little") for i in range(0, 32, 8)]
    return [master_seed & 0xFFFFFFFFFFFFFFFF] + words


class SeededRng:
    """Factory for independent, reproducible per-stream generators."""

    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)
        self._cache = {}

    def stream(self, stream_id: str) -> np.random.Generator:
        gen = self._cache.get(stream_id)
        if gen is None:
            seq = np.random.SeedSequence(entropy=_stream_key(self.master_seed, stream_id))
            gen = np.random.Generator(np.random.Philox(seq))
            self._cache[stream_id] = gen
        return gen
