"""Random linear coding over the 8191-element prime field, plus the
large-field shortcut: with G innovative coded packets in hand, up to G
missing data packets are recoverable."""

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

FIELD = 8191


def decode_check_abstract(block_size: int, received_data: int, coded_count: int) -> bool:
    """Large-field rule: recoverable iff missing <= coded received."""
    if received_data < 0 or received_data > block_size or coded_count < 0:
        raise ValueError("inconsistent packet counts")
    return block_size - received_data <= coded_count


def _rank_mod_p(rows: List[List[int]], p: int = FIELD) -> int:
    """Row rank over F_p by Gaussian elimination (schoolbook, desk scale)."""
    if not rows:
        return 0
    M = np.array(rows, dtype=np.int64) % p
    n_rows, n_cols = M.shape
    rank, col = 0, 0
    while rank < n_rows and col < n_cols:
        pivot = None
        for r in range(rank, n_rows):
            if M[r, col] % p:
                pivot = r
                break
        if pivot is None:
            col += 1
            continue
        M[[rank, pivot]] = M[[pivot, rank]]
        inv = pow(int(M[rank, col]), p - 2, p)
        M[rank] = (M[rank] * inv) % p
        for r in range(n_rows):
            if r != rank and M[r, col]:
                M[r] = (M[r] - M[r, col] * M[rank]) % p
        rank += 1
        col += 1
    return rank


@dataclass
class CodingBlock:
    """One congestion window's worth of data packets encoded together."""
    number: int
    size: int                      # W data packets, indexed 0..W-1

    def random_coded_vector(self, rng: np.random.Generator) -> List[int]:
        return [int(c) for c in rng.integers(0, FIELD, size=self.size)]


def decode_check(block: CodingBlock, received_data: Sequence[int],
                 coded: object, mode: str = "abstract") -> bool:
    """Can every data packet of the block be reconstructed?

    abstract mode: `coded` is the number of coded packets received.
    concrete mode: `coded` is the list of coefficient vectors; the test is
    whether received unit rows plus coded rows span all coordinates.
    """
    got = set(received_data)
    if any(i < 0 or i >= block.size for i in got):
        raise ValueError("data index outside the block")
    if mode == "abstract":
        return decode_check_abstract(block.size, len(got), int(coded))
    if mode != "concrete":
        raise ValueError("mode must be abstract or concrete")
    missing = [i for i in range(block.size) if i not in got]
    if not missing:
        return True
    # project coded rows onto the missing coordinates: received data packets
    # cancel the known columns exactly
    rows = [[vec[i] for i in missing] for vec in coded]
    return _rank_mod_p(rows) >= len(missing)


def encode_block(block: CodingBlock, count: int, rng: np.random.Generator) -> List[List[int]]:
    return [block.random_coded_vector(rng) for _ in range(count)]
