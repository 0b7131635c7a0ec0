"""Receiver-side acknowledgment taxonomy.

Cumulative ACKs advance on in-order data; pseudo-ACKs acknowledge innovative
out-of-order or coded arrivals (they move the coding window without implying
in-order delivery); anything non-innovative triggers a duplicate ACK.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Set


class AckKind(Enum):
    ACK = "ack"                     # cumulative
    PSEUDO_ACK = "pseudo_ack"
    DUP_ACK = "dup_ack"
    PATH_ACK = "path_ack"


@dataclass
class AckEvent:
    kind: AckKind
    next_expected: int
    innovative_count: int = 0


@dataclass
class ReceiverState:
    next_expected: int = 0
    received: Set[int] = field(default_factory=set)
    innovative: int = 0             # coded/out-of-order degrees of freedom in hand

    def _advance(self) -> None:
        while self.next_expected in self.received:
            self.received.discard(self.next_expected)
            self.next_expected += 1


@dataclass
class ArrivingPacket:
    frame: Optional[int] = None     # data frame number; None for coded
    coded: bool = False
    innovative: bool = True         # linearly independent of what is held


def dest_ack_logic(state: ReceiverState, pkt: ArrivingPacket) -> AckEvent:
    if not pkt.coded:
        if pkt.frame == state.next_expected:
            state.received.add(pkt.frame)
            state._advance()
            # in-hand coded packets may now complete the run
            return AckEvent(AckKind.ACK, state.next_expected)
        if pkt.frame is None or pkt.frame < state.next_expected or pkt.frame in state.received:
            return AckEvent(AckKind.DUP_ACK, state.next_expected)
        state.received.add(pkt.frame)
        state.innovative += 1
        return AckEvent(AckKind.PSEUDO_ACK, state.next_expected, state.innovative)
    if pkt.innovative:
        state.innovative += 1
        return AckEvent(AckKind.PSEUDO_ACK, state.next_expected, state.innovative)
    return AckEvent(AckKind.DUP_ACK, state.next_expected)


def decode_complete(state: ReceiverState, block_end: int) -> AckEvent:
    """When the held degrees of freedom cover the gap, the whole block is
    decoded and cumulatively acknowledged."""
    state.received.update(range(state.next_expected, block_end))
    state.innovative = 0
    state._advance()
    return AckEvent(AckKind.ACK, state.next_expected)
