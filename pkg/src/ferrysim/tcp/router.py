"""Per-connection wireless router queues: FIFO for data (high priority),
LIFO for coded (low priority), coded packets sent only on leftover capacity."""

from collections import deque
from dataclasses import dataclass, field
from typing import List, Tuple


@dataclass
class RouterQueues:
    capacity: int                       # C packets per RTT slot
    carryover: bool = False             # analytical model forgets between slots
    buffer: int = 0                     # packets kept per queue when carrying over
    high: deque = field(default_factory=deque)
    low: List = field(default_factory=list)

    def __post_init__(self):
        if self.capacity < 0:
            raise ValueError("capacity must be >= 0")
        if self.carryover and self.buffer <= 0:
            self.buffer = self.capacity


def router_serve(queues: RouterQueues, incoming_high: List, incoming_low: List
                 ) -> Tuple[List, List]:
    """One RTT slot: serve high FIFO first, fill the remainder with low LIFO
    (newest first).  Returns the transmitted (high, low) packet lists."""
    queues.high.extend(incoming_high)
    queues.low.extend(incoming_low)
    c = queues.capacity
    sent_high = [queues.high.popleft() for _ in range(min(c, len(queues.high)))]
    room = c - len(sent_high)
    sent_low = [queues.low.pop() for _ in range(min(room, len(queues.low)))]
    if queues.carryover:
        while len(queues.high) > queues.buffer:
            queues.high.popleft()
        if len(queues.low) > queues.buffer:
            del queues.low[:-queues.buffer]     # tail-drop the stale bottom
    else:
        queues.high.clear()
        queues.low.clear()
    return sent_high, sent_low
