"""Per-destination packet queues with FIFO order and creation timestamps."""

from collections import deque
from typing import Dict, Tuple


class QueueError(ValueError):
    pass


class PerDestQueues:
    """Map (node, commodity) -> FIFO of packets.

    A packet is whatever tuple the engine pushes; by convention element 0 is
    the creation slot so delivery delay can be measured at dequeue time.
    """

    def __init__(self):
        self._q: Dict[Tuple[str, str], deque] = {}
        self.created = 0
        self.delivered = 0

    def _fifo(self, node: str, commodity: str) -> deque:
        key = (node, commodity)
        fifo = self._q.get(key)
        if fifo is None:
            fifo = deque()
            self._q[key] = fifo
        return fifo

    def length(self, node: str, commodity: str) -> int:
        if node == commodity:
            return 0
        fifo = self._q.get((node, commodity))
        return len(fifo) if fifo else 0

    def lengths_at(self, node: str) -> Dict[str, int]:
        return {c: len(f) for (n, c), f in self._q.items() if n == node and f and n != c}

    def commodities(self) -> set:
        return {c for (_, c) in self._q}

    def push(self, node: str, commodity: str, packet) -> None:
        if node == commodity:
            raise QueueError("cannot enqueue at the packet's own destination %s" % node)
        self._fifo(node, commodity).append(packet)

    def pop(self, node: str, commodity: str, count: int):
        fifo = self._q.get((node, commodity))
        avail = len(fifo) if fifo else 0
        if count > avail:
            raise QueueError("dequeue %d > %d available at (%s,%s)"
                             % (count, avail, node, commodity))
        return [fifo.popleft() for _ in range(count)]

    def total(self) -> int:
        return sum(len(f) for f in self._q.values())

    def nonzero(self):
        """Iterate ((node, commodity), length) over non-empty queues."""
        for key, fifo in self._q.items():
            if fifo:
                yield key, len(fifo)
