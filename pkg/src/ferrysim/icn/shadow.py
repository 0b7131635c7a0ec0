"""Shadow (red) packets: dummy traffic that keeps steady-state back-pressure
queues primed while real (blue) packets ride through with strict priority."""

from collections import deque
from dataclasses import dataclass, field


@dataclass
class ShadowQueuePair:
    """Blue carries payload tuples (for delay measurement); red is a count of
    dummies.  Back-pressure weights must use blue + red."""

    blue: deque = field(default_factory=deque)
    red: int = 0

    def __len__(self) -> int:
        return len(self.blue) + self.red

    def push_blue(self, packet) -> None:
        self.blue.append(packet)

    def push_red(self, count: int = 1) -> None:
        self.red += count


def shadow_serve(pair: ShadowQueuePair, budget: int):
    """Serve up to `budget` packets, blue strictly first; red only fills the
    leftover.  Returns (blue_packets, red_count)."""
    if budget < 0:
        raise ValueError("budget must be >= 0")
    n_blue = min(budget, len(pair.blue))
    blues = [pair.blue.popleft() for _ in range(n_blue)]
    n_red = min(budget - n_blue, pair.red)
    pair.red -= n_red
    return blues, n_red
