"""Two-scale slotted clock: fast slots t and super slots tau = floor(t/T)."""

from dataclasses import dataclass


@dataclass
class SlotClock:
    """Slot counter with a super-slot period T (slots per mobility epoch)."""

    T: int
    t: int = 0

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("super-slot period T must be >= 1, got %r" % (self.T,))
        if self.t < 0:
            raise ValueError("slot index must be non-negative")

    @property
    def tau(self) -> int:
        return self.t // self.T

    def at_super_slot_boundary(self) -> bool:
        return self.t % self.T == 0

    def advance(self) -> "SlotClock":
        """Step the clock by exactly one slot (in place) and return it."""
        self.t += 1
        return self
