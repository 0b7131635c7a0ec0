"""Utility-based source rate control: inject kappa packets while the marginal
utility beats the back-pressure signal (U'(x) = K_f/x against beta * q)."""

from dataclasses import dataclass


@dataclass
class UtilityFlow:
    source: str
    destination: str
    K: float                 # utility scale, U(x) = K log x
    kappa: int = 3           # packets injected per positive decision
    beta: float = 1.0        # congestion price on the local queue
    x: float = 0.0           # running rate estimate (pkts per rate unit)

    def __post_init__(self):
        if self.K <= 0 or self.kappa < 1 or self.beta <= 0:
            raise ValueError("need K>0, kappa>=1, beta>0")
        if self.x <= 0:
            # bootstrap so U'(x) is finite on the very first decision
            self.x = float(self.kappa)


def rate_control_step(flow: UtilityFlow, qlen: float) -> int:
    """kappa if K/x - beta*q > 0 else 0."""
    if flow.x <= 0:
        raise ValueError("rate estimate must be positive (bootstrap sets it)")
    return flow.kappa if flow.K / flow.x - flow.beta * qlen > 0 else 0


def rate_estimate_update(x: float, admitted: int, interval: float, unit: float = 1.0) -> float:
    """IIR rate tracker: x' = 0.999 x + 0.001 * admitted/interval.

    `unit` rescales the instantaneous sample (e.g. 100 to express the rate in
    packets per 100 slots while deciding every slot).
    """
    if interval <= 0:
        raise ValueError("decision interval must be positive")
    return 0.999 * x + 0.001 * (admitted / interval) * unit
