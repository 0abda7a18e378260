"""Classical two-sender Gaussian multiple-access channel."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class ClassicalMacSpec:
    p1: float
    p2: float
    noise: float

    def __post_init__(self):
        if self.p1 < 0 or self.p2 < 0:
            raise ValueError("powers must be nonnegative")
        if self.noise <= 0:
            raise ValueError("noise variance must be positive")


class RateRegion(NamedTuple):
    r1_max: float
    r2_max: float
    rsum_max: float

    def admits(self, r1: float, r2: float) -> bool:
        return r1 <= self.r1_max and r2 <= self.r2_max and r1 + r2 <= self.rsum_max


def shannon_c(x: float) -> float:
    """Gaussian channel capacity ``1/2 log2(1 + x)`` at signal-to-noise ratio ``x``."""
    if x < 0:
        raise ValueError("SNR must be nonnegative")
    return 0.5 * math.log2(1.0 + x)


def classical_region(spec: ClassicalMacSpec) -> RateRegion:
    return RateRegion(
        shannon_c(spec.p1 / spec.noise),
        shannon_c(spec.p2 / spec.noise),
        shannon_c((spec.p1 + spec.p2) / spec.noise),
    )


def local_rate_rule_holds(spec: ClassicalMacSpec, spec_augmented: ClassicalMacSpec) -> bool:
    """Check that raising sender 2's power leaves sender 1's maximal rate unchanged.

    The two specs may differ only in ``p2``.
    """
    if spec.p1 != spec_augmented.p1 or spec.noise != spec_augmented.noise:
        raise ValueError("specs may differ only in p2")
    return classical_region(spec).r1_max == classical_region(spec_augmented).r1_max
