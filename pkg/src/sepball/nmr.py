"""Qubit-count thresholds for NMR pseudopure and thermal states.

Each bound compares a state-side quantity (pseudopure fraction ``eta m/2^m``
or thermal squared distance ``((1 + eta^2)^m - 1)/2^m``) against a
separability radius. Both sides are evaluated as natural logarithms so scans
reach ``m`` in the tens of thousands without underflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Callable

from scipy.constants import k as BOLTZMANN

from .errors import ScanCapExceeded

PROTON_MOMENT = 1.41060e-26  # J/T
REFERENCE_ETA = 3.746e-5
SCAN_CAP = 10 ** 6
LN2 = math.log(2.0)


def eta_from_physics(temperature: float, field: float, moment: float = PROTON_MOMENT) -> float:
    """Polarization ``mu B / (k_B T)``."""
    if not (temperature > 0 and field > 0 and moment > 0):
        raise ValueError("temperature, field and moment must all be positive")
    return moment * field / (BOLTZMANN * temperature)


@dataclass(frozen=True)
class NmrScenario:
    eta: float
    temperature: float | None = None
    field: float | None = None
    magnetic_moment: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta!r}")

    @classmethod
    def from_physics(cls, temperature: float, field: float, moment: float = PROTON_MOMENT) -> "NmrScenario":
        return cls(eta_from_physics(temperature, field, moment), temperature, field, moment)


def pseudopure_polarization(eta: float, m: int) -> float:
    """Pseudopure fraction ``eta m / 2^m``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return math.ldexp(eta * m, -m)


def _log_pow2_minus(m: float, c: float = 1.0) -> float:
    """``log(2^m - c)`` for ``2^m > c``."""
    return m * LN2 + math.log1p(-c * 2.0 ** (-m))


def _log_pow2_plus(m: float, c: float = 1.0) -> float:
    """``log(2^m + c)``."""
    return m * LN2 + math.log1p(c * 2.0 ** (-m))


class Bound(str, enum.Enum):
    THIS_PAPER = "ThisPaper"
    BRAUNSTEIN = "Braunstein"
    THERMAL_FULL = "ThermalFull"
    THERMAL_BIPARTITE = "ThermalBipartite"
    PSEUDOPURE_BIPARTITE = "PseudopureBipartite"
    PSEUDOPURE_UPPER = "PseudopureUpper"


def _log_pseudopure(eta: float, m: int) -> float:
    return math.log(eta * m) - m * LN2


def _log_thermal_sq(eta: float, m: int) -> float:
    return math.log(math.expm1(m * math.log1p(eta * eta))) - m * LN2


# bound name -> (log state-side quantity, log bound-side quantity); d = 2^m throughout
_SIDES: dict[Bound, tuple[Callable[[float, int], float], Callable[[int], float]]] = {
    # 2^{-(m/2-1)} / sqrt(d(d-1))
    Bound.THIS_PAPER: (_log_pseudopure, lambda m: -(m / 2 - 1) * LN2 - 0.5 * (m * LN2 + _log_pow2_minus(m))),
    # 1 / (1 + 2^{2m-1})
    Bound.BRAUNSTEIN: (_log_pseudopure, lambda m: -_log_pow2_plus(2 * m - 1)),
    # squared normalized radius (2^{-(m/2-1)} / d)^2
    Bound.THERMAL_FULL: (_log_thermal_sq, lambda m: -(3 * m - 2) * LN2),
    # 1 / (d(d-1))
    Bound.THERMAL_BIPARTITE: (_log_thermal_sq, lambda m: -(m * LN2 + _log_pow2_minus(m))),
    # 1 / (2^m - 1)
    Bound.PSEUDOPURE_BIPARTITE: (_log_pseudopure, lambda m: -_log_pow2_minus(m)),
    # 2 / (2 + 2^m)
    Bound.PSEUDOPURE_UPPER: (_log_pseudopure, lambda m: LN2 - _log_pow2_plus(m, 2.0)),
}


@dataclass(frozen=True)
class ThresholdReport:
    """First qubit count at which the state-side quantity strictly exceeds the bound.

    ``epsilon_at_threshold`` is the state-side quantity at that count; it
    underflows to ``0.0`` for very large counts, where ``log10_state`` still
    carries the value.
    """

    bound_name: str
    first_violating_m: int
    guaranteed_separable_through: int
    epsilon_at_threshold: float
    log10_state: float
    log10_bound: float

    def to_dict(self) -> dict:
        return asdict(self)


def sides(eta: float, bound: Bound | str, m: int) -> tuple[float, float]:
    """Natural logs of (state-side, bound-side) quantities at ``m`` qubits."""
    state, bnd = _SIDES[Bound(bound)]
    return state(eta, m), bnd(m)


def qubit_threshold(eta: float, bound: Bound | str, cap: int = SCAN_CAP) -> ThresholdReport:
    """Scan ``m = 2, 3, ...`` for the first strict violation of ``bound``.

    Raises
    ------
    ScanCapExceeded
        If no violation occurs for ``m <= cap``.
    """
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie in (0, 1), got {eta!r}")
    bound = Bound(bound)
    state, bnd = _SIDES[bound]
    for m in range(2, cap + 1):
        ls, lb = state(eta, m), bnd(m)
        if ls > lb:
            return ThresholdReport(bound.value, m, m - 1, math.exp(ls), ls / math.log(10), lb / math.log(10))
    raise ScanCapExceeded(f"{bound.value}: no violation for m <= {cap} at eta={eta!r}")


def threshold_table(eta: float) -> list[ThresholdReport]:
    return [qubit_threshold(eta, b) for b in Bound]
