"""Frobenius-ball separability certificates and the scaling quantity ``mu``.

Every ball here is closed. A matrix at exactly the certified radius is
certified, with a boundary slack of ``BOUNDARY_TOL`` so that a perturbation
normalized to the radius in floating point is not rejected by one ulp.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, TraceError
from .hermitian import (
    MultipartiteStructure,
    as_structure,
    frobenius_norm,
    general,
    hermitian,
    is_psd,
)

BOUNDARY_TOL = 1e-12
TRACE_TOL = 1e-9
RLIN_TOL = 1e-9


class Verdict(str, enum.Enum):
    CERTIFIED_SEPARABLE = "CertifiedSeparable"
    CERTIFIED_REAL_SEPARABLE = "CertifiedRealSeparable"
    INCONCLUSIVE = "Inconclusive"
    NOT_PSD = "NotPSD"

    @property
    def certified(self) -> bool:
        return self in (Verdict.CERTIFIED_SEPARABLE, Verdict.CERTIFIED_REAL_SEPARABLE)


@dataclass(frozen=True)
class CertificationResult:
    """Outcome of one ball criterion.

    ``margin`` is ``radius_used - distance``; positive means strictly inside.
    ``radii`` lists every radius the criterion knows about (the normalized
    criterion reports both its tight and loose forms).
    """

    verdict: Verdict
    criterion: str
    margin: float
    radius_used: float
    distance: float
    radii: dict[str, float] = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.verdict.certified

    def to_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = self.verdict.value
        return out


@dataclass(frozen=True)
class ScalingReport:
    """Scaling quantities of a positive-trace matrix, evaluated on ``X / tr X``.

    ``equivalence_residuals`` holds, for ``a = mu``:
    ``tr rho^2 - 1/(d - a^2)``, ``||rho - I/d||_2 - a/sqrt(d(d - a^2))``, and
    ``mu - ||rho/alpha - I||_2`` at the optimal scale ``alpha = tr rho^2``.
    """

    mu: float
    purity: float
    distance_to_normalized_identity: float
    equivalence_residuals: tuple[float, float, float]
    dim: int

    def to_dict(self) -> dict:
        out = asdict(self)
        out["equivalence_residuals"] = list(self.equivalence_residuals)
        return out


def _trace(x: np.ndarray) -> float:
    return float(np.trace(x).real)


def mu(x) -> float:
    """Smallest ``||Delta||_2`` over all ways of writing ``x = alpha (I + Delta)``, ``alpha > 0``.

    The optimum is at ``alpha = tr x^2 / tr x``, giving
    ``sqrt(N - (tr x)^2 / tr x^2)``. That difference cancels badly near
    ``x ~ I``, so the equal form ``sqrt(N) ||x - (tr x / N) I||_2 / ||x||_2``
    is evaluated instead.
    """
    x = hermitian(x)
    tr = _trace(x)
    if not tr > 0:
        raise TraceError(f"mu requires positive trace, got {tr!r}")
    n = x.shape[0]
    spread = frobenius_norm(x - (tr / n) * np.eye(n))
    return math.sqrt(n) * spread / frobenius_norm(x)


def in_g_cone(x, a: float, tol: float = BOUNDARY_TOL) -> bool:
    """Membership in the cone generated by ``{I + Delta : ||Delta||_2 <= a}``."""
    if not a > 0:
        raise ValueError(f"cone parameter a must be positive, got {a!r}")
    x = hermitian(x)
    if not np.any(x):
        return True
    if not _trace(x) > 0:
        return False
    return mu(x) <= a + tol


def scaling_report(x) -> ScalingReport:
    x = hermitian(x)
    tr = _trace(x)
    if not tr > 0:
        raise TraceError(f"scaling report requires positive trace, got {tr!r}")
    rho = x / tr
    d = rho.shape[0]
    a = mu(rho)
    p = float(np.vdot(rho, rho).real)
    dist = frobenius_norm(rho - np.eye(d) / d)
    alpha = p
    direct = frobenius_norm(rho / alpha - np.eye(d))
    residuals = (
        p - 1.0 / (d - a * a),
        dist - a / math.sqrt(d * (d - a * a)),
        a - direct,
    )
    return ScalingReport(mu=a, purity=p, distance_to_normalized_identity=dist,
                         equivalence_residuals=residuals, dim=d)


def separable_ball_radius(m: int) -> float:
    """Radius ``2^{-(m/2 - 1)}`` of the separable ball around ``I`` for ``m`` parties."""
    if m < 2:
        raise ValueError(f"the ball radius is defined for m >= 2 parties, got {m}")
    return 2.0 ** (-(m / 2 - 1))


def _ball_verdict(rho: np.ndarray, distance: float, radius: float, certified: Verdict) -> Verdict:
    if distance <= radius + BOUNDARY_TOL:
        return certified
    # radius <= 1 (unnormalized) implies PSD inside the ball, so only check outside it
    return Verdict.INCONCLUSIVE if is_psd(rho) else Verdict.NOT_PSD


def _prepare(rho, s) -> tuple[np.ndarray, MultipartiteStructure]:
    s = as_structure(s)
    rho = hermitian(rho)
    if rho.shape[0] != s.total_dim:
        raise DimensionError(f"matrix dimension {rho.shape[0]} does not match structure {s} (dim {s.total_dim})")
    return rho, s


def certify_unnormalized(rho, s: MultipartiteStructure | Sequence[int]) -> CertificationResult:
    """Certify separability when ``||rho - I||_2 <= 2^{-(m/2 - 1)}``."""
    rho, s = _prepare(rho, s)
    radius = separable_ball_radius(s.m)
    dist = frobenius_norm(rho - np.eye(s.total_dim))
    verdict = _ball_verdict(rho, dist, radius, Verdict.CERTIFIED_SEPARABLE)
    return CertificationResult(verdict, "unnormalized-ball", radius - dist, radius, dist,
                               {"unnormalized": radius})


def normalized_radii(s: MultipartiteStructure | Sequence[int]) -> dict[str, float]:
    """Loose ``a/d`` and tight ``a/sqrt(d(d - a^2))`` radii around ``I/d``."""
    s = as_structure(s)
    a = separable_ball_radius(s.m)
    d = s.total_dim
    return {"loose": a / d, "tight": a / math.sqrt(d * (d - a * a))}


def certify_normalized(rho, s: MultipartiteStructure | Sequence[int], tight: bool = True) -> CertificationResult:
    """Certify a unit-trace ``rho`` by its distance to ``I/d``.

    Raises
    ------
    TraceError
        If ``|tr rho - 1| > 1e-9``.
    """
    rho, s = _prepare(rho, s)
    tr = _trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceError(f"normalized criterion needs unit trace, got tr = {tr!r}")
    radii = normalized_radii(s)
    radius = radii["tight" if tight else "loose"]
    d = s.total_dim
    dist = frobenius_norm(rho - np.eye(d) / d)
    verdict = _ball_verdict(rho, dist, radius, Verdict.CERTIFIED_SEPARABLE)
    name = "normalized-ball-tight" if tight else "normalized-ball"
    return CertificationResult(verdict, name, radius - dist, radius, dist, radii)


def _is_real_symmetric(a: np.ndarray, tol: float) -> bool:
    return bool(np.max(np.abs(a.imag), initial=0.0) <= tol and np.max(np.abs(a - a.T), initial=0.0) <= tol)


def _rlin(a: np.ndarray, dims: tuple[int, ...], tol: float) -> bool:
    if len(dims) == 1:
        return _is_real_symmetric(a, tol)
    d1 = dims[0]
    n = a.shape[0] // d1
    blocks = [[a[i * n:(i + 1) * n, j * n:(j + 1) * n] for j in range(d1)] for i in range(d1)]
    for i in range(d1):
        for j in range(i + 1, d1):
            if np.max(np.abs(blocks[i][j] - blocks[j][i])) > tol:
                return False
    return all(_rlin(blocks[i][j], dims[1:], tol) for i in range(d1) for j in range(i, d1))


def in_rlin(rho, s: MultipartiteStructure | Sequence[int], tol: float = RLIN_TOL) -> bool:
    """Recursive real-subspace test.

    One party: real symmetric. More parties: every first-party block satisfies
    ``rho^{i,j} == rho^{j,i}`` entrywise and lies in the subspace of the
    remaining parties.
    """
    s = as_structure(s)
    rho = general(rho)
    if rho.shape != (s.total_dim, s.total_dim):
        raise DimensionError(f"matrix of shape {rho.shape} does not match structure {s}")
    return _rlin(rho, s.dims, tol)


def certify_real_separable(rho, s: MultipartiteStructure | Sequence[int]) -> CertificationResult:
    """Certify real-separability for ``rho`` in the real subspace with ``||rho - I||_2 <= 1``."""
    rho, s = _prepare(rho, s)
    radius = 1.0
    dist = frobenius_norm(rho - np.eye(s.total_dim))
    if in_rlin(rho, s):
        verdict = _ball_verdict(rho, dist, radius, Verdict.CERTIFIED_REAL_SEPARABLE)
    else:
        verdict = Verdict.INCONCLUSIVE if is_psd(rho) else Verdict.NOT_PSD
    return CertificationResult(verdict, "real-separable-ball", radius - dist, radius, dist,
                               {"real-separable": radius})


class PseudopureBound(str, enum.Enum):
    THIS_PAPER = "ThisPaper"
    THIS_PAPER_LOOSE = "ThisPaperLoose"
    BRAUNSTEIN = "Braunstein"
    BIPARTITION = "Bipartition"
    UPPER_BOUND = "UpperBound"


def pseudopure_threshold(m: int, D: int, variant: PseudopureBound | str = PseudopureBound.THIS_PAPER) -> float:
    """Largest pseudopure mixing fraction ``eps`` guaranteed by the selected bound.

    ``d = D**m`` is formed exactly, so huge ``m`` underflows to ``0.0`` rather
    than overflowing.
    """
    variant = PseudopureBound(variant)
    if m < 2 or D < 2:
        raise ValueError(f"need m >= 2 and D >= 2, got m={m}, D={D}")
    d = D ** m
    a = 2.0 ** (-(m / 2 - 1))
    inv_d = 1 / d  # exact int division; never overflows
    if variant is PseudopureBound.THIS_PAPER:
        # a / sqrt(d(d-1)) == a / (d sqrt(1 - 1/d))
        return a * inv_d / math.sqrt(1 - inv_d)
    if variant is PseudopureBound.THIS_PAPER_LOOSE:
        return a * inv_d
    if variant is PseudopureBound.BRAUNSTEIN:
        return 1 / (1 + D ** (2 * m - 1))
    if variant is PseudopureBound.BIPARTITION:
        return 1 / (d - 1)
    if D != 2:
        raise ValueError("the UpperBound variant is defined for qubits (D = 2) only")
    return 2 / (2 + 2 ** m)
