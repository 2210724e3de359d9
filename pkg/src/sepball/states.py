"""Constructors for the state families used throughout the package.

Randomness always comes from ``numpy.random.Generator`` with the PCG64 bit
generator, so a seed reproduces bit-identical matrices on any platform.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .hermitian import MultipartiteStructure, as_structure, hermitian, max_dim, tensor_all

PROJECTOR_TOL = 1e-9


def rng_from_seed(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_unit_interval(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def pseudopure(pi, eps: float) -> np.ndarray:
    """``eps * pi + (1 - eps) * I/d`` for a rank-one unit-trace projector ``pi``."""
    _check_unit_interval("eps", eps)
    pi = hermitian(pi)
    d = pi.shape[0]
    if abs(np.trace(pi).real - 1) > PROJECTOR_TOL or np.max(np.abs(pi @ pi - pi)) > PROJECTOR_TOL:
        raise ValueError("pi must be a rank-one unit-trace projector")
    return eps * pi + (1 - eps) * np.eye(d) / d


def projector(psi) -> np.ndarray:
    """``|psi><psi|`` for the normalized vector ``psi``."""
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def thermal_qubits(eta: float, m: int) -> np.ndarray:
    """m-fold tensor power of ``diag((1 + eta)/2, (1 - eta)/2)``."""
    if not 0.0 <= eta < 1.0:
        raise ValueError(f"eta must lie in [0, 1), got {eta!r}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if 2 ** m > max_dim():
        raise DimensionError(f"2^{m} exceeds the dense cap {max_dim()}")
    single = np.array([(1 + eta) / 2, (1 - eta) / 2])
    diag = np.ones(1)
    for _ in range(m):
        diag = np.kron(diag, single)
    return np.diag(diag).astype(np.complex128)


def max_entangled(d: int) -> np.ndarray:
    """Projector onto ``sum_i e_i (x) e_i / sqrt(d)`` on a ``d x d`` bipartite space."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    psi = np.zeros(d * d, dtype=np.complex128)
    psi[[i * d + i for i in range(d)]] = 1 / math.sqrt(d)
    return np.outer(psi, psi.conj())


SINGLET = np.array([0, 1, -1, 0], dtype=np.complex128) / math.sqrt(2)


def werner(p: float) -> np.ndarray:
    """Two-qubit ``p |psi-><psi-| + (1 - p) I/4`` with the singlet ``(e0 e1 - e1 e0)/sqrt 2``."""
    _check_unit_interval("p", p)
    return p * np.outer(SINGLET, SINGLET.conj()) + (1 - p) * np.eye(4) / 4


def random_ginibre(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """``G G^H / tr(G G^H)`` with ``G`` a ``d x rank`` complex Gaussian matrix."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return projector(v)


def random_product(s: MultipartiteStructure | Sequence[int], rng: np.random.Generator, terms: int = 4) -> np.ndarray:
    """Dirichlet-weighted mixture of ``terms`` products of independent random states.

    Separable by construction.
    """
    s = as_structure(s)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    weights = rng.dirichlet(np.ones(terms))
    out = np.zeros((s.total_dim, s.total_dim), dtype=np.complex128)
    for w in weights:
        out += w * tensor_all(random_ginibre(d, rng) for d in s.dims)
    return (out + out.conj().T) / 2


def random_hermitian_direction(n: int, rng: np.random.Generator, traceless: bool = False) -> np.ndarray:
    """Gaussian Hermitian matrix scaled to unit Frobenius norm."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = (g + g.conj().T) / 2
    if traceless:
        h -= np.trace(h).real / n * np.eye(n)
    return h / np.linalg.norm(h)


def random_ball_state(n: int, radius: float, rng: np.random.Generator, normalized: bool = False,
                      uniform_volume: bool = False) -> np.ndarray:
    """Random point of a Frobenius ball of ``radius``.

    Unnormalized: ``I + r Delta`` with ``Delta`` a unit Hermitian direction.
    Normalized: ``I/d + r Delta`` with ``Delta`` traceless, so the trace stays 1.
    ``r`` is uniform on ``[0, radius]``, or uniform in volume when
    ``uniform_volume`` is set.
    """
    u = rng.uniform()
    dof = n * n - (1 if normalized else 0)
    r = radius * (u ** (1.0 / dof) if uniform_volume else u)
    delta = random_hermitian_direction(n, rng, traceless=normalized)
    centre = np.eye(n) / n if normalized else np.eye(n)
    return centre + r * delta


class Family(str, enum.Enum):
    PSEUDOPURE = "pseudopure"
    THERMAL = "thermal"
    WERNER = "werner"
    MAX_ENTANGLED = "max-entangled"
    RANDOM_GINIBRE = "random-ginibre"
    RANDOM_PRODUCT = "random-product"
    IDENTITY = "identity"


@dataclass
class StateSpec:
    """Serializable recipe for one matrix.

    ``params`` keys per family: ``eps`` (pseudopure, mixed with the all-zeros
    basis projector), ``eta`` (thermal), ``p`` (werner), ``terms`` (random-product).
    """

    family: Family
    structure: MultipartiteStructure
    params: dict[str, float] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self) -> None:
        self.family = Family(self.family)
        self.structure = as_structure(self.structure)
        for key in ("eps", "p"):
            if key in self.params:
                _check_unit_interval(key, float(self.params[key]))
        if self.params.get("eta", 0.0) < 0:
            raise ValueError("eta must be >= 0")

    def to_json(self) -> str:
        return json.dumps({"family": self.family.value, "structure": list(self.structure.dims),
                           "params": self.params, "seed": self.seed})

    @classmethod
    def from_json(cls, text: str) -> "StateSpec":
        obj = json.loads(text)
        return cls(Family(obj["family"]), MultipartiteStructure(tuple(obj["structure"])),
                   dict(obj.get("params", {})), obj.get("seed"))


def build(spec: StateSpec) -> np.ndarray:
    """Materialize a :class:`StateSpec`."""
    s = spec.structure
    d = s.total_dim
    fam = spec.family
    if fam is Family.IDENTITY:
        return np.eye(d, dtype=np.complex128)
    if fam is Family.PSEUDOPURE:
        pi = np.zeros((d, d), dtype=np.complex128)
        pi[0, 0] = 1
        return pseudopure(pi, float(spec.params.get("eps", 0.0)))
    if fam is Family.THERMAL:
        if any(k != 2 for k in s.dims):
            raise DimensionError("thermal states are defined on qubits only")
        return thermal_qubits(float(spec.params.get("eta", 0.0)), s.m)
    if fam is Family.WERNER:
        if s.dims != (2, 2):
            raise DimensionError("werner states live on structure 2,2")
        return werner(float(spec.params.get("p", 0.0)))
    if fam is Family.MAX_ENTANGLED:
        if s.m != 2 or s.dims[0] != s.dims[1]:
            raise DimensionError("max-entangled needs a d,d structure")
        return max_entangled(s.dims[0])
    rng = rng_from_seed(spec.seed)
    if fam is Family.RANDOM_GINIBRE:
        return random_ginibre(d, rng)
    return random_product(s, rng, int(spec.params.get("terms", 4)))


def random_state(spec: StateSpec) -> np.ndarray:
    if spec.family not in (Family.RANDOM_GINIBRE, Family.RANDOM_PRODUCT):
        raise ValueError(f"{spec.family.value} is not a random family")
    return build(spec)
