"""Exact concurrences: generator form, purity form, and Wootters' formula."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from . import numkernel
from .errors import DimensionTooSmall, NotPSD, WrongDims
from .qstate import BipartiteSplit, DensityMatrix, PureState, bipartite_matrix, reduced_density

BOUND_SLACK = 1e-9
WOOTTERS_CLAMP = 1e-12


class Certainty(str, Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower_bound"
    UPPER_ESTIMATE = "upper_estimate"


@dataclass(frozen=True)
class ConcurrenceResult:
    """Squared concurrence with a tag saying how far it can be trusted."""

    value_sq: float
    certainty: Certainty
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.value_sq >= 0:
            raise ValueError(f"value_sq must be >= 0, got {self.value_sq}")
        object.__setattr__(self, "value_sq", float(self.value_sq))
        object.__setattr__(self, "certainty", Certainty(self.certainty))

    @property
    def value(self) -> float:
        return float(np.sqrt(self.value_sq))

    def to_dict(self) -> dict:
        return {"value_sq": self.value_sq, "certainty": self.certainty.value, "meta": dict(self.meta)}


def max_concurrence_sq(m: int, n: int) -> float:
    """Largest squared concurrence on an ``m x n`` cut: ``2(d-1)/d``, ``d = min(m, n)``."""
    d = min(m, n)
    return 2.0 * (d - 1) / d


@lru_cache(maxsize=None)
def _generator_stack(m: int) -> np.ndarray:
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    stack = np.zeros((len(pairs), m, m))
    for k, (i, j) in enumerate(pairs):
        stack[k, i, j] = 1.0
        stack[k, j, i] = -1.0
    stack.setflags(write=False)
    return stack


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """Canonical real antisymmetric basis of so(m), ordered by ``(i, j)``, ``i < j``."""

    dim: int
    generators: np.ndarray

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.dim) for j in range(i + 1, self.dim)]

    def __len__(self) -> int:
        return len(self.generators)


def so_generators(m: int) -> GeneratorSet:
    if m < 2:
        raise DimensionTooSmall(f"so(m) generators need m >= 2, got {m}")
    return GeneratorSet(m, _generator_stack(m))


def generator_amplitudes(psi_mat: np.ndarray) -> np.ndarray:
    """All ``<psi| L_a (x) L_b |psi*>`` for an amplitude matrix ``psi_mat`` (rows = left block).

    Returns an array of shape ``(n_left_generators, n_right_generators)``.
    """
    m, n = psi_mat.shape
    la, lb = _generator_stack(m), _generator_stack(n)
    c = psi_mat.conj()
    return np.einsum("ab,xac,ybd,cd->xy", c, la, lb, c, optimize=True)


def pure_concurrence_sq(psi: PureState, split: BipartiteSplit) -> ConcurrenceResult:
    """Squared concurrence of a pure state across ``split``.

    Sums ``|<psi| L_a (x) L_b |psi*>|^2`` over the so(M) and so(N) generators
    acting on the left and right blocks. Each side contributes M(M-1)/2
    generators.
    """
    mat = bipartite_matrix(psi, split)
    c = generator_amplitudes(mat)
    return ConcurrenceResult(float(np.sum(np.abs(c) ** 2)), Certainty.EXACT)


def pure_concurrence_sq_purity(psi: PureState, split: BipartiteSplit) -> ConcurrenceResult:
    """``2 (1 - Tr rho_left^2)``; an independent route to the same number."""
    split.validate(len(psi.dims))
    rho_l = reduced_density(psi, split.left)
    p = float(np.sum(np.abs(rho_l.matrix) ** 2))
    return ConcurrenceResult(max(0.0, 2.0 * (1.0 - p)), Certainty.EXACT)


def spin_flip_concurrence(rho: np.ndarray, flip: np.ndarray) -> float:
    """``max(0, l1 - l2 - l3 - l4)`` with ``l`` the descending square roots of the
    eigenvalues of ``sqrt(rho) F rho* F sqrt(rho)``, ``F`` real symmetric.

    Only the four largest eigenvalues enter; any further ones are ignored.
    """
    s = numkernel.matrix_sqrt_psd(rho)
    r = s @ flip @ rho.conj() @ flip @ s
    w = numkernel.hermitian_eig(0.5 * (r + r.conj().T)).eigenvalues
    if w.size and w.min() < -numkernel.PSD_TOL:
        raise NotPSD(f"spin-flipped product has eigenvalue {w.min():.3e}")
    w = np.where(w < WOOTTERS_CLAMP, 0.0, w)
    lam = np.sqrt(w[:4])
    return float(max(0.0, lam[0] - lam[1:].sum()))


def wootters_concurrence(rho: DensityMatrix) -> ConcurrenceResult:
    if tuple(rho.dims) != (2, 2):
        raise WrongDims(f"Wootters concurrence needs dims [2, 2], got {list(rho.dims)}")
    y = _generator_stack(2)[0]
    c = spin_flip_concurrence(rho.matrix, np.kron(y, y))
    return ConcurrenceResult(c * c, Certainty.EXACT)
