"""Pure states, density matrices and bipartite cuts over qudit registers.

Subsystem ordering is big-endian: the first subsystem varies slowest, so
the amplitude of ``|i, j, k>`` on dims ``(d0, d1, d2)`` sits at flat index
``(i * d1 + j) * d2 + k``. Basis labels are 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from . import numkernel
from .errors import EmptyKeep, FullKeep, StateError

NORM_TOL = 1e-10
TRACE_TOL = 1e-10
MIN_EIG_TOL = 1e-9
MAX_SUBSYSTEMS = 5


def _check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise StateError("invariant violated: dims non-empty")
    if len(dims) > MAX_SUBSYSTEMS:
        raise StateError(f"at most {MAX_SUBSYSTEMS} subsystems are supported, got {len(dims)}")
    if any(d < 2 for d in dims):
        raise StateError(f"invariant violated: every subsystem dimension >= 2, got {list(dims)}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over ``dims``."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != prod(dims):
            raise StateError(
                f"invariant violated: len(amplitudes) == prod(dims) ({amps.size} != {prod(dims)})"
            )
        if not np.all(np.isfinite(amps)):
            raise StateError("invariant violated: amplitudes finite")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"invariant violated: norm == 1 within {NORM_TOL:g} (got {norm:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_unnormalized(cls, dims: Sequence[int], amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise StateError("cannot normalize the zero vector")
        return cls(tuple(dims), amps / norm)

    @classmethod
    def basis(cls, dims: Sequence[int], labels: Sequence[int]) -> "PureState":
        dims = _check_dims(dims)
        if len(labels) != len(dims):
            raise StateError("one basis label per subsystem is required")
        amps = np.zeros(prod(dims), dtype=np.complex128)
        amps[basis_index(dims, labels)] = 1.0
        return cls(dims, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amplitudes.reshape(self.dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator over ``dims``."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.array(self.matrix, dtype=np.complex128)
        n = prod(dims)
        if mat.shape != (n, n):
            raise StateError(f"invariant violated: matrix side == prod(dims) ({mat.shape} vs {n})")
        if not np.all(np.isfinite(mat)):
            raise StateError("invariant violated: entries finite")
        asym = np.abs(mat - mat.conj().T).max()
        if asym > numkernel.HERMITIAN_TOL:
            raise StateError(f"invariant violated: Hermitian within 1e-10 (asymmetry {asym:.3e})")
        mat = 0.5 * (mat + mat.conj().T)
        tr = np.trace(mat).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"invariant violated: trace == 1 within {TRACE_TOL:g} (got {tr:.12g})")
        wmin = np.linalg.eigvalsh(mat)[0]
        if wmin < -MIN_EIG_TOL:
            raise StateError(f"invariant violated: min eigenvalue >= -1e-9 (got {wmin:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eig(self) -> numkernel.EigResult:
        return numkernel.hermitian_eig(self.matrix)

    def rank(self, cutoff: float = 1e-12) -> int:
        return int(np.count_nonzero(self.eig().eigenvalues > cutoff))


@dataclass(frozen=True)
class BipartiteSplit:
    """Two-block partition of the subsystem indices ``0..n-1``."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        left = tuple(sorted(int(i) for i in self.left))
        right = tuple(sorted(int(i) for i in self.right))
        if not left or not right:
            raise StateError("invariant violated: both blocks of a split are non-empty")
        if set(left) & set(right):
            raise StateError("invariant violated: split blocks are disjoint")
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise StateError("split blocks contain repeated indices")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def of(cls, left: Iterable[int], n: int) -> "BipartiteSplit":
        """Split with ``left`` on one side and every other index on the other."""
        left = tuple(left)
        return cls(left, tuple(i for i in range(n) if i not in left))

    def validate(self, n: int) -> "BipartiteSplit":
        if set(self.left) | set(self.right) != set(range(n)):
            raise StateError(
                f"invariant violated: split covers all {n} subsystems (got {self.left}|{self.right})"
            )
        return self

    def block_dims(self, dims: Sequence[int]) -> tuple[int, int]:
        self.validate(len(dims))
        return prod(dims[i] for i in self.left), prod(dims[i] for i in self.right)

    def swapped(self) -> "BipartiteSplit":
        return BipartiteSplit(self.right, self.left)


def basis_index(dims: Sequence[int], labels: Sequence[int]) -> int:
    return int(np.ravel_multi_index(tuple(labels), tuple(dims)))


def basis_labels(dims: Sequence[int], index: int) -> tuple[int, ...]:
    return tuple(int(i) for i in np.unravel_index(index, tuple(dims)))


def tensor(a: PureState, b: PureState) -> PureState:
    return PureState(a.dims + b.dims, np.kron(a.amplitudes, b.amplitudes))


def superposition(terms: Iterable[tuple[complex, PureState]]) -> PureState:
    """Normalized linear combination of states sharing the same dims."""
    terms = list(terms)
    dims = terms[0][1].dims
    if any(s.dims != dims for _, s in terms):
        raise StateError("superposed states must share dims")
    return PureState.from_unnormalized(dims, sum(c * s.amplitudes for c, s in terms))


def density_from_pure(psi: PureState) -> DensityMatrix:
    v = psi.amplitudes
    return DensityMatrix(psi.dims, np.outer(v, v.conj()))


def conjugate(psi: PureState) -> PureState:
    return PureState(psi.dims, psi.amplitudes.conj())


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduce ``rho`` to the subsystems in ``keep`` (kept in ascending order)."""
    n = len(rho.dims)
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise EmptyKeep("keep must name at least one subsystem")
    if any(i < 0 or i >= n for i in keep):
        raise StateError(f"subsystem indices must lie in 0..{n - 1}, got {keep}")
    if len(keep) == n:
        raise FullKeep("keep must be a strict subset of the subsystems")
    t = rho.matrix.reshape(rho.dims + rho.dims)
    # row axes 0..n-1, column axes n..2n-1; contract each traced row axis with its column axis
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out = [i for i in keep] + [i + n for i in keep]
    reduced = np.einsum(t, row + col, out)
    kd = tuple(rho.dims[i] for i in keep)
    d = prod(kd)
    return DensityMatrix(kd, reduced.reshape(d, d))


def reduced_density(psi: PureState, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace of ``|psi><psi|`` without forming the full projector."""
    n = len(psi.dims)
    keep = sorted(set(int(i) for i in keep))
    if not keep:
        raise EmptyKeep("keep must name at least one subsystem")
    if len(keep) == n:
        raise FullKeep("keep must be a strict subset of the subsystems")
    traced = [i for i in range(n) if i not in keep]
    t = np.transpose(psi.tensor(), keep + traced)
    dk = prod(psi.dims[i] for i in keep)
    m = t.reshape(dk, -1)
    return DensityMatrix(tuple(psi.dims[i] for i in keep), m @ m.conj().T)


def purity(rho: DensityMatrix) -> float:
    m = rho.matrix
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def permute_subsystems(rho: DensityMatrix, order: Sequence[int]) -> DensityMatrix:
    """Reorder subsystems so that new subsystem ``k`` is old subsystem ``order[k]``."""
    n = len(rho.dims)
    order = list(order)
    if sorted(order) != list(range(n)):
        raise StateError(f"order must be a permutation of 0..{n - 1}")
    t = rho.matrix.reshape(rho.dims + rho.dims)
    t = np.transpose(t, order + [i + n for i in order])
    dims = tuple(rho.dims[i] for i in order)
    return DensityMatrix(dims, t.reshape(rho.dim, rho.dim))


def permute_pure(psi: PureState, order: Sequence[int]) -> PureState:
    order = list(order)
    if sorted(order) != list(range(len(psi.dims))):
        raise StateError("order must be a permutation of the subsystem indices")
    t = np.transpose(psi.tensor(), order)
    return PureState(tuple(psi.dims[i] for i in order), t.reshape(-1))


def bipartite_matrix(psi: PureState, split: BipartiteSplit) -> np.ndarray:
    """Amplitudes as an ``M x N`` matrix, rows over ``split.left``."""
    m, _ = split.block_dims(psi.dims)
    t = np.transpose(psi.tensor(), list(split.left) + list(split.right))
    return t.reshape(m, -1)


def bipartite_density(rho: DensityMatrix, split: BipartiteSplit) -> tuple[np.ndarray, int, int]:
    """Density matrix reordered to ``left (x) right`` plus the block dimensions."""
    m, n = split.block_dims(rho.dims)
    order = list(split.left) + list(split.right)
    if order == list(range(len(rho.dims))):
        return rho.matrix, m, n
    return permute_subsystems(rho, order).matrix, m, n


# --- JSON state files -------------------------------------------------------

def _pairs(values: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in values]


def _complex_array(data, what: str, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StateError(f"{what} must be [re, im] number pairs") from exc
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise StateError(f"{what} must be [re, im] number pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_dict(state: PureState | DensityMatrix) -> dict:
    if isinstance(state, PureState):
        return {"kind": "pure", "dims": list(state.dims), "amplitudes": _pairs(state.amplitudes)}
    return {
        "kind": "density",
        "dims": list(state.dims),
        "matrix": [_pairs(row) for row in state.matrix],
    }


def state_from_dict(doc: dict) -> PureState | DensityMatrix:
    if not isinstance(doc, dict):
        raise StateError("state document must be a JSON object")
    kind = doc.get("kind")
    if "dims" not in doc:
        raise StateError("state document requires 'dims'")
    dims = doc["dims"]
    if not isinstance(dims, list) or not all(isinstance(d, int) for d in dims):
        raise StateError("'dims' must be a list of integers")
    if kind == "pure":
        if "amplitudes" not in doc:
            raise StateError("pure state document requires 'amplitudes'")
        return PureState(tuple(dims), _complex_array(doc["amplitudes"], "amplitudes", 1))
    if kind == "density":
        if "matrix" not in doc:
            raise StateError("density document requires 'matrix'")
        return DensityMatrix(tuple(dims), _complex_array(doc["matrix"], "matrix", 2))
    raise StateError(f"'kind' must be 'pure' or 'density', got {kind!r}")


def dumps_state(state: PureState | DensityMatrix) -> str:
    return json.dumps(state_to_dict(state))


def load_state(path) -> PureState | DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateError(f"{path}: not valid JSON ({exc})") from exc
    return state_from_dict(doc)
