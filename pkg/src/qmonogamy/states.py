"""Named states and seeded random states.

Kets written ``|1>, |2>, |3>`` in the literature are basis indices 0, 1, 2
here. Random draws use numpy's PCG64 bit generator; :data:`RNG_ALGORITHM`
is recorded wherever random output is serialized.
"""

from __future__ import annotations

from itertools import permutations
from math import prod
from typing import Sequence

import numpy as np

from .errors import DimensionTooSmall, RankInvalid, StateError
from .qstate import DensityMatrix, PureState, basis_index

RNG_ALGORITHM = "numpy.PCG64"

CATALOG = ("antisym3", "ghz", "w", "basis_x", "basis_y", "basis_z", "haar_pure", "random_mixed")


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; ``seed`` may be an int or a sequence of ints."""
    return np.random.Generator(np.random.PCG64(seed))


def _permutation_sign(p: Sequence[int]) -> int:
    sign, p = 1, list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def antisymmetric_qutrit() -> PureState:
    """Totally antisymmetric three-qutrit state ``sum_perm sign(perm) |perm> / sqrt(6)``."""
    amps = np.zeros(27, dtype=np.complex128)
    for p in permutations(range(3)):
        amps[basis_index((3, 3, 3), p)] = _permutation_sign(p) / np.sqrt(6)
    return PureState((3, 3, 3), amps)


_ANTISYM_PAIRS = {"x": (1, 2), "y": (2, 0), "z": (0, 1)}


def antisym_basis(which: str) -> PureState:
    """Two-qutrit singlet-like vector ``(|ab> - |ba>)/sqrt(2)``.

    ``x``: (a, b) = (1, 2); ``y``: (2, 0); ``z``: (0, 1), 0-based.
    """
    try:
        a, b = _ANTISYM_PAIRS[which]
    except KeyError:
        raise StateError(f"antisymmetric basis vector must be x, y or z, got {which!r}") from None
    amps = np.zeros(9, dtype=np.complex128)
    amps[3 * a + b] = 1 / np.sqrt(2)
    amps[3 * b + a] = -1 / np.sqrt(2)
    return PureState((3, 3), amps)


def antisym_projector() -> np.ndarray:
    """Projector onto the antisymmetric subspace of two qutrits."""
    vs = np.stack([antisym_basis(w).amplitudes for w in "xyz"], axis=1)
    return vs @ vs.conj().T


def ghz(d: int = 3, n: int = 3) -> PureState:
    if d < 2:
        raise DimensionTooSmall(f"GHZ state needs d >= 2, got {d}")
    dims = (d,) * n
    amps = np.zeros(d**n, dtype=np.complex128)
    for i in range(d):
        amps[basis_index(dims, (i,) * n)] = 1 / np.sqrt(d)
    return PureState(dims, amps)


def w_state() -> PureState:
    amps = np.zeros(8, dtype=np.complex128)
    amps[[1, 2, 4]] = 1 / np.sqrt(3)
    return PureState((2, 2, 2), amps)


def haar_random_pure(dims: Sequence[int], seed) -> PureState:
    rng = make_rng(seed)
    n = prod(dims)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(tuple(dims), v / np.linalg.norm(v))


def random_mixed(dims: Sequence[int], rank: int, seed) -> DensityMatrix:
    n = prod(dims)
    if not 1 <= rank <= n:
        raise RankInvalid(f"rank must lie in 1..{n}, got {rank}")
    rng = make_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    return DensityMatrix(tuple(dims), rho / np.trace(rho).real)


def random_local_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with phase correction."""
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def apply_local_unitaries(psi: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    t = psi.tensor()
    for k, u in enumerate(unitaries):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [k])), 0, k)
    return PureState(psi.dims, t.reshape(-1))


def build(name: str, *, d: int = 3, dims: Sequence[int] | None = None, rank: int = 1,
          seed=0) -> PureState | DensityMatrix:
    """Construct a catalog state by name."""
    if name == "antisym3":
        return antisymmetric_qutrit()
    if name == "ghz":
        return ghz(d)
    if name == "w":
        return w_state()
    if name in ("basis_x", "basis_y", "basis_z"):
        return antisym_basis(name[-1])
    if name == "haar_pure":
        return haar_random_pure(dims or (2, 2, 2), seed)
    if name == "random_mixed":
        return random_mixed(dims or (2, 2), rank, seed)
    raise StateError(f"unknown state {name!r}; choose one of {', '.join(CATALOG)}")
