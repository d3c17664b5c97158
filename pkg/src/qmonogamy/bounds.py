"""Mixed-state squared concurrence: lower bounds, convex-roof estimates, exact special case.

Three routes to the same quantity:

* :func:`lower_bound_sq` -- singular-value bound ``(l1 - sum_{i>1} l_i)^2`` of a
  phase-weighted sum of correlation blocks, optimized over the weight vector.
  Valid for every unit weight vector, so any optimizer output is safe.
* :func:`lower_bound_2xM_sq` -- closed-form bound for a qubit against an
  M-level block; no optimization.
* :func:`convex_roof_sq` -- minimizes the ensemble average over decompositions,
  giving an upper estimate of the convex roof.

:func:`antisym_exact_sq` returns the exact value for two-qutrit states
supported on the antisymmetric subspace, where every decomposition averages
to the same number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkernel
from .errors import ConfigInvalid, WrongDims
from .measures import (
    Certainty,
    ConcurrenceResult,
    _generator_stack,
    spin_flip_concurrence,
)
from .qstate import BipartiteSplit, DensityMatrix, bipartite_density
from .states import RNG_ALGORITHM, antisym_projector, make_rng

RANK_CUTOFF = 1e-12
GAP_CUTOFF = 1e-12
ANTISYM_RESIDUAL = 1e-10
LB_MAX_ITERS = 200
LB_STOP = 1e-9
ROOF_REJECTIONS = 20
ROOF_INITIAL_STEP = 0.25


@dataclass(frozen=True)
class RoofConfig:
    """Controls for the convex-roof search. ``ensemble_size=None`` means ``2 * rank``."""

    seed: int
    ensemble_size: int | None = None
    restarts: int = 8
    max_iters: int = 2000
    step_tolerance: float = 1e-8

    def __post_init__(self):
        if self.restarts < 1:
            raise ConfigInvalid(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 0:
            raise ConfigInvalid(f"max_iters must be >= 0, got {self.max_iters}")
        if not self.step_tolerance > 0:
            raise ConfigInvalid("step_tolerance must be positive")

    def ensemble_for(self, rank: int) -> int:
        k = 2 * rank if self.ensemble_size is None else self.ensemble_size
        if k < rank:
            raise ConfigInvalid(f"ensemble_size {k} is smaller than the state rank {rank}")
        return k

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "ensemble_size": self.ensemble_size,
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "step_tolerance": self.step_tolerance,
        }


def support(rho_matrix: np.ndarray) -> np.ndarray:
    """Subnormalized eigenvectors ``sqrt(mu_m) |chi_m>`` as rows, ``mu_m > RANK_CUTOFF``."""
    w, v = numkernel.hermitian_eig(rho_matrix)
    keep = w > RANK_CUTOFF
    return (v[:, keep] * np.sqrt(w[keep])).T


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """``blocks[a, b]`` is the ``r x r`` matrix ``<Phi_m| L_a (x) L_b |Phi_n*>``."""

    blocks: np.ndarray
    m: int
    n: int

    @property
    def rank(self) -> int:
        return self.blocks.shape[-1]

    def flat(self) -> np.ndarray:
        r = self.rank
        return self.blocks.reshape(-1, r, r)


def correlation_tensor(rho: DensityMatrix, split: BipartiteSplit) -> CorrelationTensor:
    mat, m, n = bipartite_density(rho, split)
    phi = support(mat).reshape(-1, m, n).conj()
    la, lb = _generator_stack(m), _generator_stack(n)
    blocks = np.einsum("pab,xac,ybd,qcd->xypq", phi, la, lb, phi, optimize=True)
    return CorrelationTensor(blocks, m, n)


def _gap(t: np.ndarray) -> float:
    s = np.linalg.svd(t, compute_uv=False)
    return float(s[0] - s[1:].sum())


def _gap_and_direction(a: np.ndarray, z: np.ndarray) -> tuple[float, np.ndarray]:
    t = np.tensordot(z, a, axes=1)
    u, s, vh = np.linalg.svd(t)
    signs = -np.ones_like(s)
    signs[0] = 1.0
    # d(gap) = Re sum_k dz_k g_k with g_k = sum_i sign_i u_i^H A_k v_i
    g = np.einsum("i,ai,kab,ib->k", signs, u.conj(), a, vh.conj(), optimize=True)
    return float(s[0] - s[1:].sum()), g


def _ascend(a: np.ndarray, z: np.ndarray, max_iters: int) -> tuple[float, np.ndarray, int]:
    """Alignment steps plus coordinate-wise phase moves; monotone in the gap."""
    f = _gap(np.tensordot(z, a, axes=1))
    delta = np.pi / 6
    it = 0
    for it in range(1, max_iters + 1):
        f_start = f
        _, g = _gap_and_direction(a, z)
        gn = np.linalg.norm(g)
        if gn > 0:
            z_al = g.conj() / gn
            f_al = _gap(np.tensordot(z_al, a, axes=1))
            if f_al > f:
                z, f = z_al, f_al
        for k in range(z.size):
            if z[k] == 0:
                continue
            for sgn in (1.0, -1.0):
                trial = z.copy()
                trial[k] *= np.exp(1j * sgn * delta)
                f_t = _gap(np.tensordot(trial, a, axes=1))
                if f_t > f:
                    z, f = trial, f_t
                    break
        if f - f_start < LB_STOP:
            if delta < 1e-4:
                break
            delta /= 4
    return f, z, it


def lower_bound_sq(rho: DensityMatrix, split: BipartiteSplit, restarts: int = 8, seed: int = 0,
                   max_iters: int = LB_MAX_ITERS) -> ConcurrenceResult:
    """Best singular-value lower bound found over ``restarts`` random starting vectors.

    Each candidate ``z`` on the complex unit sphere gives a valid bound, so the
    maximum over all candidates tried is reported.
    """
    if restarts < 1:
        raise ConfigInvalid(f"restarts must be >= 1, got {restarts}")
    ct = correlation_tensor(rho, split)
    a = ct.flat()
    best, iters = 0.0, 0
    for k in range(restarts):
        rng = make_rng([seed, k])
        z = rng.standard_normal(a.shape[0]) + 1j * rng.standard_normal(a.shape[0])
        z /= np.linalg.norm(z)
        f, _, it = _ascend(a, z, max_iters)
        best = max(best, f)
        iters += it
    if best < GAP_CUTOFF:
        best = 0.0
    meta = {"method": "singular_value", "restarts": restarts, "iterations": iters,
            "seed": seed, "rng": RNG_ALGORITHM}
    return ConcurrenceResult(best * best, Certainty.LOWER_BOUND, meta)


def lower_bound_2xM_sq(rho: DensityMatrix, split: BipartiteSplit) -> ConcurrenceResult:
    """Closed-form bound for a qubit block against an M-level block.

    Sums ``C_ij^2`` over level pairs ``i < j`` of the M-level side, each
    ``C_ij`` computed from the spin-flip operator ``Y (x) L_ij``. When the
    qubit sits in ``split.right`` the blocks are swapped first.
    """
    mat, m, n = bipartite_density(rho, split)
    if m != 2:
        if n != 2:
            raise WrongDims(f"2xM bound needs a two-level block, got {m}x{n}")
        mat, m, n = bipartite_density(rho, split.swapped())
    y = _generator_stack(2)[0]
    terms = [spin_flip_concurrence(mat, np.kron(y, l)) for l in _generator_stack(n)]
    value = float(sum(c * c for c in terms))
    return ConcurrenceResult(value, Certainty.LOWER_BOUND, {"method": "analytic_2xM", "terms": len(terms)})


# --- convex roof ----------------------------------------------------------------

def decompose(rho: DensityMatrix, isometry: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ensemble ``{p_i, |phi_i>}`` generated by a ``K x r`` isometry from the eigen-ensemble.

    Returns probabilities ``p`` (length K) and unnormalized vectors as rows.
    Rows with ``p_i = 0`` are kept so the indexing follows the isometry.
    """
    phi = support(rho.matrix)
    u = np.asarray(isometry, dtype=np.complex128)
    if u.shape[1] != phi.shape[0]:
        raise ConfigInvalid(f"isometry has {u.shape[1]} columns, state rank is {phi.shape[0]}")
    vecs = u @ phi
    return np.sum(np.abs(vecs) ** 2, axis=1), vecs


def _ensemble_average(vecs: np.ndarray, m: int, n: int) -> float:
    """``sum_i p_i C^2(phi_i / |phi_i|)`` via ``C^2 = 2(1 - Tr rho_left^2)``."""
    p = np.sum(np.abs(vecs) ** 2, axis=1)
    mats = vecs.reshape(-1, m, n)
    red = mats @ mats.conj().transpose(0, 2, 1) if m <= n else mats.conj().transpose(0, 2, 1) @ mats
    tr2 = np.sum(np.abs(red) ** 2, axis=(1, 2))
    live = p > 1e-300
    return float(np.sum(2.0 * (p[live] - tr2[live] / p[live])))


def ensemble_average_sq(rho: DensityMatrix, split: BipartiteSplit, isometry: np.ndarray) -> float:
    mat, m, n = bipartite_density(rho, split)
    phi = support(mat)
    return _ensemble_average(np.asarray(isometry) @ phi, m, n)


def random_isometry(k: int, r: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    return numkernel.unitary_from_generator(0.5 * (x - x.conj().T))[:, :r]


def _roof_run(phi: np.ndarray, m: int, n: int, k: int, cfg: RoofConfig, restart: int) -> tuple[float, int]:
    r = phi.shape[0]
    rng = make_rng([cfg.seed, restart])

    def objective(x):
        u = numkernel.unitary_from_generator(0.5 * (x - x.conj().T))[:, :r]
        return _ensemble_average(u @ phi, m, n)

    if restart == 0:
        x = np.zeros((k, k), dtype=np.complex128)
    else:
        x = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    f = objective(x)
    step, rejected, it = ROOF_INITIAL_STEP, 0, 0
    for it in range(1, cfg.max_iters + 1):
        trial = x + step * (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
        f_t = objective(trial)
        if f_t < f:
            x, f, rejected = trial, f_t, 0
        else:
            rejected += 1
            if rejected == ROOF_REJECTIONS:
                step, rejected = step / 2, 0
                if step < cfg.step_tolerance:
                    break
        if f <= 0.0:
            break
    return max(f, 0.0), it


def convex_roof_sq(rho: DensityMatrix, split: BipartiteSplit, cfg: RoofConfig) -> ConcurrenceResult:
    """Upper estimate of the convex roof of ``C^2`` by adaptive random descent.

    Decompositions are parameterized as ``U @ Phi`` with ``U`` the first ``rank``
    columns of ``exp(A)``, ``A`` anti-Hermitian. Restart 0 starts from the
    eigen-ensemble, later restarts from random generators. Each restart draws
    from its own stream keyed by ``(seed, restart)``.
    """
    mat, m, n = bipartite_density(rho, split)
    phi = support(mat)
    k = cfg.ensemble_for(phi.shape[0])
    best, best_restart, iters = np.inf, 0, 0
    for restart in range(cfg.restarts):
        f, it = _roof_run(phi, m, n, k, cfg, restart)
        iters += it
        if f < best:
            best, best_restart = f, restart
    meta = {"method": "convex_roof", "restarts": cfg.restarts, "max_iters": cfg.max_iters,
            "iterations": iters, "ensemble_size": k, "best_restart": best_restart,
            "seed": cfg.seed, "rng": RNG_ALGORITHM}
    return ConcurrenceResult(best, Certainty.UPPER_ESTIMATE, meta)


def _unit_concurrence_on_support(mat: np.ndarray, m: int, n: int) -> bool:
    """True when every pure state in the support of ``mat`` has ``C^2 = 1``.

    ``Tr rho_left^2`` of ``phi = sum_k c_k X_k`` is a quartic form in ``c``;
    ``C^2 = 1`` everywhere iff its symmetrized coefficient tensor equals half
    that of ``|c|^4``. This is unchanged by local unitaries, unlike the
    projector test.
    """
    w, v = numkernel.hermitian_eig(mat)
    x = v[:, w > RANK_CUTOFF].T
    r = x.shape[0]
    x = x.reshape(r, m, n)
    g = np.einsum("jab,icb,lcd,kad->jilk", x, x.conj(), x, x.conj(), optimize=True)
    eye = np.eye(r)
    target = 0.5 * np.einsum("ji,lk->jilk", eye, eye)

    def sym(t):
        t = 0.5 * (t + t.transpose(2, 1, 0, 3))
        return 0.5 * (t + t.transpose(0, 3, 2, 1))

    return bool(np.abs(sym(g) - sym(target)).max() < ANTISYM_RESIDUAL)


def antisym_exact_sq(rho: DensityMatrix, split: BipartiteSplit) -> ConcurrenceResult | None:
    """Exact ``C^2 = 1`` when ``rho`` lives on the two-qutrit antisymmetric subspace.

    Every pure state there is locally equivalent to a singlet-like vector with
    ``C^2 = 1``, so all decompositions average to 1. Supports that are local
    unitary images of that subspace are recognised too. Returns ``None`` when
    the cut is not 3x3 or neither test passes.
    """
    mat, m, n = bipartite_density(rho, split)
    if (m, n) != (3, 3):
        return None
    p = antisym_projector()
    if np.abs(mat - p @ mat @ p).max() < ANTISYM_RESIDUAL:
        return ConcurrenceResult(1.0, Certainty.EXACT, {"method": "antisym_projector"})
    if _unit_concurrence_on_support(mat, m, n):
        return ConcurrenceResult(1.0, Certainty.EXACT, {"method": "antisym_local_equivalent"})
    return None
