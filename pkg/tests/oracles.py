"""Reference computations that share no code with the package.

Each one takes a different route from the implementation it checks:
explicit loops instead of reshapes, general non-Hermitian eigensolvers
instead of the Hermitian sandwich form, closed forms where they exist.
"""

import itertools

import numpy as np

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def partial_trace_loops(rho, dims, keep):
    """Partial trace by summing matrix elements over explicit multi-indices."""
    keep = sorted(keep)
    kd = [dims[i] for i in keep]
    d = int(np.prod(kd))
    out = np.zeros((d, d), dtype=complex)
    for row in itertools.product(*[range(x) for x in dims]):
        for col in itertools.product(*[range(x) for x in dims]):
            if any(row[i] != col[i] for i in range(len(dims)) if i not in keep):
                continue
            r = np.ravel_multi_index(tuple(row), dims)
            c = np.ravel_multi_index(tuple(col), dims)
            rk = np.ravel_multi_index(tuple(row[i] for i in keep), kd)
            ck = np.ravel_multi_index(tuple(col[i] for i in keep), kd)
            out[rk, ck] += rho[r, c]
    return out


def purity_concurrence_sq(amps, dims, left):
    rho = np.outer(amps, np.conj(amps))
    red = partial_trace_loops(rho, dims, left)
    return 2.0 * (1.0 - np.trace(red @ red).real)


def wootters_oracle(rho):
    """Concurrence from the eigenvalues of the non-Hermitian product rho * rho_tilde."""
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    rt = yy @ rho.conj() @ yy
    ev = np.sort(np.linalg.eigvals(rho @ rt).real)[::-1]
    # roundoff zeros of rank-deficient states are ~1e-16; their square roots are not
    ev[ev < 1e-12] = 0.0
    lam = np.sqrt(ev)
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def werner_concurrence(p):
    return max(0.0, (3 * p - 1) / 2)


def werner(p):
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4


def hyperdeterminant_tangle(amps):
    """Three-qubit residual tangle 4|d1 - 2 d2 + 4 d3| (Cayley hyperdeterminant)."""
    a = {tuple(int(b) for b in f"{i:03b}"): amps[i] for i in range(8)}
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
          + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return 4 * abs(d1 - 2 * d2 + 4 * d3)


def levi_civita_state():
    """Amplitudes of sum_perm sign |perm> / sqrt(6), built from determinants."""
    amps = np.zeros(27)
    for p in itertools.permutations(range(3)):
        amps[9 * p[0] + 3 * p[1] + p[2]] = np.linalg.det(np.eye(3)[list(p)]) / np.sqrt(6)
    return amps
