"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the library's own algorithms: determinants
by cofactor expansion, rank by Gaussian elimination, elementary symmetric
polynomials straight from eigenvalue subsets.  Tests compare library outputs
against these, not against other library outputs.
"""

import itertools

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def cofactor_det(a) -> float:
    """Determinant by first-row cofactor expansion; O(n!) but independent."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1.0) ** j * a[0, j] * cofactor_det(minor)
    return total


def elimination_rank(a, rtol=1e-10) -> int:
    """Rank by Gauss-Jordan elimination with partial pivoting."""
    m = np.array(a, dtype=float, copy=True)
    if m.size == 0:
        return 0
    rows, cols = m.shape
    scale = max(float(np.max(np.abs(m))), 1.0)
    rank = 0
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        pivot = row + int(np.argmax(np.abs(m[row:, col])))
        if abs(m[pivot, col]) <= rtol * scale:
            continue
        m[[row, pivot]] = m[[pivot, row]]
        m[row] = m[row] / m[row, col]
        for rr in range(rows):
            if rr != row:
                m[rr] = m[rr] - m[rr, col] * m[row]
        row += 1
        rank += 1
    return rank


def elementary_from_eigenvalues(eigs, degree: int) -> complex:
    """Elementary symmetric polynomial as an explicit sum over subsets."""
    return sum(np.prod(c) for c in itertools.combinations(eigs, degree))


def random_metric_entries(rng, dim: int, eps: float = 0.3) -> np.ndarray:
    """Raw entries of a random Lorentzian metric g = L^T eta L, L = I + eps R."""
    eta = np.eye(dim)
    eta[0, 0] = -1.0
    ell = np.eye(dim) + eps * rng.uniform(-1.0, 1.0, size=(dim, dim))
    g = ell.T @ eta @ ell
    return 0.5 * (g + g.T)


def random_spd_entries(rng, dim: int, ridge: float = 0.1) -> np.ndarray:
    a = rng.uniform(-1.0, 1.0, size=(dim, dim))
    h = a.T @ a + ridge * np.eye(dim)
    return 0.5 * (h + h.T)


def fd_gradient(func, v, step=1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar function of a vector."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    for i in range(v.size):
        up = v.copy()
        dn = v.copy()
        up[i] += step
        dn[i] -= step
        out[i] = (func(up) - func(dn)) / (2.0 * step)
    return out
