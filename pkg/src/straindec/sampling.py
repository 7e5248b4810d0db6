"""Deterministic random instance generation for verification campaigns.

Reproducibility contract: every sample owns an independent generator derived
as PCG64(SeedSequence(master_seed, spawn_key=(sample_index,))), so campaigns
give identical results no matter how samples are distributed over workers.
Within one sample the draw order is fixed: metric factor(s) first (redrawn
whole on a conditioning retry), then the target-metric factor, then dphi,
then direction parameters (rapidities, then sphere normals).
"""

from __future__ import annotations

import numpy as np

from .errors import ConditioningError
from .multilinear import DEFAULT_CONDITION_BOUND, LorentzianMetric, RiemannianMetric
from .strain import PointGeometry

# Metric perturbation amplitude: g = L^T eta L with L = I + PERTURBATION * R.
PERTURBATION = 0.25
# SPD ridge added to the random Gram target metric.
RIDGE = 0.1
# Fresh metric draws attempted before giving up on the condition bound.
MAX_METRIC_TRIES = 20
# Default rapidity cap for boosted timelike directions.
BOOST_CAP = 5.0


def derive_rng(master_seed: int, index: int) -> np.random.Generator:
    """Per-sample generator: a pure function of (master seed, sample index)."""
    if not 0 <= int(master_seed) < 2**64:
        raise ValueError("master seed must fit in 64 unsigned bits")
    if index < 0:
        raise ValueError("sample index must be nonnegative")
    return np.random.default_rng(
        np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    )


def draw_geometry_arrays(
    rng: np.random.Generator,
    m_plus_1: int,
    n: int,
    entry_range: float = 1.0,
    rank_override: int | None = None,
    *,
    perturbation: float = PERTURBATION,
    ridge: float = RIDGE,
    condition_bound: float = DEFAULT_CONDITION_BOUND,
    max_tries: int = MAX_METRIC_TRIES,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Raw (g, h, dphi, metric_retries) draws behind ``sample_geometry``.

    Kept separate so the batch engine can consume the exact same stream of
    draws without building dataclasses per sample.
    """
    if m_plus_1 < 1 or n < 1:
        raise ValueError("dimensions must be at least 1")
    if entry_range < 0.0:
        raise ValueError("entry_range must be nonnegative")
    if rank_override is not None and not 0 <= rank_override <= min(m_plus_1, n):
        raise ValueError(
            f"rank_override {rank_override} outside [0, {min(m_plus_1, n)}]"
        )
    eta = np.eye(m_plus_1)
    eta[0, 0] = -1.0
    retries = 0
    g = None
    for _ in range(max_tries):
        r = rng.uniform(-1.0, 1.0, size=(m_plus_1, m_plus_1))
        ell = np.eye(m_plus_1) + perturbation * r
        cand = ell.T @ eta @ ell
        cand = 0.5 * (cand + cand.T)
        w = np.linalg.eigvalsh(cand)
        ok_sig = w[0] < 0.0 and (m_plus_1 == 1 or w[1] > 0.0)
        if ok_sig and np.max(np.abs(w)) <= condition_bound * np.min(np.abs(w)):
            g = cand
            break
        retries += 1
    if g is None:
        raise ConditioningError(
            f"no metric satisfying the condition bound after {max_tries} draws"
        )
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    h = a.T @ a + ridge * np.eye(n)
    h = 0.5 * (h + h.T)
    dphi = rng.uniform(-entry_range, entry_range, size=(n, m_plus_1))
    if rank_override is not None:
        if rank_override == 0:
            dphi = np.zeros((n, m_plus_1))
        else:
            u, sv, vt = np.linalg.svd(dphi, full_matrices=False)
            sv[rank_override:] = 0.0
            dphi = (u * sv) @ vt
    return g, h, dphi, retries


def sample_geometry(
    m_plus_1: int,
    n: int,
    entry_range: float = 1.0,
    rank_override: int | None = None,
    rng: np.random.Generator | None = None,
    **draw_kwargs,
) -> PointGeometry:
    """Draw one random geometry: g = L^T eta L, h = A^T A + ridge I, dphi uniform.

    ``rank_override`` truncates the singular values of dphi so its rank is
    exact (0 produces the zero map).  Deterministic given the generator state.
    """
    if rng is None:
        rng = np.random.default_rng()
    g, h, dphi, _ = draw_geometry_arrays(
        rng, m_plus_1, n, entry_range, rank_override, **draw_kwargs
    )
    return PointGeometry(
        metric=LorentzianMetric(g), target_metric=RiemannianMetric(h), dphi=dphi
    )


def draw_direction_params(
    rng: np.random.Generator, count: int, spatial_dim: int, boost_cap: float = BOOST_CAP
) -> tuple[np.ndarray, np.ndarray]:
    """Raw rapidities and sphere normals for ``count`` timelike directions."""
    if count < 1:
        raise ValueError("need at least one direction")
    if boost_cap < 0.0:
        raise ValueError("boost_cap must be nonnegative")
    rapidity = rng.uniform(0.0, boost_cap, size=count)
    normals = rng.normal(size=(count, spatial_dim))
    return rapidity, normals


def assemble_directions(basis, rapidity, normals) -> np.ndarray:
    """Boost the frame's timelike leg: X = cosh(r) e_0 + sinh(r) (unit u . e_spatial)."""
    basis = np.asarray(basis, dtype=float)
    dim = basis.shape[0]
    rapidity = np.asarray(rapidity, dtype=float)
    if dim == 1:
        return np.tile(basis[:, 0], (rapidity.size, 1))
    normals = np.asarray(normals, dtype=float)
    lengths = np.linalg.norm(normals, axis=1, keepdims=True)
    fallback = np.zeros(dim - 1)
    fallback[0] = 1.0
    unit = np.where(lengths > 0.0, normals / np.where(lengths == 0.0, 1.0, lengths), fallback)
    return (
        np.cosh(rapidity)[:, None] * basis[:, 0]
        + np.sinh(rapidity)[:, None] * (unit @ basis[:, 1:].T)
    )


def sample_timelike_directions(
    basis, rng: np.random.Generator, count: int, boost_cap: float = BOOST_CAP
) -> np.ndarray:
    """Sample unit timelike vectors boosted off an orthonormal frame.

    Rapidities are uniform on [0, boost_cap] and spatial directions uniform on
    the sphere, so the rows satisfy g(X, X) = -1 up to roundoff.
    """
    basis = np.asarray(basis, dtype=float)
    rapidity, normals = draw_direction_params(rng, count, basis.shape[0] - 1, boost_cap)
    return assemble_directions(basis, rapidity, normals)
