"""Indefinite metrics, orthonormal frames, causal classification, exterior powers.

Everything here works on small dense matrices (dimension of order ten or less),
so compound matrices are materialized explicitly and frames are built by a
metric-aware modified Gram-Schmidt sweep.  Conventions used throughout the
package:

* Lorentzian signature is (-, +, ..., +) and frame index 0 is the timelike leg.
* The degree-j exterior power of a matrix is the compound matrix whose (I, J)
  entry is the j-by-j minor with rows I and columns J, with strictly increasing
  multi-indices enumerated in lexicographic order.  No factorial normalization
  is applied, so the trace of the degree-j compound equals the j-th elementary
  symmetric polynomial of the eigenvalues on the nose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .errors import ConditioningError

# Relative symmetry slack accepted on metric inputs.
SYMMETRY_RTOL = 1e-12
# Worst allowed |g(e_a, e_b) - eta_ab| for a frame to count as orthonormal.
FRAME_ATOL = 1e-10
# Euclidean norms below this absolute floor classify a vector as zero.
ZERO_FLOOR = 1e-12
# Metrics with symmetric condition number above this are rejected outright.
DEFAULT_CONDITION_BOUND = 1e8
# Default relative tolerance for borderline causal classification.
CAUSAL_TOL = 1e-9


def _as_square(entries, name: str) -> np.ndarray:
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def _check_symmetric(m: np.ndarray, name: str) -> np.ndarray:
    scale = max(float(np.max(np.abs(m))), 1.0)
    if np.max(np.abs(m - m.T)) > SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} is not symmetric to within {SYMMETRY_RTOL} relative")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class LorentzianMetric:
    """Symmetric matrix of signature (-, +, ..., +) on the source tangent space.

    Construction validates shape, symmetry, signature, and conditioning;
    metrics whose symmetric condition number exceeds ``condition_bound`` raise
    ConditioningError rather than silently producing garbage verdicts.
    """

    entries: np.ndarray
    condition_bound: float = DEFAULT_CONDITION_BOUND

    def __post_init__(self):
        m = _check_symmetric(_as_square(self.entries, "metric"), "metric")
        object.__setattr__(self, "entries", m)
        w = np.linalg.eigvalsh(m)
        if w[0] >= 0.0 or (m.shape[0] > 1 and w[1] <= 0.0):
            raise ValueError(
                f"metric eigenvalues {w} do not have signature (-, +, ..., +)"
            )
        if np.max(np.abs(w)) > self.condition_bound * np.min(np.abs(w)):
            raise ConditioningError(
                f"metric condition number exceeds {self.condition_bound:.1e}"
            )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.entries)

    def inner(self, u, v) -> float:
        """Evaluate g(u, v)."""
        return float(np.asarray(u) @ self.entries @ np.asarray(v))


@dataclass(frozen=True)
class RiemannianMetric:
    """Symmetric positive definite matrix on the target tangent space."""

    entries: np.ndarray
    condition_bound: float = DEFAULT_CONDITION_BOUND

    def __post_init__(self):
        m = _check_symmetric(_as_square(self.entries, "target metric"), "target metric")
        object.__setattr__(self, "entries", m)
        w = np.linalg.eigvalsh(m)
        if w[0] <= 0.0:
            raise ValueError(f"target metric eigenvalues {w} are not all positive")
        if w[-1] > self.condition_bound * w[0]:
            raise ConditioningError(
                f"target metric condition number exceeds {self.condition_bound:.1e}"
            )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class OrthonormalFrame:
    """Metric-orthonormal basis stored column-wise; column 0 is the timelike leg."""

    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", _as_square(self.basis, "frame basis"))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vector(self, a: int) -> np.ndarray:
        return self.basis[:, a]

    def gram(self, metric: LorentzianMetric) -> np.ndarray:
        return self.basis.T @ metric.entries @ self.basis

    def validate(self, metric: LorentzianMetric, atol: float = FRAME_ATOL) -> None:
        """Check g(e_a, e_b) = diag(-1, 1, ..., 1) entrywise to within atol."""
        target = np.eye(self.dim)
        target[0, 0] = -1.0
        err = float(np.max(np.abs(self.gram(metric) - target)))
        if err > atol:
            raise ValueError(f"frame fails orthonormality by {err:.3e} > {atol:.1e}")


@lru_cache(maxsize=None)
def _multi_indices(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(dim), degree))


@dataclass(frozen=True)
class WedgeBasis:
    """Strictly increasing index subsets of one degree, in lexicographic order."""

    dim: int
    degree: int
    multi_indices: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.multi_indices)


def wedge_basis(dim: int, degree: int) -> WedgeBasis:
    if not 0 <= degree <= dim:
        raise ValueError(f"wedge degree {degree} out of range for dimension {dim}")
    return WedgeBasis(dim=dim, degree=degree, multi_indices=_multi_indices(dim, degree))


def exterior_power(a, degree: int) -> np.ndarray:
    """Degree-j compound matrix of ``a``: entry (I, J) is the minor det a[I, J].

    Rows and columns run over the lexicographic j-subsets of {0, .., dim-1}.
    Degree 1 returns ``a`` itself and degree ``dim`` the 1x1 matrix [det a].
    """
    a = _as_square(a, "matrix")
    dim = a.shape[0]
    if not 1 <= degree <= dim:
        raise ValueError(f"compound degree must lie in [1, {dim}], got {degree}")
    if degree == 1:
        return a.copy()
    idx = np.array(_multi_indices(dim, degree))
    # Stack all (I, J) submatrices into one (C, C, j, j) block and batch the dets.
    rows = idx[:, None, :, None]
    cols = idx[None, :, None, :]
    return np.linalg.det(a[rows, cols])


def principal_minor_sum(a, degree: int) -> float:
    """Sum of all principal j-by-j minors of ``a`` (the compound trace)."""
    a = _as_square(a, "matrix")
    idx = np.array(_multi_indices(a.shape[0], degree))
    sub = a[idx[:, :, None], idx[:, None, :]]
    return float(np.sum(np.linalg.det(sub)))


def induced_metric_on_wedge(q, degree: int) -> np.ndarray:
    """Gram matrix induced on degree-j wedges by a symmetric bilinear form.

    For q symmetric the compound is symmetric too; the result is symmetrized to
    kill roundoff drift.  Positive semidefinite q induces a positive
    semidefinite wedge Gram matrix.
    """
    q = _check_symmetric(_as_square(q, "bilinear form"), "bilinear form")
    out = exterior_power(q, degree)
    return 0.5 * (out + out.T)


def orthonormalize(metric: LorentzianMetric, seed_timelike) -> OrthonormalFrame:
    """Extend a timelike seed to a metric-orthonormal frame.

    The seed is normalized to g(e_0, e_0) = -1; the spacelike legs come from a
    modified Gram-Schmidt sweep over the coordinate basis in index order,
    skipping candidates that collapse into the span built so far.
    """
    g = metric.entries
    dim = metric.dim
    seed = np.asarray(seed_timelike, dtype=float)
    if seed.shape != (dim,):
        raise ValueError(f"seed vector has shape {seed.shape}, expected ({dim},)")
    norm2 = float(seed @ g @ seed)
    if norm2 >= 0.0:
        raise ValueError("seed vector is not timelike for this metric")
    frame = [seed / np.sqrt(-norm2)]
    gscale = float(np.max(np.abs(g)))
    for k in range(dim):
        if len(frame) == dim:
            break
        v = np.zeros(dim)
        v[k] = 1.0
        for e in frame:
            v = v - (float(v @ g @ e) / float(e @ g @ e)) * e
        vv = float(v @ v)
        if vv <= FRAME_ATOL**2:
            continue  # candidate already spanned
        vg = float(v @ g @ v)
        # The g-orthocomplement of a timelike leg is spacelike, so a genuinely
        # independent residual must have solidly positive g-norm.
        if vg <= ZERO_FLOOR * gscale * vv:
            raise ConditioningError(
                "Gram-Schmidt residual is numerically null; metric too degenerate"
            )
        frame.append(v / np.sqrt(vg))
    if len(frame) != dim:
        raise ConditioningError("Gram-Schmidt sweep did not produce a full frame")
    out = OrthonormalFrame(np.column_stack(frame))
    try:
        out.validate(metric)
    except ValueError as exc:
        raise ConditioningError(f"frame validation failed: {exc}") from exc
    return out


def canonical_frame(metric: LorentzianMetric) -> OrthonormalFrame:
    """Deterministic orthonormal frame depending only on the metric entries.

    Seeds with the first coordinate direction when it is timelike, otherwise
    with the eigenvector of the single negative eigenvalue, sign-fixed so its
    largest-magnitude component is positive.
    """
    dim = metric.dim
    seed = np.zeros(dim)
    seed[0] = 1.0
    if metric.inner(seed, seed) >= 0.0:
        w, vecs = np.linalg.eigh(metric.entries)
        seed = vecs[:, 0]
        pivot = int(np.argmax(np.abs(seed)))
        if seed[pivot] < 0.0:
            seed = -seed
    return orthonormalize(metric, seed)


class CausalClass(str, Enum):
    """Causal character of a tangent vector, time-oriented by a reference."""

    FUTURE_TIMELIKE = "future-timelike"
    FUTURE_NULL = "future-null"
    PAST_TIMELIKE = "past-timelike"
    PAST_NULL = "past-null"
    SPACELIKE = "spacelike"
    ZERO = "zero"

    @property
    def is_past_causal(self) -> bool:
        return self in (CausalClass.PAST_TIMELIKE, CausalClass.PAST_NULL)

    @property
    def is_causal(self) -> bool:
        return self in (
            CausalClass.FUTURE_TIMELIKE,
            CausalClass.FUTURE_NULL,
            CausalClass.PAST_TIMELIKE,
            CausalClass.PAST_NULL,
        )


def causal_classify(
    metric: LorentzianMetric,
    reference_timelike,
    vector,
    tol: float = CAUSAL_TOL,
    zero_floor: float = ZERO_FLOOR,
) -> CausalClass:
    """Classify ``vector`` as timelike/null/spacelike/zero with a time orientation.

    ``reference_timelike`` fixes the future direction: vectors with
    g(reference, vector) > 0 point to the past (signature (-, +, ..., +) makes
    the g-product of two future-pointing causal vectors negative).  The null
    band is |g(v, v)| <= tol * ||g||_F * ||v||_2^2, so the verdict is invariant
    under positive rescaling of either argument; Euclidean norms below
    ``zero_floor`` classify as zero outright.
    """
    g = metric.entries
    x = np.asarray(reference_timelike, dtype=float)
    y = np.asarray(vector, dtype=float)
    if float(x @ g @ x) >= 0.0:
        raise ValueError("reference vector is not timelike")
    ynorm2 = float(y @ y)
    if np.sqrt(ynorm2) <= zero_floor:
        return CausalClass.ZERO
    q = float(y @ g @ y)
    scale = float(np.linalg.norm(g)) * ynorm2
    toward_past = float(x @ g @ y) > 0.0
    if abs(q) <= tol * scale:
        return CausalClass.PAST_NULL if toward_past else CausalClass.FUTURE_NULL
    if q < 0.0:
        return CausalClass.PAST_TIMELIKE if toward_past else CausalClass.FUTURE_TIMELIKE
    return CausalClass.SPACELIKE
