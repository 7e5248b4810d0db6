"""Stress-energy tensors of invariant Lagrangians, three ways.

* ``stress_elementary`` evaluates the closed form for the degree-j elementary
  invariant: T_j = sym(P M_j) - (s_j / 2) g with M_j the polynomial gradient
  of s_j in the strain.
* ``stress_general`` assembles a general Lagrangian's tensor from the
  elementary ones: T = sum_j dF/ds_j T_j - ((F - grad F . s) / 2) g.
* ``stress_variational`` differentiates the Lagrangian density with respect to
  the inverse metric by central differences.  It shares no algebra with the
  closed forms, which is what makes it an oracle for them.

``wedge_decomposition`` splits frame components of T_j into sums of Gram
minors of the pulled-back metric, the combinatorial form used to reason about
energy positivity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StepError
from .lagrangians import LagrangianSpec
from .multilinear import OrthonormalFrame, _as_square
from .strain import PointGeometry, charpoly_coefficients, strain

# Step retries shrink by this factor when a perturbed metric leaves the
# Lorentzian cone or the Lagrangian domain.
STEP_SHRINK = 10.0
DEFAULT_MAX_RETRIES = 3

PROVENANCES = ("closed_form", "combination", "variational_oracle")


@dataclass(frozen=True)
class StressEnergy:
    """Symmetric covariant stress-energy tensor and how it was produced."""

    tensor: np.ndarray
    provenance: str
    lagrangian_name: str

    @property
    def dim(self) -> int:
        return self.tensor.shape[0]


def invariant_gradient_matrix(d, s_full, degree: int) -> np.ndarray:
    """Matrix gradient of s_degree in the strain: sum_i (-1)^i s_{degree-1-i} d^i.

    ``s_full`` is the invariant vector prefixed with s_0 = 1.
    """
    d = _as_square(d, "strain matrix")
    dim = d.shape[0]
    if not 1 <= degree <= dim:
        raise ValueError(f"invariant degree must lie in [1, {dim}], got {degree}")
    m = np.zeros_like(d)
    power = np.eye(dim)
    for i in range(degree):
        m = m + (-1) ** i * s_full[degree - 1 - i] * power
        if i < degree - 1:
            power = power @ d
    return m


def _elementary_tensors(
    g: np.ndarray, pull: np.ndarray, d: np.ndarray, s_full: np.ndarray
) -> np.ndarray:
    """Stack of all elementary stress tensors, T_j at index j-1."""
    dim = d.shape[0]
    powers = [np.eye(dim)]
    for _ in range(dim - 1):
        powers.append(d @ powers[-1])
    out = np.empty((dim, dim, dim))
    for j in range(1, dim + 1):
        m = np.zeros_like(d)
        for i in range(j):
            m = m + (-1) ** i * s_full[j - 1 - i] * powers[i]
        pm = pull @ m
        out[j - 1] = 0.5 * (pm + pm.T) - 0.5 * s_full[j] * g
    return out


def stress_elementary(geom: PointGeometry, degree: int) -> StressEnergy:
    """Closed-form stress-energy of the degree-j elementary invariant."""
    st = strain(geom)
    if not 1 <= degree <= st.dim:
        raise ValueError(f"invariant degree must lie in [1, {st.dim}], got {degree}")
    s = charpoly_coefficients(st.matrix)
    s_full = np.concatenate(([1.0], s))
    m = invariant_gradient_matrix(st.matrix, s_full, degree)
    pm = st.pullback @ m
    t = 0.5 * (pm + pm.T) - 0.5 * s[degree - 1] * geom.metric.entries
    return StressEnergy(
        tensor=t, provenance="closed_form", lagrangian_name=f"s_{degree}"
    )


def stress_general(geom: PointGeometry, lagr: LagrangianSpec) -> StressEnergy:
    """Stress-energy of a general Lagrangian via the combination formula.

    T = sum_j dF/ds_j T_j - ((F - grad F . s) / 2) g, which reduces to the
    closed form when F picks out a single invariant.
    """
    if lagr.dim != geom.dim:
        raise ValueError(
            f"lagrangian dimension {lagr.dim} does not match geometry {geom.dim}"
        )
    st = strain(geom)
    s = charpoly_coefficients(st.matrix)
    if not bool(lagr.domain_predicate(s)):
        raise DomainError(
            f"strain invariants lie outside the domain of {lagr.name}", vector=s
        )
    grad = np.asarray(lagr.gradient(s), dtype=float)
    f = float(lagr.evaluate(s))
    s_full = np.concatenate(([1.0], s))
    tensors = _elementary_tensors(geom.metric.entries, st.pullback, st.matrix, s_full)
    t = np.tensordot(grad, tensors, axes=1)
    t = t - 0.5 * (f - float(grad @ s)) * geom.metric.entries
    return StressEnergy(tensor=t, provenance="combination", lagrangian_name=lagr.name)


class _StepLoss(Exception):
    """Internal: a perturbed metric left the Lorentzian cone or the domain."""


def stress_variational(
    geom: PointGeometry,
    lagr: LagrangianSpec,
    step: float | None = None,
    *,
    richardson: bool = False,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> StressEnergy:
    """Finite-difference oracle for the stress-energy tensor.

    Differentiates L sqrt|det g| with respect to each inverse-metric component
    (symmetrized basis directions) by central differences, then removes the
    volume factor.  The default step is 1e-6 times the inverse-metric norm; if
    a perturbation breaks the metric signature or exits the Lagrangian domain
    the step shrinks tenfold, up to ``max_retries`` times, before StepError.
    ``richardson=True`` adds one extrapolation level to cancel the leading
    quadratic error term.
    """
    if lagr.dim != geom.dim:
        raise ValueError(
            f"lagrangian dimension {lagr.dim} does not match geometry {geom.dim}"
        )
    g = geom.metric.entries
    gi0 = geom.metric.inverse()
    pull = geom.pullback()
    dim = geom.dim
    sqrt_det_g = float(np.sqrt(abs(np.linalg.det(g))))

    s0 = charpoly_coefficients(gi0 @ pull)
    if not bool(lagr.domain_predicate(s0)):
        raise DomainError(
            f"strain invariants lie outside the domain of {lagr.name}", vector=s0
        )

    def density(gi: np.ndarray) -> float:
        w = np.linalg.eigvalsh(0.5 * (gi + gi.T))
        if w[0] >= 0.0 or (dim > 1 and w[1] <= 0.0):
            raise _StepLoss("perturbed inverse metric lost Lorentzian signature")
        s = charpoly_coefficients(gi @ pull)
        if not bool(lagr.domain_predicate(s)):
            raise _StepLoss("perturbed invariants left the Lagrangian domain")
        f = float(lagr.evaluate(s))
        return f / float(np.sqrt(abs(np.linalg.det(gi))))

    def tensor_at(h: float) -> np.ndarray:
        t = np.empty((dim, dim))
        for a in range(dim):
            for b in range(a, dim):
                v = np.zeros((dim, dim))
                if a == b:
                    v[a, a] = 1.0
                else:
                    v[a, b] = v[b, a] = 0.5
                diff = density(gi0 + h * v) - density(gi0 - h * v)
                t[a, b] = t[b, a] = diff / (2.0 * h) / sqrt_det_g
        return t

    h = 1e-6 * float(np.linalg.norm(gi0)) if step is None else float(step)
    if h <= 0.0:
        raise ValueError("finite-difference step must be positive")
    last = None
    for _ in range(max_retries + 1):
        try:
            t = tensor_at(h)
            if richardson:
                t = (4.0 * tensor_at(0.5 * h) - t) / 3.0
            return StressEnergy(
                tensor=t, provenance="variational_oracle", lagrangian_name=lagr.name
            )
        except _StepLoss as exc:
            last = exc
            h /= STEP_SHRINK
    raise StepError(
        f"no usable finite-difference step after {max_retries + 1} attempts "
        f"(final step {h * STEP_SHRINK:.3e})"
    ) from last


def stress_scale(geom: PointGeometry, degree: int) -> float:
    """A-priori magnitude scale of T_degree, for relative vanishing tests.

    Bounds ||sym(P M_degree)|| + ||s_degree g|| / 2 via norms of the pullback
    and strain, so a tensor is 'numerically zero' when its norm is tiny
    against this.
    """
    st = strain(geom)
    s = charpoly_coefficients(st.matrix)
    s_full = np.concatenate(([1.0], s))
    return _scale_elementary(
        float(np.linalg.norm(st.pullback)),
        float(np.linalg.norm(st.matrix)),
        float(np.linalg.norm(geom.metric.entries)),
        np.abs(s_full),
        degree,
    )


def _scale_elementary(
    pull_norm: float, d_norm: float, g_norm: float, s_abs_full: np.ndarray, degree: int
) -> float:
    m_bound = 0.0
    power = 1.0
    for i in range(degree):
        m_bound += s_abs_full[degree - 1 - i] * power
        power *= d_norm
    return pull_norm * m_bound + 0.5 * s_abs_full[degree] * g_norm


def stress_scale_general(geom: PointGeometry, lagr: LagrangianSpec) -> float:
    """A-priori magnitude scale of the combination-formula tensor."""
    st = strain(geom)
    s = charpoly_coefficients(st.matrix)
    s_full = np.concatenate(([1.0], s))
    grad = np.abs(np.asarray(lagr.gradient(s), dtype=float))
    f = float(lagr.evaluate(s))
    pn = float(np.linalg.norm(st.pullback))
    dn = float(np.linalg.norm(st.matrix))
    gn = float(np.linalg.norm(geom.metric.entries))
    total = sum(
        grad[j - 1] * _scale_elementary(pn, dn, gn, np.abs(s_full), j)
        for j in range(1, geom.dim + 1)
    )
    return total + 0.5 * (abs(f) + float(grad @ np.abs(s))) * gn


@dataclass(frozen=True)
class WedgeDecomposition:
    """Frame components of an elementary stress tensor as Gram-minor sums.

    All minors are taken in the pulled-back metric expressed in an orthonormal
    frame.  ``perp_sum`` runs over degree-j wedges containing the timelike
    leg, ``parallel_sum`` over purely spacelike wedges, and row i-1 of
    ``mixed_terms`` holds the minors pairing (e_0 ^ eta) with (e_i ^ eta) over
    spacelike (j-1)-subsets eta in lexicographic order.
    """

    degree: int
    perp_sum: float
    parallel_sum: float
    mixed_terms: np.ndarray

    @property
    def energy(self) -> float:
        """T_j(e_0, e_0) reconstructed from the split."""
        return 0.5 * (self.perp_sum + self.parallel_sum)

    @property
    def momentum(self) -> np.ndarray:
        """T_j(e_0, e_i) for each spacelike leg, from the mixed minors."""
        return self.mixed_terms.sum(axis=1)


def wedge_decomposition(
    geom: PointGeometry, degree: int, frame: OrthonormalFrame
) -> WedgeDecomposition:
    """Split frame components of T_degree into Gram minors of the pullback.

    The frame must be orthonormal for the geometry's metric; the identities
    T_j(e_0, e_0) = (perp_sum + parallel_sum) / 2 and
    T_j(e_0, e_i) = sum of mixed minors then hold up to roundoff.
    """
    dim = geom.dim
    if not 1 <= degree <= dim:
        raise ValueError(f"invariant degree must lie in [1, {dim}], got {degree}")
    frame.validate(geom.metric)
    pf = frame.basis.T @ geom.pullback() @ frame.basis
    spatial = range(1, dim)

    perp = 0.0
    for alpha in itertools.combinations(spatial, degree - 1):
        rows = (0,) + alpha
        perp += float(np.linalg.det(pf[np.ix_(rows, rows)]))
    par = 0.0
    for alpha in itertools.combinations(spatial, degree):
        par += float(np.linalg.det(pf[np.ix_(alpha, alpha)]))

    etas = list(itertools.combinations(spatial, degree - 1))
    mixed = np.zeros((dim - 1, len(etas)))
    for i in spatial:
        for k, eta in enumerate(etas):
            rows = (0,) + eta
            cols = (i,) + eta
            # A repeated column index makes the minor vanish identically,
            # matching the vanishing of e_i ^ eta.
            mixed[i - 1, k] = float(np.linalg.det(pf[np.ix_(rows, cols)]))
    return WedgeDecomposition(
        degree=degree, perp_sum=perp, parallel_sum=par, mixed_terms=mixed
    )
