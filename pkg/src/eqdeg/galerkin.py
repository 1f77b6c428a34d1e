"""Spectral Galerkin truncation of gradient perturbations and the stabilized degree.

A local map is f(x) = Ax - F(x) with A a self-adjoint operator with
discrete spectrum and F a (compact) gradient nonlinearity.  Its truncation
to the cumulative eigenspace V_n is a finite-dimensional equivariant
gradient field; the degree of the full map is the truncated degree times a
correction factor m_n, the product of the inverted linear degrees of A on
the first n spectral shells.  The correction makes the value independent
of n, which this module verifies empirically by recomputing at n+1 (and
deeper on request) instead of trusting the asymptotic argument.

Boundary margins and tail bounds are estimated by sampling, not proved:
epsilon is half the smallest sampled |f| on the truncated domain boundary
at a finer reference level, and the tail is the largest sampled norm of
the nonlinearity's components beyond V_n.  Diagnostics always record the
sample budget and margin ratio.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .domains import Ball, IntersectionDomain, ProductDomain, UnionDomain
from .errors import (
    BoundaryZero,
    DegreeError,
    MarginFailure,
    SliceMarginFailure,
    StabilizationFailure,
)
from .euler_ring import (
    CIRCLE,
    DirectLimitClass,
    RingElement,
    limit_class_equal,
    ring_element_from_json,
    ring_element_to_json,
    unit,
)
from .finite_degree import BOUNDARY_PER_DIM, GradientField, grad_degree, linear_degree
from .polynomials import Polynomial
from .reps import Rep, SpectralOperator, canonical_layout, concat_layouts, shell_operator

DEFAULT_REFERENCE_OFFSET = 4
BOUNDARY_ZERO_TOL = 1e-10


class ShellBasis:
    """Eigencoordinates of the cumulative space V_level, shell by shell.

    Coordinates are ordered by shell, then by eigenvalue within the shell,
    then by the canonical layout of each eigenspace, so the coordinates of
    V_n are a prefix of those of V_m for n <= m and orthogonal projection
    onto V_n is coordinate truncation.
    """

    def __init__(self, operator: SpectralOperator, level: int):
        self.operator = operator
        self.level = int(level)
        entries = []
        layouts = []
        eigs: list[float] = []
        prefix = []
        offset = 0
        rep = Rep()
        for n in range(self.level + 1):
            for lam, r in operator.shell(n):
                entries.append((n, lam, r, offset))
                layouts.append(canonical_layout(r))
                eigs.extend([lam] * r.dim)
                offset += r.dim
                rep = rep + r
            prefix.append(offset)
        self.entries = tuple(entries)
        self.layout = concat_layouts(layouts)
        self.dim = offset
        self.rep = rep
        self.eigenvalues = np.asarray(eigs)
        self.graph_weights = 1.0 + self.eigenvalues**2
        self._prefix = prefix

    def prefix_dim(self, lower_level: int) -> int:
        """Dimension of V_lower inside this basis."""
        return self._prefix[lower_level]

    def pad(self, X: np.ndarray, target: "ShellBasis") -> np.ndarray:
        X = np.atleast_2d(X)
        out = np.zeros((len(X), target.dim))
        out[:, : self.dim] = X
        return out


@dataclass(frozen=True)
class BallSpec:
    """A graph-norm ball; the center lives in V_{center_level} and must be
    supported on trivial (fixed) coordinates."""

    radius: float
    center: tuple[float, ...] = ()
    center_level: int = 0


@dataclass(frozen=True)
class RegionSpec:
    balls: tuple[BallSpec, ...]
    mode: str = "union"  # or "intersection"

    @staticmethod
    def ball(radius: float, center: Sequence[float] = (), center_level: int = 0) -> "RegionSpec":
        return RegionSpec((BallSpec(radius, tuple(center), center_level),))


def realize_region(region, basis: ShellBasis):
    """Instantiate a region as a concrete domain over the basis coordinates."""
    if callable(region):
        return region(basis)
    balls = []
    fixed = set(basis.layout.trivial)
    for spec in region.balls:
        center = np.zeros(basis.dim)
        if spec.center:
            d = basis.prefix_dim(spec.center_level)
            if len(spec.center) != d:
                raise ValueError(
                    f"center has {len(spec.center)} coordinates, V_{spec.center_level} has {d}"
                )
            center[:d] = spec.center
            bad = [i for i in np.nonzero(center)[0] if i not in fixed]
            if bad:
                raise ValueError("ball centers must lie in the fixed-point space")
        balls.append(Ball(center, spec.radius, basis.graph_weights))
    if len(balls) == 1:
        return balls[0]
    if region.mode == "union":
        return UnionDomain(balls)
    if region.mode == "intersection":
        return IntersectionDomain(balls)
    raise ValueError(f"unknown region mode {region.mode!r}")


@dataclass
class LocalMapSpec:
    """A gradient perturbation f = Ax - F(x) of a spectral operator.

    ``nonlinearity(X, basis)`` receives an (m, basis.dim) batch of
    eigencoordinates of V_{basis.level} and must return the projection of
    F onto that space in the same coordinates.  ``region`` bounds the
    invariant domain in the graph norm.  ``min_level`` is the first
    truncation level at which the nonlinearity is meaningful.
    ``check_equivariance`` controls the sampled equivariance contract
    check; disabling it asserts the contract without verification.
    """

    operator: SpectralOperator
    nonlinearity: Callable
    region: object
    min_level: int = 1
    check_equivariance: bool = True
    name: str = "local map"

    def with_region(self, region) -> "LocalMapSpec":
        return dataclasses.replace(self, region=region)


def shell_field(f: LocalMapSpec, n: int, basis: Optional[ShellBasis] = None) -> GradientField:
    """The truncated field f_n = Ax - P_n F(x) on V_n as a gradient field."""
    basis = basis or ShellBasis(f.operator, n)
    eigs = basis.eigenvalues

    def value(X):
        X = np.atleast_2d(X)
        return X * eigs - f.nonlinearity(X, basis)

    return GradientField(
        rep=basis.rep,
        value=value,
        domain=realize_region(f.region, basis),
        layout=basis.layout,
        vectorized=True,
        name=f"{f.name} | V_{n}",
    )


def shell_degrees(op: SpectralOperator, n: int) -> tuple[RingElement, ...]:
    """Linear degrees a_1 .. a_n of the operator on its first n shells."""
    return tuple(linear_degree(shell_operator(op, i)) for i in range(1, n + 1))


def correction_factor(op: SpectralOperator, n: int) -> RingElement:
    """m_n: the product of the inverses of the shell degrees a_1 .. a_n."""
    out = unit(CIRCLE)
    for a in shell_degrees(op, n):
        inv = a.invert()
        assert inv is not None  # unit coefficient of a linear degree is +-1
        out = out * inv
    return out


def certify_margin(
    f: LocalMapSpec,
    n: int,
    *,
    seed: int = 0,
    budget: Optional[int] = None,
    reference_offset: int = DEFAULT_REFERENCE_OFFSET,
) -> tuple[float, float]:
    """Estimate the boundary margin and the projection tail at level n.

    Samples the boundary of the truncated domain in V_n, evaluates the map
    at a finer reference level m = n + reference_offset, and certifies when
    the sampled tail sup |(P_m - P_n) F| stays below epsilon = half the
    sampled min |f|.  Raises MarginFailure when it does not (raise n), and
    BoundaryZero when a sample sits numerically on the zero set.
    """
    op = f.operator
    basis_n = ShellBasis(op, n)
    if basis_n.dim == 0:
        raise MarginFailure(f"{f.name}: V_{n} is zero-dimensional; raise the level")
    m = n + reference_offset
    if op.max_level is not None:
        m = min(m, op.max_level)
    if m <= n:
        raise MarginFailure(f"{f.name}: no reference shells available above level {n}")
    basis_m = ShellBasis(op, m)
    rng = np.random.default_rng(seed)
    count = budget if budget is not None else BOUNDARY_PER_DIM * max(basis_n.dim, 1)
    domain_n = realize_region(f.region, basis_n)
    boundary = domain_n.boundary_samples(count, rng)
    Xm = basis_n.pad(boundary, basis_m)
    F = np.asarray(f.nonlinearity(Xm, basis_m), dtype=float)
    if not np.all(np.isfinite(F)):
        raise ValueError(f"{f.name}: nonlinearity not finite on boundary samples")
    residual = Xm * basis_m.eigenvalues - F
    norms = np.linalg.norm(residual, axis=1)
    smallest = float(norms.min())
    if smallest < BOUNDARY_ZERO_TOL:
        raise BoundaryZero(
            f"{f.name}: sampled |f| = {smallest:.3e} on the boundary at level {n}"
        )
    epsilon = 0.5 * smallest
    cut = basis_m.prefix_dim(n)
    tail = float(np.linalg.norm(F[:, cut:], axis=1).max()) if cut < basis_m.dim else 0.0
    if tail >= epsilon:
        raise MarginFailure(
            f"{f.name}: tail bound {tail:.3e} >= epsilon {epsilon:.3e} at level {n}"
        )
    return epsilon, tail


@dataclass(frozen=True)
class DegreeResult:
    """A stabilized degree with its certification evidence.

    ``stabilization`` holds the corrected values at consecutive levels
    (all equal by construction); ``limit_class`` is the level-N
    representative (N, deg f_N) with the shell degrees as multipliers.
    """

    value: RingElement
    level: int
    epsilon: float
    tail_bound: float
    stabilization: tuple[RingElement, ...]
    limit_class: DirectLimitClass
    diagnostics: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if any(v != self.value for v in self.stabilization):
            raise StabilizationFailure("stabilization values disagree with the result")
        if not self.limit_class_consistent():
            raise StabilizationFailure("limit class inconsistent with the corrected value")

    def limit_class_consistent(self) -> bool:
        anchor = DirectLimitClass(0, self.value, ())
        return limit_class_equal(anchor, self.limit_class)

    def to_json(self) -> dict:
        return {
            "value": ring_element_to_json(self.value),
            "level": self.level,
            "epsilon": self.epsilon,
            "tail_bound": self.tail_bound,
            "stabilization": [ring_element_to_json(v) for v in self.stabilization],
            "limit_class": {
                "level": self.limit_class.level,
                "value": ring_element_to_json(self.limit_class.value),
            },
        }


def degree_result_from_json(data: Mapping, group=CIRCLE) -> dict:
    """Decode the JSON form back into ring elements (round-trip helper)."""
    return {
        "value": ring_element_from_json(data["value"], group),
        "level": int(data["level"]),
        "epsilon": float(data["epsilon"]),
        "tail_bound": float(data["tail_bound"]),
        "stabilization": [ring_element_from_json(v, group) for v in data["stabilization"]],
        "limit_class": {
            "level": int(data["limit_class"]["level"]),
            "value": ring_element_from_json(data["limit_class"]["value"], group),
        },
    }


def deg_infinite(
    f: LocalMapSpec,
    *,
    level="auto",
    stabilization_depth: int = 1,
    seed: int = 0,
    max_level: int = 10,
    budget: Optional[int] = None,
    reference_offset: int = DEFAULT_REFERENCE_OFFSET,
) -> DegreeResult:
    """The stabilized degree m_N * deg(f_N) of a local map.

    With ``level="auto"`` the truncation level N is the first one whose
    margin certifies.  The value is recomputed at N+1 .. N+depth and exact
    agreement is required (StabilizationFailure otherwise).
    """
    if stabilization_depth < 1:
        raise ValueError("stabilization_depth must be >= 1")
    op = f.operator
    cap = max_level
    if op.max_level is not None:
        # certification at N + depth still needs reference shells above it
        cap = min(cap, op.max_level - stabilization_depth)

    if level == "auto":
        start = max(f.min_level, 1)
        if cap < start:
            raise MarginFailure(
                f"{f.name}: the declared spectrum is too short to certify any "
                f"truncation level (levels beyond N are needed as reference; "
                f"declared max level {op.max_level})"
            )
        N = None
        last: Optional[DegreeError] = None
        for n in range(start, cap + 1):
            try:
                epsilon, tail = certify_margin(
                    f, n, seed=seed, budget=budget, reference_offset=reference_offset
                )
                N = n
                break
            except MarginFailure as exc:
                last = exc
        if N is None:
            raise MarginFailure(
                f"{f.name}: no truncation level up to {cap} certified ({last})"
            )
    else:
        N = int(level)
        epsilon, tail = certify_margin(
            f, N, seed=seed, budget=budget, reference_offset=reference_offset
        )

    values: list[RingElement] = []
    degrees: list[RingElement] = []
    zero_counts: list[int] = []
    for j in range(stabilization_depth + 1):
        n = N + j
        if j:
            certify_margin(f, n, seed=seed, budget=budget, reference_offset=reference_offset)
        fld = shell_field(f, n)
        d, zeros = grad_degree(
            fld, seed=seed, check_equivariance=f.check_equivariance, return_zeros=True
        )
        values.append(correction_factor(op, n) * d)
        degrees.append(d)
        zero_counts.append(len(zeros))
    if any(v != values[0] for v in values[1:]):
        raise StabilizationFailure(
            f"{f.name}: corrected degree changed between levels {N} and {N + stabilization_depth}: "
            + " vs ".join(str(v) for v in values)
        )

    multipliers = shell_degrees(op, N)
    limit_class = DirectLimitClass(N, degrees[0], multipliers)
    sample_budget = budget if budget is not None else BOUNDARY_PER_DIM * ShellBasis(op, N).dim
    diagnostics = {
        "levels_checked": [N + j for j in range(stabilization_depth + 1)],
        "zero_counts": zero_counts,
        "sample_budget": sample_budget,
        "margin_ratio": (tail / epsilon) if epsilon > 0 else float("inf"),
        "uses_orbit_normalization": False,
    }
    return DegreeResult(
        value=values[0],
        level=N,
        epsilon=epsilon,
        tail_bound=tail,
        stabilization=tuple(values),
        limit_class=limit_class,
        diagnostics=diagnostics,
    )


@dataclass
class OtopyPath:
    """A family t -> local map over a uniform grid on [0, 1], sharing the
    operator of the slice at t = 0."""

    family: Callable[[float], LocalMapSpec]
    grid: tuple[float, ...]

    @staticmethod
    def uniform(family: Callable[[float], LocalMapSpec], steps: int = 10) -> "OtopyPath":
        return OtopyPath(family, tuple(np.linspace(0.0, 1.0, steps + 1)))


def deg_along_otopy(
    path: OtopyPath,
    *,
    seed: int = 0,
    max_level: int = 10,
    budget: Optional[int] = None,
    reference_offset: int = DEFAULT_REFERENCE_OFFSET,
    stabilization_depth: int = 1,
) -> list[DegreeResult]:
    """Degrees along an otopy: all slices certified at one common level,
    all values asserted equal; SliceMarginFailure names the offending t."""
    slices = [(t, path.family(t)) for t in path.grid]
    if not slices:
        raise ValueError("empty otopy grid")
    op = slices[0][1].operator
    cap = max_level if op.max_level is None else min(max_level, op.max_level - stabilization_depth)
    start = max(max(s.min_level for _, s in slices), 1)

    common = None
    last_fail: Optional[tuple[float, DegreeError]] = None
    for n in range(start, cap + 1):
        ok = True
        for t, s in slices:
            try:
                certify_margin(s, n, seed=seed, budget=budget, reference_offset=reference_offset)
            except BoundaryZero as exc:
                raise SliceMarginFailure(t, str(exc)) from exc
            except MarginFailure as exc:
                last_fail = (t, exc)
                ok = False
                break
        if ok:
            common = n
            break
    if common is None:
        t, exc = last_fail if last_fail else (path.grid[0], None)
        raise SliceMarginFailure(t, f"no common level up to {cap} certified ({exc})")

    results = []
    for t, s in slices:
        try:
            results.append(
                deg_infinite(
                    s,
                    level=common,
                    seed=seed,
                    budget=budget,
                    reference_offset=reference_offset,
                    stabilization_depth=stabilization_depth,
                )
            )
        except DegreeError as exc:
            raise SliceMarginFailure(t, str(exc)) from exc
    for (t, _), r in zip(slices, results):
        if r.value != results[0].value:
            raise SliceMarginFailure(t, "degree deviates along the path")
    return results


def restriction_consistency(f: LocalMapSpec, region1, region2, **kwargs) -> bool:
    """Whether the degree agrees on two admissible domains (it must)."""
    r1 = deg_infinite(f.with_region(region1), **kwargs)
    r2 = deg_infinite(f.with_region(region2), **kwargs)
    return r1.value == r2.value


# ---------------------------------------------------------------------------
# Common nonlinearities and products


def zero_nonlinearity(X, basis):
    return np.zeros_like(np.atleast_2d(X))


def scalar_nonlinearity(c: float):
    """F(x) = c x; diagonal in the eigenbasis, so projections are exact."""

    def F(X, basis):
        return c * np.atleast_2d(X)

    return F


def kernel_projection_nonlinearity():
    """F(x) = -P_0 x, so that Ax - F(x) = Ax + P_0 x (the normalization map)."""

    def F(X, basis):
        X = np.atleast_2d(X)
        out = np.zeros_like(X)
        d0 = basis.prefix_dim(0)
        out[:, :d0] = -X[:, :d0]
        return out

    return F


def potential_nonlinearity(poly: Polynomial):
    """F = grad of a polynomial potential in the leading eigencoordinates."""

    def F(X, basis):
        X = np.atleast_2d(X)
        if basis.dim < poly.nvars:
            raise ValueError(
                f"potential uses {poly.nvars} coordinates, basis has {basis.dim}"
            )
        out = np.zeros_like(X)
        out[:, : poly.nvars] = poly.gradient(X[:, : poly.nvars])
        return out

    return F


def normalization_map(op: SpectralOperator, radius: float = 1.0, name=None) -> LocalMapSpec:
    """The map Ax + P_0 x whose degree is the ring unit."""
    return LocalMapSpec(
        operator=op,
        nonlinearity=kernel_projection_nonlinearity(),
        region=RegionSpec.ball(radius),
        name=name or f"normalization({op.label})",
    )


def _embedding_indices(
    opA: SpectralOperator, opB: SpectralOperator, basis: ShellBasis
) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate indices of the two summands inside a direct-sum basis."""
    ia: list[int] = []
    ib: list[int] = []
    for shell, lam, rep, offset in basis.entries:
        repA = dict(opA.shell(shell)).get(lam, Rep())
        repB = dict(opB.shell(shell)).get(lam, Rep())
        assert repA + repB == rep
        pos = offset
        ia.extend(range(pos, pos + repA.trivial))
        pos += repA.trivial
        ib.extend(range(pos, pos + repB.trivial))
        pos += repB.trivial
        for k, n in rep.modes:
            na = repA.mode_mult(k)
            ia.extend(range(pos, pos + 2 * na))
            pos += 2 * na
            ib.extend(range(pos, pos + 2 * (n - na)))
            pos += 2 * (n - na)
    return np.asarray(ia, dtype=int), np.asarray(ib, dtype=int)


def direct_sum_local_maps(f: LocalMapSpec, g: LocalMapSpec) -> LocalMapSpec:
    """The product map f x g on the direct sum of the operators."""
    op = f.operator.direct_sum(g.operator)

    def nonlinearity(X, basis):
        X = np.atleast_2d(X)
        ia, ib = _embedding_indices(f.operator, g.operator, basis)
        basisA = ShellBasis(f.operator, basis.level)
        basisB = ShellBasis(g.operator, basis.level)
        out = np.zeros_like(X)
        out[:, ia] = f.nonlinearity(X[:, ia], basisA)
        out[:, ib] = g.nonlinearity(X[:, ib], basisB)
        return out

    def region(basis):
        ia, ib = _embedding_indices(f.operator, g.operator, basis)
        basisA = ShellBasis(f.operator, basis.level)
        basisB = ShellBasis(g.operator, basis.level)
        return ProductDomain(
            ia, realize_region(f.region, basisA), ib, realize_region(g.region, basisB)
        )

    return LocalMapSpec(
        operator=op,
        nonlinearity=nonlinearity,
        region=region,
        min_level=max(f.min_level, g.min_level),
        name=f"{f.name} x {g.name}",
    )
