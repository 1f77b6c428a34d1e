"""Periodic-orbit existence certificates for autonomous Hamiltonian systems.

On the loop space L^2(S^1, R^{2n}) the operator Az = -J dz/dt (J the
standard symplectic matrix) is equivariant for the time-shift circle
action and has spectrum Z: the kernel consists of constant loops and the
eigenvalues +-k pair the mode-k Fourier coefficients.  A 2*pi*lambda
periodic solution of dz/dt = J grad H(z) corresponds to a zero of
f(z) = Az - lambda * grad H(z), so a nonzero stabilized degree of f on an
invariant ball certifies existence.

Hamiltonians are polynomials; the gradient of the action functional is
evaluated pointwise on a uniform time grid and projected back by FFT,
which is exact (no aliasing) once the grid has at least deg(H)*N + 1
points for N retained modes.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import AliasingRisk, BoundaryZero, DegreeError, NearSingular, NoncompactZeroSet
from .euler_ring import CIRCLE, FULL, RingElement, SubgroupClass, unit
from .galerkin import DegreeResult, LocalMapSpec, RegionSpec, ShellBasis, deg_infinite
from .polynomials import Polynomial
from .reps import Rep, SpectralOperator


@dataclass(frozen=True)
class HamiltonianSpec:
    """A polynomial Hamiltonian on R^{2 dof} with a period parameter lambda > 0."""

    dof: int
    potential: Polynomial
    lam: float

    def __post_init__(self):
        if self.dof < 1:
            raise ValueError("dof must be >= 1")
        if self.potential.nvars != 2 * self.dof:
            raise ValueError(
                f"Hamiltonian must use {2 * self.dof} variables, got {self.potential.nvars}"
            )
        if not self.lam > 0:
            raise ValueError("lambda must be positive")

    @classmethod
    def from_terms(cls, dof: int, terms, lam: float) -> "HamiltonianSpec":
        return cls(dof, Polynomial.from_terms(2 * dof, terms), float(lam))


def symplectic_matrix(dof: int) -> np.ndarray:
    n = dof
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = -np.eye(n)
    J[n:, :n] = np.eye(n)
    return J


def loop_operator(dof: int) -> SpectralOperator:
    """-J d/dt on loops in R^{2 dof}: kernel = constants, eigenvalues +-k.

    Each eigenvalue +-k carries a mode-k eigenspace of complex multiplicity
    dof (real dimension 2*dof), so shell k is 4*dof dimensional.
    """
    if dof < 1:
        raise ValueError("dof must be >= 1")

    def shells(n: int):
        if n == 0:
            return [(0.0, Rep(2 * dof))]
        return [
            (-float(n), Rep(0, ((n, dof),))),
            (float(n), Rep(0, ((n, dof),))),
        ]

    return SpectralOperator(shells, max_level=None, label=f"loop(dof={dof})")


@lru_cache(maxsize=None)
def _mode_transform(dof: int) -> np.ndarray:
    """Orthogonal map from shell-k eigencoordinates to Fourier (cos, sin)
    coordinates; the same matrix works for every k.

    Columns are the +-k eigenvectors of -J d/dt on the span of
    cos(kt) a + sin(kt) b, paired and oriented so that the time-shift
    action is rotation by +k*theta on each consecutive coordinate pair.
    """
    n2 = 2 * dof
    J = symplectic_matrix(dof)
    Q = np.zeros((2 * n2, 2 * n2))
    col = 0
    s = 1.0 / math.sqrt(2.0)
    for j in range(n2 // 2):
        e = np.zeros(n2)
        e[j] = 1.0
        Je = J @ e
        # eigenvalue -k block: pair ((Je, e), (e, -Je)) / sqrt(2)
        Q[:n2, col] = s * Je
        Q[n2:, col] = s * e
        Q[:n2, col + 1] = s * e
        Q[n2:, col + 1] = -s * Je
        col += 2
    for j in range(n2 // 2):
        e = np.zeros(n2)
        e[j] = 1.0
        Je = J @ e
        # eigenvalue +k block: pair ((e, Je), (Je, -e)) / sqrt(2)
        Q[:n2, col] = s * e
        Q[n2:, col] = s * Je
        Q[:n2, col + 1] = s * Je
        Q[n2:, col + 1] = -s * e
        col += 2
    return Q


@dataclass
class LoopState:
    """A truncated loop: constant term and per-mode cosine/sine coefficients."""

    dof: int
    constant: np.ndarray
    cos: np.ndarray
    sin: np.ndarray

    def __post_init__(self):
        n2 = 2 * self.dof
        self.constant = np.asarray(self.constant, dtype=float).reshape(n2)
        self.cos = np.asarray(self.cos, dtype=float).reshape(-1, n2)
        self.sin = np.asarray(self.sin, dtype=float).reshape(-1, n2)
        if self.cos.shape != self.sin.shape:
            raise ValueError("cosine and sine coefficient arrays must match")

    @classmethod
    def zeros(cls, dof: int, modes: int) -> "LoopState":
        n2 = 2 * dof
        return cls(dof, np.zeros(n2), np.zeros((modes, n2)), np.zeros((modes, n2)))

    @classmethod
    def constant_loop(cls, dof: int, value) -> "LoopState":
        return cls(dof, np.asarray(value, dtype=float), np.zeros((0, 2 * dof)), np.zeros((0, 2 * dof)))

    @property
    def modes(self) -> int:
        return self.cos.shape[0]

    def l2_norm(self) -> float:
        return math.sqrt(
            2 * math.pi * float(self.constant @ self.constant)
            + math.pi * float(np.sum(self.cos**2) + np.sum(self.sin**2))
        )

    def graph_norm(self) -> float:
        """Norm of the inner product (u|v) = int uv + int u'v' (H^1)."""
        k2 = (np.arange(1, self.modes + 1) ** 2)[:, None]
        deriv = math.pi * float(np.sum(k2 * (self.cos**2 + self.sin**2)))
        return math.sqrt(self.l2_norm() ** 2 + deriv)

    def shift_time(self, theta: float) -> "LoopState":
        ks = np.arange(1, self.modes + 1)
        c = np.cos(ks * theta)[:, None]
        s = np.sin(ks * theta)[:, None]
        return LoopState(
            self.dof,
            self.constant.copy(),
            c * self.cos + s * self.sin,
            -s * self.cos + c * self.sin,
        )

    def values_on_grid(self, size: int) -> np.ndarray:
        """Evaluate the loop on a uniform grid of the given size."""
        t = 2.0 * math.pi * np.arange(size) / size
        ks = np.arange(1, self.modes + 1)
        cosmat = np.cos(np.outer(t, ks))
        sinmat = np.sin(np.outer(t, ks))
        return self.constant[None, :] + cosmat @ self.cos + sinmat @ self.sin


def _fourier_batches(X: np.ndarray, dof: int, level: int):
    """Split (m, dim V_level) eigencoordinates into classical Fourier data."""
    n2 = 2 * dof
    Q = _mode_transform(dof)
    m = len(X)
    c0 = X[:, :n2] / math.sqrt(2.0 * math.pi)
    C = np.zeros((m, level, n2))
    S = np.zeros((m, level, n2))
    sp = math.sqrt(math.pi)
    for k in range(1, level + 1):
        off = n2 + 2 * n2 * (k - 1)
        ab = X[:, off : off + 2 * n2] @ Q.T
        C[:, k - 1, :] = ab[:, :n2] / sp
        S[:, k - 1, :] = ab[:, n2:] / sp
    return c0, C, S


def _coords_batches(c0: np.ndarray, C: np.ndarray, S: np.ndarray, dof: int) -> np.ndarray:
    n2 = 2 * dof
    Q = _mode_transform(dof)
    m, level = C.shape[0], C.shape[1]
    out = np.zeros((m, n2 + 2 * n2 * level))
    out[:, :n2] = c0 * math.sqrt(2.0 * math.pi)
    sp = math.sqrt(math.pi)
    for k in range(1, level + 1):
        ab = np.concatenate([sp * C[:, k - 1, :], sp * S[:, k - 1, :]], axis=1)
        out[:, n2 + 2 * n2 * (k - 1) : n2 + 2 * n2 * k] = ab @ Q
    return out


def state_to_coords(state: LoopState, basis: ShellBasis) -> np.ndarray:
    """Eigencoordinates of a loop state in a loop-operator shell basis."""
    level = basis.level
    if state.modes > level and (
        np.any(state.cos[level:]) or np.any(state.sin[level:])
    ):
        raise ValueError(f"state has active modes beyond truncation level {level}")
    n = min(state.modes, level)
    C = np.zeros((1, level, 2 * state.dof))
    S = np.zeros_like(C)
    C[0, :n] = state.cos[:n]
    S[0, :n] = state.sin[:n]
    return _coords_batches(state.constant[None, :], C, S, state.dof)[0]


def coords_to_state(coords: np.ndarray, basis: ShellBasis, dof: int) -> LoopState:
    c0, C, S = _fourier_batches(np.atleast_2d(coords), dof, basis.level)
    return LoopState(dof, c0[0], C[0], S[0])


def _pow2_at_least(n: int) -> int:
    m = 4
    while m < n:
        m *= 2
    return m


def default_quadrature_size(poly_degree: int, modes: int) -> int:
    """Power-of-two grid size guaranteeing alias-free projection."""
    return _pow2_at_least(max(poly_degree, 2) * max(modes, 1) + 1)


def hamiltonian_gradient(
    spec: HamiltonianSpec, state: LoopState, quadrature_size: Optional[int] = None
) -> LoopState:
    """Gradient of the action integrand: grad H applied along the loop,
    projected back onto the retained modes.

    Exact (up to rounding) for polynomial H once quadrature_size reaches
    deg(H) * modes + 1; smaller grids raise AliasingRisk.
    """
    N = state.modes
    need = spec.potential.degree * N + 1
    if quadrature_size is None:
        quadrature_size = default_quadrature_size(spec.potential.degree, N)
    if quadrature_size < need:
        raise AliasingRisk(
            f"quadrature size {quadrature_size} < {need} required for degree "
            f"{spec.potential.degree} and {N} modes"
        )
    M = int(quadrature_size)
    u = state.values_on_grid(M)
    w = spec.potential.gradient(u)
    Wf = np.fft.rfft(w, axis=0)
    c0 = Wf[0].real / M
    C = 2.0 * Wf[1 : N + 1].real / M
    S = -2.0 * Wf[1 : N + 1].imag / M
    return LoopState(state.dof, c0, C, S)


def local_map(spec: HamiltonianSpec, radius: float, *, name: Optional[str] = None) -> LocalMapSpec:
    """The local map f(z) = Az - lambda grad H(z) on a graph-norm ball."""
    op = loop_operator(spec.dof)
    poly = spec.potential
    dof = spec.dof
    lam = spec.lam

    def nonlinearity(X, basis):
        X = np.atleast_2d(X)
        level = basis.level
        M = default_quadrature_size(poly.degree, level)
        c0, C, S = _fourier_batches(X, dof, level)
        t = 2.0 * math.pi * np.arange(M) / M
        ks = np.arange(1, level + 1)
        cosmat = np.cos(np.outer(t, ks))
        sinmat = np.sin(np.outer(t, ks))
        u = c0[:, None, :] + np.einsum("tk,mkj->mtj", cosmat, C) + np.einsum(
            "tk,mkj->mtj", sinmat, S
        )
        w = poly.gradient(u)
        Wf = np.fft.rfft(w, axis=1)
        gc0 = Wf[:, 0, :].real / M
        gC = 2.0 * Wf[:, 1 : level + 1, :].real / M
        gS = -2.0 * Wf[:, 1 : level + 1, :].imag / M
        return lam * _coords_batches(gc0, gC, gS, dof)

    return LocalMapSpec(
        operator=op,
        nonlinearity=nonlinearity,
        region=RegionSpec.ball(radius),
        name=name or f"hamiltonian(dof={spec.dof}, lambda={spec.lam:g})",
    )


@dataclass(frozen=True)
class PeriodicCertificate:
    """Outcome of a degree-based existence test for periodic solutions."""

    result: DegreeResult
    certified: bool
    period: float
    message: str


def periodic_existence(spec: HamiltonianSpec, radius: float, **kwargs) -> PeriodicCertificate:
    """Existence certificate: a nonzero degree of f = Az - lambda grad H on
    the ball certifies a periodic solution of period 2*pi*lambda.

    Boundary near-zeros found while sampling mean the zero set cannot be
    taken compact; NoncompactZeroSet is raised in that case.
    """
    lm = local_map(spec, radius)
    try:
        result = deg_infinite(lm, **kwargs)
    except BoundaryZero as exc:
        raise NoncompactZeroSet(str(exc)) from exc
    certified = not result.value.is_zero
    period = 2.0 * math.pi * spec.lam
    if certified:
        message = (
            f"degree {result.value} is nonzero: the system has a periodic solution "
            f"of period {period:.6g}"
        )
    else:
        message = f"degree vanishes on the ball of radius {radius:g}: no certificate"
    return PeriodicCertificate(result, certified, period, message)


# ---------------------------------------------------------------------------
# Parameter sweeps and the quadratic closed form


def _hessian_block(S0: np.ndarray, lam: float, k: int) -> np.ndarray:
    """Linearization of Az - lambda S0 z on the mode-k Fourier pair (cos, sin)."""
    n2 = S0.shape[0]
    J = symplectic_matrix(n2 // 2)
    top = np.concatenate([-lam * S0, -k * J], axis=1)
    bot = np.concatenate([k * J, -lam * S0], axis=1)
    return np.concatenate([top, bot], axis=0)


def quadratic_spectral_degree(spec: HamiltonianSpec, level: Optional[int] = None) -> RingElement:
    """Closed-form degree for a quadratic Hamiltonian H = (1/2) <Sz, z>.

    Computed directly from eigenvalue sign counts of the explicit mode
    blocks of A - lambda S, bypassing the truncation pipeline entirely;
    serves as the exact cross-check for the pipeline on quadratic data.
    """
    if spec.potential.degree > 2:
        raise ValueError("closed form applies to quadratic Hamiltonians")
    S0 = spec.potential.hessian_at(np.zeros(2 * spec.dof))
    lam = spec.lam
    norm = float(np.linalg.norm(S0, 2)) if S0.size else 0.0
    if level is None:
        level = int(math.ceil(lam * norm)) + 1

    def neg_count(mat: np.ndarray, tol_scale: float) -> int:
        eigs = np.linalg.eigvalsh(mat)
        if np.min(np.abs(eigs)) < 1e-9 * max(tol_scale, 1.0):
            raise NearSingular("quadratic closed form: block eigenvalue near zero")
        return int(np.sum(eigs < 0))

    trivial_neg = neg_count(-lam * S0, lam * norm)
    sign = -1 if trivial_neg % 2 else 1
    coeffs = {FULL: sign}
    value = RingElement.make(CIRCLE, coeffs)
    for k in range(1, level + 1):
        mk = neg_count(_hessian_block(S0, lam, k), k + lam * norm) // 2
        # one factor (1 - e_k)^{m_k} from the truncated field, one factor
        # (1 + dof e_k) from the shell correction
        ek = RingElement.make(CIRCLE, {SubgroupClass.finite(k): 1})
        value = value * (unit(CIRCLE) - mk * ek) * (unit(CIRCLE) + spec.dof * ek)
    return value


@dataclass(frozen=True)
class DegreeJumpTable:
    """Degrees across a lambda grid with crossing-free segments identified."""

    entries: tuple[tuple[float, RingElement], ...]
    segments: tuple[tuple[int, ...], ...]
    jumps: tuple[dict, ...]


def _crossing_signature(spec: HamiltonianSpec, lam: float, top_mode: int) -> tuple[int, ...]:
    S0 = spec.potential.hessian_at(np.zeros(2 * spec.dof))
    counts = [int(np.sum(np.linalg.eigvalsh(-lam * S0) < 0))]
    for k in range(1, top_mode + 1):
        counts.append(int(np.sum(np.linalg.eigvalsh(_hessian_block(S0, lam, k)) < 0)))
    return tuple(counts)


def _check_away_from_crossing(spec: HamiltonianSpec, lam: float, top_mode: int):
    S0 = spec.potential.hessian_at(np.zeros(2 * spec.dof))
    worst = np.min(np.abs(np.linalg.eigvalsh(-lam * S0))) if S0.size else np.inf
    for k in range(1, top_mode + 1):
        worst = min(worst, np.min(np.abs(np.linalg.eigvalsh(_hessian_block(S0, lam, k)))))
    if worst < 1e-8 * (1.0 + top_mode):
        raise NearSingular(f"lambda={lam:g} sits at a spectral crossing of the linearization")


def degree_jump(
    spec: HamiltonianSpec, lambdas: Sequence[float], radius: float, **kwargs
) -> DegreeJumpTable:
    """Degrees over a lambda grid, with constancy asserted between crossings.

    Crossings are detected on the linearization at the origin, so the grid
    must avoid eigenvalue crossings of A - lambda * hessian H(0); a lambda
    sitting on a crossing raises NearSingular before any degree runs.
    """
    lambdas = [float(l) for l in lambdas]
    if not lambdas:
        raise ValueError("empty lambda grid")
    S0 = spec.potential.hessian_at(np.zeros(2 * spec.dof))
    norm = float(np.linalg.norm(S0, 2)) if S0.size else 0.0
    top_mode = int(math.ceil(max(lambdas) * norm)) + 1
    for lam in lambdas:
        _check_away_from_crossing(dataclasses.replace(spec, lam=lam), lam, top_mode)

    entries = []
    for lam in lambdas:
        cert = periodic_existence(dataclasses.replace(spec, lam=lam), radius, **kwargs)
        entries.append((lam, cert.result.value))

    segments: list[list[int]] = [[0]]
    jumps: list[dict] = []
    sig_prev = _crossing_signature(spec, lambdas[0], top_mode)
    for i in range(1, len(lambdas)):
        sig = _crossing_signature(spec, lambdas[i], top_mode)
        if sig == sig_prev:
            segments[-1].append(i)
            if entries[i][1] != entries[segments[-1][0]][1]:
                raise DegreeError(
                    f"degree not constant on the crossing-free segment around "
                    f"lambda={lambdas[i]:g}"
                )
        else:
            jumps.append(
                {
                    "from_lambda": lambdas[i - 1],
                    "to_lambda": lambdas[i],
                    "from_value": entries[i - 1][1],
                    "to_value": entries[i][1],
                }
            )
            segments.append([i])
        sig_prev = sig
    return DegreeJumpTable(
        tuple(entries), tuple(tuple(s) for s in segments), tuple(jumps)
    )
