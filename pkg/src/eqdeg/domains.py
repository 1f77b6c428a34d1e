"""Invariant domains for zero counting: weighted balls and combinations.

A ball may carry per-coordinate weights so that ellipsoids (for instance
graph-norm balls over an eigencoordinate basis) are expressed in plain
coordinates.  Degree computations only need membership tests, boundary
samples and interior seed points, so unions, intersections and products
are supported through that interface.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

_SEED_CAP = 20000
_HALTON_COUNT = 4096
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def _halton(count: int, dims: int, skip: int = 20) -> np.ndarray:
    """Deterministic low-discrepancy points in the unit cube."""
    if dims > len(_PRIMES):
        raise ValueError(f"halton sampler supports at most {len(_PRIMES)} dimensions")
    out = np.empty((count, dims))
    for j in range(dims):
        base = _PRIMES[j]
        for i in range(count):
            n, f, x = i + skip + 1, 1.0, 0.0
            while n > 0:
                f /= base
                n, r = divmod(n, base)
                x += f * r
            out[i, j] = x
    return out


class Ball:
    """{x : sum w_i (x_i - c_i)^2 <= R^2}; weights default to 1."""

    def __init__(self, center, radius: float, weights=None):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if weights is None:
            weights = np.ones_like(self.center)
        self.weights = np.asarray(weights, dtype=float)
        if self.weights.shape != self.center.shape:
            raise ValueError("weights shape does not match center")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def scale(self) -> float:
        return self.radius + float(np.sqrt(np.sum(self.weights * self.center**2)))

    def metric_norm(self, x: np.ndarray) -> np.ndarray:
        d = np.atleast_2d(x) - self.center
        return np.sqrt(np.sum(self.weights * d * d, axis=-1))

    def contains(self, x: np.ndarray) -> np.ndarray:
        r = self.metric_norm(x) < self.radius
        return r if np.asarray(x).ndim > 1 else bool(r[0])

    def boundary_samples(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if self.dim == 0:
            return np.zeros((0, 0))
        y = rng.standard_normal((count, self.dim))
        y /= np.sqrt(np.sum(self.weights * y * y, axis=1))[:, None]
        return self.center + self.radius * y

    def interior_samples(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if self.dim == 0:
            return np.zeros((count, 0))
        y = rng.standard_normal((count, self.dim))
        y /= np.sqrt(np.sum(self.weights * y * y, axis=1))[:, None]
        radii = self.radius * rng.random(count) ** (1.0 / self.dim)
        return self.center + radii[:, None] * y

    def seed_points(self, indices: Sequence[int], fraction: float = 0.125) -> np.ndarray:
        """Deterministic grid of Newton seeds on the given coordinate axes.

        Spacing is ``fraction * radius`` in the ball metric.  When the full
        grid would be unreasonably large the grid is replaced by a Halton
        set of the same coverage, capped in size.
        """
        indices = list(indices)
        if not indices:
            return self.center[None, :].copy()
        per_axis = 2 * int(round(1.0 / fraction)) + 1
        half = self.radius / np.sqrt(self.weights[indices])
        if per_axis ** len(indices) <= _SEED_CAP:
            axes = [
                self.center[i] + h * np.linspace(-1.0, 1.0, per_axis)
                for i, h in zip(indices, half)
            ]
            mesh = np.array(list(itertools.product(*axes)))
        else:
            u = _halton(_HALTON_COUNT, len(indices))
            mesh = self.center[indices] + (2.0 * u - 1.0) * half
        pts = np.tile(self.center, (len(mesh), 1))
        pts[:, indices] = mesh
        keep = self.metric_norm(pts) <= self.radius
        pts = pts[keep]
        return np.vstack([self.center[None, :], pts])


class ShellDomain:
    """An annulus {r_in < |x - c|_w < r_out}; invariant and avoids the center."""

    def __init__(self, center, inner_radius: float, outer_radius: float, weights=None):
        if not 0 < inner_radius < outer_radius:
            raise ValueError("need 0 < inner_radius < outer_radius")
        self.inner = Ball(center, inner_radius, weights)
        self.outer = Ball(center, outer_radius, weights)

    @property
    def dim(self) -> int:
        return self.outer.dim

    @property
    def scale(self) -> float:
        return self.outer.scale

    def contains(self, x: np.ndarray) -> np.ndarray:
        r = self.outer.metric_norm(x)
        res = (self.inner.radius < r) & (r < self.outer.radius)
        return res if np.asarray(x).ndim > 1 else bool(res[0])

    def boundary_samples(self, count: int, rng) -> np.ndarray:
        half = max(1, count // 2)
        return np.vstack(
            [self.outer.boundary_samples(half, rng), self.inner.boundary_samples(half, rng)]
        )

    def interior_samples(self, count: int, rng) -> np.ndarray:
        got: list[np.ndarray] = []
        need = count
        for _ in range(200):
            cand = self.outer.interior_samples(max(need * 4, 16), rng)
            sel = cand[self.contains(cand)]
            if len(sel):
                got.append(sel[:need])
                need -= len(sel[:need])
            if need <= 0:
                break
        return np.vstack(got) if got else np.zeros((0, self.dim))

    def seed_points(self, indices, fraction: float = 0.125) -> np.ndarray:
        pts = self.outer.seed_points(indices, fraction)
        keep = np.atleast_1d(self.contains(pts))
        kept = pts[keep]
        if not len(kept):
            mid = self.outer.center.copy()
            if len(list(indices)):
                i = list(indices)[0]
                mid[i] += 0.5 * (self.inner.radius + self.outer.radius) / np.sqrt(
                    self.outer.weights[i]
                )
            kept = mid[None, :]
        return kept


class UnionDomain:
    """A disjoint union of balls sharing one weight vector."""

    def __init__(self, parts: Sequence[Ball]):
        if not parts:
            raise ValueError("union of no balls")
        self.parts = list(parts)
        w0 = self.parts[0].weights
        for b in self.parts[1:]:
            if not np.allclose(b.weights, w0):
                raise ValueError("union parts must share weights")
        for a, b in itertools.combinations(self.parts, 2):
            dist = np.sqrt(np.sum(w0 * (a.center - b.center) ** 2))
            if dist <= a.radius + b.radius:
                raise ValueError("union parts must be pairwise disjoint")

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    @property
    def scale(self) -> float:
        return max(b.scale for b in self.parts)

    def contains(self, x: np.ndarray) -> np.ndarray:
        acc = self.parts[0].contains(x)
        for b in self.parts[1:]:
            acc = acc | b.contains(x)
        return acc

    def boundary_samples(self, count: int, rng) -> np.ndarray:
        share = max(1, count // len(self.parts))
        return np.vstack([b.boundary_samples(share, rng) for b in self.parts])

    def interior_samples(self, count: int, rng) -> np.ndarray:
        share = max(1, count // len(self.parts))
        return np.vstack([b.interior_samples(share, rng) for b in self.parts])

    def seed_points(self, indices, fraction: float = 0.125) -> np.ndarray:
        return np.vstack([b.seed_points(indices, fraction) for b in self.parts])


class IntersectionDomain:
    """An intersection of balls (assumed to have nonempty interior)."""

    def __init__(self, parts: Sequence[Ball]):
        if not parts:
            raise ValueError("intersection of no balls")
        self.parts = list(parts)

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    @property
    def scale(self) -> float:
        return min(b.scale for b in self.parts)

    def contains(self, x: np.ndarray) -> np.ndarray:
        acc = self.parts[0].contains(x)
        for b in self.parts[1:]:
            acc = acc & b.contains(x)
        return acc

    def boundary_samples(self, count: int, rng) -> np.ndarray:
        # The boundary lies on the union of the spheres; keep sphere points
        # that the other balls accept.
        out = []
        share = max(1, count // len(self.parts))
        for i, b in enumerate(self.parts):
            got: list[np.ndarray] = []
            need = share
            for _ in range(60):
                cand = b.boundary_samples(max(need * 4, 16), rng)
                mask = np.ones(len(cand), dtype=bool)
                for j, other in enumerate(self.parts):
                    if j != i:
                        mask &= other.metric_norm(cand) <= other.radius
                sel = cand[mask]
                if len(sel):
                    got.append(sel[:need])
                    need -= len(sel[:need])
                if need <= 0:
                    break
            if got:
                out.append(np.vstack(got))
        if not out:
            raise ValueError("could not sample the boundary of the intersection")
        return np.vstack(out)

    def interior_samples(self, count: int, rng) -> np.ndarray:
        got: list[np.ndarray] = []
        need = count
        for _ in range(200):
            cand = self.parts[0].interior_samples(max(need * 4, 16), rng)
            mask = self.contains(cand)
            sel = cand[mask]
            if len(sel):
                got.append(sel[:need])
                need -= len(sel[:need])
            if need <= 0:
                break
        if not got:
            raise ValueError("intersection appears to have empty interior")
        return np.vstack(got)

    def seed_points(self, indices, fraction: float = 0.125) -> np.ndarray:
        pts = self.parts[0].seed_points(indices, fraction)
        keep = np.ones(len(pts), dtype=bool)
        for b in self.parts[1:]:
            keep &= b.metric_norm(pts) <= b.radius
        kept = pts[keep]
        return kept if len(kept) else pts[:1]


class ProductDomain:
    """A product of two domains living on disjoint coordinate index sets."""

    def __init__(self, indices_a, domain_a, indices_b, domain_b):
        self.ia = np.asarray(indices_a, dtype=int)
        self.ib = np.asarray(indices_b, dtype=int)
        self.da = domain_a
        self.db = domain_b
        total = len(self.ia) + len(self.ib)
        if sorted(list(self.ia) + list(self.ib)) != list(range(total)):
            raise ValueError("product index sets must partition the coordinates")
        self._dim = total

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def scale(self) -> float:
        return max(self.da.scale, self.db.scale)

    def _split(self, x):
        x = np.atleast_2d(x)
        return x[:, self.ia], x[:, self.ib]

    def _join(self, xa, xb):
        out = np.empty((len(xa), self._dim))
        out[:, self.ia] = xa
        out[:, self.ib] = xb
        return out

    def contains(self, x: np.ndarray) -> np.ndarray:
        xa, xb = self._split(x)
        r = np.atleast_1d(self.da.contains(xa)) & np.atleast_1d(self.db.contains(xb))
        return r if np.asarray(x).ndim > 1 else bool(r[0])

    def boundary_samples(self, count: int, rng) -> np.ndarray:
        half = max(1, count // 2)
        out = []
        if len(self.ia):
            xa = self.da.boundary_samples(half, rng)
            xb = self.db.interior_samples(len(xa), rng)
            out.append(self._join(xa, xb))
        if len(self.ib):
            xb = self.db.boundary_samples(half, rng)
            xa = self.da.interior_samples(len(xb), rng)
            out.append(self._join(xa, xb))
        return np.vstack(out)

    def interior_samples(self, count: int, rng) -> np.ndarray:
        xa = self.da.interior_samples(count, rng)
        xb = self.db.interior_samples(count, rng)
        return self._join(xa, xb)

    def seed_points(self, indices, fraction: float = 0.125) -> np.ndarray:
        pos_a = {int(g): j for j, g in enumerate(self.ia)}
        pos_b = {int(g): j for j, g in enumerate(self.ib)}
        sub_a = [pos_a[i] for i in indices if i in pos_a]
        sub_b = [pos_b[i] for i in indices if i in pos_b]
        seeds_a = self.da.seed_points(sub_a, fraction)
        seeds_b = self.db.seed_points(sub_b, fraction)
        if len(seeds_a) * len(seeds_b) > _SEED_CAP:
            na = max(1, int(np.sqrt(_SEED_CAP * len(seeds_a) / max(len(seeds_b), 1))))
            nb = max(1, _SEED_CAP // max(na, 1))
            seeds_a = seeds_a[:na]
            seeds_b = seeds_b[:nb]
        xa = np.repeat(seeds_a, len(seeds_b), axis=0)
        xb = np.tile(seeds_b, (len(seeds_a), 1))
        return self._join(xa, xb)
