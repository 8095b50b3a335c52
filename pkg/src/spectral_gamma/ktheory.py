"""Eigenvalue-counting spectral K-invariants over C.

For an open region with finitely many connected components, the class of a
matrix (up to stabilized homotopy through matrices with spectrum in the
region) is exactly its vector of eigenvalue counts in the components not
containing 0.  This module labels components by flood fill on a grid whose
adjacency is verified by exact segment membership, then counts, adds,
normal-forms and compares classes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import holocalc as hc
from .errors import DomainError, MembershipError, ResolutionError, StructuralError


@dataclass(frozen=True)
class CountVector:
    """Counts of eigenvalues per non-base component (the complete invariant)."""

    counts: tuple

    def __post_init__(self):
        if any((not isinstance(c, int)) or c < 0 for c in self.counts):
            raise StructuralError("counts must be nonnegative integers")

    @property
    def k(self) -> int:
        return len(self.counts)

    def to_json(self) -> list:
        return list(self.counts)


def v_add(c1: CountVector, c2: CountVector) -> CountVector:
    """Monoid sum; matches the counts of the block-diagonal sum of matrices."""
    if c1.k != c2.k:
        raise StructuralError(f"count vectors of different k: {c1.k} vs {c2.k}")
    return CountVector(tuple(a + b for a, b in zip(c1.counts, c2.counts)))


@dataclass(frozen=True, eq=False)
class OmegaComponents:
    """Connected-component labeling of a region on a bounded grid."""

    region: hc.Region
    bbox: tuple                   # (re_min, re_max, im_min, im_max)
    resolution: float             # grid spacing
    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)   # -1 outside the region
    representatives: tuple        # label id -> representative grid point
    base_index: int               # label of the component containing 0

    @property
    def n_components(self) -> int:
        return len(self.representatives)

    @property
    def k(self) -> int:
        return self.n_components - 1

    def nonbase_labels(self) -> list:
        return [i for i in range(self.n_components) if i != self.base_index]


def analyze_components(region: hc.Region, bbox=(-4.0, 4.0, -4.0, 4.0),
                       resolution: float = 0.05) -> OmegaComponents:
    """Flood-fill component labeling at the stated resolution.

    Grid nodes are integer multiples of the resolution (so 0 is a node).
    Two adjacent in-region nodes are connected only if the closed segment
    between them stays in the region; the segment test is exact for the
    primitive boundaries, so removed lines and points really separate.
    """
    re_min, re_max, im_min, im_max = bbox
    if re_min >= re_max or im_min >= im_max:
        raise DomainError("empty bounding box")
    if not (re_min <= 0.0 <= re_max and im_min <= 0.0 <= im_max):
        raise DomainError("bounding box must contain 0 (the base point)")
    if not hc.contains(region, 0j):
        raise DomainError("0 must belong to the region")
    h = float(resolution)
    if h <= 0:
        raise DomainError("resolution must be positive")
    _check_resolution(region, h)

    xs = h * np.arange(math.ceil(re_min / h), math.floor(re_max / h) + 1)
    ys = h * np.arange(math.ceil(im_min / h), math.floor(im_max / h) + 1)
    Z = xs[None, :] + 1j * ys[:, None]
    mask = hc.contains_grid(region, Z)
    bd = hc.boundary_distance_grid(region, Z)
    ny, nx = mask.shape

    parent = np.arange(ny * nx)

    def find(i):
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for horizontal in (True, False):
        if horizontal:
            both = mask[:, :-1] & mask[:, 1:]
            near = np.minimum(bd[:, :-1], bd[:, 1:]) <= h
        else:
            both = mask[:-1, :] & mask[1:, :]
            near = np.minimum(bd[:-1, :], bd[1:, :]) <= h
        for iy, ix in np.argwhere(both & ~near):
            a = iy * nx + ix
            b = a + 1 if horizontal else a + nx
            union(a, b)
        for iy, ix in np.argwhere(both & near):
            z0 = complex(Z[iy, ix])
            z1 = complex(Z[iy, ix + 1] if horizontal else Z[iy + 1, ix])
            if hc.segment_in_region(region, z0, z1):
                a = iy * nx + ix
                b = a + 1 if horizontal else a + nx
                union(a, b)

    labels = np.full((ny, nx), -1, dtype=int)
    order = {}
    reps = []
    for iy in range(ny):
        for ix in range(nx):
            if not mask[iy, ix]:
                continue
            root = find(iy * nx + ix)
            if root not in order:
                order[root] = len(reps)
                reps.append(complex(Z[iy, ix]))
            labels[iy, ix] = order[root]

    ix0 = int(np.argmin(np.abs(xs)))
    iy0 = int(np.argmin(np.abs(ys)))
    if abs(xs[ix0]) > 1e-12 or abs(ys[iy0]) > 1e-12 or not mask[iy0, ix0]:
        raise ResolutionError("grid does not resolve the base point 0")
    base = int(labels[iy0, ix0])
    return OmegaComponents(region=region, bbox=tuple(map(float, bbox)), resolution=h,
                           xs=xs, ys=ys, labels=labels,
                           representatives=tuple(reps), base_index=base)


def _check_resolution(region: hc.Region, h: float):
    for p in hc.primitives(region):
        if isinstance(p, hc.Disk) and p.radius < 2 * h:
            raise ResolutionError(
                f"disk of radius {p.radius} needs resolution <= {p.radius / 2}")
        if isinstance(p, hc.Rect):
            side = min(p.re_max - p.re_min, p.im_max - p.im_min)
            if side < 2 * h:
                raise ResolutionError(
                    f"rectangle side {side} needs resolution <= {side / 2}")


def component_of(oc: OmegaComponents, z: complex, margin: Optional[float] = None) -> int:
    """Label of the component containing z (exact-boundary points rejected)."""
    z = complex(z)
    if margin is None:
        margin = hc.default_margin(z)
    if not hc.contains(oc.region, z):
        raise MembershipError(f"{z} lies outside the region")
    if hc.boundary_distance(oc.region, z) <= margin:
        raise MembershipError(f"{z} is within {margin} of a region boundary")
    h = oc.resolution
    ix = int(round((z.real - oc.xs[0]) / h))
    iy = int(round((z.imag - oc.ys[0]) / h))
    candidates = []
    for dy in range(-2, 3):
        for dx in range(-2, 3):
            jx, jy = ix + dx, iy + dy
            if 0 <= jx < len(oc.xs) and 0 <= jy < len(oc.ys) and oc.labels[jy, jx] >= 0:
                node = complex(oc.xs[jx], oc.ys[jy])
                candidates.append((abs(node - z), jy, jx, node))
    for _, jy, jx, node in sorted(candidates, key=lambda c: c[0]):
        if hc.segment_in_region(oc.region, z, node):
            return int(oc.labels[jy, jx])
    raise ResolutionError(f"cannot connect {z} to the sampled grid; refine the resolution")


def component_counts(m: np.ndarray, oc: OmegaComponents,
                     margin: Optional[float] = None) -> CountVector:
    """Eigenvalue counts per non-base component, with multiplicity."""
    eigs = hc.eigenvalues(m)
    slots = {label: i for i, label in enumerate(oc.nonbase_labels())}
    counts = [0] * oc.k
    for lam in eigs:
        label = component_of(oc, complex(lam), margin)
        if label != oc.base_index:
            counts[slots[label]] += 1
    return CountVector(tuple(counts))


def k_group_rank(oc: OmegaComponents) -> int:
    """k, the rank of the free abelian invariant group; 0 means it vanishes."""
    return oc.k


def normal_form(m: np.ndarray, oc: OmegaComponents,
                basepoints: Sequence[complex],
                margin: Optional[float] = None) -> np.ndarray:
    """Diagonal normal form: basepoint i repeated (count i) times, 0 elsewhere."""
    m = hc.check_square(m)
    if len(basepoints) != oc.k:
        raise DomainError(f"need {oc.k} basepoints, got {len(basepoints)}")
    slots = oc.nonbase_labels()
    for i, bp in enumerate(basepoints):
        if component_of(oc, complex(bp), margin) != slots[i]:
            raise DomainError(f"basepoint {bp} lies in the wrong component")
    counts = component_counts(m, oc, margin)
    diag = []
    for bp, c in zip(basepoints, counts.counts):
        diag.extend([complex(bp)] * c)
    diag.extend([0j] * (m.shape[0] - len(diag)))
    return np.diag(np.array(diag, dtype=complex))


def same_class(m1: np.ndarray, m2: np.ndarray, oc: OmegaComponents,
               margin: Optional[float] = None) -> bool:
    """Equality of stabilized homotopy classes: equal count vectors.

    Sizes may differ; padding by 0 blocks is class-neutral because 0 sits in
    the base component.
    """
    return component_counts(m1, oc, margin) == component_counts(m2, oc, margin)
