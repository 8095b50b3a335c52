"""Matrix spectra, planar region sets, contours, and the contour-integral
holomorphic functional calculus f(a) = (1/2 pi i) oint f(z)(z-a)^{-1} dz.

Regions are boolean expression trees over exact primitives (disks, half
planes, rectangles, removed points/lines); membership tests and boundary
distances are exact for primitive boundaries.  Quadrature is the trapezoid
rule on circles, spectrally accurate for analytic integrands, with node
doubling until successive results agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (AnalyticityError, ConditioningError, DomainError,
                     GeometryError, StructuralError)

MAX_MATRIX_SIZE = 512
DEFAULT_NODES = 256
NODE_CAP = 4096
QUAD_TOL = 1e-10
CLUSTER_GAP_REL = 1e-2
BOUNDARY_EPS = 1e-12


# ---------------------------------------------------------------------------
# region primitives

@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float


@dataclass(frozen=True)
class HalfPlane:
    axis: str        # "re" | "im"
    threshold: float
    side: str        # "lt" | "gt"


@dataclass(frozen=True)
class Rect:
    re_min: float
    re_max: float
    im_min: float
    im_max: float


@dataclass(frozen=True)
class FullPlane:
    pass


@dataclass(frozen=True)
class PointSet:
    p: complex


@dataclass(frozen=True)
class LineSet:
    axis: str        # "re" | "im"
    c: float


_PRIMS = (Disk, HalfPlane, Rect, FullPlane, PointSet, LineSet)


@dataclass(frozen=True)
class Region:
    """Expression tree: a primitive leaf or union/intersection/complement."""

    op: str                       # "prim" | "union" | "intersection" | "complement"
    prim: object = None
    children: tuple = ()

    def __post_init__(self):
        if self.op == "prim":
            if not isinstance(self.prim, _PRIMS):
                raise StructuralError(f"unknown region primitive {self.prim!r}")
        elif self.op in ("union", "intersection"):
            if not self.children:
                raise StructuralError(f"{self.op} of no regions")
        elif self.op == "complement":
            if len(self.children) != 1:
                raise StructuralError("complement takes exactly one region")
        else:
            raise StructuralError(f"unknown region op {self.op!r}")

    @property
    def contains_zero(self) -> bool:
        return contains(self, 0j)


def prim_region(p) -> Region:
    return Region("prim", prim=p)


def disk(center: complex, radius: float) -> Region:
    if radius <= 0:
        raise DomainError("disk radius must be positive")
    return prim_region(Disk(complex(center), float(radius)))


def half_plane(axis: str, threshold: float, side: str) -> Region:
    if axis not in ("re", "im") or side not in ("lt", "gt"):
        raise DomainError("half plane needs axis re|im and side lt|gt")
    return prim_region(HalfPlane(axis, float(threshold), side))


def rect(re_min, re_max, im_min, im_max) -> Region:
    if re_min >= re_max or im_min >= im_max:
        raise DomainError("empty rectangle")
    return prim_region(Rect(float(re_min), float(re_max), float(im_min), float(im_max)))


def full_plane() -> Region:
    return prim_region(FullPlane())


def runion(*rs: Region) -> Region:
    return Region("union", children=tuple(rs))


def rintersection(*rs: Region) -> Region:
    return Region("intersection", children=tuple(rs))


def rcomplement(r: Region) -> Region:
    return Region("complement", children=(r,))


def point_complement(p: complex) -> Region:
    return rcomplement(prim_region(PointSet(complex(p))))


def line_complement(c: float, axis: str = "re") -> Region:
    return rcomplement(prim_region(LineSet(axis, float(c))))


def omega0() -> Region:
    """The K0 region: the plane minus the line Re = 1/2."""
    return line_complement(0.5, "re")


def omega1() -> Region:
    """The K1 region: the plane minus the point -1."""
    return point_complement(-1.0 + 0.0j)


def _prim_contains(p, z: complex) -> bool:
    if isinstance(p, Disk):
        return abs(z - p.center) < p.radius
    if isinstance(p, HalfPlane):
        v = z.real if p.axis == "re" else z.imag
        return v < p.threshold if p.side == "lt" else v > p.threshold
    if isinstance(p, Rect):
        return p.re_min < z.real < p.re_max and p.im_min < z.imag < p.im_max
    if isinstance(p, FullPlane):
        return True
    if isinstance(p, PointSet):
        return z == p.p
    v = z.real if p.axis == "re" else z.imag
    return v == p.c


def contains(region: Region, z: complex) -> bool:
    z = complex(z)
    if region.op == "prim":
        return _prim_contains(region.prim, z)
    if region.op == "union":
        return any(contains(r, z) for r in region.children)
    if region.op == "intersection":
        return all(contains(r, z) for r in region.children)
    return not contains(region.children[0], z)


def primitives(region: Region) -> list:
    if region.op == "prim":
        return [region.prim]
    out = []
    for r in region.children:
        out.extend(primitives(r))
    return out


def _prim_boundary_distance(p, z: complex) -> float:
    if isinstance(p, Disk):
        return abs(abs(z - p.center) - p.radius)
    if isinstance(p, HalfPlane):
        v = z.real if p.axis == "re" else z.imag
        return abs(v - p.threshold)
    if isinstance(p, Rect):
        # distance to the rectangle's boundary curve
        dx = max(p.re_min - z.real, 0.0, z.real - p.re_max)
        dy = max(p.im_min - z.imag, 0.0, z.imag - p.im_max)
        if dx > 0.0 or dy > 0.0:
            return math.hypot(dx, dy)
        return min(z.real - p.re_min, p.re_max - z.real,
                   z.imag - p.im_min, p.im_max - z.imag)
    if isinstance(p, FullPlane):
        return math.inf
    if isinstance(p, PointSet):
        return abs(z - p.p)
    return abs((z.real if p.axis == "re" else z.imag) - p.c)


def boundary_distance(region: Region, z: complex) -> float:
    """Distance from z to the nearest primitive boundary (a sound lower bound
    on the distance to the actual region boundary)."""
    z = complex(z)
    return min(_prim_boundary_distance(p, z) for p in primitives(region))


def default_margin(lam: complex) -> float:
    return 1e-6 * (1.0 + abs(lam))


# vectorized versions for grid work -----------------------------------------

def contains_grid(region: Region, Z: np.ndarray) -> np.ndarray:
    if region.op == "prim":
        p = region.prim
        if isinstance(p, Disk):
            return np.abs(Z - p.center) < p.radius
        if isinstance(p, HalfPlane):
            v = Z.real if p.axis == "re" else Z.imag
            return v < p.threshold if p.side == "lt" else v > p.threshold
        if isinstance(p, Rect):
            return ((Z.real > p.re_min) & (Z.real < p.re_max)
                    & (Z.imag > p.im_min) & (Z.imag < p.im_max))
        if isinstance(p, FullPlane):
            return np.ones(Z.shape, dtype=bool)
        if isinstance(p, PointSet):
            return Z == p.p
        v = Z.real if p.axis == "re" else Z.imag
        return v == p.c
    if region.op == "union":
        out = contains_grid(region.children[0], Z)
        for r in region.children[1:]:
            out |= contains_grid(r, Z)
        return out
    if region.op == "intersection":
        out = contains_grid(region.children[0], Z)
        for r in region.children[1:]:
            out &= contains_grid(r, Z)
        return out
    return ~contains_grid(region.children[0], Z)


def boundary_distance_grid(region: Region, Z: np.ndarray) -> np.ndarray:
    out = np.full(Z.shape, np.inf)
    for p in primitives(region):
        if isinstance(p, Disk):
            d = np.abs(np.abs(Z - p.center) - p.radius)
        elif isinstance(p, HalfPlane):
            v = Z.real if p.axis == "re" else Z.imag
            d = np.abs(v - p.threshold)
        elif isinstance(p, Rect):
            dx = np.maximum(np.maximum(p.re_min - Z.real, 0.0), Z.real - p.re_max)
            dy = np.maximum(np.maximum(p.im_min - Z.imag, 0.0), Z.imag - p.im_max)
            outside = np.hypot(dx, dy)
            inside = np.minimum(np.minimum(Z.real - p.re_min, p.re_max - Z.real),
                                np.minimum(Z.imag - p.im_min, p.im_max - Z.imag))
            d = np.where(outside > 0.0, outside, inside)
        elif isinstance(p, FullPlane):
            continue
        elif isinstance(p, PointSet):
            d = np.abs(Z - p.p)
        else:
            v = Z.real if p.axis == "re" else Z.imag
            d = np.abs(v - p.c)
        out = np.minimum(out, d)
    return out


def segment_in_region(region: Region, z0: complex, z1: complex) -> bool:
    """Whether the whole closed segment [z0, z1] lies inside the region.

    Membership along the segment is piecewise constant between crossings of
    primitive boundaries, so it suffices to test the crossing points and the
    midpoints between consecutive crossings.
    """
    z0, z1 = complex(z0), complex(z1)
    if not (contains(region, z0) and contains(region, z1)):
        return False
    dz = z1 - z0
    if dz == 0:
        return True
    ts = {0.0, 1.0}
    scale = max(abs(z0), abs(z1), 1.0)
    for p in primitives(region):
        if isinstance(p, FullPlane):
            continue
        if isinstance(p, (HalfPlane, LineSet)):
            axis = p.axis
            c = p.threshold if isinstance(p, HalfPlane) else p.c
            num = c - (z0.real if axis == "re" else z0.imag)
            den = dz.real if axis == "re" else dz.imag
            if den != 0.0:
                t = num / den
                if 0.0 < t < 1.0:
                    ts.add(t)
        elif isinstance(p, Rect):
            for axis, c in (("re", p.re_min), ("re", p.re_max),
                            ("im", p.im_min), ("im", p.im_max)):
                num = c - (z0.real if axis == "re" else z0.imag)
                den = dz.real if axis == "re" else dz.imag
                if den != 0.0:
                    t = num / den
                    if 0.0 < t < 1.0:
                        ts.add(t)
        elif isinstance(p, Disk):
            aa = abs(dz) ** 2
            bb = 2.0 * ((z0 - p.center).conjugate() * dz).real
            cc = abs(z0 - p.center) ** 2 - p.radius**2
            disc = bb * bb - 4.0 * aa * cc
            if disc >= 0.0:
                root = math.sqrt(disc)
                for t in ((-bb - root) / (2 * aa), (-bb + root) / (2 * aa)):
                    if 0.0 < t < 1.0:
                        ts.add(t)
        elif isinstance(p, PointSet):
            t = ((p.p - z0).conjugate() * dz).real / abs(dz) ** 2
            if 0.0 < t < 1.0 and abs(z0 + t * dz - p.p) <= 1e-12 * scale:
                ts.add(t)
    order = sorted(ts)
    for t in order[1:-1]:
        if not contains(region, z0 + t * dz):
            return False
    for a, b in zip(order, order[1:]):
        if not contains(region, z0 + 0.5 * (a + b) * dz):
            return False
    return True


# JSON DSL -------------------------------------------------------------------

def region_to_json(region: Region):
    if region.op == "prim":
        p = region.prim
        if isinstance(p, Disk):
            return {"disk": {"center": [p.center.real, p.center.imag], "radius": p.radius}}
        if isinstance(p, HalfPlane):
            return {"half_plane": {"axis": p.axis, "threshold": p.threshold, "side": p.side}}
        if isinstance(p, Rect):
            return {"rect": {"re": [p.re_min, p.re_max], "im": [p.im_min, p.im_max]}}
        if isinstance(p, FullPlane):
            return "full_plane"
        if isinstance(p, PointSet):
            return {"point": [p.p.real, p.p.imag]}
        return {f"line_{p.axis}": p.c}
    if region.op == "complement":
        return {"op": "complement", "of": region_to_json(region.children[0])}
    return {"op": region.op, "of": [region_to_json(r) for r in region.children]}


def region_from_json(obj) -> Region:
    if obj == "full_plane":
        return full_plane()
    if not isinstance(obj, dict):
        raise StructuralError(f"bad region node {obj!r}")
    if "op" in obj:
        op = obj["op"]
        if op == "complement":
            return rcomplement(region_from_json(obj["of"]))
        if op in ("union", "intersection"):
            parts = [region_from_json(x) for x in obj["of"]]
            return Region(op, children=tuple(parts))
        raise StructuralError(f"unknown region op {op!r}")
    if "disk" in obj:
        d = obj["disk"]
        c = d["center"]
        return disk(complex(c[0], c[1]), d["radius"])
    if "half_plane" in obj:
        h = obj["half_plane"]
        return half_plane(h["axis"], h["threshold"], h["side"])
    if "rect" in obj:
        r = obj["rect"]
        return rect(r["re"][0], r["re"][1], r["im"][0], r["im"][1])
    if "full_plane" in obj:
        return full_plane()
    if "point" in obj:
        p = obj["point"]
        return prim_region(PointSet(complex(p[0], p[1])))
    if "point_complement" in obj:
        p = obj["point_complement"]
        return point_complement(complex(p[0], p[1]))
    if "line_re" in obj:
        return prim_region(LineSet("re", float(obj["line_re"])))
    if "line_im" in obj:
        return prim_region(LineSet("im", float(obj["line_im"])))
    if "line_complement" in obj:
        lc = obj["line_complement"]
        axis = "re" if "re" in lc else "im"
        return line_complement(float(lc[axis]), axis)
    raise StructuralError(f"unknown region primitive {obj!r}")


# ---------------------------------------------------------------------------
# matrices and spectra

def check_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructuralError("matrix must be square")
    if m.shape[0] > MAX_MATRIX_SIZE:
        raise DomainError(f"matrix size {m.shape[0]} exceeds desk-scale cap {MAX_MATRIX_SIZE}")
    if not np.isfinite(m).all():
        raise DomainError("matrix has non-finite entries")
    return m


def eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues with multiplicity, sorted by (real, imag) for determinism."""
    m = check_square(m)
    eigs = np.linalg.eigvals(m)
    order = np.lexsort((eigs.imag, eigs.real))
    return eigs[order]


def in_region(m: np.ndarray, region: Region, margin: float = 0.0) -> bool:
    """True iff every eigenvalue lies in the region, more than margin away
    from every primitive boundary."""
    if margin < 0:
        raise DomainError("margin must be nonnegative")
    for lam in eigenvalues(m):
        lam = complex(lam)
        if not contains(region, lam) or boundary_distance(region, lam) <= margin:
            return False
    return True


def matrix_to_json(m: np.ndarray) -> list:
    m = check_square(m)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    try:
        m = np.array([[complex(v[0], v[1]) for v in row] for row in obj])
    except (TypeError, IndexError) as exc:
        raise StructuralError(f"bad matrix JSON: {exc}")
    return check_square(m)


# ---------------------------------------------------------------------------
# contours

@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float
    nodes: int = DEFAULT_NODES


@dataclass(frozen=True)
class Contour:
    """Disjoint positively oriented circles, each inside the working region."""

    circles: tuple

    def __post_init__(self):
        cs = self.circles
        if not cs:
            raise GeometryError("contour with no circles")
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                if abs(cs[i].center - cs[j].center) <= cs[i].radius + cs[j].radius:
                    raise GeometryError("contour circles must be pairwise disjoint")

    def winding(self, z: complex) -> int:
        return sum(1 for c in self.circles if abs(z - c.center) < c.radius)


def build_contour(eigs: Sequence[complex], region: Region,
                  target: Optional[Callable[[complex], bool]] = None,
                  gap: Optional[float] = None, nodes: int = DEFAULT_NODES) -> Contour:
    """Disjoint circles around the targeted eigenvalue clusters, inside region.

    Clustering is single-linkage at `gap` (default 1e-2 * max |eig|); each
    circle's radius is the cluster radius plus half the room left by the
    nearest region boundary and the nearest foreign eigenvalue.
    """
    eigs = [complex(z) for z in eigs]
    if not eigs:
        raise DomainError("no eigenvalues to enclose")
    if target is None:
        target = lambda z: True
    scale = max(max(abs(z) for z in eigs), 1.0)
    if gap is None:
        gap = CLUSTER_GAP_REL * scale
    for z in eigs:
        if target(z):
            if not contains(region, z):
                raise GeometryError(f"targeted eigenvalue {z} lies outside the region")
            if boundary_distance(region, z) < BOUNDARY_EPS:
                raise GeometryError(f"eigenvalue {z} within {BOUNDARY_EPS} of a region boundary")

    clusters = _single_linkage(eigs, gap)
    for attempt in range(len(eigs) + 1):
        circles = []
        ok = True
        merge_pair = None
        for ci, cluster in enumerate(clusters):
            flags = {target(z) for z in cluster}
            if flags == {True, False}:
                raise GeometryError("cluster mixes targeted and untargeted eigenvalues")
            if flags == {False}:
                continue
            center = sum(cluster) / len(cluster)
            r_pts = max(abs(z - center) for z in cluster)
            d_bd = boundary_distance(region, center)
            foreign = [z for cj, other in enumerate(clusters) if cj != ci for z in other]
            d_other = min((abs(z - center) for z in foreign), default=math.inf)
            # cap keeps radii finite on boundary-free regions without
            # touching the containment/exclusion guarantees
            cap = r_pts + max(1.0, 0.5 * scale)
            room = min(d_bd, d_other, cap) - r_pts
            if room <= 0.0:
                if d_other < d_bd and foreign:
                    nearest = min(foreign, key=lambda z: abs(z - center))
                    merge_pair = (ci, nearest)
                    ok = False
                    break
                raise GeometryError("cluster cannot be enclosed inside the region")
            # 0.45 (not 0.5) keeps circles of adjacent bare clusters disjoint
            circles.append(Circle(center=center, radius=r_pts + 0.45 * room, nodes=nodes))
        if ok:
            try:
                contour = Contour(circles=tuple(circles))
            except GeometryError:
                clusters = _single_linkage(eigs, gap * 2.0)
                gap *= 2.0
                continue
            return contour
        # merge the offending cluster with the one owning the nearest foreign point
        ci, nearest = merge_pair
        cj = next(j for j, cl in enumerate(clusters) if nearest in cl)
        merged = clusters[ci] + clusters[cj]
        clusters = [cl for j, cl in enumerate(clusters) if j not in (ci, cj)] + [merged]
    raise GeometryError("contour construction did not stabilize")


def _single_linkage(points: Sequence[complex], gap: float) -> list:
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= gap:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(points[i])
    return list(groups.values())


# ---------------------------------------------------------------------------
# the closed function library

@dataclass(frozen=True)
class HoloFunction:
    """Closed enumeration of admissible integrands with declared domains."""

    kind: str                     # poly | exp | log | chi | chi_blend | rational
    coeffs: tuple = ()            # poly: ascending; rational: numerator
    den: tuple = ()               # rational: denominator, ascending
    t: float = 0.0                # chi_blend parameter

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        if self.kind == "poly":
            out = np.zeros_like(lam)
            for c in reversed(self.coeffs):
                out = out * lam + c
            return out
        if self.kind == "exp":
            return np.exp(lam)
        if self.kind == "log":
            return np.log(lam)
        if self.kind == "chi":
            return (lam.real > 0.5).astype(complex)
        if self.kind == "chi_blend":
            chi = (lam.real > 0.5).astype(complex)
            return (1.0 - self.t) * lam + self.t * chi
        num = np.zeros_like(lam)
        for c in reversed(self.coeffs):
            num = num * lam + c
        den = np.zeros_like(lam)
        for c in reversed(self.den):
            den = den * lam + c
        return num / den

    def poles(self) -> np.ndarray:
        if self.kind != "rational" or len(self.den) <= 1:
            return np.array([], dtype=complex)
        return np.roots(list(reversed(self.den)))

    def analytic_on_disk(self, center: complex, radius: float) -> bool:
        if self.kind in ("poly", "exp"):
            return True
        if self.kind == "log":
            # principal branch: the closed disk must avoid the slit (-inf, 0]
            if center.real > 0:
                return abs(center) > radius
            return abs(center.imag) > radius
        if self.kind in ("chi", "chi_blend"):
            return abs(center.real - 0.5) > radius
        return all(abs(p - center) > radius for p in self.poles())


def poly_fn(*coeffs) -> HoloFunction:
    return HoloFunction("poly", coeffs=tuple(complex(c) for c in coeffs))


def id_fn() -> HoloFunction:
    return poly_fn(0, 1)


def exp_fn() -> HoloFunction:
    return HoloFunction("exp")


def log_fn() -> HoloFunction:
    return HoloFunction("log")


def chi_fn() -> HoloFunction:
    """0 left of Re = 1/2, 1 right of it; locally constant, hence holomorphic
    away from the split line."""
    return HoloFunction("chi")


def chi_blend_fn(t: float) -> HoloFunction:
    """The straight-line deformation (1-t) id + t chi."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("deformation parameter must lie in [0, 1]")
    return HoloFunction("chi_blend", t=float(t))


def rational_fn(num, den) -> HoloFunction:
    num = tuple(complex(c) for c in num)
    den = tuple(complex(c) for c in den)
    if not any(den):
        raise DomainError("rational function with zero denominator")
    return HoloFunction("rational", coeffs=num, den=den)


def function_from_name(name: str) -> HoloFunction:
    """CLI lookup: id | square | exp | log | chi | chi_blend:t | poly:c0,c1,..."""
    head, _, arg = name.partition(":")
    if head == "id":
        return id_fn()
    if head == "square":
        return poly_fn(0, 0, 1)
    if head == "exp":
        return exp_fn()
    if head == "log":
        return log_fn()
    if head == "chi":
        return chi_fn()
    if head == "chi_blend":
        return chi_blend_fn(float(arg))
    if head == "poly":
        return poly_fn(*(complex(c) for c in arg.split(",")))
    raise StructuralError(f"unknown function selector {name!r}")


# ---------------------------------------------------------------------------
# quadrature

def _quadrature(f: HoloFunction, m: np.ndarray, circles, nodes: int) -> np.ndarray:
    n = m.shape[0]
    eye = np.eye(n, dtype=complex)
    total = np.zeros((n, n), dtype=complex)
    for circle in circles:
        js = np.arange(nodes)
        thetas = 2.0 * math.pi * js / nodes
        phases = np.exp(1j * thetas)
        lams = circle.center + circle.radius * phases
        fvals = f(lams)
        acc = np.zeros((n, n), dtype=complex)
        for fv, ph, lam in zip(fvals, phases, lams):
            A = lam * eye - m
            if n <= 64:
                if np.linalg.cond(A) > 1e12:
                    raise ConditioningError(
                        f"resolvent at {lam} has condition number > 1e12")
            resolvent = np.linalg.solve(A, eye)
            acc += fv * ph * resolvent
        total += (circle.radius / nodes) * acc
    return total


def holo_calc(f: HoloFunction, m: np.ndarray, contour: Contour,
              tol: float = QUAD_TOL, node_cap: int = NODE_CAP) -> np.ndarray:
    """Evaluate f(m) by trapezoid quadrature on the contour circles.

    Nodes double until successive results differ by less than tol in
    Frobenius norm (or the node cap is reached).  Raises AnalyticityError if
    f is not holomorphic on some closed contour disk.
    """
    m = check_square(m)
    for c in contour.circles:
        if not f.analytic_on_disk(c.center, c.radius):
            raise AnalyticityError(
                f"{f.kind} is not holomorphic on the disk around {c.center}")
    nodes = max(8, min(c.nodes for c in contour.circles))
    prev = _quadrature(f, m, contour.circles, nodes)
    while nodes < node_cap:
        nodes *= 2
        cur = _quadrature(f, m, contour.circles, nodes)
        if np.linalg.norm(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def holo_calc_auto(f: HoloFunction, m: np.ndarray, region: Region,
                   nodes: int = DEFAULT_NODES, margin: float = 0.0,
                   tol: float = QUAD_TOL) -> np.ndarray:
    """Convenience: build a full-spectrum contour inside region, then holo_calc."""
    m = check_square(m)
    if margin and not in_region(m, region, margin):
        raise DomainError("matrix spectrum violates the region margin")
    contour = build_contour(eigenvalues(m), region, None, nodes=nodes)
    return holo_calc(f, m, contour, tol=tol)


def homotopy_deformation_probe(m: np.ndarray, t: float,
                               region: Optional[Region] = None,
                               margin: float = 0.05,
                               nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Apply the deformation h_t = (1-t) id + t chi inside the K0 region.

    At t = 0 this reproduces m; at t = 1 it lands on an idempotent; it fixes
    idempotents for every t.
    """
    if region is None:
        region = omega0()
    m = check_square(m)
    if not in_region(m, region, margin):
        raise DomainError("matrix spectrum violates the deformation margin")
    return holo_calc_auto(chi_blend_fn(t), m, region, nodes=nodes)


def multiset_distance(A: Iterable[complex], B: Iterable[complex]) -> float:
    """Max matched distance under the optimal pairing of two equal-size multisets."""
    A = np.asarray(list(A), dtype=complex)
    B = np.asarray(list(B), dtype=complex)
    if A.shape != B.shape:
        raise StructuralError("multisets must have equal size")
    if A.size == 0:
        return 0.0
    cost = np.abs(A[:, None] - B[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
