"""Closed-form stable ranks for C(Sigma) and desk-scale Lg checks over C.

The k-connected stable rank csr_k is the least n such that the spaces of
left-generating m-tuples are k-connected for all m >= n.  Exact values are
available for the encoded families (points, cubes, tori, spheres, and
finite CW descriptors with declared cohomology facts); everything else gets
the dimensional upper bound ceil((dim+k)/2)+1, tagged as bound-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, StructuralError

EXACT = "exact-formula"
BOUND = "upper-bound-only"


@dataclass(frozen=True)
class SpaceDescriptor:
    """Point, Torus(d), Sphere(d), Cube(k), or FiniteCW(dim, cohomology flags)."""

    kind: str
    dim: int = 0
    top_cohom_nonzero: bool = False
    codim1_cohom_nonzero: bool = False

    def __post_init__(self):
        if self.kind not in ("point", "torus", "sphere", "cube", "finite_cw"):
            raise StructuralError(f"unknown space kind {self.kind!r}")
        if self.dim < 0:
            raise StructuralError("dimension must be nonnegative")

    def __str__(self):
        if self.kind == "point":
            return "point"
        if self.kind == "finite_cw":
            flags = []
            if self.top_cohom_nonzero:
                flags.append("top")
            if self.codim1_cohom_nonzero:
                flags.append("codim1")
            return f"cw:{self.dim}" + (":" + ",".join(flags) if flags else "")
        return f"{self.kind}:{self.dim}"


def point() -> SpaceDescriptor:
    return SpaceDescriptor("point", 0)


def torus(d: int) -> SpaceDescriptor:
    return SpaceDescriptor("torus", d)


def sphere(d: int) -> SpaceDescriptor:
    return SpaceDescriptor("sphere", d)


def cube(k: int) -> SpaceDescriptor:
    return SpaceDescriptor("cube", k)


def finite_cw(dim: int, top_cohom_nonzero: bool = False,
              codim1_cohom_nonzero: bool = False) -> SpaceDescriptor:
    return SpaceDescriptor("finite_cw", dim, top_cohom_nonzero, codim1_cohom_nonzero)


def space_from_shorthand(text: str) -> SpaceDescriptor:
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head == "point":
        return point()
    if head in ("torus", "sphere", "cube"):
        return SpaceDescriptor(head, int(rest))
    if head == "cw":
        dim_s, _, flags_s = rest.partition(":")
        flags = {f.strip() for f in flags_s.split(",") if f.strip()}
        bad = flags - {"top", "codim1"}
        if bad:
            raise StructuralError(f"unknown cw flags {sorted(bad)}")
        return finite_cw(int(dim_s), "top" in flags, "codim1" in flags)
    raise StructuralError(f"unknown space shorthand {text!r}")


@dataclass(frozen=True)
class RankValue:
    value: int
    exact: bool

    @property
    def provenance(self) -> str:
        return EXACT if self.exact else BOUND

    def to_json(self) -> dict:
        return {"value": self.value, "provenance": self.provenance}


def csr_upper_bound(dim: int, k: int) -> int:
    """The dimensional bound csr_k(C(Sigma)) <= ceil((dim + k)/2) + 1."""
    if dim < 0 or k < 0:
        raise DomainError("dimension and k must be nonnegative")
    return math.ceil((dim + k) / 2) + 1


def tsr_commutative(dim: int) -> int:
    """tsr(C(Sigma)) = floor(dim/2) + 1 for compact Sigma."""
    if dim < 0:
        raise DomainError("dimension must be nonnegative")
    return dim // 2 + 1


def csr_k_formula(space: SpaceDescriptor, k: int) -> RankValue:
    """csr_k of C(space): exact for the encoded families, bound-only otherwise.

    Contractible spaces reduce to csr_k(C) = ceil(k/2) + 1; tori and spheres
    follow the dimensional formula, with the single exception csr(C(S^2)) = 1.
    Finite CW descriptors are exact when the declared cohomology facts apply
    (nonzero top cohomology for k >= 1; for k = 0, nonzero top cohomology in
    odd dimension or nonzero codimension-1 cohomology in even dimension).
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    if space.kind in ("point", "cube"):
        return RankValue(math.ceil(k / 2) + 1, True)
    if space.kind == "torus":
        return RankValue(csr_upper_bound(space.dim, k), True)
    if space.kind == "sphere":
        if k == 0 and space.dim == 2:
            return RankValue(1, True)
        return RankValue(csr_upper_bound(space.dim, k), True)
    d = space.dim
    if k >= 1:
        return RankValue(csr_upper_bound(d, k), space.top_cohom_nonzero)
    if (d % 2 == 1 and space.top_cohom_nonzero) or \
       (d % 2 == 0 and space.codim1_cohom_nonzero):
        return RankValue(csr_upper_bound(d, 0), True)
    return RankValue(csr_upper_bound(d, 0), False)


def tsr(space: SpaceDescriptor) -> int:
    return tsr_commutative(space.dim)


def csr_tsr_bound(tsr_value: int, k: int, rieffel: bool = False) -> int:
    """csr_k(A) <= tsr(A) + k + 1; with the (conjectural) Rieffel estimate,
    csr_k(A) <= tsr(A) + floor(k/2) + 1."""
    if tsr_value < 1 or k < 0:
        raise DomainError("tsr must be >= 1 and k nonnegative")
    if rieffel:
        return tsr_value + k // 2 + 1
    return tsr_value + k + 1


@dataclass(frozen=True)
class HsrBounds:
    """Certified bounds on the k-homotopy stabilization rank."""

    k: int
    lower: int
    upper: int
    exact: bool

    def to_json(self) -> dict:
        return {"k": self.k, "lower": self.lower, "upper": self.upper,
                "exact": self.exact}


def hsr_bounds(space: SpaceDescriptor, k: int) -> HsrBounds:
    """hsr_k <= csr_{k+1} - 1 always; hsr_k >= csr_k - 1 whenever csr_k - 1
    exceeds csr - 1 (forced by the max inequality).  Bound-only csr values
    still give sound upper bounds but never force the lower one."""
    if k < 0:
        raise DomainError("k must be nonnegative")
    upper = csr_k_formula(space, k + 1).value - 1
    ck = csr_k_formula(space, k)
    csr0_upper = csr_k_formula(space, 0).value
    lower = 0
    if ck.exact and ck.value - 1 > csr0_upper - 1:
        lower = ck.value - 1
    if lower > upper:
        raise StructuralError("hsr bounds crossed; formula inconsistency")
    return HsrBounds(k=k, lower=lower, upper=upper, exact=lower == upper)


@dataclass(frozen=True)
class StabilizationThresholds:
    """Matrix sizes from which the K-groups read off homotopy groups of GL_n."""

    k1_from_csr: RankValue        # K1 = pi_0(GL_n) for n >= csr_1 - 1
    k0_from_csr: RankValue        # K0 = pi_1(GL_n) for n >= csr_2 - 1
    k1_from_tsr: int              # n >= tsr + 1
    k0_from_tsr: int              # n >= tsr + 2
    k1_from_tsr_rieffel: int      # n >= tsr       (under (R))
    k0_from_tsr_rieffel: int      # n >= tsr + 1   (under (R))

    def to_json(self) -> dict:
        return {"k1_from_csr": self.k1_from_csr.to_json(),
                "k0_from_csr": self.k0_from_csr.to_json(),
                "k1_from_tsr": self.k1_from_tsr,
                "k0_from_tsr": self.k0_from_tsr,
                "k1_from_tsr_rieffel": self.k1_from_tsr_rieffel,
                "k0_from_tsr_rieffel": self.k0_from_tsr_rieffel}


def k_stability_thresholds(space: SpaceDescriptor) -> StabilizationThresholds:
    c1 = csr_k_formula(space, 1)
    c2 = csr_k_formula(space, 2)
    t = tsr(space)
    return StabilizationThresholds(
        k1_from_csr=RankValue(c1.value - 1, c1.exact),
        k0_from_csr=RankValue(c2.value - 1, c2.exact),
        k1_from_tsr=t + 1, k0_from_tsr=t + 2,
        k1_from_tsr_rieffel=t, k0_from_tsr_rieffel=t + 1)


# ---------------------------------------------------------------------------
# left-generating tuples over C and M_m(C)

def lg_membership(elements: Sequence, size: int = 1,
                  rank_tol: float = 1e-10) -> bool:
    """Whether (a_1, ..., a_n) generates M_size(C) as a left ideal.

    Over C this is the nonzero test; over M_m(C) the vertical stack of the
    entries must have full column rank (singular values above
    rank_tol * ||stack||).
    """
    elements = list(elements)
    if not elements:
        raise DomainError("empty tuple has no generating content")
    if size == 1:
        vals = [complex(np.asarray(e).reshape(()).item()) if isinstance(e, np.ndarray)
                else complex(e) for e in elements]
        return any(v != 0 for v in vals)
    mats = []
    for e in elements:
        e = np.asarray(e, dtype=complex)
        if e.shape != (size, size):
            raise StructuralError(f"expected {size}x{size} blocks, got {e.shape}")
        mats.append(e)
    stack = np.vstack(mats)
    s = np.linalg.svd(stack, compute_uv=False)
    if s[0] == 0.0:
        return False
    return int((s > rank_tol * s[0]).sum()) >= size


@dataclass(frozen=True)
class BassReduction:
    witnesses: tuple
    reduced: tuple


def bass_reduce(scalars: Sequence[complex]) -> BassReduction:
    """One Bass reduction step over C: from Lg_{n+1}(C) to Lg_n(C).

    Returns witnesses x with (a_i + x_i a_{n+1}) nonzero as a tuple; over C
    the single nonzero coordinate makes bsr(C) = 1 work at every n >= 1.
    """
    scalars = tuple(complex(a) for a in scalars)
    if len(scalars) < 2:
        raise DomainError("need at least two entries to reduce")
    if not lg_membership(scalars, 1):
        raise DomainError("input tuple is not left-generating")
    head, last = scalars[:-1], scalars[-1]
    n = len(head)
    if any(a != 0 for a in head):
        witnesses = (0j,) * n
    else:
        witnesses = (1 + 0j,) + (0j,) * (n - 1)
    reduced = tuple(a + x * last for a, x in zip(head, witnesses))
    if not lg_membership(reduced, 1):
        raise StructuralError("reduction produced a non-generating tuple")
    return BassReduction(witnesses=witnesses, reduced=reduced)


# ---------------------------------------------------------------------------
# tables

def rank_table(spaces: Sequence[SpaceDescriptor], ks: Sequence[int]) -> list:
    """Rows of csr/tsr/hsr/threshold data over a (space, k) grid."""
    rows = []
    for space in spaces:
        t = tsr(space)
        thresholds = k_stability_thresholds(space)
        for k in ks:
            c = csr_k_formula(space, k)
            h = hsr_bounds(space, k)
            rows.append({
                "space": str(space), "dim": space.dim, "k": int(k),
                "csr_k": c.value, "csr_k_provenance": c.provenance,
                "csr_upper_bound": csr_upper_bound(space.dim, k),
                "tsr": t,
                "hsr_lower": h.lower, "hsr_upper": h.upper, "hsr_exact": h.exact,
                "k1_threshold": thresholds.k1_from_csr.value,
                "k0_threshold": thresholds.k0_from_csr.value,
            })
    return rows
