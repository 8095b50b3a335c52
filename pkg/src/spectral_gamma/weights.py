"""Subexponential weights on finite subsets and the norm-control criterion.

A weight assigns omega(S) >= 1 to finite nonempty subsets, monotonically in
S.  Subexponential means omega(S^n)^(1/n) -> 1 for every S; that is what
makes the control inequality ||a||_B <= C omega(supp a) ||a||_A transfer
spectral radii between completions, at scalar and matrix level alike.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from . import algebra, groups, spectra
from .algebra import AlgElement, MatrixAlgElement
from .errors import CapabilityError, DomainError, ResourceCapError
from .groups import GroupSpec

DEFAULT_SET_CAP = 200000


@dataclass(frozen=True)
class Weight:
    """growth_sqrt: sqrt(vol B(S)); polynomial: (1+R(S))^s; constant: c."""

    kind: str
    spec: GroupSpec
    s: float = 0.0
    c: float = 1.0

    def __post_init__(self):
        if self.kind not in ("growth_sqrt", "polynomial", "constant"):
            raise DomainError(f"unknown weight kind {self.kind!r}")
        if self.kind == "polynomial" and self.s < 0:
            raise DomainError("polynomial weight exponent must be nonnegative")
        if self.kind == "constant" and self.c < 1:
            raise DomainError("constant weight must be >= 1")

    def describe(self) -> str:
        if self.kind == "polynomial":
            return f"polynomial:{self.s}"
        if self.kind == "constant":
            return f"constant:{self.c}"
        return "growth_sqrt"


def growth_sqrt(spec: GroupSpec) -> Weight:
    return Weight("growth_sqrt", spec)


def polynomial(spec: GroupSpec, s: float) -> Weight:
    return Weight("polynomial", spec, s=s)


def constant(spec: GroupSpec, c: float) -> Weight:
    return Weight("constant", spec, c=c)


def exact_ball_volume(spec: GroupSpec, r: int, cap: int = groups.DEFAULT_BALL_CAP) -> int:
    """Exact |B(r)|: closed forms where available, BFS enumeration otherwise."""
    if spec.kind == "lattice":
        return groups.lattice_ball_volume(spec.param, r)
    if spec.kind == "free":
        return groups.free_ball_volume(spec.param, r)
    if spec.kind == "cyclic":
        return min(2 * r + 1, spec.param)
    return groups.ball(r, spec, cap).volume


def evaluate(w: Weight, S, cap: int = groups.DEFAULT_BALL_CAP) -> float:
    """The defining formula, exactly (BFS-backed volumes obey the cap)."""
    S = set(S)
    if not S:
        raise DomainError("weight of an empty set")
    if w.kind == "constant":
        return w.c
    R = groups.circumscribing_radius(S, w.spec, cap)
    return _evaluate_at_radius(w, R, cap)


def _evaluate_at_radius(w: Weight, R: int, cap: int) -> float:
    if w.kind == "constant":
        return w.c
    if w.kind == "polynomial":
        return float((1.0 + R) ** w.s)
    return math.sqrt(exact_ball_volume(w.spec, R, cap))


# ---------------------------------------------------------------------------
# subexponentiality probes

@dataclass(frozen=True)
class ProbeEntry:
    n: int
    value: float
    mode: str  # product-set | ball-bound


@dataclass(frozen=True)
class SubexpProbe:
    weight_kind: str
    entries: tuple
    decreasing_tail: bool
    final: float
    verdict: str

    def to_json(self) -> dict:
        return {"weight": self.weight_kind,
                "entries": [[e.n, e.value, e.mode] for e in self.entries],
                "decreasing_tail": self.decreasing_tail,
                "final": self.final, "verdict": self.verdict}


def _set_product(A: set, B: set, spec: GroupSpec) -> set:
    return {groups._multiply_unchecked(a, b, spec) for a in A for b in B}


def subexponentiality_probe(w: Weight, S, n_max: int = 64,
                            set_cap: int = DEFAULT_SET_CAP,
                            ball_cap: int = groups.DEFAULT_BALL_CAP) -> SubexpProbe:
    """Sequence omega(S^n)^(1/n) along n = 1, 2, 4, ....

    S^n is enumerated as an exact product set while it fits set_cap; beyond
    that the sound upper bound omega(B(n R(S))) takes over (S^n is contained
    in that ball), and each entry records which mode produced it.
    """
    S = set(S)
    if not S:
        raise DomainError("probe of an empty set")
    for g in S:
        groups.validate_element(g, w.spec)
    R1 = groups.circumscribing_radius(S, w.spec, ball_cap)
    entries = []
    current: Optional[set] = set(S)
    n = 1
    while n <= n_max:
        if current is not None:
            radius = groups.circumscribing_radius(current, w.spec, ball_cap)
            mode = "product-set"
        else:
            radius = n * R1
            mode = "ball-bound"
        omega = _evaluate_at_radius(w, radius, ball_cap)
        entries.append(ProbeEntry(n=n, value=omega ** (1.0 / n), mode=mode))
        if 2 * n > n_max:
            break
        if current is not None:
            if len(current) ** 2 > 10 * set_cap:
                current = None
            else:
                current = _set_product(current, current, w.spec)
                if len(current) > set_cap:
                    current = None
        n *= 2
    tail = [e.value for e in entries[-4:]]
    decreasing = all(b < a for a, b in zip(tail, tail[1:])) and len(tail) >= 2
    final = entries[-1].value
    verdict = ("consistent-with-subexponential"
               if decreasing and final <= 1.2 else "not-subexponential-like")
    return SubexpProbe(weight_kind=w.describe(), entries=tuple(entries),
                       decreasing_tail=decreasing, final=final, verdict=verdict)


# ---------------------------------------------------------------------------
# norm selectors (closed enumeration) and the control criterion

@dataclass(frozen=True)
class NormSelector:
    """One of l1 | l2 | weighted_l2 (exponent s) | fourier_opnorm (grid)."""

    kind: str
    s: float = 0.0
    grid: int = 1024

    def __post_init__(self):
        if self.kind not in ("l1", "l2", "weighted_l2", "fourier_opnorm"):
            raise DomainError(f"unknown norm selector {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "weighted_l2":
            return f"weighted_l2:{self.s}"
        return self.kind


def _norm_interval(a: AlgElement, sel: NormSelector):
    """Certified [lo, hi] for the selected norm of a scalar element."""
    if sel.kind == "l1":
        v = algebra.l1_norm(a)
        return v, v
    if sel.kind == "l2":
        v = algebra.l2_norm(a)
        return v, v
    if sel.kind == "weighted_l2":
        v = algebra.norms(a, sel.s).weighted_l2_s
        return v, v
    if a.spec.kind != "lattice":
        raise CapabilityError("fourier_opnorm is only computable on lattice specs")
    if algebra.is_zero(a):
        return 0.0, 0.0
    est = spectra.fourier_opnorm_lattice(a, sel.grid)
    return est.lower, est.upper


def _mat_norm_interval(m: MatrixAlgElement, sel: NormSelector):
    lo = hi = 0.0
    for row in m.entries:
        for e in row:
            a, b = _norm_interval(e, sel)
            lo += a
            hi += b
    return lo, hi


@dataclass(frozen=True)
class SampleCheck:
    index: int
    lhs_lower: float
    lhs_upper: float
    rhs: float
    margin: float
    status: str  # holds | violated | unresolved


@dataclass(frozen=True)
class ControlReport:
    """Per-sample verification of ||a||_B <= C omega(supp a) ||a||_A."""

    norm_b: str
    norm_a: str
    constant: float
    weight_kind: str
    checks: tuple
    n_samples: int
    n_violations: int
    n_unresolved: int

    @property
    def all_hold(self) -> bool:
        return self.n_violations == 0

    def violations(self):
        return [c for c in self.checks if c.status == "violated"]

    def to_json(self) -> dict:
        return {"norm_b": self.norm_b, "norm_a": self.norm_a, "C": self.constant,
                "weight": self.weight_kind, "n_samples": self.n_samples,
                "n_violations": self.n_violations, "n_unresolved": self.n_unresolved,
                "checks": [{"index": c.index, "lhs_lower": c.lhs_lower,
                            "lhs_upper": c.lhs_upper, "rhs": c.rhs,
                            "margin": c.margin, "status": c.status}
                           for c in self.checks]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["index", "lhs_lower", "lhs_upper", "rhs", "margin", "status"])
        for c in self.checks:
            writer.writerow([c.index, repr(c.lhs_lower), repr(c.lhs_upper),
                             repr(c.rhs), repr(c.margin), c.status])
        return buf.getvalue()


def _build_report(entries, norm_b, norm_a, C, w) -> ControlReport:
    checks = tuple(entries)
    return ControlReport(
        norm_b=norm_b.describe(), norm_a=norm_a.describe(), constant=C,
        weight_kind=w.describe(), checks=checks, n_samples=len(checks),
        n_violations=sum(c.status == "violated" for c in checks),
        n_unresolved=sum(c.status == "unresolved" for c in checks))


def control_check(samples: Sequence[AlgElement], norm_a: NormSelector,
                  norm_b: NormSelector, C: float, w: Weight,
                  ball_cap: int = groups.DEFAULT_BALL_CAP) -> ControlReport:
    """Check ||a||_B <= C omega(supp a) ||a||_A on each sample.

    A sample is `violated` only when its certified lhs interval lies strictly
    above the rhs; `unresolved` when only the upper end exceeds the rhs.
    """
    entries = []
    for i, a in enumerate(samples):
        if algebra.is_zero(a):
            raise DomainError(f"sample {i} is the zero element")
        lo, hi = _norm_interval(a, norm_b)
        alo, ahi = _norm_interval(a, norm_a)
        omega = evaluate(w, a.support(), ball_cap)
        rhs = C * omega * ahi
        slack = 1e-12 * max(1.0, rhs)
        if lo > rhs + slack:
            status = "violated"
        elif hi <= rhs + slack:
            status = "holds"
        else:
            status = "unresolved"
        entries.append(SampleCheck(index=i, lhs_lower=lo, lhs_upper=hi, rhs=rhs,
                                   margin=rhs - hi, status=status))
    return _build_report(entries, norm_b, norm_a, C, w)


def matrix_control_check(samples: Sequence[MatrixAlgElement], norm_a: NormSelector,
                         norm_b: NormSelector, C: float, w: Weight,
                         ball_cap: int = groups.DEFAULT_BALL_CAP) -> ControlReport:
    """control_check with the summed matrix norms ||(a_ij)||_k = sum_ij ||a_ij||_k
    and the union-of-entries matrix support."""
    entries = []
    for i, m in enumerate(samples):
        support = algebra.mat_support(m)
        if not support:
            raise DomainError(f"sample {i} is the zero matrix")
        lo, hi = _mat_norm_interval(m, norm_b)
        alo, ahi = _mat_norm_interval(m, norm_a)
        omega = evaluate(w, support, ball_cap)
        rhs = C * omega * ahi
        slack = 1e-12 * max(1.0, rhs)
        if lo > rhs + slack:
            status = "violated"
        elif hi <= rhs + slack:
            status = "holds"
        else:
            status = "unresolved"
        entries.append(SampleCheck(index=i, lhs_lower=lo, lhs_upper=hi, rhs=rhs,
                                   margin=rhs - hi, status=status))
    return _build_report(entries, norm_b, norm_a, C, w)


def support_union_weight_check(m: MatrixAlgElement, w: Weight, n_max: int = 4,
                               set_cap: int = DEFAULT_SET_CAP,
                               ball_cap: int = groups.DEFAULT_BALL_CAP):
    """Verify omega(supp(M^n)) <= omega((supp M)^n) for n <= n_max.

    Returns a list of (n, lhs, rhs, ok); the containment of supports makes
    this hold for every monotone weight.
    """
    rows = []
    spec = m.spec
    base = set(algebra.mat_support(m))
    if not base:
        raise DomainError("zero matrix has no support to check")
    power = m
    prod = set(base)
    for n in range(1, n_max + 1):
        if n > 1:
            power = algebra.mat_mul(power, m)
            prod = _set_product(prod, base, spec)
            if len(prod) > set_cap:
                raise ResourceCapError(f"support product cap {set_cap} exceeded at n={n}")
        lhs = evaluate(w, algebra.mat_support(power), ball_cap)
        rhs = evaluate(w, prod, ball_cap)
        rows.append((n, lhs, rhs, lhs <= rhs * (1 + 1e-12)))
    return rows
