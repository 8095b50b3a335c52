"""Certified spectral-radius and reduced-norm estimation for CG elements.

Every reported number carries a certified interval.  Upper bounds for the
l1 radius come from renormalized repeated squaring (with honest slack for
any truncated mass); lower bounds come from structural certificates
(nonnegative coefficients, free-subsemigroup supports) or from
trace-moment estimates, which always underestimate the reduced norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import signal

from . import algebra, groups
from .algebra import AlgElement
from .errors import DomainError, ResourceCapError, StructuralError
from .groups import GroupSpec

DEFAULT_N_MAX = 1024
DEFAULT_SUPPORT_CAP = 2000
DEFAULT_GRID = 1024
_CONV_SLACK = 1e-13       # relative floating-point slack charged per squaring
_DENSE_SIZE_CAP = 2**26   # dense lattice arrays beyond this raise a cap error


@dataclass(frozen=True)
class SpectralEstimate:
    """A value with certified lower/upper bounds and its convergence trace."""

    value: float
    lower: float
    upper: float
    trace: tuple            # ((n, estimate), ...) with strictly increasing n
    n_max: int
    method: str = ""

    def __post_init__(self):
        if not self.trace:
            raise StructuralError("estimate trace must be nonempty")
        ns = [n for n, _ in self.trace]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise StructuralError("trace indices must be strictly increasing")
        slack = 1e-9 * max(1.0, abs(self.value)) + 1e-12
        if not (self.lower <= self.value + slack and self.value <= self.upper + slack):
            raise StructuralError(
                f"certified interval violated: {self.lower} <= {self.value} <= {self.upper}")

    def width(self) -> float:
        return self.upper - self.lower

    def to_json(self) -> dict:
        return {"value": self.value, "lower": self.lower, "upper": self.upper,
                "trace": [[int(n), float(v)] for n, v in self.trace]}


def _doubling_indices(n_max: int):
    n = 1
    while n <= n_max:
        yield n
        n *= 2


def _require_power_of_two(n_max: int):
    if n_max < 2 or n_max & (n_max - 1):
        raise DomainError(f"n_max must be a power of two >= 2, got {n_max}")


# ---------------------------------------------------------------------------
# renormalized repeated squaring

class _SquaringEngine:
    """Tracks a normalized power p ~ a^(2^m)/exp(log_scale) with l1 error <= delta.

    Lattice specs use dense arrays with FFT convolution; everything else uses
    sparse dicts.  Truncated mass and convolution round-off are folded into
    delta, so every derived bound stays certified.
    """

    def __init__(self, a: AlgElement, cap_support: int = DEFAULT_SUPPORT_CAP):
        if algebra.is_zero(a):
            raise DomainError("spectral estimation of the zero element")
        a = algebra.to_float(a)
        self.spec = a.spec
        self.cap = cap_support
        self.trunc_rel = 1e-14 if not groups.is_subexponential(a.spec) else 0.0
        self.n = 1
        self.delta = 1e-15
        self.dense = a.spec.kind == "lattice"
        l1 = algebra.l1_norm(a)
        self.log_scale = math.log(l1)
        if self.dense:
            self._arr, self._offset = _to_dense(a)
            self._arr = self._arr / l1
        else:
            self._terms = {g: c / l1 for g, c in a.terms.items()}

    # -- accessors (all in normalized units) --------------------------------

    def l1(self) -> float:
        if self.dense:
            return float(np.abs(self._arr).sum())
        return sum(abs(c) for c in self._terms.values())

    def l2(self) -> float:
        if self.dense:
            return float(np.sqrt((np.abs(self._arr) ** 2).sum()))
        return math.sqrt(sum(abs(c) ** 2 for c in self._terms.values()))

    def tau(self) -> complex:
        if self.dense:
            idx = tuple(-o for o in self._offset)
            if any(i < 0 or i >= s for i, s in zip(idx, self._arr.shape)):
                return 0j
            return complex(self._arr[idx])
        return self._terms.get(groups.identity(self.spec), 0j)

    # -- certified readouts --------------------------------------------------

    def l1_upper_root(self) -> float:
        """Certified upper bound for ||a^n||_1^(1/n) at the current n."""
        return math.exp((self.log_scale + math.log1p(self.delta)) / self.n)

    def l2_upper_root(self) -> float:
        return math.exp((self.log_scale + math.log(self.l2() + self.delta)) / self.n)

    def tau_lower_root(self, root: int) -> Optional[float]:
        """Certified (tau a^n)^(1/root) lower bound, or None if slack swallows it."""
        t = self.tau().real - self.delta
        if t <= 0.0:
            return None
        return math.exp((self.log_scale + math.log(t)) / root)

    # -- stepping -------------------------------------------------------------

    def square(self) -> bool:
        """Advance n -> 2n; returns False if a resource cap stops the squaring."""
        if self.dense:
            new_size = 1
            for s in self._arr.shape:
                new_size *= 2 * s - 1
            if new_size > _DENSE_SIZE_CAP:
                return False
            sq = signal.fftconvolve(self._arr, self._arr)
            self._offset = tuple(2 * o for o in self._offset)
            nu_raw = float(np.abs(sq).sum())
            dropped = 0.0
            self._arr = sq
        else:
            if len(self._terms) ** 2 > 4 * 10**7:
                return False
            sq = _dict_square(self._terms, self.spec)
            nu_raw = sum(abs(c) for c in sq.values())
            sq, dropped = _truncate_terms(sq, nu_raw * self.trunc_rel, self.cap)
            self._terms = sq
        nu = nu_raw - dropped
        if nu <= 0.0:
            return False
        if self.dense:
            self._arr = self._arr / nu
        else:
            self._terms = {g: c / nu for g, c in self._terms.items()}
        self.log_scale = 2 * self.log_scale + math.log(nu)
        self.delta = (2 * self.delta + self.delta**2 + dropped + _CONV_SLACK) / nu
        self.n *= 2
        return True


def _to_dense(a: AlgElement):
    d = a.spec.param
    keys = list(a.terms)
    lo = tuple(min(k[i] for k in keys) for i in range(d))
    hi = tuple(max(k[i] for k in keys) for i in range(d))
    shape = tuple(h - l + 1 for l, h in zip(lo, hi))
    arr = np.zeros(shape, dtype=complex)
    for g, c in a.terms.items():
        arr[tuple(x - l for x, l in zip(g, lo))] = c
    return arr, lo


def _dict_square(terms: dict, spec: GroupSpec) -> dict:
    mul = groups._multiply_unchecked
    items = list(terms.items())
    out = {}
    get = out.get
    for g, cg in items:
        for h, ch in items:
            k = mul(g, h, spec)
            out[k] = get(k, 0j) + cg * ch
    return out


def _truncate_terms(terms: dict, threshold: float, cap: int):
    """Drop small coefficients; returns (kept, total dropped l1 mass)."""
    dropped = 0.0
    if threshold > 0.0:
        kept = {}
        for g, c in terms.items():
            if abs(c) > threshold:
                kept[g] = c
            else:
                dropped += abs(c)
        terms = kept
    if len(terms) > cap:
        ranked = sorted(terms.items(), key=lambda item: abs(item[1]), reverse=True)
        for g, c in ranked[cap:]:
            dropped += abs(c)
        terms = dict(ranked[:cap])
    return terms, dropped


# ---------------------------------------------------------------------------
# structural lower-bound certificates

def free_subsemigroup_certificate(S, spec: GroupSpec) -> bool:
    """Certified sufficient condition: the support words form a cancellation-free
    uniquely decodable code, so the subsemigroup they generate is free.

    Checks (a) no word is the identity, (b) no free cancellation at any junction,
    (c) Sardinas-Patterson unique decodability over the letter alphabet.
    """
    if spec.kind != "free":
        return False
    words = [tuple(w) for w in S]
    if not words or any(not w for w in words):
        return False
    for u in words:
        for v in words:
            if u[-1] == -v[0]:
                return False
    code = set(words)
    danglers = set()
    for u in code:
        for v in code:
            if u != v and len(u) < len(v) and v[:len(u)] == u:
                danglers.add(v[len(u):])
    seen = set(danglers)
    frontier = danglers
    while frontier:
        new = set()
        for d in frontier:
            for c in code:
                if len(c) <= len(d) and d[:len(c)] == c:
                    suffix = d[len(c):]
                    if not suffix:
                        return False
                    if suffix not in seen:
                        new.add(suffix)
                if len(d) < len(c) and c[:len(d)] == d:
                    suffix = c[len(d):]
                    if not suffix:
                        return False
                    if suffix not in seen:
                        new.add(suffix)
        seen |= new
        frontier = new
    return True


def cyclic_subgroup_image(a: AlgElement):
    """If supp(a) lies in a cyclic subgroup <w> of a free group, return the
    corresponding element of Z (lattice:1) and the root word; else None.

    The reduced-norm and lp norms are preserved: subgroup inclusions induce
    isometric embeddings of both l1 and the reduced completion.
    """
    if a.spec.kind != "free" or algebra.is_zero(a):
        return None
    nontrivial = [g for g in a.terms if g]
    if not nontrivial:
        z = groups.integer_lattice(1)
        c = a.coefficient(groups.identity(a.spec))
        return algebra.element(z, {(0,): c}, exact=False), ()
    g0 = min(nontrivial, key=len)
    root = None
    for ell in range(1, len(g0) + 1):
        if len(g0) % ell:
            continue
        w = g0[:ell]
        if w * (len(g0) // ell) == g0:
            root = w
            break
    if root is None or root[0] == -root[-1]:
        return None  # require a cyclically reduced root so powers concatenate
    winv = tuple(-x for x in reversed(root))
    ell = len(root)
    image = {}
    for g, c in algebra.to_float(a).terms.items():
        if not g:
            image[(0,)] = image.get((0,), 0j) + c
            continue
        if len(g) % ell:
            return None
        j = len(g) // ell
        if root * j == g:
            key = (j,)
        elif winv * j == g:
            key = (-j,)
        else:
            return None
        image[key] = image.get(key, 0j) + c
    z = groups.integer_lattice(1)
    return algebra.element(z, image, exact=False), root


# ---------------------------------------------------------------------------
# l1 Gelfand radius

def l1_spectral_radius(a: AlgElement, n_max: int = DEFAULT_N_MAX,
                       lower_hints: Sequence[float] = (),
                       cap_support: int = DEFAULT_SUPPORT_CAP,
                       use_certificates: bool = True) -> SpectralEstimate:
    """Gelfand limit ||a^n||_1^(1/n) along n = 2^m, by renormalized squaring.

    Every trace term is a certified upper bound for the l1 spectral radius.
    The lower bound is the best of: a caller-supplied reduced-norm bound, the
    nonnegative-coefficient identity r = ||a||_1, or the free-subsemigroup
    certificate (same identity).  Pass use_certificates=False to force the
    squaring trace even when a certificate pins the value.
    """
    if algebra.is_zero(a):
        raise DomainError("l1 spectral radius of the zero element")
    _require_power_of_two(n_max)
    l1 = algebra.l1_norm(a)
    cert = 0.0
    method = "gelfand-squaring"
    if use_certificates and algebra.has_nonneg_real_coeffs(a):
        cert = l1
        method = "nonneg-coefficients"
    elif use_certificates and free_subsemigroup_certificate(a.support(), a.spec):
        cert = l1
        method = "free-subsemigroup"
    if cert:
        trace = tuple((n, l1) for n in _doubling_indices(n_max))
        return SpectralEstimate(value=l1, lower=l1, upper=l1, trace=trace,
                                n_max=n_max, method=method)
    eng = _SquaringEngine(a, cap_support)
    trace = [(1, l1)]
    while eng.n < n_max and eng.square():
        trace.append((eng.n, eng.l1_upper_root()))
    upper = min(v for _, v in trace)
    lower = max([0.0, *lower_hints])
    lower = min(lower, upper)  # clamp tiny fp excess of certified hints
    return SpectralEstimate(value=upper, lower=lower, upper=upper,
                            trace=tuple(trace), n_max=trace[-1][0], method=method)


# ---------------------------------------------------------------------------
# reduced norm via trace moments

def reduced_norm_trace(a: AlgElement, n_max: int = DEFAULT_N_MAX,
                       cap_support: int = DEFAULT_SUPPORT_CAP) -> SpectralEstimate:
    """Estimate ||a|| in the reduced completion via tau((a*a)^n)^(1/2n).

    tau(b) is the coefficient at the identity.  Each moment root is a
    certified lower bound (tau is a state, so tau((a*a)^n) <= ||a||^(2n)),
    and the sequence increases to ||a|| because the trace is faithful.
    The upper bound is ||a||_1.
    """
    if algebra.is_zero(a):
        raise DomainError("reduced norm of the zero element")
    _require_power_of_two(n_max)
    a = algebra.to_float(a)
    b = algebra.convolve(algebra.involution(a), a)
    if b.spec.kind == "free":
        # a*a inside a cyclic subgroup: same tau moments, but the powers stay
        # one-dimensional, so the dense lattice engine applies
        image = cyclic_subgroup_image(b)
        if image is not None:
            b = image[0]
    l1_a = algebra.l1_norm(a)
    trace = [(1, algebra.l2_norm(a))]  # tau(b) = ||a||_2^2
    eng = _SquaringEngine(b, cap_support)
    while eng.n < n_max and eng.square():
        est = eng.tau_lower_root(2 * eng.n)
        if est is not None:
            trace.append((eng.n, est))
    lower = max(v for _, v in trace)
    lower = min(lower, l1_a)
    return SpectralEstimate(value=lower, lower=lower, upper=l1_a,
                            trace=tuple(trace), n_max=trace[-1][0],
                            method="trace-moments")


# ---------------------------------------------------------------------------
# lattice and cyclic Fourier oracles

def fourier_opnorm_lattice(a: AlgElement, grid: int = DEFAULT_GRID) -> SpectralEstimate:
    """Reduced norm on Z^d as the sup of |a-hat| over the d-torus.

    lower = max over the sampled grid; upper adds the Lipschitz slack
    L * (2 pi / grid) with L = sum |a_g| |g|.
    """
    if a.spec.kind != "lattice":
        raise StructuralError("Fourier operator norm requires an integer-lattice spec")
    if algebra.is_zero(a):
        raise DomainError("operator norm of the zero element")
    if grid < 8:
        raise DomainError("Fourier grid must be at least 8")
    a = algebra.to_float(a)
    d = a.spec.param
    lower = _fourier_abs_max(a.terms, d, grid)
    lip = sum(abs(c) * groups.word_length(g, a.spec) for g, c in a.terms.items())
    upper = lower + lip * (2.0 * math.pi / grid)
    return SpectralEstimate(value=lower, lower=lower, upper=upper,
                            trace=((grid, lower),), n_max=grid, method="fourier-grid")


def _fourier_abs_max(terms: dict, d: int, grid: int) -> float:
    theta = 2.0 * math.pi * np.arange(grid) / grid
    block = max(1, int(2**22 // max(1, grid ** (d - 1))))
    best = 0.0
    for start in range(0, grid, block):
        th0 = theta[start:start + block]
        shape0 = (-1,) + (1,) * (d - 1)
        acc = np.zeros((len(th0),) + (grid,) * (d - 1), dtype=complex)
        for g, c in terms.items():
            phase = g[0] * th0.reshape(shape0)
            for j in range(1, d):
                sh = [1] * d
                sh[j] = grid
                phase = phase + g[j] * theta.reshape(sh)
            acc += c * np.exp(1j * phase)
        best = max(best, float(np.abs(acc).max()))
    return best


def cyclic_opnorm_exact(a: AlgElement) -> SpectralEstimate:
    """Reduced norm on Z/n: exact maximum of |a-hat| over all n characters."""
    if a.spec.kind != "cyclic":
        raise StructuralError("exact DFT norm requires a cyclic spec")
    if algebra.is_zero(a):
        raise DomainError("operator norm of the zero element")
    n = a.spec.param
    a = algebra.to_float(a)
    j = np.arange(n)
    vals = np.zeros(n, dtype=complex)
    for g, c in a.terms.items():
        vals += c * np.exp(2j * math.pi * g * j / n)
    v = float(np.abs(vals).max())
    slack = 1e-12 * v + 1e-15
    return SpectralEstimate(value=v, lower=max(v - slack, 0.0), upper=v + slack,
                            trace=((n, v),), n_max=n, method="cyclic-dft")


# ---------------------------------------------------------------------------
# free-group radial elements: exact tree walk counts + Haagerup upper bound

def tree_walk_count(rank: int, steps: int, distance: int = 0) -> int:
    """Exact number of length-`steps` walks from the root of the 2k-regular
    tree ending at distance `distance` (summed over endpoints)."""
    if rank < 2:
        raise DomainError("tree walk counts require free rank >= 2")
    row = _tree_rows(rank, steps)
    return row[distance] if distance < len(row) else 0


def _tree_rows(rank: int, steps: int) -> list:
    q = 2 * rank - 1
    row = [1]
    for m in range(1, steps + 1):
        prev = row
        row = [0] * (m + 1)
        if len(prev) > 1:
            row[0] = prev[1]
        for dd in range(1, m + 1):
            out = prev[dd - 1] * (2 * rank if dd == 1 else q) if dd - 1 < len(prev) else 0
            if dd + 1 < len(prev):
                out += prev[dd + 1]
            row[dd] = out
    return row


def _free_radial_chi_estimate(rank: int, n_max: int) -> SpectralEstimate:
    """Certified estimate of ||chi_S|| for S the full standard generating set.

    Lower bounds: exact return counts M(2n,0)^(1/2n).  Upper bounds: the
    free-group layer inequality ||f|| <= (d+1)||f||_2 for f supported on the
    distance-d sphere, applied to high powers with exact layer l2 norms.
    """
    q = 2 * rank - 1
    mmax = 2 * n_max
    want_tau = {2 * n for n in _doubling_indices(n_max)}
    checkpoints = {n_max, mmax}
    row = [1]
    trace = []
    upper = float(2 * rank)
    for m in range(1, mmax + 1):
        prev = row
        row = [0] * (m + 1)
        if len(prev) > 1:
            row[0] = prev[1]
        for dd in range(1, m + 1):
            out = prev[dd - 1] * (2 * rank if dd == 1 else q) if dd - 1 < len(prev) else 0
            if dd + 1 < len(prev):
                out += prev[dd + 1]
            row[dd] = out
        if m in want_tau:
            trace.append((m // 2, math.exp(math.log(row[0]) / m)))
        if m in checkpoints:
            upper = min(upper, _haagerup_upper(row, rank, m))
    lower = max(v for _, v in trace)
    return SpectralEstimate(value=trace[-1][1], lower=lower, upper=upper,
                            trace=tuple(trace), n_max=n_max, method="tree-walks+haagerup")


def _haagerup_upper(row: list, rank: int, m: int) -> float:
    """(sum_d (d+1) ||layer_d||_2)^(1/m) for the m-th power of chi_gens."""
    q = 2 * rank - 1
    logs = []
    for d, count in enumerate(row):
        if count == 0:
            continue
        log_sphere = 0.0 if d == 0 else math.log(2 * rank) + (d - 1) * math.log(q)
        logs.append(math.log(d + 1) + math.log(count) - 0.5 * log_sphere)
    top = max(logs)
    total = top + math.log(sum(math.exp(x - top) for x in logs))
    return math.exp(total / m) * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# operator-norm routing

def operator_norm_estimate(a: AlgElement, n_max: int = DEFAULT_N_MAX,
                           grid: int = DEFAULT_GRID,
                           cap_support: int = DEFAULT_SUPPORT_CAP) -> SpectralEstimate:
    """Best available certified estimate of the reduced operator norm.

    Routes to the exact oracles where the group structure allows (lattice
    Fourier, cyclic DFT, cyclic subgroups of free groups, radial free-group
    elements) and falls back to trace moments with the l1 upper bound.
    """
    if algebra.is_zero(a):
        raise DomainError("operator norm of the zero element")
    a = algebra.to_float(a)
    spec = a.spec
    if spec.kind == "lattice":
        return fourier_opnorm_lattice(a, grid)
    if spec.kind == "cyclic":
        return cyclic_opnorm_exact(a)
    if spec.kind == "free":
        image = cyclic_subgroup_image(a)
        if image is not None:
            est = fourier_opnorm_lattice(image[0], grid)
            return SpectralEstimate(value=est.value, lower=est.lower, upper=est.upper,
                                    trace=est.trace, n_max=est.n_max,
                                    method="cyclic-subgroup+" + est.method)
        radial = _radial_multiple_of_generators(a)
        if radial is not None and spec.param >= 2:
            lam = radial
            est = _free_radial_chi_estimate(spec.param, n_max)
            return SpectralEstimate(value=lam * est.value, lower=lam * est.lower,
                                    upper=lam * est.upper,
                                    trace=tuple((n, lam * v) for n, v in est.trace),
                                    n_max=est.n_max, method=est.method)
        b_img = cyclic_subgroup_image(
            algebra.convolve(algebra.involution(a), a))
        if b_img is not None:
            est = fourier_opnorm_lattice(b_img[0], grid)
            trace = tuple((n, math.sqrt(max(v, 0.0))) for n, v in est.trace)
            return SpectralEstimate(value=math.sqrt(max(est.value, 0.0)),
                                    lower=math.sqrt(max(est.lower, 0.0)),
                                    upper=math.sqrt(max(est.upper, 0.0)),
                                    trace=trace, n_max=est.n_max,
                                    method="aa*-cyclic-subgroup+" + est.method)
    return reduced_norm_trace(a, n_max, cap_support)


def _radial_multiple_of_generators(a: AlgElement) -> Optional[float]:
    """lam > 0 if a = lam * chi_{standard generators}, else None."""
    gens = set(groups.generators(a.spec))
    if a.support() != gens or not gens:
        return None
    coeffs = list(a.terms.values())
    c0 = coeffs[0]
    if c0.imag != 0.0 or c0.real <= 0.0:
        return None
    if any(c != c0 for c in coeffs):
        return None
    return c0.real


# ---------------------------------------------------------------------------
# Sigma_1 verdicts

@dataclass(frozen=True)
class Sigma1Verdict:
    """Comparison of the l1 radius against the reduced norm for one element."""

    element_id: str
    r_l1: SpectralEstimate
    opnorm: SpectralEstimate
    verdict: str           # consistent-with-sigma1 | violation-witness | inconclusive
    margin: float

    def __post_init__(self):
        if self.verdict == "violation-witness" and not self.r_l1.lower > self.opnorm.upper:
            raise StructuralError("violation witness requires disjoint certified intervals")

    def to_json(self) -> dict:
        return {"element": self.element_id, "r_l1": self.r_l1.to_json(),
                "opnorm": self.opnorm.to_json(), "verdict": self.verdict,
                "margin": self.margin}


def sigma1_verdict(a: AlgElement, n_max: int = DEFAULT_N_MAX, tol: float = 0.05,
                   grid: int = DEFAULT_GRID, cap_support: int = DEFAULT_SUPPORT_CAP,
                   label: str = "") -> Sigma1Verdict:
    """Test the condition r_l1(a) <= ||a|| on certified intervals.

    violation-witness only when the certified intervals are disjoint with the
    l1 radius above; consistent when r_l1's upper bound sits below the
    reduced-norm lower bound up to `tol`; inconclusive otherwise.
    """
    if algebra.is_zero(a):
        raise DomainError("sigma1 verdict of the zero element")
    op = operator_norm_estimate(a, n_max=n_max, grid=grid, cap_support=cap_support)
    hints = []
    if algebra.is_selfadjoint(a, tol=1e-12):
        # for self-adjoint a the reduced norm equals the reduced spectral
        # radius, which never exceeds the l1 radius
        hints.append(op.lower)
    r1 = l1_spectral_radius(a, n_max=n_max, lower_hints=hints, cap_support=cap_support)
    if r1.lower > op.upper:
        verdict, margin = "violation-witness", r1.lower - op.upper
    elif r1.upper <= op.lower * (1.0 + tol) + 1e-12:
        verdict, margin = "consistent-with-sigma1", op.upper - r1.upper
    else:
        verdict, margin = "inconclusive", r1.upper - op.upper
    if not label:
        label = f"{a.spec}:{len(a.terms)}-terms"
    return Sigma1Verdict(element_id=label, r_l1=r1, opnorm=op,
                         verdict=verdict, margin=margin)


# ---------------------------------------------------------------------------
# Kesten amenability check

@dataclass(frozen=True)
class KestenReport:
    radius: SpectralEstimate
    card: int
    amenable_consistent: bool
    method: str

    def to_json(self) -> dict:
        return {"radius": self.radius.to_json(), "card": self.card,
                "amenable_consistent": self.amenable_consistent, "method": self.method}


def kesten_check(S, spec: GroupSpec, n_max: int = DEFAULT_N_MAX,
                 grid: int = 4096, cap_support: int = DEFAULT_SUPPORT_CAP) -> KestenReport:
    """Kesten criterion data: certified interval for ||chi_S|| vs #S.

    amenable_consistent holds iff the certified interval contains #S.
    Requires S symmetric (closed under inverses).
    """
    S = set(S)
    if not S:
        raise DomainError("Kesten check of an empty set")
    for g in S:
        if groups.inverse(g, spec) not in S:
            raise DomainError("Kesten criterion requires a symmetric set")
    chi = algebra.indicator(S, spec)
    est = operator_norm_estimate(chi, n_max=n_max, grid=grid, cap_support=cap_support)
    card = len(S)
    consistent = est.lower <= card <= est.upper
    return KestenReport(radius=est, card=card, amenable_consistent=consistent,
                        method=est.method)


# ---------------------------------------------------------------------------
# exact small-power probe

def free_semigroup_l1_probe(a: AlgElement, N: int,
                            cap_support: int = 10**6) -> bool:
    """True iff ||a^n||_1 = ||a||_1^n for all n <= N, by exact convolution."""
    if N > 12:
        raise DomainError("probe limited to N <= 12 (exact convolution cost)")
    if algebra.is_zero(a):
        raise DomainError("probe of the zero element")
    ax = algebra.to_exact(a)
    base = algebra.exact_l1_norm(ax)
    power = algebra.delta(ax.spec, exact=True)
    for n in range(1, N + 1):
        power = algebra.convolve(power, ax)
        if len(power.terms) > cap_support:
            raise ResourceCapError(f"probe support cap {cap_support} exceeded at n={n}")
        lhs = algebra.exact_l1_norm(power)
        if base is not None and lhs is not None:
            if lhs != base**n:
                return False
        else:
            lf = algebra.l1_norm(power)
            rf = algebra.l1_norm(ax) ** n
            if not math.isclose(lf, rf, rel_tol=1e-12):
                return False
    return True


# ---------------------------------------------------------------------------
# subexponential sandwich

def subexp_sandwich_radius(a: AlgElement, n_max: int = DEFAULT_N_MAX,
                           cap_support: int = DEFAULT_SUPPORT_CAP) -> SpectralEstimate:
    """Growth-refined Gelfand trace ||a^n||_2^(1/n) vol B(nR)^(1/2n).

    Valid only on subexponential-growth specs, where a^n is supported in
    B(nR) and ||a^n||_1 <= sqrt(vol B(nR)) ||a^n||_2; both the plain and the
    refined trace are certified upper bounds for the l1 radius.
    """
    if algebra.is_zero(a):
        raise DomainError("sandwich radius of the zero element")
    if not groups.is_subexponential(a.spec):
        raise DomainError("the sandwich argument requires subexponential growth")
    _require_power_of_two(n_max)
    a = algebra.to_float(a)
    R = algebra.support_radius(a)
    trace = []
    vol1 = groups.ball_volume_upper(a.spec, R)
    trace.append((1, algebra.l2_norm(a) * math.sqrt(vol1)))
    plain = [algebra.l1_norm(a)]
    eng = _SquaringEngine(a, cap_support)
    while eng.n < n_max and eng.square():
        vol = groups.ball_volume_upper(a.spec, eng.n * R)
        refined = eng.l2_upper_root() * math.exp(math.log(vol) / (2 * eng.n))
        trace.append((eng.n, refined))
        plain.append(eng.l1_upper_root())
    upper = min(min(v for _, v in trace), min(plain))
    lower = algebra.l1_norm(a) if algebra.has_nonneg_real_coeffs(a) else 0.0
    lower = min(lower, upper)
    return SpectralEstimate(value=upper, lower=lower, upper=upper,
                            trace=tuple(trace), n_max=trace[-1][0],
                            method="subexponential-sandwich")
