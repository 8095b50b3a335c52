"""Sparse arithmetic in the group algebra CG and in matrix algebras over it.

Elements are finitely supported maps group element -> coefficient.
Coefficients are complex doubles by default; an exact Gaussian-rational mode
(pairs of fractions.Fraction) is available for identity tests where floating
point would blur exact cancellation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import groups
from .errors import DomainError, StructuralError
from .groups import GroupSpec

FLOAT_PURGE = 1e-300  # float-mode coefficients at or below this are dropped


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def exact_abs(self):
        """|z| as a Fraction when |z|^2 is a perfect rational square, else None."""
        a2 = self.abs2()
        num = math.isqrt(a2.numerator)
        den = math.isqrt(a2.denominator)
        if num * num == a2.numerator and den * den == a2.denominator:
            return Fraction(num, den)
        return None

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


def _as_gaussian(c) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, complex):
        return GaussianRational(Fraction(c.real), Fraction(c.imag))
    if isinstance(c, (int, Fraction)):
        return GaussianRational(Fraction(c), Fraction(0))
    if isinstance(c, float):
        return GaussianRational(Fraction(c), Fraction(0))
    if isinstance(c, tuple) and len(c) == 2:
        return GaussianRational(Fraction(c[0]), Fraction(c[1]))
    raise StructuralError(f"cannot coerce {c!r} to a Gaussian rational")


@dataclass(frozen=True, eq=False)
class AlgElement:
    """Finitely supported element of CG; treat as immutable after construction."""

    spec: GroupSpec
    terms: dict
    exact: bool = False

    def __eq__(self, other):
        return (isinstance(other, AlgElement) and self.spec == other.spec
                and self.exact == other.exact and self.terms == other.terms)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return convolve(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def coefficient(self, g):
        if self.exact:
            return self.terms.get(g, GaussianRational(Fraction(0), Fraction(0)))
        return self.terms.get(g, 0j)


def element(spec: GroupSpec, terms: Mapping, exact: bool = False) -> AlgElement:
    """Build an element, canonicalizing coefficients and purging zeros."""
    out = {}
    for g, c in terms.items():
        groups.validate_element(g, spec)
        if exact:
            c = _as_gaussian(c)
            if g in out:
                c = out[g] + c
            if not c.is_zero():
                out[g] = c
            elif g in out:
                del out[g]
        else:
            c = complex(c.to_complex() if isinstance(c, GaussianRational) else c)
            c = out.get(g, 0j) + c
            if abs(c) > FLOAT_PURGE:
                out[g] = c
            elif g in out:
                del out[g]
    return AlgElement(spec, out, exact)


def zero_element(spec: GroupSpec, exact: bool = False) -> AlgElement:
    return AlgElement(spec, {}, exact)


def delta(spec: GroupSpec, g=None, coeff=1, exact: bool = False) -> AlgElement:
    """The point mass at g (identity by default)."""
    if g is None:
        g = groups.identity(spec)
    return element(spec, {g: coeff}, exact)


def indicator(S: Iterable, spec: GroupSpec, exact: bool = False) -> AlgElement:
    """Characteristic element chi_S: coefficient 1 on each element of S."""
    S = set(S)
    if not S:
        raise DomainError("indicator of an empty set")
    return element(spec, {g: 1 for g in S}, exact)


def is_zero(a: AlgElement) -> bool:
    return not a.terms


def _check_compatible(a: AlgElement, b: AlgElement):
    if a.spec != b.spec:
        raise StructuralError(f"spec mismatch: {a.spec} vs {b.spec}")
    if a.exact != b.exact:
        raise StructuralError("cannot mix exact and float elements")


def add(a: AlgElement, b: AlgElement) -> AlgElement:
    _check_compatible(a, b)
    out = dict(a.terms)
    for g, c in b.terms.items():
        if g in out:
            s = out[g] + c
            dead = s.is_zero() if a.exact else abs(s) <= FLOAT_PURGE
            if dead:
                del out[g]
            else:
                out[g] = s
        else:
            out[g] = c
    return AlgElement(a.spec, out, a.exact)


def scale(lam, a: AlgElement) -> AlgElement:
    if a.exact:
        lam = _as_gaussian(lam)
        if lam.is_zero():
            return zero_element(a.spec, True)
        return AlgElement(a.spec, {g: lam * c for g, c in a.terms.items()}, True)
    lam = complex(lam)
    if lam == 0:
        return zero_element(a.spec, False)
    return AlgElement(a.spec, {g: lam * c for g, c in a.terms.items()}, False)


def convolve(a: AlgElement, b: AlgElement) -> AlgElement:
    """(a*b)(g) = sum_h a(h) b(h^-1 g); support contained in supp(a)supp(b)."""
    _check_compatible(a, b)
    spec = a.spec
    out = {}
    for g, cg in a.terms.items():
        for h, ch in b.terms.items():
            k = groups._multiply_unchecked(g, h, spec)
            c = cg * ch
            if k in out:
                out[k] = out[k] + c
            else:
                out[k] = c
    if a.exact:
        out = {g: c for g, c in out.items() if not c.is_zero()}
    else:
        out = {g: c for g, c in out.items() if abs(c) > FLOAT_PURGE}
    return AlgElement(spec, out, a.exact)


def involution(a: AlgElement) -> AlgElement:
    """a*(g) = conj(a(g^-1)); involutive, and (ab)* = b*a*."""
    spec = a.spec
    out = {}
    for g, c in a.terms.items():
        out[groups._inverse_unchecked(g, spec)] = c.conjugate()
    return AlgElement(spec, out, a.exact)


def power(a: AlgElement, n: int) -> AlgElement:
    if n < 0:
        raise DomainError("negative powers are not defined in CG")
    out = delta(a.spec, exact=a.exact)
    for _ in range(n):
        out = convolve(out, a)
    return out


def pointwise_abs(a: AlgElement) -> AlgElement:
    """|a|: replace every coefficient by its absolute value."""
    if a.exact:
        out = {}
        for g, c in a.terms.items():
            r = c.exact_abs()
            if r is None:
                raise DomainError("pointwise absolute value is irrational; use float mode")
            out[g] = GaussianRational(r, Fraction(0))
        return AlgElement(a.spec, out, True)
    return AlgElement(a.spec, {g: complex(abs(c)) for g, c in a.terms.items()}, False)


def _coeff_abs(c) -> float:
    if isinstance(c, GaussianRational):
        return math.sqrt(float(c.abs2()))
    return abs(c)


@dataclass(frozen=True)
class NormRecord:
    l1: float
    l2: float
    weighted_l2_s: float
    s: float


def l1_norm(a: AlgElement) -> float:
    return sum(_coeff_abs(c) for c in a.terms.values())


def l2_norm(a: AlgElement) -> float:
    return math.sqrt(sum(_coeff_abs(c) ** 2 for c in a.terms.values()))


def norms(a: AlgElement, s: float = 0.0) -> NormRecord:
    """l1, l2 and the weighted-l2 norm sqrt(sum |a_g|^2 (1+|g|)^{2s})."""
    if s < 0:
        raise DomainError("weight exponent must be nonnegative")
    l1 = 0.0
    sq = 0.0
    wsq = 0.0
    for g, c in a.terms.items():
        m = _coeff_abs(c)
        l1 += m
        sq += m * m
        wsq += m * m * (1.0 + groups.word_length(g, a.spec)) ** (2 * s)
    return NormRecord(l1=l1, l2=math.sqrt(sq), weighted_l2_s=math.sqrt(wsq), s=s)


def exact_l1_norm(a: AlgElement):
    """The l1 norm as an exact Fraction, or None if some modulus is irrational."""
    if not a.exact:
        return None
    total = Fraction(0)
    for c in a.terms.values():
        r = c.exact_abs()
        if r is None:
            return None
        total += r
    return total


def tau(a: AlgElement):
    """Canonical trace: the coefficient at the identity."""
    return a.coefficient(groups.identity(a.spec))


def is_selfadjoint(a: AlgElement, tol: float = 0.0) -> bool:
    b = involution(a)
    if a.exact:
        return b == a
    keys = set(a.terms) | set(b.terms)
    scalem = max((abs(c) for c in a.terms.values()), default=0.0)
    return all(abs(a.coefficient(g) - b.coefficient(g)) <= tol * max(scalem, 1.0) for g in keys)


def has_nonneg_real_coeffs(a: AlgElement) -> bool:
    if a.exact:
        return all(c.im == 0 and c.re >= 0 for c in a.terms.values())
    return all(c.imag == 0.0 and c.real >= 0.0 for c in a.terms.values())


def to_float(a: AlgElement) -> AlgElement:
    if not a.exact:
        return a
    return AlgElement(a.spec, {g: c.to_complex() for g, c in a.terms.items()}, False)


def to_exact(a: AlgElement) -> AlgElement:
    if a.exact:
        return a
    return element(a.spec, a.terms, exact=True)


def support_radius(a: AlgElement) -> int:
    """Circumscribing radius of the support (0 for the zero element)."""
    if is_zero(a):
        return 0
    return groups.circumscribing_radius(a.support(), a.spec)


# ---------------------------------------------------------------------------
# matrices over CG

@dataclass(frozen=True, eq=False)
class MatrixAlgElement:
    """Square matrix with AlgElement entries sharing one group spec."""

    size: int
    entries: tuple  # tuple of tuples of AlgElement

    def __post_init__(self):
        if self.size < 1 or len(self.entries) != self.size:
            raise StructuralError("matrix entries must form a square grid")
        spec = self.entries[0][0].spec
        exact = self.entries[0][0].exact
        for row in self.entries:
            if len(row) != self.size:
                raise StructuralError("matrix entries must form a square grid")
            for e in row:
                if e.spec != spec or e.exact != exact:
                    raise StructuralError("matrix entries must share one spec and mode")

    @property
    def spec(self) -> GroupSpec:
        return self.entries[0][0].spec

    @property
    def exact(self) -> bool:
        return self.entries[0][0].exact

    def __eq__(self, other):
        return (isinstance(other, MatrixAlgElement) and self.size == other.size
                and self.entries == other.entries)

    def __mul__(self, other):
        return mat_mul(self, other)


def matrix_element(rows) -> MatrixAlgElement:
    rows = tuple(tuple(r) for r in rows)
    return MatrixAlgElement(size=len(rows), entries=rows)


def scalar_diag_embed(a: AlgElement, n: int) -> MatrixAlgElement:
    z = zero_element(a.spec, a.exact)
    return matrix_element([[a if i == j else z for j in range(n)] for i in range(n)])


def mat_mul(m1: MatrixAlgElement, m2: MatrixAlgElement) -> MatrixAlgElement:
    if m1.size != m2.size:
        raise StructuralError("matrix size mismatch")
    n = m1.size
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero_element(m1.spec, m1.exact)
            for k in range(n):
                acc = add(acc, convolve(m1.entries[i][k], m2.entries[k][j]))
            row.append(acc)
        rows.append(row)
    return matrix_element(rows)


def mat_star(m: MatrixAlgElement) -> MatrixAlgElement:
    n = m.size
    return matrix_element([[involution(m.entries[j][i]) for j in range(n)] for i in range(n)])


def mat_power(m: MatrixAlgElement, n: int) -> MatrixAlgElement:
    if n < 0:
        raise DomainError("negative matrix powers are not defined")
    out = scalar_diag_embed(delta(m.spec, exact=m.exact), m.size)
    for _ in range(n):
        out = mat_mul(out, m)
    return out


def mat_support(m: MatrixAlgElement) -> frozenset:
    """Union of the entry supports (the matrix support convention)."""
    out = set()
    for row in m.entries:
        for e in row:
            out |= e.support()
    return frozenset(out)


def mat_norms(m: MatrixAlgElement, s: float = 0.0) -> NormRecord:
    """Summed entrywise norms ||(a_ij)||_k = sum_ij ||a_ij||_k."""
    l1 = l2 = wl2 = 0.0
    for row in m.entries:
        for e in row:
            r = norms(e, s)
            l1 += r.l1
            l2 += r.l2
            wl2 += r.weighted_l2_s
    return NormRecord(l1=l1, l2=l2, weighted_l2_s=wl2, s=s)


# ---------------------------------------------------------------------------
# element files: {"group": spec, "terms": [{"word": ..., "re": ..., "im": ...}]}

def element_to_json_obj(a: AlgElement) -> dict:
    terms = []
    for g in sorted(a.terms, key=repr):
        c = a.terms[g]
        c = c.to_complex() if a.exact else c
        terms.append({"word": groups.element_to_json(g, a.spec),
                      "re": c.real, "im": c.imag})
    return {"group": groups.spec_to_json(a.spec), "terms": terms}


def element_from_json_obj(obj, exact: bool = False) -> AlgElement:
    if not isinstance(obj, dict) or "group" not in obj or "terms" not in obj:
        raise StructuralError("element file needs 'group' and 'terms' fields")
    spec = groups.spec_from_json(obj["group"])
    terms = {}
    for i, t in enumerate(obj["terms"]):
        if "word" not in t:
            raise StructuralError(f"terms[{i}]: missing 'word' field")
        g = groups.parse_element(t["word"], spec)
        c = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        terms[g] = terms.get(g, 0j) + c
    return element(spec, terms, exact=exact)


def load_element_file(path: str, exact: bool = False) -> AlgElement:
    if path.endswith(".toml"):
        try:
            import tomllib  # Python >= 3.11
        except ImportError:
            import tomli as tomllib
        with open(path, "rb") as fh:
            obj = tomllib.load(fh)
    else:
        with open(path) as fh:
            obj = json.load(fh)
    return element_from_json_obj(obj, exact=exact)
