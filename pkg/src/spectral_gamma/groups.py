"""Computable group models: exact arithmetic, word metric, ball enumeration.

Supported kinds: integer lattices Z^d, free groups F_k, the discrete
Heisenberg group H_3(Z), finite cyclic groups Z/n, and finite direct
products of these.  Each kind fixes its standard symmetric generating set;
elements are plain hashable values in a canonical normal form:

* lattice   -- tuple of d ints
* free      -- tuple of nonzero ints (+i = i-th generator, -i = inverse),
               freely reduced
* heisenberg-- (x, y, z) int triple for the upper-triangular matrix
               [[1, x, z], [0, 1, y], [0, 0, 1]]
* cyclic    -- int in [0, n)
* product   -- tuple of component elements
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .errors import DomainError, ResourceCapError, StructuralError

GroupElement = object  # canonical forms are tuples/ints as documented above

DEFAULT_BALL_CAP = 10**7


@dataclass(frozen=True)
class GroupSpec:
    """A computable group model; use the factory functions below."""

    kind: str                                # lattice | free | heisenberg | cyclic | product
    param: int = 0                           # d, rank, or n
    factors: tuple["GroupSpec", ...] = ()

    def __post_init__(self):
        if self.kind in ("lattice", "free", "cyclic"):
            if self.param < 1:
                raise StructuralError(f"{self.kind} parameter must be >= 1, got {self.param}")
        elif self.kind == "heisenberg":
            pass
        elif self.kind == "product":
            if not self.factors:
                raise StructuralError("product of zero factors")
        else:
            raise StructuralError(f"unknown group kind {self.kind!r}")

    def __str__(self):
        if self.kind == "product":
            return "x".join(str(f) for f in self.factors)
        if self.kind == "heisenberg":
            return "heisenberg"
        return f"{self.kind}:{self.param}"


def integer_lattice(d: int) -> GroupSpec:
    return GroupSpec("lattice", d)


def free_group(rank: int) -> GroupSpec:
    return GroupSpec("free", rank)


def heisenberg() -> GroupSpec:
    return GroupSpec("heisenberg")


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", n)


def direct_product(*factors: GroupSpec) -> GroupSpec:
    return GroupSpec("product", factors=tuple(factors))


# ---------------------------------------------------------------------------
# element arithmetic


def identity(spec: GroupSpec) -> GroupElement:
    if spec.kind == "lattice":
        return (0,) * spec.param
    if spec.kind == "free":
        return ()
    if spec.kind == "heisenberg":
        return (0, 0, 0)
    if spec.kind == "cyclic":
        return 0
    return tuple(identity(f) for f in spec.factors)


def validate_element(g: GroupElement, spec: GroupSpec) -> None:
    """Raise StructuralError unless g is a canonical element of spec."""
    ok = False
    if spec.kind == "lattice":
        ok = isinstance(g, tuple) and len(g) == spec.param and all(isinstance(x, int) for x in g)
    elif spec.kind == "free":
        ok = (isinstance(g, tuple)
              and all(isinstance(x, int) and x != 0 and abs(x) <= spec.param for x in g)
              and all(g[i] != -g[i + 1] for i in range(len(g) - 1)))
    elif spec.kind == "heisenberg":
        ok = isinstance(g, tuple) and len(g) == 3 and all(isinstance(x, int) for x in g)
    elif spec.kind == "cyclic":
        ok = isinstance(g, int) and 0 <= g < spec.param
    elif spec.kind == "product":
        if isinstance(g, tuple) and len(g) == len(spec.factors):
            for gi, fi in zip(g, spec.factors):
                validate_element(gi, fi)
            ok = True
    if not ok:
        raise StructuralError(f"{g!r} is not a canonical element of {spec}")


def _free_concat(u: tuple, v: tuple) -> tuple:
    """Concatenate freely reduced words, cancelling at the junction."""
    u = list(u)
    i = 0
    while u and i < len(v) and u[-1] == -v[i]:
        u.pop()
        i += 1
    return tuple(u) + v[i:]


def multiply(g: GroupElement, h: GroupElement, spec: GroupSpec) -> GroupElement:
    validate_element(g, spec)
    validate_element(h, spec)
    return _multiply_unchecked(g, h, spec)


def _multiply_unchecked(g, h, spec: GroupSpec):
    if spec.kind == "lattice":
        return tuple(a + b for a, b in zip(g, h))
    if spec.kind == "free":
        return _free_concat(g, h)
    if spec.kind == "heisenberg":
        a, b, c = g
        ap, bp, cp = h
        return (a + ap, b + bp, c + cp + a * bp)
    if spec.kind == "cyclic":
        return (g + h) % spec.param
    return tuple(_multiply_unchecked(gi, hi, fi) for gi, hi, fi in zip(g, h, spec.factors))


def inverse(g: GroupElement, spec: GroupSpec) -> GroupElement:
    validate_element(g, spec)
    return _inverse_unchecked(g, spec)


def _inverse_unchecked(g, spec: GroupSpec):
    if spec.kind == "lattice":
        return tuple(-x for x in g)
    if spec.kind == "free":
        return tuple(-x for x in reversed(g))
    if spec.kind == "heisenberg":
        a, b, c = g
        return (-a, -b, a * b - c)
    if spec.kind == "cyclic":
        return (-g) % spec.param
    return tuple(_inverse_unchecked(gi, fi) for gi, fi in zip(g, spec.factors))


def generators(spec: GroupSpec) -> list:
    """The standard symmetric generating set, as a list of elements."""
    if spec.kind == "lattice":
        gens = []
        for i in range(spec.param):
            e = [0] * spec.param
            e[i] = 1
            gens.append(tuple(e))
            e2 = [0] * spec.param
            e2[i] = -1
            gens.append(tuple(e2))
        return gens
    if spec.kind == "free":
        return [(i,) for i in range(1, spec.param + 1)] + [(-i,) for i in range(1, spec.param + 1)]
    if spec.kind == "heisenberg":
        return [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]
    if spec.kind == "cyclic":
        if spec.param == 1:
            return []
        return sorted({1 % spec.param, (-1) % spec.param})
    gens = []
    for i, f in enumerate(spec.factors):
        for s in generators(f):
            e = list(identity(spec))
            e[i] = s
            gens.append(tuple(e))
    return gens


# ---------------------------------------------------------------------------
# word metric

class _HeisenbergMetric:
    """Lazily expanded BFS table for the Heisenberg word metric."""

    def __init__(self):
        self.dist = {(0, 0, 0): 0}
        self.frontier = [(0, 0, 0)]
        self.radius = 0

    def expand(self):
        spec = heisenberg()
        gens = generators(spec)
        new = []
        for g in self.frontier:
            for s in gens:
                h = _multiply_unchecked(g, s, spec)
                if h not in self.dist:
                    self.dist[h] = self.radius + 1
                    new.append(h)
        self.frontier = new
        self.radius += 1

    def length(self, g, cap: int) -> int:
        while g not in self.dist:
            if len(self.dist) > cap:
                raise ResourceCapError(
                    f"Heisenberg BFS cap {cap} exceeded at radius {self.radius}")
            self.expand()
        return self.dist[g]


_HEIS_METRIC = _HeisenbergMetric()


def word_length(g: GroupElement, spec: GroupSpec, cap: int = DEFAULT_BALL_CAP) -> int:
    validate_element(g, spec)
    if spec.kind == "lattice":
        return sum(abs(x) for x in g)
    if spec.kind == "free":
        return len(g)
    if spec.kind == "heisenberg":
        return _HEIS_METRIC.length(g, cap)
    if spec.kind == "cyclic":
        return min(g, spec.param - g)
    return sum(word_length(gi, fi, cap) for gi, fi in zip(g, spec.factors))


def circumscribing_radius(S: Iterable, spec: GroupSpec, cap: int = DEFAULT_BALL_CAP) -> int:
    """Radius of the smallest ball around the identity containing S."""
    S = list(S)
    if not S:
        raise DomainError("circumscribing radius of an empty set")
    return max(word_length(g, spec, cap) for g in S)


# ---------------------------------------------------------------------------
# balls

@dataclass(frozen=True)
class BallTable:
    radius: int
    elements: frozenset = field(repr=False)
    volume: int

    def __post_init__(self):
        if self.volume != len(self.elements):
            raise StructuralError("ball volume disagrees with element count")


def ball(r: int, spec: GroupSpec, cap: int = DEFAULT_BALL_CAP) -> BallTable:
    """Exact ball of the word metric, by breadth-first enumeration."""
    if r < 0:
        raise DomainError("negative ball radius")
    seen = {identity(spec)}
    frontier = [identity(spec)]
    gens = generators(spec)
    for depth in range(r):
        new = []
        for g in frontier:
            for s in gens:
                h = _multiply_unchecked(g, s, spec)
                if h not in seen:
                    seen.add(h)
                    new.append(h)
            if len(seen) > cap:
                raise ResourceCapError(
                    f"ball enumeration cap {cap} exceeded at radius {depth + 1}")
        frontier = new
    return BallTable(radius=r, elements=frozenset(seen), volume=len(seen))


def lattice_ball_volume(d: int, r: int) -> int:
    """|B(r)| in Z^d under the l1 word metric (exact closed form)."""
    if r < 0:
        raise DomainError("negative ball radius")
    return sum(math.comb(d, i) * 2**i * math.comb(r, i) for i in range(0, min(d, r) + 1))


def free_ball_volume(rank: int, r: int) -> int:
    """|B(r)| in the free group of the given rank (exact closed form)."""
    if r < 0:
        raise DomainError("negative ball radius")
    k = rank
    if k == 1:
        return 2 * r + 1
    q = 2 * k - 1
    return 1 + 2 * k * (q**r - 1) // (q - 1)


@lru_cache(maxsize=None)
def _heisenberg_ball_volume(r: int, cap: int) -> int:
    return ball(r, heisenberg(), cap).volume


def ball_volume_upper(spec: GroupSpec, r: int, cap: int = DEFAULT_BALL_CAP) -> int:
    """Upper bound on |B(r)|, exact for lattices/cyclic/free.

    For Heisenberg the exact BFS count is used while it fits the cap, after
    which the sound box bound |x|,|y| <= r, |z| <= r^2/2 takes over.
    """
    if r < 0:
        raise DomainError("negative ball radius")
    if spec.kind == "lattice":
        return lattice_ball_volume(spec.param, r)
    if spec.kind == "free":
        return free_ball_volume(spec.param, r)
    if spec.kind == "cyclic":
        return min(2 * r + 1, spec.param)
    if spec.kind == "heisenberg":
        box = (2 * r + 1) ** 2 * (r * r + 1)
        if box <= cap:
            return _heisenberg_ball_volume(r, cap)
        return box
    out = 1
    for f in spec.factors:
        out *= ball_volume_upper(f, r, cap)
    return out


def is_subexponential(spec: GroupSpec) -> bool:
    """Whether the group model has subexponential (here: polynomial) growth."""
    if spec.kind == "free":
        return spec.param < 2
    if spec.kind == "product":
        return all(is_subexponential(f) for f in spec.factors)
    return True


# ---------------------------------------------------------------------------
# serialization: specs as JSON objects, elements as words or tuples

def spec_to_json(spec: GroupSpec) -> dict:
    if spec.kind == "lattice":
        return {"kind": "lattice", "d": spec.param}
    if spec.kind == "free":
        return {"kind": "free", "rank": spec.param}
    if spec.kind == "heisenberg":
        return {"kind": "heisenberg"}
    if spec.kind == "cyclic":
        return {"kind": "cyclic", "n": spec.param}
    return {"kind": "product", "factors": [spec_to_json(f) for f in spec.factors]}


def spec_from_json(obj) -> GroupSpec:
    if isinstance(obj, str):
        return spec_from_shorthand(obj)
    if not isinstance(obj, dict) or "kind" not in obj:
        raise StructuralError(f"bad group spec {obj!r}: expected an object with 'kind'")
    kind = obj["kind"]
    if kind == "lattice":
        return integer_lattice(int(obj["d"]))
    if kind == "free":
        return free_group(int(obj["rank"]))
    if kind == "heisenberg":
        return heisenberg()
    if kind == "cyclic":
        return cyclic(int(obj["n"]))
    if kind == "product":
        return direct_product(*(spec_from_json(f) for f in obj["factors"]))
    raise StructuralError(f"unknown group kind {kind!r}")


def spec_from_shorthand(text: str) -> GroupSpec:
    """Parse CLI shorthands like 'free:2', 'lattice:2', 'cyclic:5', 'heisenberg'."""
    head, _, arg = text.partition(":")
    head = head.strip().lower()
    if head == "heisenberg":
        return heisenberg()
    if head in ("lattice", "free", "cyclic"):
        try:
            n = int(arg)
        except ValueError:
            raise StructuralError(f"group shorthand {text!r}: integer parameter expected")
        return GroupSpec(head, n)
    if head == "product":
        return direct_product(*(spec_from_shorthand(p) for p in arg.split(",")))
    raise StructuralError(f"unknown group shorthand {text!r}")


def generator_names(spec: GroupSpec) -> list:
    """Printable names of the positive standard generators."""
    if spec.kind in ("lattice", "free"):
        k = spec.param
        if k <= 3:
            return ["x", "y", "z"][:k]
        return [f"x{i}" for i in range(1, k + 1)]
    if spec.kind == "heisenberg":
        return ["x", "y"]
    if spec.kind == "cyclic":
        return ["x"]
    raise StructuralError(f"no word alphabet for product spec {spec}; use tuples")


def parse_element(data, spec: GroupSpec) -> GroupElement:
    """Parse an element from a word string ('x y^-1 x') or a nested tuple/list/int."""
    if isinstance(data, str):
        return _parse_word(data, spec)
    if spec.kind == "cyclic":
        if isinstance(data, int):
            return data % spec.param
        raise StructuralError(f"cyclic element must be an int or word, got {data!r}")
    if spec.kind == "product":
        if isinstance(data, (list, tuple)) and len(data) == len(spec.factors):
            return tuple(parse_element(x, f) for x, f in zip(data, spec.factors))
        raise StructuralError(f"product element needs {len(spec.factors)} components")
    if isinstance(data, (list, tuple)):
        if spec.kind == "free":
            g = ()
            for step in data:
                if not isinstance(step, int) or step == 0:
                    raise StructuralError(f"free letters must be nonzero ints, got {step!r}")
                g = _free_concat(g, (step,))
            validate_element(g, spec)
            return g
        g = tuple(int(x) for x in data)
        validate_element(g, spec)
        return g
    raise StructuralError(f"cannot parse element {data!r} for {spec}")


def _parse_word(text: str, spec: GroupSpec) -> GroupElement:
    names = generator_names(spec)
    extra = {}
    if spec.kind == "heisenberg":
        extra["z"] = (0, 0, 1)
    g = identity(spec)
    for token in text.replace("*", " ").split():
        if token == "e":
            continue
        name, _, exp = token.partition("^")
        try:
            power = int(exp) if exp else 1
        except ValueError:
            raise StructuralError(f"bad exponent in token {token!r}")
        if name in extra:
            base = extra[name]
        elif name in names:
            idx = names.index(name)
            base = _generator_element(idx, spec)
        else:
            raise StructuralError(f"unknown generator {name!r} for {spec}")
        step = base if power >= 0 else _inverse_unchecked(base, spec)
        for _ in range(abs(power)):
            g = _multiply_unchecked(g, step, spec)
    return g


def _generator_element(idx: int, spec: GroupSpec):
    if spec.kind == "lattice":
        e = [0] * spec.param
        e[idx] = 1
        return tuple(e)
    if spec.kind == "free":
        return (idx + 1,)
    if spec.kind == "heisenberg":
        return (1, 0, 0) if idx == 0 else (0, 1, 0)
    if spec.kind == "cyclic":
        return 1 % spec.param
    raise StructuralError("no single-generator element for product specs")


def element_to_word(g: GroupElement, spec: GroupSpec) -> str:
    """Render an element as a word in the standard generators where natural."""
    validate_element(g, spec)
    if spec.kind == "free":
        names = generator_names(spec)
        if not g:
            return "e"
        parts = []
        i = 0
        while i < len(g):
            j = i
            while j < len(g) and g[j] == g[i]:
                j += 1
            name = names[abs(g[i]) - 1]
            power = (j - i) if g[i] > 0 else -(j - i)
            parts.append(name if power == 1 else f"{name}^{power}")
            i = j
        return " ".join(parts)
    if spec.kind == "lattice":
        names = generator_names(spec)
        parts = [f"{names[i]}^{x}" if x != 1 else names[i] for i, x in enumerate(g) if x != 0]
        return " ".join(parts) if parts else "e"
    if spec.kind == "cyclic":
        return f"x^{g}" if g else "e"
    if spec.kind == "heisenberg":
        a, b, c = g
        parts = []
        if a:
            parts.append(f"x^{a}" if a != 1 else "x")
        if b:
            parts.append(f"y^{b}" if b != 1 else "y")
        central = c - a * b  # (x^a)(y^b) already has z-coordinate a*b
        if central:
            parts.append(f"z^{central}" if central != 1 else "z")
        return " ".join(parts) if parts else "e"
    raise StructuralError("product elements have no word form; use tuples")


def element_to_json(g: GroupElement, spec: GroupSpec):
    validate_element(g, spec)
    if spec.kind == "cyclic":
        return g
    if spec.kind == "product":
        return [element_to_json(gi, fi) for gi, fi in zip(g, spec.factors)]
    return list(g)
