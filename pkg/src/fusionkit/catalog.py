"""Concrete fusion rings: group rings, SU(2)-type rules, tensor products.

Group rings carry the trivial dimension function and inversion as the
involution.  The SU(2) ring has labels k = 0, 1, 2, ... with the usual
truncated tensor-product rules and d(k) = k + 1; its deformed variant keeps
the same rules but replaces the dimensions by the quantum dimensions
d(0) = 1, d(1) = n, d(k+1) = n d(k) - d(k-1), which is what the free
orthogonal deformations contribute at the fusion-rule level.  All catalog
rings have exact integer dimensions.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import Element, FusionRing, ProbMeasure
from .errors import InvalidParam, InvalidTable


# ---------------------------------------------------------------------------
# group rings
# ---------------------------------------------------------------------------

def trivial_ring() -> FusionRing:
    """The one-element ring, handy for identity-law tests."""
    return FusionRing(
        unit="e",
        product_rule=lambda x, y: {"e": 1},
        conjugate_rule=lambda x: "e",
        dim_rule=lambda x: 1,
        description="trivial ring",
        generators=(),
        is_label=lambda x: x == "e",
        parse_label=lambda text: "e" if text in ("e", "1") else text,
    )


def integer_lattice_ring(d: int) -> FusionRing:
    """The group ring of Z^d.  Labels are ints for d = 1, int tuples otherwise."""
    if not isinstance(d, int) or d < 1:
        raise InvalidParam(f"lattice rank must be a positive int, got {d!r}")
    if d == 1:
        return FusionRing(
            unit=0,
            product_rule=lambda x, y: {x + y: 1},
            conjugate_rule=lambda x: -x,
            dim_rule=lambda x: 1,
            description="group ring of Z",
            generators=(1, -1),
            is_label=lambda x: isinstance(x, int) and not isinstance(x, bool),
            parse_label=lambda text: int(text),
        )

    def is_label(x):
        return (isinstance(x, tuple) and len(x) == d
                and all(isinstance(c, int) and not isinstance(c, bool) for c in x))

    def parse(text: str):
        parts = text.strip().lstrip("(").rstrip(")").split(";")
        if len(parts) != d:
            raise InvalidParam(f"expected {d} components in {text!r}")
        return tuple(int(p) for p in parts)

    gens = []
    for i in range(d):
        e_i = tuple(1 if j == i else 0 for j in range(d))
        gens.append(e_i)
        gens.append(tuple(-c for c in e_i))
    return FusionRing(
        unit=(0,) * d,
        product_rule=lambda x, y: {tuple(a + b for a, b in zip(x, y)): 1},
        conjugate_rule=lambda x: tuple(-c for c in x),
        dim_rule=lambda x: 1,
        description=f"group ring of Z^{d}",
        generators=tuple(gens),
        is_label=is_label,
        parse_label=parse,
        format_label=lambda x: ";".join(str(c) for c in x),
    )


def cyclic_ring(n: int) -> FusionRing:
    """The group ring of Z/n with labels 0..n-1."""
    if not isinstance(n, int) or n < 1:
        raise InvalidParam(f"cyclic order must be a positive int, got {n!r}")
    gens = tuple(sorted({1 % n, (n - 1) % n} - {0}))
    return FusionRing(
        unit=0,
        product_rule=lambda x, y: {(x + y) % n: 1},
        conjugate_rule=lambda x: (-x) % n,
        dim_rule=lambda x: 1,
        description=f"group ring of Z/{n}",
        generators=gens,
        is_label=lambda x: isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n,
        parse_label=lambda text: int(text),
    )


def _inv_char(ch: str) -> str:
    return ch.swapcase()


def free_group_ring(rank: int) -> FusionRing:
    """The group ring of the free group F_rank.

    Labels are reduced words over the letters a, b, c, ... with uppercase
    letters denoting inverses; the empty word is the unit (rendered "e").
    """
    if not isinstance(rank, int) or not 1 <= rank <= 26:
        raise InvalidParam(f"free rank must be an int in 1..26, got {rank!r}")
    letters = string.ascii_lowercase[:rank]
    alphabet = set(letters) | {ch.upper() for ch in letters}

    def is_label(w):
        if not isinstance(w, str):
            return False
        if any(ch not in alphabet for ch in w):
            return False
        return all(w[i] != _inv_char(w[i + 1]) for i in range(len(w) - 1))

    def product(u, v):
        i = len(u)
        j = 0
        while i > 0 and j < len(v) and u[i - 1] == _inv_char(v[j]):
            i -= 1
            j += 1
        return {u[:i] + v[j:]: 1}

    def parse(text: str):
        if text in ("e", "1"):
            return ""
        return text

    gens = tuple(letters) + tuple(ch.upper() for ch in letters)
    return FusionRing(
        unit="",
        product_rule=product,
        conjugate_rule=lambda w: w[::-1].swapcase(),
        dim_rule=lambda w: 1,
        description=f"group ring of F_{rank}",
        generators=gens,
        is_label=is_label,
        parse_label=parse,
        format_label=lambda w: w if w else "e",
    )


def group_ring_from_table(labels, table, *, description: str = "finite group ring") -> FusionRing:
    """The group ring of a finite group given by its multiplication table.

    ``table`` maps ordered pairs of labels to labels, either as a
    ``{(g, h): k}`` mapping or a nested ``{g: {h: k}}`` mapping.  The table
    is validated to describe a group (closure, identity, inverses,
    associativity); anything else raises InvalidTable.
    """
    labels = list(labels)
    if len(set(labels)) != len(labels) or not labels:
        raise InvalidTable("labels must be a non-empty list without repeats")
    label_set = set(labels)

    flat: dict = {}
    if isinstance(table, Mapping) and table and isinstance(next(iter(table.values())), Mapping):
        for g, row in table.items():
            for h, k in row.items():
                flat[(g, h)] = k
    else:
        flat = dict(table)
    for g in labels:
        for h in labels:
            k = flat.get((g, h))
            if k is None:
                raise InvalidTable(f"missing table entry for ({g!r}, {h!r})")
            if k not in label_set:
                raise InvalidTable(f"table entry ({g!r}, {h!r}) -> {k!r} leaves the label set")

    unit = None
    for e in labels:
        if all(flat[(e, g)] == g and flat[(g, e)] == g for g in labels):
            unit = e
            break
    if unit is None:
        raise InvalidTable("table has no two-sided identity")

    inverse: dict = {}
    for g in labels:
        for h in labels:
            if flat[(g, h)] == unit and flat[(h, g)] == unit:
                inverse[g] = h
                break
        else:
            raise InvalidTable(f"element {g!r} has no inverse")

    for a in labels:
        for b in labels:
            ab = flat[(a, b)]
            for c in labels:
                if flat[(ab, c)] != flat[(a, flat[(b, c)])]:
                    raise InvalidTable(
                        f"table is not associative at ({a!r}, {b!r}, {c!r})")

    gens = tuple(g for g in labels if g != unit)
    return FusionRing(
        unit=unit,
        product_rule=lambda x, y: {flat[(x, y)]: 1},
        conjugate_rule=lambda x: inverse[x],
        dim_rule=lambda x: 1,
        description=description,
        generators=gens,
        is_label=lambda x: x in label_set,
    )


# ---------------------------------------------------------------------------
# SU(2)-type rings
# ---------------------------------------------------------------------------

def _su2_product(m: int, n: int) -> dict:
    return {k: 1 for k in range(abs(m - n), m + n + 1, 2)}


def _su2_is_label(k) -> bool:
    return isinstance(k, int) and not isinstance(k, bool) and k >= 0


def build_su2_ring() -> FusionRing:
    """The representation ring of SU(2): labels are highest weights.

    N(m, n -> k) = 1 iff |m - n| <= k <= m + n with m + n + k even, and
    d(k) = k + 1.  Self-conjugate.  (This is also the fusion ring of the
    q-deformations of SU(2), which share the same rules.)
    """
    return FusionRing(
        unit=0,
        product_rule=_su2_product,
        conjugate_rule=lambda k: k,
        dim_rule=lambda k: k + 1,
        description="SU(2) fusion ring",
        generators=(1,),
        is_label=_su2_is_label,
        parse_label=lambda text: int(text),
    )


def build_deformed_su2_ring(n: int) -> FusionRing:
    """SU(2) fusion rules with the deformed dimensions of the free
    orthogonal family: d(0) = 1, d(1) = n, d(k+1) = n d(k) - d(k-1).

    For n = 2 the recursion collapses to d(k) = k + 1.  Dimensions are
    exact integers.  Only the (rules, dimensions) pair is modeled, not the
    full quantum-group object.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidParam(f"deformation parameter must be an int >= 2, got {n!r}")
    cache = {0: 1, 1: n}

    def dim(k: int) -> int:
        v = cache.get(k)
        if v is None:
            # recompute from scratch: pure, so concurrent callers agree
            a, b = 1, n
            for _ in range(k - 1):
                a, b = b, n * b - a
            v = b
            cache[k] = v
        return v

    return FusionRing(
        unit=0,
        product_rule=_su2_product,
        conjugate_rule=lambda k: k,
        dim_rule=dim,
        description=f"deformed SU(2) fusion ring (n={n})",
        generators=(1,),
        is_label=_su2_is_label,
        parse_label=lambda text: int(text),
    )


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------

def _parse_pair(text: str):
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == ";" and depth == 0:
            return body[:i], body[i + 1:]
    raise InvalidParam(f"expected a pair '(left;right)', got {text!r}")


def tensor_product(ring1: FusionRing, ring2: FusionRing) -> FusionRing:
    """The tensor product ring on pairs of labels.

    The unit is the pair of units, conjugation and dimensions act
    componentwise, and N((a,b),(c,d) -> (x,y)) = N1(a,c->x) * N2(b,d->y).
    """
    def product(x, y):
        p = ring1._product_cached(x[0], y[0])
        q = ring2._product_cached(x[1], y[1])
        return {(u, v): m * n for u, m in p.items() for v, n in q.items()}

    def is_label(x):
        return (isinstance(x, tuple) and len(x) == 2
                and ring1.contains(x[0]) and ring2.contains(x[1]))

    def parse(text: str):
        left, right = _parse_pair(text)
        return (ring1.parse_label(left), ring2.parse_label(right))

    gens = tuple((g, ring2.unit) for g in ring1.generators) \
        + tuple((ring1.unit, g) for g in ring2.generators)
    return FusionRing(
        unit=(ring1.unit, ring2.unit),
        product_rule=product,
        conjugate_rule=lambda x: (ring1.conj(x[0]), ring2.conj(x[1])),
        dim_rule=lambda x: ring1.dim(x[0]) * ring2.dim(x[1]),
        description=f"tensor({ring1.description}, {ring2.description})",
        generators=gens,
        is_label=is_label,
        parse_label=parse,
        format_label=lambda x: f"({ring1.format_label(x[0])};{ring2.format_label(x[1])})",
    )


# ---------------------------------------------------------------------------
# measures from corepresentation decompositions
# ---------------------------------------------------------------------------

def measure_from_decomposition(ring: FusionRing, decomp: Mapping) -> ProbMeasure:
    """The symmetrized measure attached to a decomposed corepresentation.

    Given multiplicities k_alpha >= 1 of the irreducibles occurring in some
    finite-dimensional corepresentation of total dimension
    n = sum k_alpha d(alpha), the measure puts k_alpha d(alpha) / n on
    alpha, and the returned measure is the symmetrization (half on alpha,
    half on conj(alpha)).  The weights are built in exact rational
    arithmetic (they sum to 1 exactly) and converted to floats at the end,
    so the result is always symmetric by exact comparison.
    """
    if not decomp:
        raise InvalidParam("decomposition must be non-empty")
    for alpha, k in decomp.items():
        ring.check_label(alpha)
        if not isinstance(k, int) or k < 1:
            raise InvalidParam(
                f"multiplicity at {ring.format_label(alpha)} must be an int >= 1")
    total = sum(Fraction(k) * Fraction(ring.dim(alpha))
                for alpha, k in decomp.items())
    weights: dict = {}
    for alpha, k in decomp.items():
        half = Fraction(k) * Fraction(ring.dim(alpha)) / (2 * total)
        weights[alpha] = weights.get(alpha, Fraction(0)) + half
        abar = ring.conj(alpha)
        weights[abar] = weights.get(abar, Fraction(0)) + half
    assert sum(weights.values()) == 1
    return ProbMeasure(ring, {a: float(w) for a, w in weights.items()})


# ---------------------------------------------------------------------------
# declarative ring specs
# ---------------------------------------------------------------------------

_GROUP_KINDS = ("group_Zd", "group_free", "group_finite_table")
_ALL_KINDS = _GROUP_KINDS + ("su2", "deformed_su2", "tensor_product", "table")


@dataclass(frozen=True)
class RingSpec:
    """A declarative recipe for a catalog ring; see ``build``."""

    kind: str
    params: Mapping

    def __post_init__(self):
        if self.kind not in _ALL_KINDS:
            raise InvalidParam(f"unknown ring kind {self.kind!r}")

    def build(self) -> FusionRing:
        kind, params = self.kind, self.params
        if kind == "group_Zd":
            return integer_lattice_ring(params["d"])
        if kind == "group_free":
            return free_group_ring(params["rank"])
        if kind == "group_finite_table":
            return group_ring_from_table(params["labels"], params["table"])
        if kind == "su2":
            return build_su2_ring()
        if kind == "deformed_su2":
            return build_deformed_su2_ring(params["n"])
        if kind == "tensor_product":
            return tensor_product(params["left"].build(), params["right"].build())
        # kind == "table": general fusion tables live in ringio
        from . import ringio
        return ringio.table_ring_from_doc(dict(params))


def build_group_ring(spec: RingSpec) -> FusionRing:
    """Build one of the group-ring kinds from a RingSpec."""
    if spec.kind not in _GROUP_KINDS:
        raise InvalidParam(f"{spec.kind!r} is not a group-ring kind")
    return spec.build()
