"""Fusion rings as lazy rule oracles, with elements, measures and the axiom verifier.

A fusion ring here is a unital ring, free as a Z-module over a distinguished
basis, whose structure constants N(xi, eta -> alpha) are non-negative
integers, together with a basis-preserving involution (conjugation), a
dimension function d >= 1 satisfying Frobenius reciprocity and dimension
multiplicativity, and the natural trace picking out the coefficient at the
unit.  Bases may be countably infinite, so a ring is represented purely by
its rules and is never materialized; every global statement is only ever
checked on an explicitly named finite window of labels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from .errors import InvalidLabel, InvalidParam, RingMismatch

Label = Hashable

#: absolute tolerance for floating-point equality checks package-wide
FLOAT_TOL = 1e-12


class FusionRing:
    """A fusion ring presented as a lazy fusion-rule oracle.

    The ring is defined by its unit label, a conjugation map, a dimension
    function, and a product rule returning the structure constants of the
    product of two basis labels as a finitely supported ``{label: int}`` map.

    Product results are memoized.  The ring is immutable after construction
    except for this cache, and the cache behaves as a pure function: the rule
    is deterministic, so concurrent readers can never observe torn or
    divergent results (dict writes are atomic in CPython, and racing writers
    store equal values).
    """

    __slots__ = ("unit", "description", "generators", "parse_label",
                 "format_label", "_product_rule", "_conjugate_rule",
                 "_dim_rule", "_is_label", "_cache")

    def __init__(self, unit, product_rule, conjugate_rule, dim_rule, *,
                 description: str = "fusion ring",
                 generators: Iterable[Label] = (),
                 is_label: Callable[[Label], bool] | None = None,
                 parse_label: Callable[[str], Label] | None = None,
                 format_label: Callable[[Label], str] | None = None):
        self.unit = unit
        self.description = description
        self.generators = tuple(generators)
        self.parse_label = parse_label if parse_label is not None else _parse_identity
        self.format_label = format_label if format_label is not None else str
        self._product_rule = product_rule
        self._conjugate_rule = conjugate_rule
        self._dim_rule = dim_rule
        self._is_label = is_label
        self._cache: dict = {}

    def __repr__(self):
        return f"FusionRing({self.description!r})"

    def contains(self, xi) -> bool:
        """Whether ``xi`` is a basis label of this ring."""
        if self._is_label is None:
            return True
        return bool(self._is_label(xi))

    def check_label(self, xi) -> None:
        if not self.contains(xi):
            raise InvalidLabel(
                f"{xi!r} is not a basis label of {self.description}")

    def product(self, xi, eta) -> dict:
        """Structure constants of ``xi * eta`` as a fresh ``{label: N}`` map.

        Zero coefficients are never stored.  Results are memoized internally;
        the returned map is a copy, so callers may mutate it freely.
        """
        return dict(self._product_cached(xi, eta))

    def _product_cached(self, xi, eta) -> dict:
        # Internal read-only view of the memoized product.  Callers must not
        # mutate the returned dict.
        key = (xi, eta)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.check_label(xi)
        self.check_label(eta)
        raw = self._product_rule(xi, eta)
        result = {alpha: n for alpha, n in raw.items() if n != 0}
        self._cache[key] = result
        return result

    def _product_probe(self, xi, eta) -> dict:
        # Like _product_cached but never inserts into the cache: used for
        # one-off probes (e.g. axiom sweeps) whose key set would otherwise
        # grow cubically with the window.  Labels must already be known good.
        hit = self._cache.get((xi, eta))
        if hit is not None:
            return hit
        raw = self._product_rule(xi, eta)
        return {alpha: n for alpha, n in raw.items() if n != 0}

    def conj(self, xi):
        """The conjugate basis label."""
        self.check_label(xi)
        return self._conjugate_rule(xi)

    def dim(self, xi):
        """The dimension d(xi); exact int for all catalog rings."""
        self.check_label(xi)
        return self._dim_rule(xi)

    def sigma(self, xi):
        """The basis weight sigma(xi) = d(xi)**2."""
        d = self.dim(xi)
        return d * d


def _parse_identity(text: str):
    return text


def product_basis(ring: FusionRing, xi, eta) -> dict:
    """Coefficient map of the basis product ``xi * eta`` (memoized, exact)."""
    return ring.product(xi, eta)


class Element:
    """A finitely supported formal combination of basis labels.

    Coefficients are exact integers for ring elements and floats for
    function-space vectors; zero coefficients are never stored, so the
    support is exactly the set of stored keys.  Instances are immutable
    values, safe to share between threads.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: FusionRing, coeffs: Mapping | Iterable = ()):
        clean = {}
        for label, value in dict(coeffs).items():
            if value == 0:
                continue
            ring.check_label(label)
            clean[label] = value
        self.ring = ring
        self.coeffs = clean

    @property
    def support(self):
        return self.coeffs.keys()

    def __getitem__(self, label):
        return self.coeffs.get(label, 0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.ring is other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.coeffs.items())))

    def __add__(self, other):
        _check_same_ring(self, other)
        out = dict(self.coeffs)
        for label, value in other.coeffs.items():
            out[label] = out.get(label, 0) + value
        return Element(self.ring, out)

    def __sub__(self, other):
        _check_same_ring(self, other)
        out = dict(self.coeffs)
        for label, value in other.coeffs.items():
            out[label] = out.get(label, 0) - value
        return Element(self.ring, out)

    def __neg__(self):
        return Element(self.ring, {l: -v for l, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return Element(self.ring, {l: v * other for l, v in self.coeffs.items()})

    def __rmul__(self, scalar):
        return Element(self.ring, {l: scalar * v for l, v in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "Element(0)"
        fmt = self.ring.format_label
        parts = [f"{v!r}*{fmt(l)}" for l, v in sorted(self.coeffs.items())]
        return "Element(" + " + ".join(parts) + ")"


def _check_same_ring(x, y) -> None:
    if x.ring is not y.ring:
        raise RingMismatch(
            f"operands live over different rings: "
            f"{x.ring.description!r} vs {y.ring.description!r}")


def indicator(ring: FusionRing, labels: Iterable) -> Element:
    """The characteristic function chi_F of a finite label set, as an Element."""
    return Element(ring, {label: 1 for label in labels})


def multiply(x: Element, y: Element) -> Element:
    """Ring product, the bilinear extension of the basis fusion rules.

    Exact integer arithmetic whenever both inputs have integer coefficients.
    """
    _check_same_ring(x, y)
    ring = x.ring
    out: dict = {}
    for xi, a in x.coeffs.items():
        for eta, b in y.coeffs.items():
            ab = a * b
            for alpha, n in ring._product_cached(xi, eta).items():
                out[alpha] = out.get(alpha, 0) + ab * n
    return Element(ring, out)


def conjugate_element(x: Element) -> Element:
    """The involution: the coefficient at alpha moves to conj(alpha)."""
    ring = x.ring
    return Element(ring, {ring.conj(l): v for l, v in x.coeffs.items()})


def natural_trace(x: Element):
    """The natural trace: the coefficient at the unit label (0 if absent)."""
    return x.coeffs.get(x.ring.unit, 0)


def convolve(f: Element, g: Element) -> Element:
    """Weighted convolution of finitely supported functions.

    On Dirac masses,
        delta_xi * delta_eta = sum_alpha d(alpha)/(d(xi) d(eta)) * N(xi,eta->alpha) delta_alpha,
    extended bilinearly.  Probability measures convolve to probability
    measures (up to roundoff), and the plain l1 norm is submultiplicative.
    """
    _check_same_ring(f, g)
    ring = f.ring
    dim = ring.dim
    out: dict = {}
    for xi, a in f.coeffs.items():
        dxi = dim(xi)
        for eta, b in g.coeffs.items():
            w = (a * b) / (dxi * dim(eta))
            for alpha, n in ring._product_cached(xi, eta).items():
                out[alpha] = out.get(alpha, 0) + w * n * dim(alpha)
    return Element(ring, out)


def subset_weight(ring: FusionRing, labels: Iterable):
    """The sigma-weight of a finite label set: sum of d(alpha)**2 over it.

    Exact integer for integer-dimensional rings; the empty set weighs 0.
    """
    total = 0
    for label in set(labels):
        total += ring.sigma(label)
    return total


class ProbMeasure:
    """A finitely supported probability measure on the basis.

    Weights are floats in (0, 1] summing to 1 within 1e-12.  ``symmetric``
    is computed, never asserted: it holds iff the stored weight at
    conj(label) equals the weight at label exactly, for every support label.
    Instances are immutable values.
    """

    __slots__ = ("ring", "weights", "symmetric")

    def __init__(self, ring: FusionRing, weights: Mapping):
        clean = {}
        for label, w in dict(weights).items():
            ring.check_label(label)
            w = float(w)
            if not 0.0 < w <= 1.0:
                raise InvalidParam(
                    f"measure weight {w!r} at {ring.format_label(label)} "
                    f"outside (0, 1]")
            clean[label] = w
        if not clean:
            raise InvalidParam("a probability measure needs non-empty support")
        total = math.fsum(clean.values())
        if abs(total - 1.0) > FLOAT_TOL:
            raise InvalidParam(f"measure weights sum to {total!r}, not 1")
        self.ring = ring
        self.weights = clean
        self.symmetric = all(
            clean.get(ring.conj(label)) == w for label, w in clean.items())

    @property
    def support(self):
        return self.weights.keys()

    def __call__(self, label) -> float:
        return self.weights.get(label, 0.0)

    def items(self):
        return self.weights.items()

    def sorted_items(self):
        return sorted(self.weights.items())

    def as_element(self) -> Element:
        return Element(self.ring, dict(self.weights))

    def __repr__(self):
        fmt = self.ring.format_label
        parts = [f"{fmt(l)}: {w:.6g}" for l, w in sorted(self.weights.items())]
        tag = "symmetric" if self.symmetric else "non-symmetric"
        return "ProbMeasure({" + ", ".join(parts) + "}, " + tag + ")"

    @staticmethod
    def delta(ring: FusionRing, label) -> "ProbMeasure":
        return ProbMeasure(ring, {label: 1.0})

    @staticmethod
    def uniform(ring: FusionRing, labels: Iterable) -> "ProbMeasure":
        labels = sorted(set(labels))
        if not labels:
            raise InvalidParam("uniform measure needs non-empty support")
        w = 1.0 / len(labels)
        return ProbMeasure(ring, {label: w for label in labels})


# ---------------------------------------------------------------------------
# axiom verification on a finite window
# ---------------------------------------------------------------------------

AXIOM_NAMES = (
    "unit_law",
    "involution",
    "structure_constants",
    "frobenius_reciprocity",
    "dimension_multiplicativity",
    "associativity",
    "dimension_bound",
)


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    counterexample: str | None = None


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom pass/fail over one named finite window."""

    description: str
    window_labels: tuple
    checks: tuple

    @property
    def window_size(self) -> int:
        return len(self.window_labels)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self):
        return [check for check in self.checks if not check.passed]

    def summary(self) -> str:
        lines = [f"axiom report for {self.description} "
                 f"(window of {self.window_size} labels)"]
        for check in self.checks:
            status = "PASS" if check.passed else "FAIL"
            line = f"  {check.name}: {status}"
            if check.counterexample:
                line += f"  [{check.counterexample}]"
            lines.append(line)
        return "\n".join(lines)


def _window_labels(window) -> list:
    labels = getattr(window, "labels", window)
    return list(labels)


def verify_axioms(ring: FusionRing, window) -> AxiomReport:
    """Check the fusion-ring axioms on all labels/pairs/triples of a window.

    Checks unit law, involution properties, non-negativity and integrality
    of the structure constants, Frobenius reciprocity, dimension
    multiplicativity, associativity, and the dimension bound
    (N(xi,eta->alpha) > 0 implies d(alpha) d(eta) >= d(xi)).  The report
    names the window; nothing is claimed beyond it.  A table-backed ring
    missing a probed product raises IncompleteTable.
    """
    labels = _window_labels(window)
    if not labels:
        raise InvalidParam("verify_axioms needs a non-empty window")
    if ring.unit not in labels:
        raise InvalidParam("verify_axioms window must contain the unit")
    for label in labels:
        ring.check_label(label)

    fmt = ring.format_label
    unit = ring.unit
    conj = {l: ring.conj(l) for l in labels}
    dims = {l: ring.dim(l) for l in labels}

    # all pairwise products inside the window, probed once
    prods: dict = {}
    for x in labels:
        for y in labels:
            prods[(x, y)] = ring._product_cached(x, y)

    def dim_of(label):
        d = dims.get(label)
        return ring.dim(label) if d is None else d

    checks = []

    # unit law: e*xi = xi*e = {xi: 1}
    bad = None
    for xi in labels:
        if prods[(unit, xi)] != {xi: 1}:
            bad = f"e*{fmt(xi)} = {prods[(unit, xi)]}"
            break
        if prods[(xi, unit)] != {xi: 1}:
            bad = f"{fmt(xi)}*e = {prods[(xi, unit)]}"
            break
    checks.append(AxiomCheck("unit_law", bad is None, bad))

    # involution: conj is an involution fixing e, preserving dim; d >= 1
    bad = None
    if conj[unit] != unit:
        bad = f"conj(e) = {fmt(conj[unit])}"
    else:
        for xi in labels:
            xibar = conj[xi]
            if ring.conj(xibar) != xi:
                bad = f"conj(conj({fmt(xi)})) = {fmt(ring.conj(xibar))}"
                break
            if dim_of(xibar) != dims[xi]:
                bad = (f"d({fmt(xi)}) = {dims[xi]} but "
                       f"d(conj) = {dim_of(xibar)}")
                break
            if dims[xi] < 1:
                bad = f"d({fmt(xi)}) = {dims[xi]} < 1"
                break
    checks.append(AxiomCheck("involution", bad is None, bad))

    # structure constants: non-negative integers
    bad = None
    for (x, y), p in prods.items():
        for alpha, n in p.items():
            if not isinstance(n, int) or n < 0:
                bad = f"N({fmt(x)},{fmt(y)}->{fmt(alpha)}) = {n!r}"
                break
        if bad:
            break
    checks.append(AxiomCheck("structure_constants", bad is None, bad))

    # Frobenius reciprocity on window triples:
    # N(xi,eta->alpha) = N(conj xi, alpha -> eta) = N(alpha, conj eta -> xi)
    bad = None
    for xi in labels:
        xibar = conj[xi]
        for eta in labels:
            p = prods[(xi, eta)]
            etabar = conj[eta]
            for alpha in labels:
                n = p.get(alpha, 0)
                n_left = prods[(xibar, alpha)].get(eta, 0) \
                    if (xibar, alpha) in prods else ring._product_probe(xibar, alpha).get(eta, 0)
                if n != n_left:
                    bad = (f"N({fmt(xi)},{fmt(eta)}->{fmt(alpha)}) = {n} but "
                           f"N(conj {fmt(xi)},{fmt(alpha)}->{fmt(eta)}) = {n_left}")
                    break
                n_right = prods[(alpha, etabar)].get(xi, 0) \
                    if (alpha, etabar) in prods else ring._product_probe(alpha, etabar).get(xi, 0)
                if n != n_right:
                    bad = (f"N({fmt(xi)},{fmt(eta)}->{fmt(alpha)}) = {n} but "
                           f"N({fmt(alpha)},conj {fmt(eta)}->{fmt(xi)}) = {n_right}")
                    break
            if bad:
                break
        if bad:
            break
    checks.append(AxiomCheck("frobenius_reciprocity", bad is None, bad))

    # dimension multiplicativity: sum_alpha N*d(alpha) = d(xi)*d(eta)
    bad = None
    for (x, y), p in prods.items():
        lhs = sum(n * dim_of(alpha) for alpha, n in p.items())
        rhs = dims[x] * dims[y]
        if isinstance(lhs, int) and isinstance(rhs, int):
            equal = lhs == rhs
        else:
            equal = math.isclose(lhs, rhs, rel_tol=FLOAT_TOL, abs_tol=FLOAT_TOL)
        if not equal:
            bad = f"sum N*d for {fmt(x)}*{fmt(y)} is {lhs}, expected {rhs}"
            break
    checks.append(AxiomCheck("dimension_multiplicativity", bad is None, bad))

    # associativity: (xi eta) zeta = xi (eta zeta) as coefficient maps;
    # second-stage factors can leave the window, so probe without caching
    bad = None
    probe = ring._product_probe
    for xi in labels:
        for eta in labels:
            p = prods[(xi, eta)]
            for zeta in labels:
                lhs: dict = {}
                for beta, n in p.items():
                    for gamma, m in probe(beta, zeta).items():
                        lhs[gamma] = lhs.get(gamma, 0) + n * m
                rhs: dict = {}
                for beta, n in prods[(eta, zeta)].items():
                    for gamma, m in probe(xi, beta).items():
                        rhs[gamma] = rhs.get(gamma, 0) + n * m
                if lhs != rhs:
                    bad = (f"({fmt(xi)}*{fmt(eta)})*{fmt(zeta)} != "
                           f"{fmt(xi)}*({fmt(eta)}*{fmt(zeta)})")
                    break
            if bad:
                break
        if bad:
            break
    checks.append(AxiomCheck("associativity", bad is None, bad))

    # dimension bound: N(xi,eta->alpha) > 0 implies d(alpha)*d(eta) >= d(xi)
    bad = None
    for (x, y), p in prods.items():
        for alpha, n in p.items():
            if n > 0 and dim_of(alpha) * dims[y] < dims[x]:
                bad = (f"N({fmt(x)},{fmt(y)}->{fmt(alpha)}) = {n} but "
                       f"d({fmt(alpha)})*d({fmt(y)}) < d({fmt(x)})")
                break
        if bad:
            break
    checks.append(AxiomCheck("dimension_bound", bad is None, bad))

    return AxiomReport(description=ring.description,
                       window_labels=tuple(labels),
                       checks=tuple(checks))
