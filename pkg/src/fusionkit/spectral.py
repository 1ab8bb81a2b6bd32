"""Finite compressions of the convolution operators and spectral estimates.

All matrices live in the plain l2 basis obtained by conjugating with the
unitary that rescales each basis vector by 1/d: there the left convolution
by a basis label xi acts as

    l_xi : delta_eta -> (1/d(xi)) sum_alpha N(xi,eta->alpha) delta_alpha,

and a symmetric measure produces a literally symmetric matrix.  Compression
to a window drops products that leave it (orthogonal compression), which
makes the top eigenvalue of nested windows a nondecreasing sequence of lower
bounds for the top of the spectrum; for a probability measure that top is
at most 1, and amenability evidence amounts to the gap 1 - lambda_max
closing as the windows grow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sparse

from .core import Element, FusionRing, ProbMeasure
from .errors import (BudgetExceeded, EmptySet, InvalidParam, NoConvergence,
                     NonSymmetricMeasure, NotSelfAdjoint, RingMismatch)

#: dense symmetric eigensolve is used up to this window size
DENSE_EIG_LIMIT = 512

#: default cap on window sizes
DEFAULT_WINDOW_CAP = 250_000


class TruncationWindow:
    """A finite, ordered, deduplicated list of basis labels (unit first).

    Built breadth-first from a generator support, closed under conjugation.
    Windows with the same generator support nest as the radius grows, and
    the label order of the smaller window is a prefix of the larger one.
    """

    __slots__ = ("ring", "labels", "radius", "generator_support", "_index")

    def __init__(self, ring: FusionRing, labels: Iterable, radius: int,
                 generator_support: Iterable):
        labels = tuple(labels)
        index = {}
        for pos, label in enumerate(labels):
            if label in index:
                raise InvalidParam(f"duplicate window label {label!r}")
            index[label] = pos
        if not labels or labels[0] != ring.unit:
            raise InvalidParam("window must list the unit label first")
        for label in labels:
            if ring.conj(label) not in index:
                raise InvalidParam(
                    f"window is not closed under conjugation at {label!r}")
        self.ring = ring
        self.labels = labels
        self.radius = radius
        self.generator_support = frozenset(generator_support)
        self._index = index

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __iter__(self):
        return iter(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def __repr__(self):
        return (f"TruncationWindow({self.ring.description!r}, "
                f"size={len(self.labels)}, radius={self.radius})")


def build_window(ring: FusionRing, S: Iterable, radius: int,
                 cap: int = DEFAULT_WINDOW_CAP) -> TruncationWindow:
    """Window spanned by products of at most ``radius`` factors from
    S, conj(S) and the unit, closed under conjugation.

    Discovery order is breadth-first with ties broken by label order, so
    windows are reproducible and nested across radii.  Raises
    BudgetExceeded if the label count would exceed ``cap``, reporting the
    last fully expanded radius.
    """
    S = set(S)
    if not S:
        raise EmptySet("window generator support must be non-empty")
    for label in S:
        ring.check_label(label)
    if radius < 0:
        raise InvalidParam(f"radius must be >= 0, got {radius}")
    if cap < 1:
        raise InvalidParam(f"cap must be >= 1, got {cap}")

    steps = sorted(S | {ring.conj(xi) for xi in S} | {ring.unit})
    order = [ring.unit]
    seen = {ring.unit}
    frontier = [ring.unit]
    for level in range(1, radius + 1):
        new = []
        for w in frontier:
            for t in steps:
                for alpha in sorted(ring._product_cached(w, t)):
                    for cand in (alpha, ring.conj(alpha)):
                        if cand not in seen:
                            if len(order) + 1 > cap:
                                raise BudgetExceeded(
                                    f"window would exceed cap {cap} while "
                                    f"expanding radius {level} "
                                    f"(completed radius {level - 1})",
                                    cap=cap, achieved_radius=level - 1)
                            seen.add(cand)
                            order.append(cand)
                            new.append(cand)
        if not new:
            break
        frontier = new
    return TruncationWindow(ring, order, radius, S)


class CompressedOperator:
    """A sparse matrix compression of a convolution operator to a window.

    ``selfadjoint`` is set when the defining data is symmetric (symmetric
    measure, self-conjugate label); in that case the stored matrix equals
    its transpose entrywise exactly, because entries are accumulated from
    symmetric exact data and converted to float once at the end.
    """

    __slots__ = ("window", "matrix", "selfadjoint")

    def __init__(self, window: TruncationWindow, matrix, selfadjoint: bool):
        self.window = window
        self.matrix = matrix
        self.selfadjoint = selfadjoint

    @property
    def shape(self):
        return self.matrix.shape

    def __repr__(self):
        tag = "selfadjoint" if self.selfadjoint else "general"
        return f"CompressedOperator({self.shape[0]}x{self.shape[1]}, {tag})"


def _csr_from_entries(entries: dict, n: int):
    # deterministic assembly: entries sorted by (row, col)
    items = sorted(entries.items())
    rows = np.fromiter((ij[0] for ij, _ in items), dtype=np.int64, count=len(items))
    cols = np.fromiter((ij[1] for ij, _ in items), dtype=np.int64, count=len(items))
    data = np.fromiter((float(v) for _, v in items), dtype=np.float64, count=len(items))
    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def _check_window_ring(ring: FusionRing, window: TruncationWindow) -> None:
    if window.ring is not ring:
        raise RingMismatch("window belongs to a different ring")


def l_operator(ring: FusionRing, xi, window: TruncationWindow) -> CompressedOperator:
    """Compression of l_xi: entry (alpha, eta) = N(xi,eta->alpha) / d(xi).

    Products leaving the window are dropped.  The transpose of this matrix
    equals the matrix of l applied to conj(xi) on any conjugation-closed
    window, entry for entry.
    """
    _check_window_ring(ring, window)
    ring.check_label(xi)
    d = ring.dim(xi)
    index = window._index
    entries: dict = {}
    for j, eta in enumerate(window.labels):
        for alpha, n in ring._product_cached(xi, eta).items():
            i = index.get(alpha)
            if i is not None:
                entries[(i, j)] = n / d
    matrix = _csr_from_entries(entries, len(window))
    return CompressedOperator(window, matrix, selfadjoint=(ring.conj(xi) == xi))


def l_measure_operator(ring: FusionRing, mu: ProbMeasure,
                       window: TruncationWindow) -> CompressedOperator:
    """Compression of l_mu = sum_xi mu(xi) l_xi.

    The self-adjoint flag is set exactly when mu is symmetric (the adjoint
    of l_xi is l applied to conj(xi), by Frobenius reciprocity).  Entries
    are accumulated as exact rationals so that a symmetric measure yields a
    bitwise-symmetric matrix.
    """
    _check_window_ring(ring, window)
    if mu.ring is not ring:
        raise RingMismatch("measure belongs to a different ring")
    index = window._index
    acc: dict = {}
    for xi, weight in mu.sorted_items():
        scale = Fraction(weight) / Fraction(ring.dim(xi))
        for j, eta in enumerate(window.labels):
            for alpha, n in ring._product_cached(xi, eta).items():
                i = index.get(alpha)
                if i is not None:
                    key = (i, j)
                    prev = acc.get(key)
                    acc[key] = n * scale if prev is None else prev + n * scale
    matrix = _csr_from_entries(acc, len(window))
    return CompressedOperator(window, matrix, selfadjoint=mu.symmetric)


def gns_operator(ring: FusionRing, x: Element, window: TruncationWindow) -> CompressedOperator:
    """Compression of the GNS representation of an integer ring element.

    The GNS action of a basis label is d(xi) l_xi, so the matrix of x is
    just sum_xi k_xi N(xi,eta->alpha): exact integers.
    """
    _check_window_ring(ring, window)
    if x.ring is not ring:
        raise RingMismatch("element belongs to a different ring")
    if any(not isinstance(v, int) for v in x.coeffs.values()):
        raise InvalidParam("gns_operator expects an integer element")
    index = window._index
    acc: dict = {}
    for xi, k in sorted(x.coeffs.items()):
        for j, eta in enumerate(window.labels):
            for alpha, n in ring._product_cached(xi, eta).items():
                i = index.get(alpha)
                if i is not None:
                    key = (i, j)
                    acc[key] = acc.get(key, 0) + k * n
    matrix = _csr_from_entries(acc, len(window))
    from .core import conjugate_element
    return CompressedOperator(window, matrix,
                              selfadjoint=(conjugate_element(x) == x))


def rho1_operator_apply(ring: FusionRing, xi, f: Element) -> Element:
    """Right convolution rho_xi applied to a finitely supported function:

        rho_xi(f)(eta) = sum_alpha f(alpha) (delta_eta * delta_xi)(alpha).

    Evaluated exactly on its finite support; the output support is found by
    Frobenius reciprocity (eta ranges over products of supp(f) with
    conj(xi)).
    """
    ring.check_label(xi)
    if f.ring is not ring:
        raise RingMismatch("function belongs to a different ring")
    xibar = ring.conj(xi)
    candidates = set()
    for alpha in f.support:
        candidates.update(ring._product_cached(alpha, xibar))
    dxi = ring.dim(xi)
    out: dict = {}
    for eta in candidates:
        p = ring._product_cached(eta, xi)
        s = 0.0
        for alpha, value in f.coeffs.items():
            n = p.get(alpha)
            if n:
                s += value * n * ring.dim(alpha)
        if s:
            out[eta] = s / (ring.dim(eta) * dxi)
    return Element(ring, out)


def rho_measure_apply(ring: FusionRing, mu: ProbMeasure, f: Element) -> Element:
    """rho_mu(f) = sum_omega mu(omega) rho_omega(f)."""
    if mu.ring is not ring or f.ring is not ring:
        raise RingMismatch("measure/function belong to a different ring")
    out = Element(ring, {})
    for omega, weight in mu.sorted_items():
        out = out + weight * rho1_operator_apply(ring, omega, f)
    return out


def lambda_operator_apply(ring: FusionRing, xi, f: Element) -> Element:
    """Left convolution lambda_xi in the weighted-l2 picture:

        lambda_xi(f)(eta) = sum_alpha f(alpha) (delta_conj(xi) * delta_eta)(alpha).

    Used for cross-checking the compressed matrices against the weighted
    picture; the two are intertwined by the rescaling unitary.
    """
    ring.check_label(xi)
    if f.ring is not ring:
        raise RingMismatch("function belongs to a different ring")
    candidates = set()
    for alpha in f.support:
        candidates.update(ring._product_cached(xi, alpha))
    xibar = ring.conj(xi)
    dxi = ring.dim(xi)
    out: dict = {}
    for eta in candidates:
        p = ring._product_cached(xibar, eta)
        s = 0.0
        for alpha, value in f.coeffs.items():
            n = p.get(alpha)
            if n:
                s += value * n * ring.dim(alpha)
        if s:
            out[eta] = s / (dxi * ring.dim(eta))
    return Element(ring, out)


def lambda_measure_apply(ring: FusionRing, mu: ProbMeasure, f: Element) -> Element:
    """lambda_mu(f) = sum_xi mu(xi) lambda_xi(f)."""
    if mu.ring is not ring or f.ring is not ring:
        raise RingMismatch("measure/function belong to a different ring")
    out = Element(ring, {})
    for xi, weight in mu.sorted_items():
        out = out + weight * lambda_operator_apply(ring, xi, f)
    return out


@dataclass(frozen=True)
class SpectralEstimate:
    """Top of spectrum of a compressed operator, with convergence data."""

    value: float
    method: str  # "dense" or "power"
    iterations: int
    residual: float
    converged: bool = True


def top_eigenvalue(op: CompressedOperator, tol: float = 1e-9,
                   max_iter: int = 200_000) -> SpectralEstimate:
    """Largest eigenvalue of a self-adjoint compression, to absolute
    accuracy ``tol``.

    Windows of dimension at most 512 use a dense symmetric eigensolve.
    Larger ones use power iteration on (I + M)/2, which is positive
    semidefinite because the spectrum of a probability-measure convolution
    operator lies in [-1, 1]; the start vector is the deterministic uniform
    positive vector, and the residual certifies the distance from the
    Rayleigh quotient to the spectrum.
    """
    if not op.selfadjoint:
        raise NotSelfAdjoint("top_eigenvalue requires a self-adjoint operator")
    if tol <= 0:
        raise InvalidParam(f"tol must be positive, got {tol}")
    n = op.matrix.shape[0]
    if n <= DENSE_EIG_LIMIT:
        eigs = np.linalg.eigvalsh(op.matrix.toarray())
        return SpectralEstimate(value=float(eigs[-1]), method="dense",
                                iterations=0, residual=0.0)
    M = op.matrix
    x = np.full(n, 1.0 / math.sqrt(n))
    theta = 0.0
    resid = math.inf
    for iteration in range(1, max_iter + 1):
        y = 0.5 * (M @ x) + 0.5 * x
        theta = float(x @ y)
        resid = float(np.linalg.norm(y - theta * x))
        if 2.0 * resid < tol:
            return SpectralEstimate(value=2.0 * theta - 1.0, method="power",
                                    iterations=iteration, residual=2.0 * resid)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # M = -I is the only way (I+M)/2 annihilates a positive vector
            return SpectralEstimate(value=-1.0, method="power",
                                    iterations=iteration, residual=0.0)
        x = y / norm
    raise NoConvergence(
        f"power iteration did not reach tol={tol} in {max_iter} iterations",
        estimate=2.0 * theta - 1.0, residual=2.0 * resid, iterations=max_iter)


class Verdict(str, Enum):
    EVIDENCE_AMENABLE = "EVIDENCE_AMENABLE"
    EVIDENCE_NONAMENABLE = "EVIDENCE_NONAMENABLE"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class RadiusEstimate:
    radius: int
    window_size: int
    lambda_max: float
    method: str
    iterations: int


@dataclass(frozen=True)
class AmenabilityReport:
    """Truncated Kesten-type test for one symmetric measure.

    ``entries`` is the nondecreasing sequence of top eigenvalues over
    nested windows; ``gap`` is 1 - lambda_max at the largest radius.  The
    verdict is heuristic evidence only: amenability quantifies over all
    finitely supported symmetric measures, and any finite computation for
    one measure is one-sided.
    """

    measure_support: tuple
    entries: tuple
    gap: float
    verdict: Verdict
    gap_threshold: float
    stall_threshold: float
    note: str = ("heuristic verdict from finite truncations of a single "
                 "measure; not a proof of (non-)amenability")

    @property
    def lambda_max(self) -> float:
        return self.entries[-1].lambda_max


def amenability_estimate(ring: FusionRing, mu: ProbMeasure,
                         radii: Sequence[int], cap: int = DEFAULT_WINDOW_CAP,
                         tol: float = 1e-9, *, gap_threshold: float = 1e-3,
                         stall_threshold: float = 1e-6) -> AmenabilityReport:
    """Run the truncated spectral test over a family of nested windows.

    For each radius: build the window generated by supp(mu), compress l_mu,
    and take the top eigenvalue.  The verdict is EVIDENCE_AMENABLE when the
    final gap drops below ``gap_threshold``; EVIDENCE_NONAMENABLE when the
    sequence has numerically stalled (successive differences below
    ``stall_threshold`` over at least three radii) at a gap larger than ten
    times ``gap_threshold``; otherwise INCONCLUSIVE.
    """
    if mu.ring is not ring:
        raise RingMismatch("measure belongs to a different ring")
    if not mu.symmetric:
        raise NonSymmetricMeasure(
            "the spectral test requires a symmetric measure")
    radii = sorted(set(int(r) for r in radii))
    if not radii:
        raise InvalidParam("need at least one radius")
    support = tuple(sorted(mu.support))
    entries = []
    for radius in radii:
        window = build_window(ring, support, radius, cap=cap)
        op = l_measure_operator(ring, mu, window)
        est = top_eigenvalue(op, tol=tol)
        entries.append(RadiusEstimate(radius=radius, window_size=len(window),
                                      lambda_max=est.value, method=est.method,
                                      iterations=est.iterations))
    values = [e.lambda_max for e in entries]
    gap = 1.0 - values[-1]

    stalled_radii = 1
    for prev, cur in zip(reversed(values[:-1]), reversed(values[1:])):
        if abs(cur - prev) < stall_threshold:
            stalled_radii += 1
        else:
            break

    if gap < gap_threshold:
        verdict = Verdict.EVIDENCE_AMENABLE
    elif stalled_radii >= 3 and gap > 10.0 * gap_threshold:
        verdict = Verdict.EVIDENCE_NONAMENABLE
    else:
        verdict = Verdict.INCONCLUSIVE
    return AmenabilityReport(measure_support=support, entries=tuple(entries),
                             gap=gap, verdict=verdict,
                             gap_threshold=gap_threshold,
                             stall_threshold=stall_threshold)
