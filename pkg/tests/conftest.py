from __future__ import annotations

import random
from fractions import Fraction

import pytest

import fusionkit as fk


@pytest.fixture(scope="session")
def su2():
    return fk.build_su2_ring()


@pytest.fixture(scope="session")
def dsu2():
    return fk.build_deformed_su2_ring(3)


@pytest.fixture(scope="session")
def z1():
    return fk.integer_lattice_ring(1)


@pytest.fixture(scope="session")
def z2():
    return fk.integer_lattice_ring(2)


@pytest.fixture(scope="session")
def f2():
    return fk.free_group_ring(2)


@pytest.fixture(scope="session")
def z6():
    return fk.cyclic_ring(6)


@pytest.fixture(scope="session")
def su2xz(su2, z1):
    return fk.tensor_product(su2, z1)


def pool_for(ring, radius=4):
    """A finite label pool: the window generated by the declared generators."""
    gens = ring.generators if ring.generators else (ring.unit,)
    return list(fk.build_window(ring, gens, radius).labels)


def random_symmetric_measure(ring, rng: random.Random, pool, *,
                             include_unit=False, max_classes=3):
    """A random symmetric measure with exactly equal weights on conjugate
    pairs (rational construction, floats only at the end)."""
    labels = list(pool)
    rng.shuffle(labels)
    classes = []
    used = set()
    for label in labels:
        if len(classes) >= max_classes:
            break
        if label in used:
            continue
        cls = frozenset({label, ring.conj(label)})
        classes.append(cls)
        used |= cls
    if include_unit and ring.unit not in used:
        classes.append(frozenset({ring.unit}))
    ints = [rng.randint(1, 5) for _ in classes]
    total = sum(ints)
    weights = {}
    for cls, w in zip(classes, ints):
        share = Fraction(w, total)
        if len(cls) == 1:
            (label,) = cls
            weights[label] = float(share)
        else:
            for label in cls:
                weights[label] = float(share / 2)
    return fk.ProbMeasure(ring, weights)


def random_real_function(ring, rng: random.Random, pool, size=4):
    labels = rng.sample(list(pool), min(size, len(pool)))
    return fk.Element(ring, {l: rng.uniform(-2.0, 2.0) for l in labels})


def random_integer_function(ring, rng: random.Random, pool, size=4, lo=-3, hi=3):
    labels = rng.sample(list(pool), min(size, len(pool)))
    return fk.Element(ring, {l: rng.randint(lo, hi) for l in labels})


def random_subset(rng: random.Random, pool, max_size=6):
    k = rng.randint(1, min(max_size, len(pool)))
    return set(rng.sample(list(pool), k))
