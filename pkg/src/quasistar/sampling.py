"""Seeded random elements for sweeps and property checks."""
import numpy as np

from .algebra import involute, multiply


def rng_for(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def complex_normal(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_sub(pair, rng):
    return complex_normal(rng, pair.sub_dim)


def random_ambient(pair, rng):
    return complex_normal(rng, pair.ambient_dim)


def random_square(pair, rng):
    """Embedded x* x for a random x in A0."""
    x = random_sub(pair, rng)
    return pair.embed @ multiply(involute(x, pair.alg), x, pair.alg)


def random_cone_element(pair, rng, terms=2, normalize=True):
    """Embedded sum of `terms` squares x_k* x_k; unit norm unless told otherwise."""
    a = sum(random_square(pair, rng) for _ in range(terms))
    if normalize:
        a = a / pair.norm(a)
    return a


def random_self_adjoint(pair, rng, normalize=True):
    a = random_ambient(pair, rng)
    a = (a + pair.involute(a)) / 2
    if normalize:
        a = a / pair.norm(a)
    return a
