"""Sums, products, intersections, colon ideals, bracket powers and radicals."""
from __future__ import annotations

import logging
import random

from .errors import PreconditionError, RingMismatchError
from .groebner import Ideal, groebner_basis, member
from .polyring import (
    MonomialOrder,
    Polynomial,
    PolyRing,
    divide_exact,
    frobenius_power,
    polynomial_divmod,
    random_polynomial,
)

LOGGER = logging.getLogger("ffctl.ideal_ops")


def _with_basis(ring: PolyRing, generators: list[Polynomial]) -> Ideal:
    ideal = Ideal(ring, generators)
    groebner_basis(ideal)
    return ideal


def _check_same_ring(left: Ideal, right: Ideal) -> None:
    if left.ring != right.ring:
        raise RingMismatchError(f"ideals live in different rings: {left.ring} vs {right.ring}")


def _elimination_ring(ring: PolyRing) -> PolyRing:
    inner = ring.order.kind if ring.order.kind in ("lex", "grevlex") else "grevlex"
    return ring.extend(ring.fresh_names(1), MonomialOrder.block(1, inner))


def maximal_ideal(ring: PolyRing) -> Ideal:
    return _with_basis(ring, ring.gens())


def ideal_sum(left: Ideal, right: Ideal) -> Ideal:
    _check_same_ring(left, right)
    return _with_basis(left.ring, [*left.generators, *right.generators])


def ideal_product(left: Ideal, right: Ideal) -> Ideal:
    _check_same_ring(left, right)
    return _with_basis(left.ring, [f * g for f in left.generators for g in right.generators])


def intersect(left: Ideal, right: Ideal) -> Ideal:
    """``left ∩ right = (t*left + (1-t)*right) ∩ F_p[x]`` with t eliminated."""
    _check_same_ring(left, right)
    ring = left.ring
    if left.is_zero() or right.is_zero():
        return Ideal.zero(ring)
    ext = _elimination_ring(ring)
    t = ext.gen(0)
    one_minus_t = ext.one() - t
    gens = [t * f.to_ring(ext) for f in left.generators]
    gens += [one_minus_t * g.to_ring(ext) for g in right.generators]
    eliminated = [g for g in groebner_basis(Ideal(ext, gens)) if g.leading_monomial[0] == 0]
    LOGGER.debug("intersection kept %d elimination-basis elements", len(eliminated))
    return _with_basis(ring, [g.to_ring(ring) for g in eliminated])


def colon(ideal: Ideal, g: Polynomial) -> Ideal:
    """``(ideal : g)``: generators of ``ideal ∩ (g)``, each divided by g."""
    if g.ring != ideal.ring:
        raise RingMismatchError(f"{g} is not in {ideal.ring}")
    if not g:
        raise PreconditionError("colon by the zero polynomial is not defined here")
    ring = ideal.ring
    if g.is_constant() or ideal.is_zero():
        return _with_basis(ring, list(ideal.generators))
    if len(ideal.generators) == 1:
        quotient, remainder = polynomial_divmod(ideal.generators[0], g)
        if not remainder:
            return _with_basis(ring, [quotient])
    common = intersect(ideal, Ideal.principal(g))
    return _with_basis(ring, [divide_exact(h, g) for h in groebner_basis(common)])


def colon_ideal(ideal: Ideal, by: Ideal) -> Ideal:
    _check_same_ring(ideal, by)
    if by.is_zero():
        raise PreconditionError("colon by the zero ideal is not defined here")
    result = colon(ideal, by.generators[0])
    for g in by.generators[1:]:
        result = intersect(result, colon(ideal, g))
    return result


def bracket_power(ideal: Ideal, e: int) -> Ideal:
    """``ideal^[p^e]``, generated by the p^e-th powers of any generating set."""
    if e < 0:
        raise PreconditionError("bracket exponent must be non-negative")
    if e == 0:
        return ideal
    return _with_basis(ideal.ring, [frobenius_power(g, e) for g in ideal.generators])


def radical_member(f: Polynomial, ideal: Ideal) -> bool:
    """Rabinowitsch: ``f ∈ √I`` iff ``1 ∈ I + (1 - t*f)``."""
    if f.ring != ideal.ring:
        raise RingMismatchError(f"{f} is not in {ideal.ring}")
    if not f or member(f, ideal):
        return True
    ext = _elimination_ring(ideal.ring)
    t = ext.gen(0)
    gens = [g.to_ring(ext) for g in ideal.generators]
    gens.append(ext.one() - t * f.to_ring(ext))
    return Ideal(ext, gens).is_unit()


def random_ideal(
    ring: PolyRing,
    rng: random.Random,
    *,
    max_generators: int = 2,
    max_degree: int = 2,
    max_terms: int = 2,
    homogeneous: bool = False,
) -> Ideal:
    gens: list[Polynomial] = []
    while not gens:
        for _ in range(rng.randint(1, max_generators)):
            g = random_polynomial(
                ring,
                rng,
                max_degree,
                max_terms,
                min_degree=1,
                homogeneous=homogeneous,
            )
            if g:
                gens.append(g)
    return Ideal(ring, gens)
