from __future__ import annotations

import heapq
import logging
from collections.abc import Iterable, Sequence

from .errors import PreconditionError, ResourceLimitError, RingMismatchError
from .polyring import (
    Monomial,
    MonomialOrder,
    Polynomial,
    PolyRing,
    format_polynomial,
    monomial_divides,
    monomial_lcm,
    monomial_quotient,
)

LOGGER = logging.getLogger("ffctl.groebner")


class Ideal:
    """Finite generating set plus a lazily filled reduced Gröbner basis.

    The generators never change. The cache holds one basis together with the
    order it was computed under; it is written only by ``groebner_basis``.
    """

    __slots__ = ("ring", "generators", "_cache")

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial] = ()) -> None:
        gens: list[Polynomial] = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatchError(f"generator {g} is not in {ring}")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._cache: tuple[MonomialOrder, tuple[Polynomial, ...]] | None = None

    @classmethod
    def unit(cls, ring: PolyRing) -> Ideal:
        ideal = cls(ring, [ring.one()])
        ideal._cache = (ring.order, (ring.one(),))
        return ideal

    @classmethod
    def zero(cls, ring: PolyRing) -> Ideal:
        ideal = cls(ring)
        ideal._cache = (ring.order, ())
        return ideal

    @classmethod
    def principal(cls, f: Polynomial) -> Ideal:
        return cls(f.ring, [f])

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        basis = groebner_basis(self)
        return len(basis) == 1 and basis[0].is_constant()

    def cached_basis(self, order: MonomialOrder) -> tuple[Polynomial, ...] | None:
        if self._cache is not None and self._cache[0] == order:
            return self._cache[1]
        return None

    def __contains__(self, f: Polynomial) -> bool:
        return member(f, self)

    def __str__(self) -> str:
        return "(" + ", ".join(format_polynomial(g) for g in self.generators) + ")"

    def __repr__(self) -> str:
        return f"Ideal{self} in {self.ring}"


def _reorder(polys: Sequence[Polynomial], order: MonomialOrder | None) -> list[Polynomial]:
    if order is None or not polys or polys[0].ring.order == order:
        return list(polys)
    ring = polys[0].ring.with_order(order)
    return [f.to_ring(ring) for f in polys]


def normal_form(
    f: Polynomial,
    divisors: Sequence[Polynomial],
    order: MonomialOrder | None = None,
) -> Polynomial:
    """Full reduction of ``f`` by ``divisors``.

    The largest remaining term is treated first; divisors are tried in list
    order. The remainder has no term divisible by any leading monomial.
    """
    if order is not None and order != f.ring.order:
        f = f.to_ring(f.ring.with_order(order))
        divisors = _reorder(divisors, order)
    ring = f.ring
    if not f.terms:
        return f
    leads: list[tuple[Monomial, int, tuple[tuple[Monomial, int], ...]]] = []
    for g in divisors:
        if g.ring != ring:
            raise RingMismatchError(f"divisor {g} is not in {ring}")
        if not g.terms:
            raise PreconditionError("normal_form divisors must be nonzero")
        leads.append((g.terms[0][0], pow(g.terms[0][1], -1, ring.p), g.terms[1:]))
    if not leads:
        return f

    p = ring.p
    key = ring.order.key
    max_terms = ring.limits.max_terms
    work = dict(f.terms)
    heap = [(tuple(-k for k in key(m)), m) for m in work]
    heapq.heapify(heap)
    queued = set(work)
    remainder: dict[Monomial, int] = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = work.pop(m, 0)
        if not c:
            continue
        for lead, inv, tail in leads:
            if monomial_divides(lead, m):
                break
        else:
            remainder[m] = c
            continue
        shift = monomial_quotient(m, lead)
        q = c * inv % p
        for tm, tc in tail:
            nm = tuple(a + b for a, b in zip(shift, tm))
            nc = (work.get(nm, 0) - q * tc) % p
            if nc:
                work[nm] = nc
                if nm not in queued:
                    heapq.heappush(heap, (tuple(-k for k in key(nm)), nm))
                    queued.add(nm)
            else:
                work.pop(nm, None)
        if len(work) > max_terms:
            raise ResourceLimitError(
                f"reduction grew past max_terms={max_terms} terms"
            )
    return ring.from_dict(remainder)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    lcm = monomial_lcm(f.leading_monomial, g.leading_monomial)
    p = f.ring.p
    f_scale = pow(f.leading_coefficient, -1, p)
    g_scale = pow(g.leading_coefficient, -1, p)
    left = f.mul_term(monomial_quotient(lcm, f.leading_monomial), f_scale)
    right = g.mul_term(monomial_quotient(lcm, g.leading_monomial), g_scale)
    return left - right


class _PairQueue:
    """Critical pairs under the normal strategy: smallest lcm degree first,
    ties broken by the monomial order and then by index."""

    def __init__(self, ring: PolyRing) -> None:
        self._key = ring.order.key
        self._max_pairs = ring.limits.max_pairs
        self._heap: list[tuple[int, tuple[int, ...], int, int, Monomial]] = []
        self.pending: set[tuple[int, int]] = set()

    def push(self, i: int, j: int, lcm: Monomial) -> None:
        heapq.heappush(self._heap, (sum(lcm), self._key(lcm), i, j, lcm))
        self.pending.add((i, j))
        if len(self.pending) > self._max_pairs:
            raise ResourceLimitError(
                f"Buchberger pair queue exceeded max_pairs={self._max_pairs}"
            )

    def pop(self) -> tuple[int, int, Monomial]:
        _, _, i, j, lcm = heapq.heappop(self._heap)
        self.pending.discard((i, j))
        return i, j, lcm

    def __bool__(self) -> bool:
        return bool(self._heap)


def _chain_criterion(
    i: int, j: int, lcm: Monomial, leads: list[Monomial], pending: set[tuple[int, int]]
) -> bool:
    for k, lead in enumerate(leads):
        if k in (i, j) or not monomial_divides(lead, lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _buchberger(ring: PolyRing, polys: Sequence[Polynomial]) -> list[Polynomial]:
    basis: list[Polynomial] = []
    leads: list[Monomial] = []
    queue = _PairQueue(ring)
    skipped = 0

    def insert(h: Polynomial) -> bool:
        h = h.monic()
        if h.is_constant():
            return True
        k = len(basis)
        lead = h.leading_monomial
        for i, other in enumerate(leads):
            lcm = monomial_lcm(other, lead)
            if all(not (a and b) for a, b in zip(other, lead)):
                continue  # coprime leading monomials
            queue.push(i, k, lcm)
        basis.append(h)
        leads.append(lead)
        return False

    key = ring.order.key
    for f in sorted(polys, key=lambda g: key(g.leading_monomial)):
        h = normal_form(f, basis)
        if h and insert(h):
            return [ring.one()]

    while queue:
        i, j, lcm = queue.pop()
        if _chain_criterion(i, j, lcm, leads, queue.pending):
            skipped += 1
            continue
        h = normal_form(s_polynomial(basis[i], basis[j]), basis)
        if h and insert(h):
            return [ring.one()]

    LOGGER.debug(
        "Buchberger finished with %d elements (%d pairs skipped by the chain criterion)",
        len(basis),
        skipped,
    )
    return _reduce_basis(ring, basis)


def _reduce_basis(ring: PolyRing, basis: list[Polynomial]) -> list[Polynomial]:
    key = ring.order.key
    ordered = sorted(basis, key=lambda g: key(g.leading_monomial))
    minimal: list[Polynomial] = []
    for g in ordered:
        if not any(monomial_divides(h.leading_monomial, g.leading_monomial) for h in minimal):
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        reduced.append(normal_form(g, others).monic())
    reduced.sort(key=lambda g: key(g.leading_monomial), reverse=True)
    return reduced


def groebner_basis(ideal: Ideal, order: MonomialOrder | None = None) -> list[Polynomial]:
    """Reduced Gröbner basis, monic, sorted by leading monomial (largest first).

    Computed under ``order`` (default: the ring's order) and cached on the
    ideal. With a non-default order the basis lives in the re-ordered ring.
    """
    order = order or ideal.ring.order
    cached = ideal.cached_basis(order)
    if cached is not None:
        return list(cached)
    ring = ideal.ring.with_order(order)
    gens = [g.to_ring(ring) for g in ideal.generators]
    basis = _buchberger(ring, gens) if gens else []
    ideal._cache = (order, tuple(basis))
    return basis


def is_groebner_basis(basis: Sequence[Polynomial]) -> bool:
    for i, f in enumerate(basis):
        for g in basis[i + 1 :]:
            if normal_form(s_polynomial(f, g), basis):
                return False
    return True


def member(f: Polynomial, ideal: Ideal) -> bool:
    if f.ring != ideal.ring:
        raise RingMismatchError(f"{f} is not in {ideal.ring}")
    if not f:
        return True
    return not normal_form(f, groebner_basis(ideal))


def _check_comparable(left: Ideal, right: Ideal) -> None:
    if left.ring != right.ring:
        raise RingMismatchError(f"ideals live in different rings: {left.ring} vs {right.ring}")


def ideal_equal(left: Ideal, right: Ideal) -> bool:
    _check_comparable(left, right)
    return groebner_basis(left) == groebner_basis(right)


def ideal_contains(big: Ideal, small: Ideal) -> bool:
    _check_comparable(big, small)
    return all(member(g, big) for g in small.generators)
