"""Brute-force validators that share no code path with the Gröbner engine.

Everything here works on coefficient dictionaries directly: Macaulay
matrices with plain row reduction over F_p, exponent arithmetic for
monomial ideals, and term-by-term expansion for hypersurfaces.
"""
from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from enum import Enum

from .errors import OracleLimitError, PreconditionError, RingMismatchError
from .groebner import Ideal
from .polyring import Monomial, Polynomial, PolyRing, polynomial_divmod

LOGGER = logging.getLogger("ffctl.oracle")

DEFAULT_MAX_MATRIX_CELLS = 4_000_000
DEFAULT_MAX_EXPANSION_TERMS = 250_000


@dataclass(frozen=True)
class DegreeBound:
    D: int

    def __post_init__(self) -> None:
        if self.D < 0:
            raise PreconditionError(f"degree bound must be non-negative, got {self.D}")


class MembershipVerdict(str, Enum):
    IN = "in"
    NOT_IN_UP_TO_D = "not-in-up-to-D"


def default_degree_bound(f: Polynomial, ideal: Ideal) -> DegreeBound:
    """2 * maxdeg + 4; a heuristic, not a proven bound."""
    maxdeg = max([f.total_degree, *(g.total_degree for g in ideal.generators)], default=0)
    return DegreeBound(2 * max(maxdeg, 0) + 4)


def _monomials_up_to(nvars: int, degree: int) -> Iterator[Monomial]:
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            exps = [0] * nvars
            for i in combo:
                exps[i] += 1
            yield tuple(exps)


def _count_monomials_up_to(nvars: int, degree: int) -> int:
    total = 1
    for k in range(1, nvars + 1):
        total = total * (degree + k) // k
    return total


def _shift(row: dict[Monomial, int], m: Monomial) -> dict[Monomial, int]:
    return {tuple(a + b for a, b in zip(k, m)): c for k, c in row.items()}


def _inverse(c: int, p: int) -> int:
    return pow(c, p - 2, p)


def _eliminate(
    vector: dict[Monomial, int], echelon: list[tuple[Monomial, dict[Monomial, int]]], p: int
) -> dict[Monomial, int]:
    vec = dict(vector)
    for pivot, row in echelon:
        c = vec.get(pivot, 0)
        if not c:
            continue
        for m, rc in row.items():
            value = (vec.get(m, 0) - c * rc) % p
            if value:
                vec[m] = value
            else:
                vec.pop(m, None)
    return vec


def macaulay_member(
    f: Polynomial,
    ideal: Ideal,
    bound: DegreeBound,
    *,
    max_cells: int = DEFAULT_MAX_MATRIX_CELLS,
) -> MembershipVerdict:
    """Is ``f`` in the span of ``{m*g : deg(m*g) <= D}``?

    ``IN`` is conclusive. ``NOT_IN_UP_TO_D`` only says no certificate of
    degree at most D exists.
    """
    if f.ring != ideal.ring:
        raise RingMismatchError(f"{f} is not in {ideal.ring}")
    ring = f.ring
    D = bound.D
    if f.total_degree > D:
        raise PreconditionError(f"deg f = {f.total_degree} exceeds the bound D = {D}")
    if any(g.total_degree > D for g in ideal.generators):
        raise PreconditionError(f"D = {D} is below the largest generator degree")
    if not f:
        return MembershipVerdict.IN

    columns = _count_monomials_up_to(ring.nvars, D)
    rows = sum(
        _count_monomials_up_to(ring.nvars, D - g.total_degree) for g in ideal.generators
    )
    if rows * columns > max_cells:
        raise OracleLimitError(
            f"Macaulay matrix {rows}x{columns} exceeds max_cells={max_cells}"
        )
    LOGGER.debug("Macaulay matrix %dx%d at D=%d", rows, columns, D)

    p = ring.p
    echelon: list[tuple[Monomial, dict[Monomial, int]]] = []
    for g in ideal.generators:
        base = dict(g.terms)
        for m in _monomials_up_to(ring.nvars, D - g.total_degree):
            reduced = _eliminate(_shift(base, m), echelon, p)
            if not reduced:
                continue
            pivot = max(reduced)
            inv = _inverse(reduced[pivot], p)
            echelon.append((pivot, {k: c * inv % p for k, c in reduced.items()}))

    if _eliminate(dict(f.terms), echelon, p):
        return MembershipVerdict.NOT_IN_UP_TO_D
    return MembershipVerdict.IN


def _monomial_generators(ideal: Ideal) -> list[Monomial]:
    exps: list[Monomial] = []
    for g in ideal.generators:
        if not g.is_monomial():
            raise PreconditionError(f"generator {g} is not a monomial")
        exps.append(g.terms[0][0])
    return exps


def _minimal_ideal(ring: PolyRing, exps: list[Monomial]) -> Ideal:
    unique = sorted(set(exps), key=lambda m: (sum(m), m))
    minimal: list[Monomial] = []
    for m in unique:
        if not any(all(a <= b for a, b in zip(k, m)) for k in minimal):
            minimal.append(m)
    return Ideal(ring, [ring.monomial(m) for m in minimal])


def monomial_colon(ideal: Ideal, m: Monomial | Polynomial) -> Ideal:
    """(I : x^m) generated by g / gcd(g, x^m)."""
    ring = ideal.ring
    if isinstance(m, Polynomial):
        if m.ring != ring:
            raise RingMismatchError(f"{m} is not in {ring}")
        if not m.is_monomial():
            raise PreconditionError(f"{m} is not a monomial")
        m = m.terms[0][0]
    if len(m) != ring.nvars:
        raise PreconditionError(f"bad exponent vector {m} for {ring}")
    gens = _monomial_generators(ideal)
    return _minimal_ideal(ring, [tuple(max(a - b, 0) for a, b in zip(g, m)) for g in gens])


def monomial_intersect(left: Ideal, right: Ideal) -> Ideal:
    if left.ring != right.ring:
        raise RingMismatchError(f"ideals live in different rings: {left.ring} vs {right.ring}")
    lcms = [
        tuple(max(a, b) for a, b in zip(g, h))
        for g in _monomial_generators(left)
        for h in _monomial_generators(right)
    ]
    return _minimal_ideal(left.ring, lcms)


def principal_colon(fq: Polynomial, f: Polynomial) -> Polynomial:
    """(f^k : f) = f^(k-1), checking fq = f^k by repeated exact division."""
    if fq.ring != f.ring:
        raise RingMismatchError(f"{fq} and {f} live in different rings")
    if not f or f.is_constant():
        raise PreconditionError("f must be a nonzero non-unit")
    first: Polynomial | None = None
    current = fq
    while not current.is_constant():
        quotient, remainder = polynomial_divmod(current, f)
        if remainder:
            raise PreconditionError(f"{fq} is not a power of {f}")
        if first is None:
            first = quotient
        current = quotient
    if first is None or current != fq.ring.one():
        raise PreconditionError(f"{fq} is not a power of {f}")
    return first


def hypersurface_fedder(f: Polynomial, *, max_terms: int = DEFAULT_MAX_EXPANSION_TERMS) -> bool:
    """F-purity of S/(f) at the origin: f^(p-1) has a term with every exponent below p."""
    if not f or f.is_constant():
        raise PreconditionError("f must be a nonzero non-unit")
    if f.constant_coefficient:
        raise PreconditionError(f"{f} does not vanish at the origin")
    p = f.ring.p
    power: dict[Monomial, int] = {(0,) * f.ring.nvars: 1}
    for _ in range(p - 1):
        product: dict[Monomial, int] = {}
        for m, c in power.items():
            for n, d in f.terms:
                k = tuple(a + b for a, b in zip(m, n))
                value = (product.get(k, 0) + c * d) % p
                if value:
                    product[k] = value
                else:
                    product.pop(k, None)
        if len(product) > max_terms:
            raise OracleLimitError(f"expansion of f^{p - 1} exceeds max_terms={max_terms}")
        power = product
    return any(all(e <= p - 1 for e in m) for m in power)
