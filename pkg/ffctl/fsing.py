"""F-purity, u-generators, annihilator chains and big test elements.

All local statements are read at the origin: S is the polynomial ring, n is
(x_1, ..., x_n), and the defining ideal a must vanish at the origin. Every
check below is a containment between ideals of S, so the localization is
never built.
"""
from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from .errors import (
    AvoidanceExhaustedError,
    ConsistencyError,
    PreconditionError,
    RingMismatchError,
)
from .groebner import Ideal, groebner_basis, ideal_contains, ideal_equal, member, normal_form
from .ideal_ops import (
    bracket_power,
    colon,
    colon_ideal,
    ideal_product,
    ideal_sum,
    intersect,
    maximal_ideal,
    radical_member,
    random_ideal,
)
from .polyring import (
    Limits,
    Monomial,
    MonomialOrder,
    Polynomial,
    PolyRing,
    PrimeChar,
    derivative,
    frobenius_power,
    mul,
    nu,
)

LOGGER = logging.getLogger("ffctl.fsing")

DEFAULT_CHAIN_CAP = 4
MAX_CHAIN_CAP = 8
DEFAULT_AVOIDANCE_CAP = 1_000_000

FEDDER_CITATION = "Fedder criterion: S/a is F-pure iff (a^[p] : a) is not contained in n^[p]"
R_CIRCLE_CITATION = (
    "R° is the complement of the minimal primes; an F-pure ring is reduced, "
    "so R° is the set of nonzerodivisors"
)
REGULAR_LOCUS_CITATION = (
    "regular locus is open: c in the radical of the Jacobian ideal (f, df/dx_i) "
    "means R_c is regular"
)
EXCELLENCE_CITATION = "finitely generated algebra over a field is excellent"
BIG_TEST_ELEMENT_CITATION = (
    "big test element theorem: if R is excellent and F-pure, and c in R° has R_c "
    "regular, then c is a big test element"
)
GRADED_ANNIHILATOR_CITATION = (
    "graded annihilator of (0 :_E a) under xe = uye is the sum of (a^[p^n] : u^nu_n) x^n"
)
U_GENERATOR_CITATION = (
    "ideal avoidance: T = (a^[p] : a)/a^[p] has t generators chosen outside n^[p]"
)


@dataclass(frozen=True)
class RingPresentation:
    ring: PolyRing
    a: Ideal

    def __post_init__(self) -> None:
        if self.a.ring != self.ring:
            raise RingMismatchError(f"defining ideal lives in {self.a.ring}, not {self.ring}")
        for g in self.a.generators:
            if g.constant_coefficient:
                raise PreconditionError(
                    f"generator {g} does not vanish at the origin; a must lie in n"
                )
        if member(self.ring.one(), self.a):
            raise PreconditionError("a must be a proper ideal")

    @classmethod
    def from_strings(
        cls,
        p: int,
        variables: Sequence[str],
        generators: Sequence[str],
        order: MonomialOrder | str = "grevlex",
        limits: Limits | None = None,
    ) -> RingPresentation:
        ring = PolyRing.create(p, variables, order, limits)
        return cls(ring, Ideal(ring, [ring.parse(text) for text in generators]))

    @property
    def char(self) -> PrimeChar:
        return self.ring.char

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ring.variables

    @cached_property
    def maximal_ideal(self) -> Ideal:
        return maximal_ideal(self.ring)

    def __str__(self) -> str:
        return f"{self.ring}/{self.a}"


def _require_nonzero(presentation: RingPresentation) -> None:
    if presentation.a.is_zero():
        raise PreconditionError("a must be a nonzero ideal")


def in_bracket_maximal(f: Polynomial, e: int = 1) -> bool:
    """Membership in n^[p^e]: every term has some exponent >= p^e."""
    q = f.ring.p**e
    return all(any(x >= q for x in m) for m, _ in f.terms)


def frobenius_colon(ideal: Ideal) -> Ideal:
    return colon_ideal(bracket_power(ideal, 1), ideal)


@dataclass(frozen=True)
class FpureReport:
    fpure: bool
    fedder_ideal: Ideal
    witness_u: Polynomial | None


def fedder_test(presentation: RingPresentation) -> FpureReport:
    _require_nonzero(presentation)
    fedder = frobenius_colon(presentation.a)
    witness = next((g for g in groebner_basis(fedder) if not in_bracket_maximal(g)), None)
    report = FpureReport(witness is not None, fedder, witness)
    _check_fedder_dichotomy(presentation, report)
    LOGGER.debug("fedder_test %s: fpure=%s witness=%s", presentation, report.fpure, witness)
    return report


def _check_fedder_dichotomy(presentation: RingPresentation, report: FpureReport) -> None:
    if report.fpure:
        u = report.witness_u
        if u is None or in_bracket_maximal(u) or not member(u, report.fedder_ideal):
            raise ConsistencyError(f"F-pure report for {presentation} has a bad witness {u}")
        return
    frobenius_maximal = bracket_power(presentation.maximal_ideal, 1)
    if not ideal_contains(frobenius_maximal, report.fedder_ideal):
        raise ConsistencyError(f"non-F-pure report for {presentation} escapes n^[p]")


class _FpSpan:
    def __init__(self, p: int) -> None:
        self.p = p
        self.rows: list[tuple[Monomial, dict[Monomial, int]]] = []

    def reduce(self, vector: dict[Monomial, int]) -> dict[Monomial, int]:
        vec = {m: c % self.p for m, c in vector.items() if c % self.p}
        for pivot, row in self.rows:
            c = vec.get(pivot)
            if not c:
                continue
            for m, rc in row.items():
                nc = (vec.get(m, 0) - c * rc) % self.p
                if nc:
                    vec[m] = nc
                else:
                    vec.pop(m, None)
        return vec

    def is_independent(self, vector: dict[Monomial, int]) -> bool:
        return bool(self.reduce(vector))

    def add(self, vector: dict[Monomial, int]) -> bool:
        vec = self.reduce(vector)
        if not vec:
            return False
        pivot = max(vec)
        inv = pow(vec[pivot], -1, self.p)
        self.rows.append((pivot, {m: c * inv % self.p for m, c in vec.items()}))
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _coefficient_vectors(k: int, p: int) -> Iterator[tuple[int, ...]]:
    """Nonzero F_p-combinations up to scaling: smaller supports first,
    lexicographic within a support, first coefficient fixed to 1."""
    for size in range(1, k + 1):
        for support in itertools.combinations(range(k), size):
            for rest in itertools.product(range(1, p), repeat=size - 1):
                coeffs = [0] * k
                coeffs[support[0]] = 1
                for idx, c in zip(support[1:], rest):
                    coeffs[idx] = c
                yield tuple(coeffs)


def _combine(coeffs: tuple[int, ...], polys: Sequence[Polynomial], ring: PolyRing) -> Polynomial:
    total = ring.zero()
    for c, f in zip(coeffs, polys):
        if c:
            total = total + f.scale(c)
    return total


def u_generators(
    presentation: RingPresentation,
    *,
    avoidance_cap: int = DEFAULT_AVOIDANCE_CAP,
) -> list[Polynomial]:
    """u_1, ..., u_t in (a^[p] : a) outside n^[p] generating T = (a^[p] : a)/a^[p].

    t is the F_p-dimension of T/nT = J/(nJ + a^[p]). Each u_i is the first
    F_p-combination of the basis of J that avoids n^[p] and keeps the images
    in T/nT independent.
    """
    report = fedder_test(presentation)
    if not report.fpure:
        raise PreconditionError(f"{presentation} is not F-pure; u_generators needs F-purity")
    ring = presentation.ring
    fedder = report.fedder_ideal
    candidates = groebner_basis(fedder)
    denominator = ideal_sum(
        ideal_product(presentation.maximal_ideal, fedder),
        bracket_power(presentation.a, 1),
    )
    denominator_basis = groebner_basis(denominator)
    images = [normal_form(g, denominator_basis) for g in candidates]

    full = _FpSpan(ring.p)
    for image in images:
        full.add(image.as_dict())
    t = full.rank
    LOGGER.debug("T/nT has dimension %d over F_%d (%d candidates)", t, ring.p, len(candidates))

    chosen: list[Polynomial] = []
    span = _FpSpan(ring.p)
    searched = 0
    while len(chosen) < t:
        found: tuple[Polynomial, Polynomial] | None = None
        for coeffs in _coefficient_vectors(len(candidates), ring.p):
            searched += 1
            if searched > avoidance_cap:
                raise AvoidanceExhaustedError(
                    f"avoidance search over {len(candidates)} candidates passed its cap "
                    f"{avoidance_cap} with {len(chosen)} of {t} generators found",
                    searched - 1,
                )
            u = _combine(coeffs, candidates, ring)
            if not u or in_bracket_maximal(u):
                continue
            image = _combine(coeffs, images, ring)
            if span.is_independent(image.as_dict()):
                found = (u, image)
                break
        if found is None:
            raise AvoidanceExhaustedError(
                f"no combination of the {len(candidates)} candidates avoids n^[p] "
                f"with an independent image ({len(chosen)} of {t} found)",
                searched,
            )
        u, image = found
        span.add(image.as_dict())
        chosen.append(u)
    return chosen


@dataclass(frozen=True)
class ChainEntry:
    n: int
    nu: int
    ideal: Ideal


@dataclass(frozen=True)
class ChainReport:
    u: Polynomial
    entries: tuple[ChainEntry, ...]
    ascending_verified: bool
    stabilized_at: int | None
    cap: int
    unit_at: int | None = None

    @property
    def stable_through_cap(self) -> str:
        if self.stabilized_at is None:
            return f"no repetition observed through cap {self.cap}"
        return f"stable from n={self.stabilized_at} through cap {self.cap}"


def annihilator_chain(
    presentation: RingPresentation,
    u: Polynomial,
    cap: int = DEFAULT_CHAIN_CAP,
    *,
    max_cap: int = MAX_CHAIN_CAP,
) -> ChainReport:
    """The ideals b_n = (a^[p^n] : u^nu_n) for n = 0..cap.

    Stabilization is observed, not proven: it means b_s = ... = b_cap.
    """
    _require_nonzero(presentation)
    if not 0 <= cap <= max_cap:
        raise PreconditionError(f"cap must lie in 0..{max_cap}, got {cap}")
    if u.ring != presentation.ring:
        raise RingMismatchError(f"u = {u} is not in {presentation.ring}")
    if not member(u, frobenius_colon(presentation.a)):
        raise PreconditionError(f"u = {u} does not lie in (a^[p] : a)")

    ring = presentation.ring
    entries: list[ChainEntry] = []
    power = ring.one()
    for n in range(cap + 1):
        if n:
            power = mul(u, frobenius_power(power, 1))
        if power:
            b = colon(bracket_power(presentation.a, n), power)
        else:
            b = Ideal.unit(ring)
        entries.append(ChainEntry(n, nu(ring.char, n).value, b))
        LOGGER.debug("chain n=%d: b_n has %d basis elements", n, len(groebner_basis(b)))

    for previous, current in zip(entries, entries[1:]):
        if not ideal_contains(current.ideal, previous.ideal):
            raise ConsistencyError(
                f"chain for u = {u} fails to ascend between n={previous.n} and n={current.n}"
            )

    last = entries[-1].ideal
    s = cap
    while s > 0 and ideal_equal(entries[s - 1].ideal, last):
        s -= 1
    unit_at = next((e.n for e in entries if e.ideal.is_unit()), None)
    return ChainReport(
        u=u,
        entries=tuple(entries),
        ascending_verified=True,
        stabilized_at=s if s < cap else None,
        cap=cap,
        unit_at=unit_at,
    )


def prime_chain_check(
    presentation: RingPresentation,
    u: Polynomial,
    cap: int = DEFAULT_CHAIN_CAP,
    *,
    max_cap: int = MAX_CHAIN_CAP,
) -> bool:
    """True iff (a^[p^n] : u^nu_n) = a for n <= cap.

    The caller asserts that a is prime; nothing here checks it, and for a
    non-prime a the answer says nothing about the fixed-point statement.
    """
    _require_nonzero(presentation)
    LOGGER.warning(
        "prime_chain_check trusts the caller that %s is a prime ideal", presentation.a
    )
    if member(u, bracket_power(presentation.a, 1)):
        raise PreconditionError(f"u = {u} must lie outside a^[p]")
    report = annihilator_chain(presentation, u, cap, max_cap=max_cap)
    return all(ideal_equal(entry.ideal, presentation.a) for entry in report.entries)


def associated_prime_containment(presentation: RingPresentation, prime: Ideal) -> bool:
    """(a^[p] : a) ⊆ (P^[p] : P) for a caller-supplied associated prime P."""
    _require_nonzero(presentation)
    return ideal_contains(frobenius_colon(prime), frobenius_colon(presentation.a))


def nonzerodivisor_test(presentation: RingPresentation, c: Polynomial) -> bool:
    if not c:
        raise PreconditionError("c must be nonzero")
    if member(c, presentation.a):
        return False
    return ideal_equal(colon(presentation.a, c), presentation.a)


def hypersurface_singular_ideal(f: Polynomial) -> Ideal:
    """(f, df/dx_1, ..., df/dx_n), cutting out the singular locus of S/(f)."""
    if not f or f.is_constant():
        raise PreconditionError("f must be a nonzero non-unit")
    gens = [f, *(derivative(f, i) for i in range(f.ring.nvars))]
    ideal = Ideal(f.ring, gens)
    groebner_basis(ideal)
    return ideal


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class Conclusion(str, Enum):
    BIG_TEST_ELEMENT = "big-test-element"
    INCONCLUSIVE = "inconclusive"
    REFUTED = "refuted"


@dataclass(frozen=True)
class CertificateCheck:
    name: str
    verdict: Verdict
    justification: str


@dataclass(frozen=True)
class Certificate:
    subject: RingPresentation
    c: Polynomial
    checks: tuple[CertificateCheck, ...]
    conclusion: Conclusion
    citations: tuple[str, ...] = field(default=(BIG_TEST_ELEMENT_CITATION,))

    @property
    def failed_checks(self) -> list[str]:
        return [check.name for check in self.checks if check.verdict is Verdict.FAIL]


CHECK_FPURE = "F-pure"
CHECK_R_CIRCLE = "c in R°"
CHECK_REGULAR = "R_c regular"
CHECK_EXCELLENT = "excellent"


def _verdict(ok: bool) -> Verdict:
    return Verdict.PASS if ok else Verdict.FAIL


def certify_big_test_element(presentation: RingPresentation, c: Polynomial) -> Certificate:
    if not c:
        raise PreconditionError("c must be nonzero")
    if c.ring != presentation.ring:
        raise RingMismatchError(f"c = {c} is not in {presentation.ring}")
    basis = groebner_basis(presentation.a)
    if len(basis) != 1:
        raise PreconditionError(
            "the certifier handles hypersurfaces only: a must be principal "
            "(the Jacobian criterion for higher codimension is not implemented)"
        )
    f = basis[0]

    fpure = fedder_test(presentation).fpure
    regular_element = nonzerodivisor_test(presentation, c)
    regular_locus = radical_member(c, hypersurface_singular_ideal(f))
    checks = (
        CertificateCheck(CHECK_FPURE, _verdict(fpure), FEDDER_CITATION),
        CertificateCheck(CHECK_R_CIRCLE, _verdict(regular_element), R_CIRCLE_CITATION),
        CertificateCheck(CHECK_REGULAR, _verdict(regular_locus), REGULAR_LOCUS_CITATION),
        CertificateCheck(CHECK_EXCELLENT, Verdict.PASS, EXCELLENCE_CITATION),
    )
    if not fpure or not regular_element:
        conclusion = Conclusion.REFUTED
    elif not regular_locus:
        conclusion = Conclusion.INCONCLUSIVE
    else:
        conclusion = Conclusion.BIG_TEST_ELEMENT
    LOGGER.debug("certificate for c = %s over %s: %s", c, presentation, conclusion.value)
    return Certificate(presentation, c, checks, conclusion)


IDENTITY_BRACKET_INTERSECTION = "bracket-intersection"
IDENTITY_BRACKET_COLON = "bracket-colon"
IDENTITY_FEDDER_CONTAINMENT = "fedder-colon-containment"
IDENTITY_FEDDER_PROPER = "fedder-ideal-proper"
SAMPLED_IDENTITIES = (
    IDENTITY_BRACKET_INTERSECTION,
    IDENTITY_BRACKET_COLON,
    IDENTITY_FEDDER_CONTAINMENT,
)

IDENTITY_CITATIONS = {
    IDENTITY_BRACKET_INTERSECTION: "(I ∩ J)^[p] = I^[p] ∩ J^[p] (Frobenius is flat)",
    IDENTITY_BRACKET_COLON: "(I : J)^[p] = (I^[p] : J^[p]) (Frobenius is flat)",
    IDENTITY_FEDDER_CONTAINMENT: "(I^[p] : I) ⊆ ((I : J)^[p] : (I : J))",
    IDENTITY_FEDDER_PROPER: "0 ≠ a ≠ S implies (a^[p] : a) ≠ S",
}


@dataclass(frozen=True)
class IdentityResult:
    name: str
    citation: str
    passed: bool
    checked: int
    counterexample: str | None = None


@dataclass(frozen=True)
class IdentityReport:
    samples: int
    seed: int
    results: tuple[IdentityResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(result.passed for result in self.results)


def check_sample_identities(left: Ideal, right: Ideal) -> dict[str, bool]:
    quotient = colon_ideal(left, right)
    return {
        IDENTITY_BRACKET_INTERSECTION: ideal_equal(
            bracket_power(intersect(left, right), 1),
            intersect(bracket_power(left, 1), bracket_power(right, 1)),
        ),
        IDENTITY_BRACKET_COLON: ideal_equal(
            bracket_power(quotient, 1),
            colon_ideal(bracket_power(left, 1), bracket_power(right, 1)),
        ),
        IDENTITY_FEDDER_CONTAINMENT: ideal_contains(
            frobenius_colon(quotient), frobenius_colon(left)
        ),
    }


def _sample_pair(
    ring: PolyRing, seed: int, index: int, max_generators: int, max_degree: int
) -> tuple[Ideal, Ideal]:
    rng = random.Random(seed * 1_000_003 + index)
    left = random_ideal(ring, rng, max_generators=max_generators, max_degree=max_degree)
    if index == 0:
        return left, Ideal.unit(ring)
    return left, random_ideal(ring, rng, max_generators=max_generators, max_degree=max_degree)


def verify_identities(
    presentation: RingPresentation,
    samples: int,
    *,
    seed: int = 0,
    workers: int = 1,
    max_generators: int = 2,
    max_degree: int = 2,
) -> IdentityReport:
    """Randomized bracket-power identity suite plus (a^[p] : a) ≠ S.

    Sample 0 pairs a random ideal with the unit ideal. Failures are reported,
    never raised.
    """
    ring = presentation.ring

    def run_sample(index: int) -> tuple[int, Ideal, Ideal, dict[str, bool]]:
        left, right = _sample_pair(ring, seed, index, max_generators, max_degree)
        return index, left, right, check_sample_identities(left, right)

    if workers > 1 and samples > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(run_sample, range(samples)))
    else:
        outcomes = [run_sample(index) for index in range(samples)]
    outcomes.sort(key=lambda item: item[0])

    results: list[IdentityResult] = []
    for name in SAMPLED_IDENTITIES:
        failure = next((o for o in outcomes if not o[3][name]), None)
        counterexample = None
        if failure is not None:
            counterexample = f"sample {failure[0]}: I = {failure[1]}, J = {failure[2]}"
            LOGGER.error("identity %s failed on %s", name, counterexample)
        results.append(
            IdentityResult(
                name, IDENTITY_CITATIONS[name], failure is None, len(outcomes), counterexample
            )
        )

    if presentation.a.is_zero():
        results.append(
            IdentityResult(
                IDENTITY_FEDDER_PROPER,
                IDENTITY_CITATIONS[IDENTITY_FEDDER_PROPER],
                True,
                0,
                "skipped: a = 0",
            )
        )
    else:
        proper = not member(ring.one(), frobenius_colon(presentation.a))
        results.append(
            IdentityResult(
                IDENTITY_FEDDER_PROPER,
                IDENTITY_CITATIONS[IDENTITY_FEDDER_PROPER],
                proper,
                1,
                None if proper else f"a = {presentation.a}",
            )
        )
    return IdentityReport(samples, seed, tuple(results))
