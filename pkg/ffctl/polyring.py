"""Exact multivariate polynomials over a prime field F_p.

A polynomial is stored as a tuple of ``(exponents, coefficient)`` terms sorted
strictly descending in its ring's monomial order, with coefficients in
``1..p-1``. That canonical form is unique, so equality and hashing are plain
tuple comparisons.
"""
from __future__ import annotations

import heapq
import logging
import random
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from functools import cached_property

from .errors import (
    ExponentOverflowError,
    PolynomialSyntaxError,
    PreconditionError,
    ResourceLimitError,
    RingMismatchError,
)

LOGGER = logging.getLogger("ffctl.polyring")

MAX_CHARACTERISTIC = 1 << 16
MAX_EXPONENT = (1 << 32) - 1
ORDER_KINDS = ("lex", "grevlex")
RESERVED_PREFIX = "@"

Monomial = tuple[int, ...]
Term = tuple[Monomial, int]

_NAME_RE = re.compile(r"^@?[A-Za-z_][A-Za-z0-9_]*$")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeChar:
    p: int

    def __post_init__(self) -> None:
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise PreconditionError(f"p must be an integer, got {self.p!r}")
        if not _is_prime(self.p):
            raise PreconditionError(f"p must be prime, got {self.p}")
        if self.p > MAX_CHARACTERISTIC:
            raise PreconditionError(f"p must be at most {MAX_CHARACTERISTIC}, got {self.p}")


def _lex_key(exps: Monomial) -> tuple[int, ...]:
    return exps


def _grevlex_key(exps: Monomial) -> tuple[int, ...]:
    return (sum(exps), *(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    """Total order on exponent vectors.

    ``block`` compares the first ``elim_count`` variables first (with
    ``inner_kind``), then the remaining ones; any monomial involving the first
    block is larger than every monomial free of it.
    """

    kind: str = "grevlex"
    elim_count: int = 0
    inner_kind: str = "grevlex"

    def __post_init__(self) -> None:
        if self.kind in ORDER_KINDS:
            if self.elim_count != 0 or self.inner_kind != "grevlex":
                raise PreconditionError(f"{self.kind} takes no block parameters")
            return
        if self.kind != "block":
            raise PreconditionError(f"unknown monomial order {self.kind!r}")
        if self.elim_count < 1:
            raise PreconditionError("block order needs at least one eliminated variable")
        if self.inner_kind not in ORDER_KINDS:
            raise PreconditionError(f"unknown inner order {self.inner_kind!r}")

    @classmethod
    def parse(cls, name: str) -> MonomialOrder:
        normalized = name.strip().lower()
        if normalized not in ORDER_KINDS:
            raise PreconditionError(f"order must be one of {', '.join(ORDER_KINDS)}")
        return cls(normalized)

    @classmethod
    def block(cls, elim_count: int, inner_kind: str = "grevlex") -> MonomialOrder:
        return cls("block", elim_count, inner_kind)

    def key(self, exps: Monomial) -> tuple[int, ...]:
        if self.kind == "lex":
            return exps
        if self.kind == "grevlex":
            return _grevlex_key(exps)
        inner = _lex_key if self.inner_kind == "lex" else _grevlex_key
        head = exps[: self.elim_count]
        tail = exps[self.elim_count :]
        return inner(head) + inner(tail)

    def __str__(self) -> str:
        if self.kind == "block":
            return f"block({self.elim_count},{self.inner_kind})"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True)
class Limits:
    max_pairs: int = 100_000
    max_terms: int = 250_000


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class PolyRing:
    """F_p[variables] with an active monomial order.

    ``limits`` travel with the ring so every engine call sees the configured
    resource caps; they take no part in ring equality.
    """

    char: PrimeChar
    variables: tuple[str, ...]
    order: MonomialOrder = GREVLEX
    limits: Limits = field(default=DEFAULT_LIMITS, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.variables, tuple):
            object.__setattr__(self, "variables", tuple(self.variables))
        if not self.variables:
            raise PreconditionError("a polynomial ring needs at least one variable")
        for name in self.variables:
            if not _NAME_RE.match(name):
                raise PreconditionError(f"invalid variable name {name!r}")
        if len(set(self.variables)) != len(self.variables):
            raise PreconditionError("variable names must be distinct")
        if self.order.kind == "block" and self.order.elim_count > len(self.variables):
            raise PreconditionError("block order eliminates more variables than the ring has")

    @classmethod
    def create(
        cls,
        p: int,
        variables: Iterable[str],
        order: MonomialOrder | str = GREVLEX,
        limits: Limits | None = None,
    ) -> PolyRing:
        names = tuple(variables)
        for name in names:
            if name.startswith(RESERVED_PREFIX):
                raise PreconditionError(f"variable name {name!r} is reserved")
        if isinstance(order, str):
            order = MonomialOrder.parse(order)
        return cls(PrimeChar(p), names, order, limits or DEFAULT_LIMITS)

    @property
    def p(self) -> int:
        return self.char.p

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise PreconditionError(f"unknown variable {name!r}") from None

    def zero(self) -> Polynomial:
        return Polynomial(self, ())

    def one(self) -> Polynomial:
        return self.constant(1)

    def constant(self, c: int) -> Polynomial:
        return self.from_dict({(0,) * self.nvars: c})

    def gen(self, which: str | int) -> Polynomial:
        idx = self.index(which) if isinstance(which, str) else which
        exps = [0] * self.nvars
        exps[idx] = 1
        return Polynomial(self, ((tuple(exps), 1),))

    def gens(self) -> list[Polynomial]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps: Iterable[int], coeff: int = 1) -> Polynomial:
        return self.from_terms([(tuple(exps), coeff)])

    def from_terms(self, terms: Iterable[tuple[Iterable[int], int]]) -> Polynomial:
        acc: dict[Monomial, int] = {}
        for exps, coeff in terms:
            mono = tuple(int(e) for e in exps)
            if len(mono) != self.nvars or any(e < 0 for e in mono):
                raise PreconditionError(f"bad exponent vector {mono} for {self}")
            if any(e > MAX_EXPONENT for e in mono):
                raise ExponentOverflowError(f"exponent above {MAX_EXPONENT} in {mono}")
            acc[mono] = acc.get(mono, 0) + coeff
        return self.from_dict(acc)

    def from_dict(self, coeffs: Mapping[Monomial, int]) -> Polynomial:
        p = self.p
        items = [(m, c % p) for m, c in coeffs.items()]
        items = [(m, c) for m, c in items if c]
        if len(items) > self.limits.max_terms:
            raise ResourceLimitError(
                f"polynomial with {len(items)} terms exceeds max_terms={self.limits.max_terms}"
            )
        key = self.order.key
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def with_order(self, order: MonomialOrder) -> PolyRing:
        if order == self.order:
            return self
        return replace(self, order=order)

    def with_limits(self, limits: Limits) -> PolyRing:
        return replace(self, limits=limits)

    def fresh_names(self, count: int) -> tuple[str, ...]:
        names: list[str] = []
        k = 0
        while len(names) < count:
            candidate = f"{RESERVED_PREFIX}t{k}"
            if candidate not in self.variables:
                names.append(candidate)
            k += 1
        return tuple(names)

    def extend(self, names: Iterable[str], order: MonomialOrder) -> PolyRing:
        return PolyRing(self.char, (*names, *self.variables), order, self.limits)

    def parse(self, text: str) -> Polynomial:
        return parse(text, self)

    def __str__(self) -> str:
        return f"F_{self.p}[{', '.join(self.variables)}]"


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


def monomial_quotient(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _neg_key(key: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-k for k in key)


@dataclass(frozen=True, repr=False)
class Polynomial:
    ring: PolyRing
    terms: tuple[Term, ...]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise PreconditionError("the zero polynomial has no leading monomial")
        return self.terms[0][0]

    @property
    def leading_coefficient(self) -> int:
        if not self.terms:
            raise PreconditionError("the zero polynomial has no leading coefficient")
        return self.terms[0][1]

    @cached_property
    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(m) for m, _ in self.terms), default=-1)

    @cached_property
    def max_exponent(self) -> int:
        return max((max(m, default=0) for m, _ in self.terms), default=0)

    def coefficient(self, exps: Monomial) -> int:
        for m, c in self.terms:
            if m == exps:
                return c
        return 0

    @property
    def constant_coefficient(self) -> int:
        return self.coefficient((0,) * self.ring.nvars)

    def as_dict(self) -> dict[Monomial, int]:
        return dict(self.terms)

    def monic(self) -> Polynomial:
        if not self.terms or self.terms[0][1] == 1:
            return self
        return self.scale(pow(self.terms[0][1], -1, self.ring.p))

    def scale(self, c: int) -> Polynomial:
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        return Polynomial(self.ring, tuple((m, coeff * c % p) for m, coeff in self.terms))

    def mul_term(self, exps: Monomial, c: int = 1) -> Polynomial:
        """Multiply by ``c * x^exps``; the order is multiplicative, so no re-sort."""
        p = self.ring.p
        c %= p
        if c == 0 or not self.terms:
            return self.ring.zero()
        if self.max_exponent + max(exps, default=0) > MAX_EXPONENT:
            raise ExponentOverflowError(f"exponent above {MAX_EXPONENT}")
        return Polynomial(
            self.ring,
            tuple((monomial_product(m, exps), coeff * c % p) for m, coeff in self.terms),
        )

    def to_ring(self, target: PolyRing) -> Polynomial:
        """Re-express in ``target``, matching variables by name.

        Variables missing from ``target`` must not occur in the polynomial.
        """
        if target == self.ring:
            return self
        if target.p != self.ring.p:
            raise RingMismatchError(f"cannot move {self.ring} elements into {target}")
        positions = {name: i for i, name in enumerate(self.ring.variables)}
        mapping = [positions.get(name) for name in target.variables]
        dropped = [i for i, name in enumerate(self.ring.variables) if name not in target.variables]
        acc: dict[Monomial, int] = {}
        for m, c in self.terms:
            if any(m[i] for i in dropped):
                raise PreconditionError(f"{self} involves variables missing from {target}")
            acc[tuple(0 if j is None else m[j] for j in mapping)] = c
        return target.from_dict(acc)

    def __add__(self, other: Polynomial | int) -> Polynomial:
        return add(self, self._coerce(other))

    def __radd__(self, other: Polynomial | int) -> Polynomial:
        return add(self._coerce(other), self)

    def __sub__(self, other: Polynomial | int) -> Polynomial:
        return add(self, -self._coerce(other))

    def __rsub__(self, other: Polynomial | int) -> Polynomial:
        return add(self._coerce(other), -self)

    def __neg__(self) -> Polynomial:
        return self.scale(-1)

    def __mul__(self, other: Polynomial | int) -> Polynomial:
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other: int) -> Polynomial:
        return self.scale(other)

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise PreconditionError("negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            exponent >>= 1
            if exponent:
                base = mul(base, base)
        return result

    def _coerce(self, other: Polynomial | int) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return self.ring.constant(other)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r} in {self.ring})"


def _check_same_ring(f: Polynomial, g: Polynomial) -> None:
    if f.ring != g.ring:
        raise RingMismatchError(f"operands live in different rings: {f.ring} vs {g.ring}")


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    _check_same_ring(f, g)
    if not g.terms:
        return f
    if not f.terms:
        return g
    acc = dict(f.terms)
    for m, c in g.terms:
        acc[m] = acc.get(m, 0) + c
    return f.ring.from_dict(acc)


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    _check_same_ring(f, g)
    ring = f.ring
    if not f.terms or not g.terms:
        return ring.zero()
    if f.max_exponent + g.max_exponent > MAX_EXPONENT:
        raise ExponentOverflowError(f"product exponents would exceed {MAX_EXPONENT}")
    acc: dict[Monomial, int] = {}
    for m1, c1 in f.terms:
        for m2, c2 in g.terms:
            m = monomial_product(m1, m2)
            acc[m] = acc.get(m, 0) + c1 * c2
    return ring.from_dict(acc)


def frobenius_power(f: Polynomial, e: int) -> Polynomial:
    """Return ``f^(p^e)``, term by term (freshman's dream)."""
    if e < 0:
        raise PreconditionError("Frobenius exponent must be non-negative")
    if e == 0 or not f.terms:
        return f
    q = f.ring.p**e
    if f.max_exponent * q > MAX_EXPONENT:
        raise ExponentOverflowError(f"f^(p^{e}) has exponents above {MAX_EXPONENT}")
    # c^q = c in F_p, and scaling exponents by q preserves the term order.
    return Polynomial(f.ring, tuple((tuple(x * q for x in m), c) for m, c in f.terms))


@dataclass(frozen=True)
class NuValue:
    n: int
    value: int


def nu(p: PrimeChar | int, n: int) -> NuValue:
    """``1 + p + ... + p^(n-1)``, with ``nu_0 = 0``."""
    char = p if isinstance(p, PrimeChar) else PrimeChar(p)
    if n < 0:
        raise PreconditionError("nu is defined for n >= 0")
    return NuValue(n, (char.p**n - 1) // (char.p - 1))


def nu_power(u: Polynomial, n: int) -> Polynomial:
    """``u^(nu_n)`` via ``u^(nu_(k+1)) = u * (u^(nu_k))^p``."""
    if n < 0:
        raise PreconditionError("nu is defined for n >= 0")
    result = u.ring.one()
    for _ in range(n):
        result = mul(u, frobenius_power(result, 1))
    return result


def derivative(f: Polynomial, index: int) -> Polynomial:
    p = f.ring.p
    acc: dict[Monomial, int] = {}
    for m, c in f.terms:
        e = m[index]
        if e % p == 0:
            continue
        shifted = list(m)
        shifted[index] = e - 1
        acc[tuple(shifted)] = c * e
    return f.ring.from_dict(acc)


def polynomial_divmod(f: Polynomial, g: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Division by a single polynomial: ``f = q*g + r``, no term of r divisible by lm(g)."""
    _check_same_ring(f, g)
    if not g.terms:
        raise PreconditionError("division by the zero polynomial")
    ring = f.ring
    p = ring.p
    key = ring.order.key
    lead, lead_c = g.terms[0]
    inv = pow(lead_c, -1, p)
    tail = g.terms[1:]
    work = dict(f.terms)
    heap = [(_neg_key(key(m)), m) for m in work]
    heapq.heapify(heap)
    queued = set(work)
    quotient: dict[Monomial, int] = {}
    remainder: dict[Monomial, int] = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = work.pop(m, 0)
        if not c:
            continue
        if not monomial_divides(lead, m):
            remainder[m] = c
            continue
        shift = monomial_quotient(m, lead)
        q = c * inv % p
        quotient[shift] = q
        for tm, tc in tail:
            nm = monomial_product(shift, tm)
            nc = (work.get(nm, 0) - q * tc) % p
            if nc:
                work[nm] = nc
                if nm not in queued:
                    heapq.heappush(heap, (_neg_key(key(nm)), nm))
                    queued.add(nm)
            else:
                work.pop(nm, None)
    return ring.from_dict(quotient), ring.from_dict(remainder)


def divide_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    q, r = polynomial_divmod(f, g)
    if r:
        raise PreconditionError(f"{g} does not divide {f}")
    return q


def random_polynomial(
    ring: PolyRing,
    rng: random.Random,
    max_degree: int,
    max_terms: int,
    *,
    min_degree: int = 0,
    homogeneous: bool = False,
) -> Polynomial:
    """Seeded sampler; may return zero when sampled terms cancel."""
    acc: dict[Monomial, int] = {}
    for _ in range(rng.randint(1, max_terms)):
        degree = max_degree if homogeneous else rng.randint(min_degree, max_degree)
        counts = [0] * ring.nvars
        for _ in range(degree):
            counts[rng.randrange(ring.nvars)] += 1
        mono = tuple(counts)
        acc[mono] = acc.get(mono, 0) + rng.randint(1, ring.p - 1)
    return ring.from_dict(acc)


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    parts: list[str] = []
    for m, c in f.terms:
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(f.ring.variables, m)
            if e
        ]
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>@?[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^])|(?P<bad>\S))"
)


class _Parser:
    def __init__(self, text: str, ring: PolyRing) -> None:
        self.ring = ring
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if match is None:
                break
            kind = match.lastgroup
            if kind is None:
                break
            value = match.group(kind)
            start = match.start(kind)
            if kind == "bad":
                if value in "./":
                    raise PolynomialSyntaxError("coefficient must be an integer", start)
                raise PolynomialSyntaxError(f"unexpected character {value!r}", start)
            self.tokens.append((kind, value, start))
            pos = match.end()
        self.tokens.append(("end", "", len(text)))
        self.index = 0

    def _peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def _advance(self) -> tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def parse(self) -> Polynomial:
        acc: dict[Monomial, int] = {}
        sign = 1
        kind, value, _ = self._peek()
        if kind == "op" and value in "+-":
            self._advance()
            sign = -1 if value == "-" else 1
        while True:
            mono, coeff = self._term()
            acc[mono] = acc.get(mono, 0) + sign * coeff
            kind, value, pos = self._peek()
            if kind == "end":
                break
            if kind == "op" and value in "+-":
                self._advance()
                sign = -1 if value == "-" else 1
                continue
            raise PolynomialSyntaxError(f"expected '+', '-' or end of input, got {value!r}", pos)
        return self.ring.from_dict(acc)

    def _term(self) -> tuple[Monomial, int]:
        exps = [0] * self.ring.nvars
        coeff = 1
        while True:
            kind, value, pos = self._advance()
            if kind == "int":
                coeff *= int(value)
            elif kind == "name":
                if value not in self.ring.variables:
                    raise PolynomialSyntaxError(f"unknown variable {value!r}", pos)
                power = 1
                if self._peek()[:2] == ("op", "^"):
                    self._advance()
                    kind, raw, epos = self._advance()
                    if kind != "int":
                        raise PolynomialSyntaxError("expected an integer exponent after '^'", epos)
                    power = int(raw)
                idx = self.ring.index(value)
                exps[idx] += power
                if exps[idx] > MAX_EXPONENT:
                    raise ExponentOverflowError(
                        f"exponent {exps[idx]} of {value} above {MAX_EXPONENT}"
                    )
            elif kind == "end":
                raise PolynomialSyntaxError("expected a term", pos)
            else:
                raise PolynomialSyntaxError(f"unexpected {value!r}", pos)
            if self._peek()[:2] != ("op", "*"):
                return tuple(exps), coeff
            self._advance()


def parse(text: str, ring: PolyRing) -> Polynomial:
    return _Parser(text, ring).parse()
