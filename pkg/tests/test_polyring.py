from __future__ import annotations

import random
import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from ffctl.errors import (
    ExponentOverflowError,
    PolynomialSyntaxError,
    PreconditionError,
    RingMismatchError,
)
from ffctl.polyring import (
    LEX,
    MAX_EXPONENT,
    Limits,
    MonomialOrder,
    Polynomial,
    PolyRing,
    PrimeChar,
    derivative,
    divide_exact,
    format_polynomial,
    frobenius_power,
    nu,
    nu_power,
    polynomial_divmod,
    random_polynomial,
)

RINGS = {p: PolyRing.create(p, ["x", "y", "z"]) for p in (2, 3, 5)}


@st.composite
def polynomials(draw: st.DrawFn, p: int) -> Polynomial:
    ring = RINGS[p]
    exps = st.tuples(*(st.integers(0, 3) for _ in range(ring.nvars)))
    coeffs = draw(st.dictionaries(exps, st.integers(-20, 20), max_size=4))
    return ring.from_dict(coeffs)


class PrimeCharTests(unittest.TestCase):
    def test_rejects_composites(self) -> None:
        with self.assertRaisesRegex(PreconditionError, "p must be prime"):
            PrimeChar(4)
        with self.assertRaisesRegex(PreconditionError, "p must be prime"):
            PrimeChar(1)

    def test_accepts_primes(self) -> None:
        self.assertEqual(PrimeChar(7).p, 7)

    def test_nu_sequence(self) -> None:
        self.assertEqual(nu(3, 0).value, 0)
        self.assertEqual(nu(3, 1).value, 1)
        self.assertEqual(nu(3, 3).value, 13)
        self.assertEqual(nu(2, 4).value, 15)


class PolyRingTests(unittest.TestCase):
    def test_reserved_and_duplicate_names(self) -> None:
        with self.assertRaises(PreconditionError):
            PolyRing.create(2, ["@t0", "x"])
        with self.assertRaises(PreconditionError):
            PolyRing.create(2, ["x", "x"])

    def test_limits_do_not_affect_equality(self) -> None:
        ring = RINGS[2]
        self.assertEqual(ring, ring.with_limits(Limits(max_pairs=5)))

    def test_parse_and_format(self) -> None:
        ring = PolyRing.create(5, ["x", "y"])
        f = ring.parse("x^2*y + 3*x - 1")
        self.assertEqual(str(f), "x^2*y + 3*x + 4")
        self.assertEqual(ring.parse(str(f)), f)
        self.assertEqual(format_polynomial(ring.zero()), "0")
        self.assertEqual(ring.parse("5*x"), ring.zero())

    def test_parse_errors_carry_positions(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        with self.assertRaises(PolynomialSyntaxError) as ctx:
            ring.parse("x + w")
        self.assertEqual(ctx.exception.position, 4)
        with self.assertRaisesRegex(PolynomialSyntaxError, "coefficient must be an integer"):
            ring.parse("1/2*x")
        with self.assertRaises(PolynomialSyntaxError):
            ring.parse("x +")

    def test_leading_monomial_depends_on_order(self) -> None:
        grevlex = PolyRing.create(3, ["x", "y"])
        lex = grevlex.with_order(LEX)
        f = grevlex.parse("x*y^2 + x^2")
        self.assertEqual(f.leading_monomial, (1, 2))
        self.assertEqual(f.to_ring(lex).leading_monomial, (2, 0))

    def test_block_order_puts_first_block_above(self) -> None:
        order = MonomialOrder.block(1)
        self.assertGreater(order.key((1, 0, 0)), order.key((0, 5, 5)))

    def test_mixed_rings_are_rejected(self) -> None:
        x2 = RINGS[2].gen("x")
        x3 = RINGS[3].gen("x")
        with self.assertRaises(RingMismatchError):
            _ = x2 + x3

    def test_exponent_overflow(self) -> None:
        ring = PolyRing.create(2, ["x"])
        big = ring.monomial([MAX_EXPONENT])
        with self.assertRaises(ExponentOverflowError):
            _ = big * ring.gen("x")
        with self.assertRaises(ExponentOverflowError):
            frobenius_power(big, 1)

    def test_parser_checks_accumulated_exponents(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        top = f"x^{MAX_EXPONENT}"
        self.assertEqual(ring.parse(top).leading_monomial, (MAX_EXPONENT, 0))
        with self.assertRaises(ExponentOverflowError):
            ring.parse(f"{top}*{top}")
        with self.assertRaises(ExponentOverflowError):
            ring.parse(f"y*{top}*x")
        self.assertEqual(ring.parse(f"x^{MAX_EXPONENT - 1}*x").leading_monomial, (MAX_EXPONENT, 0))


class ArithmeticTests(unittest.TestCase):
    def test_frobenius_matches_power(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        f = ring.parse("x + 2*y + x*y")
        self.assertEqual(frobenius_power(f, 1), f**3)
        self.assertEqual(frobenius_power(f, 2), f**9)

    def test_nu_power_recursion(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        u = ring.parse("x*y")
        self.assertEqual(nu_power(u, 0), ring.one())
        self.assertEqual(nu_power(u, 3), u**7)

    def test_derivative_kills_pth_powers(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        f = ring.parse("x^3 + x^2*y")
        self.assertEqual(derivative(f, 0), ring.parse("2*x*y"))
        self.assertEqual(derivative(f, 1), ring.parse("x^2"))

    def test_divmod(self) -> None:
        ring = PolyRing.create(5, ["x", "y"])
        q, r = polynomial_divmod(ring.parse("x^2 - y^2"), ring.parse("x - y"))
        self.assertEqual(q, ring.parse("x + y"))
        self.assertTrue(r.is_zero())
        q, r = polynomial_divmod(ring.parse("x*y + 1"), ring.parse("x"))
        self.assertEqual(q, ring.parse("y"))
        self.assertEqual(r, ring.one())

    def test_divide_exact_rejects_remainders(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        with self.assertRaises(PreconditionError):
            divide_exact(ring.parse("x + 1"), ring.parse("y"))
        with self.assertRaises(PreconditionError):
            polynomial_divmod(ring.one(), ring.zero())

    def test_to_ring_refuses_to_drop_used_variables(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        wide = ring.extend(ring.fresh_names(1), MonomialOrder.block(1))
        t = wide.gen(0)
        self.assertEqual(ring.gen("x").to_ring(wide).to_ring(ring), ring.gen("x"))
        with self.assertRaises(PreconditionError):
            t.to_ring(ring)

    def test_random_polynomial_is_seeded(self) -> None:
        ring = RINGS[5]
        a = random_polynomial(ring, random.Random(7), 3, 3, min_degree=1)
        b = random_polynomial(ring, random.Random(7), 3, 3, min_degree=1)
        self.assertEqual(a, b)
        h = random_polynomial(ring, random.Random(1), 3, 3, homogeneous=True)
        self.assertTrue(all(sum(m) == 3 for m, _ in h.terms))


class RingAxiomTests(unittest.TestCase):
    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_commutative_ring_axioms(self, data: st.DataObject) -> None:
        p = data.draw(st.sampled_from([2, 3, 5]))
        f, g, h = (data.draw(polynomials(p)) for _ in range(3))
        self.assertEqual(f + g, g + f)
        self.assertEqual(f * g, g * f)
        self.assertEqual(f * (g + h), f * g + f * h)
        self.assertEqual((f + g) + h, f + (g + h))
        self.assertTrue((f - f).is_zero())

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_frobenius_is_additive_and_multiplicative(self, data: st.DataObject) -> None:
        p = data.draw(st.sampled_from([2, 3, 5]))
        f, g = data.draw(polynomials(p)), data.draw(polynomials(p))
        self.assertEqual(frobenius_power(f + g, 1), frobenius_power(f, 1) + frobenius_power(g, 1))
        self.assertEqual(frobenius_power(f * g, 1), frobenius_power(f, 1) * frobenius_power(g, 1))
        self.assertEqual(frobenius_power(f, 1), f**p)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_format_parse_round_trip(self, data: st.DataObject) -> None:
        p = data.draw(st.sampled_from([2, 3, 5]))
        f = data.draw(polynomials(p))
        self.assertEqual(RINGS[p].parse(str(f)), f)


if __name__ == "__main__":
    unittest.main()
