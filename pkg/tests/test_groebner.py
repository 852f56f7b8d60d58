from __future__ import annotations

import random
import unittest

from ffctl.errors import PreconditionError, ResourceLimitError, RingMismatchError
from ffctl.groebner import (
    Ideal,
    groebner_basis,
    ideal_contains,
    ideal_equal,
    is_groebner_basis,
    member,
    normal_form,
)
from ffctl.ideal_ops import ideal_product, maximal_ideal
from ffctl.polyring import LEX, Limits, PolyRing


def ideal(ring: PolyRing, *texts: str) -> Ideal:
    return Ideal(ring, [ring.parse(t) for t in texts])


CATALOG = [
    (2, ["x", "y"], ["x*y"]),
    (3, ["x", "y"], ["y^2 + x^3"]),
    (3, ["x", "y"], ["x*y - 1", "x^2"]),
    (5, ["x", "y", "z"], ["x*y", "x*z", "y*z"]),
    (2, ["x", "y", "z"], ["x^2 + y*z", "x*y + z^2"]),
    (3, ["x", "y", "z"], ["x*y - z", "y^2 - x*z"]),
    (5, ["x", "y"], ["x^3 + y^2", "x*y^2"]),
]


class NormalFormTests(unittest.TestCase):
    def test_examples(self) -> None:
        ring = PolyRing.create(5, ["x", "y"])
        x, y = ring.gens()
        self.assertTrue(normal_form(x * x, [x]).is_zero())
        self.assertEqual(normal_form(y, [x]), y)
        f = ring.parse("x^2*y + y")
        self.assertEqual(normal_form(f, [ring.parse("x^2 - y")]), ring.parse("y^2 + y"))

    def test_idempotent(self) -> None:
        ring = PolyRing.create(3, ["x", "y", "z"])
        divisors = [ring.parse("x*y - z"), ring.parse("y^2 - x")]
        rng = random.Random(11)
        for _ in range(20):
            f = ring.from_dict(
                {
                    tuple(rng.randint(0, 3) for _ in range(3)): rng.randint(1, 2)
                    for _ in range(4)
                }
            )
            once = normal_form(f, divisors)
            self.assertEqual(normal_form(once, divisors), once)

    def test_rejects_zero_divisor_and_foreign_ring(self) -> None:
        ring = PolyRing.create(2, ["x"])
        other = PolyRing.create(3, ["x"])
        with self.assertRaises(PreconditionError):
            normal_form(ring.gen("x"), [ring.zero()])
        with self.assertRaises(RingMismatchError):
            normal_form(ring.gen("x"), [other.gen("x")])


class GroebnerBasisTests(unittest.TestCase):
    def test_examples(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        self.assertEqual(groebner_basis(ideal(ring, "x", "y")), [ring.gen("x"), ring.gen("y")])
        self.assertEqual(groebner_basis(Ideal(ring, [ring.zero()])), [])
        self.assertEqual(groebner_basis(ideal(ring, "x*y - 1", "x^2")), [ring.one()])

    def test_bases_are_reduced_and_pass_buchberger_criterion(self) -> None:
        for p, names, gens in CATALOG:
            ring = PolyRing.create(p, names)
            basis = groebner_basis(ideal(ring, *gens))
            self.assertTrue(is_groebner_basis(basis), gens)
            leads = [g.leading_monomial for g in basis]
            for i, g in enumerate(basis):
                self.assertEqual(g.leading_coefficient, 1)
                others = basis[:i] + basis[i + 1 :]
                self.assertEqual(normal_form(g, others), g)
            keys = [ring.order.key(m) for m in leads]
            self.assertEqual(keys, sorted(keys, reverse=True))

    def test_invariant_under_generator_shuffles(self) -> None:
        rng = random.Random(2024)
        for p, names, gens in CATALOG:
            ring = PolyRing.create(p, names)
            expected = groebner_basis(ideal(ring, *gens))
            for _ in range(20):
                shuffled = list(gens)
                rng.shuffle(shuffled)
                self.assertEqual(groebner_basis(ideal(ring, *shuffled)), expected)

    def test_other_order_uses_reordered_ring(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        target = ideal(ring, "x^2 - y", "x*y - 1")
        basis = groebner_basis(target, LEX)
        self.assertTrue(all(g.ring.order == LEX for g in basis))
        self.assertTrue(is_groebner_basis(basis))
        # the lex basis of this ideal contains a polynomial in y alone
        self.assertTrue(any(g.leading_monomial[0] == 0 for g in basis))

    def test_pair_queue_cap(self) -> None:
        ring = PolyRing.create(3, ["x", "y", "z"]).with_limits(Limits(max_pairs=1))
        target = ideal(ring, "x^2 + y*z", "x*y + z^2", "y^3 + x*z")
        with self.assertRaises(ResourceLimitError):
            groebner_basis(target)

    def test_result_is_cached(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        target = ideal(ring, "x*y + y", "x^2")
        first = groebner_basis(target)
        self.assertEqual(target.cached_basis(ring.order), tuple(first))
        self.assertIsNone(target.cached_basis(LEX))


class MembershipTests(unittest.TestCase):
    def test_member_examples(self) -> None:
        ring = PolyRing.create(5, ["x", "y"])
        self.assertTrue(member(ring.parse("x^2*y"), ideal(ring, "x*y")))
        self.assertFalse(member(ring.parse("x"), ideal(ring, "x^2")))
        self.assertTrue(member(ring.parse("y^2 + x^3"), ideal(ring, "y^2 + x^3", "x^4")))
        self.assertIn(ring.zero(), ideal(ring, "x"))

    def test_equality_and_containment(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        self.assertTrue(ideal_equal(ideal(ring, "x", "y"), ideal(ring, "y", "x", "x + y")))
        self.assertTrue(ideal_contains(ideal(ring, "x"), ideal(ring, "x^2")))
        self.assertFalse(ideal_contains(ideal(ring, "x^2"), ideal(ring, "x")))
        m = maximal_ideal(ring)
        self.assertTrue(ideal_equal(ideal(ring, "x^2", "x*y"), ideal_product(ideal(ring, "x"), m)))

    def test_unit_and_zero(self) -> None:
        ring = PolyRing.create(3, ["x"])
        self.assertTrue(Ideal.unit(ring).is_unit())
        self.assertTrue(Ideal.zero(ring).is_zero())
        self.assertFalse(Ideal.zero(ring).is_unit())
        self.assertFalse(ideal(ring, "x").is_unit())

    def test_comparisons_need_one_ring(self) -> None:
        with self.assertRaises(RingMismatchError):
            ideal_equal(
                ideal(PolyRing.create(2, ["x"]), "x"), ideal(PolyRing.create(2, ["y"]), "y")
            )


if __name__ == "__main__":
    unittest.main()
