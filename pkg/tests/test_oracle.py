from __future__ import annotations

import random
import unittest

from ffctl.errors import OracleLimitError, PreconditionError
from ffctl.fsing import RingPresentation, fedder_test
from ffctl.groebner import Ideal, ideal_equal, member
from ffctl.ideal_ops import colon, intersect, random_ideal
from ffctl.oracle import (
    DegreeBound,
    MembershipVerdict,
    default_degree_bound,
    hypersurface_fedder,
    macaulay_member,
    monomial_colon,
    monomial_intersect,
    principal_colon,
)
from ffctl.polyring import PolyRing, random_polynomial


def ideal(ring: PolyRing, *texts: str) -> Ideal:
    return Ideal(ring, [ring.parse(t) for t in texts])


def random_monomial_ideal(ring: PolyRing, rng: random.Random) -> Ideal:
    gens = [
        ring.monomial([rng.randint(0, 3) for _ in range(ring.nvars)])
        for _ in range(rng.randint(1, 3))
    ]
    return Ideal(ring, gens)


class MacaulayTests(unittest.TestCase):
    def test_examples(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        self.assertEqual(
            macaulay_member(ring.parse("x^2*y"), ideal(ring, "x*y"), DegreeBound(3)),
            MembershipVerdict.IN,
        )
        self.assertEqual(
            macaulay_member(ring.parse("x"), ideal(ring, "x^2"), DegreeBound(6)),
            MembershipVerdict.NOT_IN_UP_TO_D,
        )
        self.assertEqual(
            macaulay_member(ring.one(), ideal(ring, "x*y - 1", "x^2"), DegreeBound(6)),
            MembershipVerdict.IN,
        )
        self.assertEqual(
            macaulay_member(ring.zero(), ideal(ring, "x"), DegreeBound(1)),
            MembershipVerdict.IN,
        )

    def test_preconditions_and_caps(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        with self.assertRaises(PreconditionError):
            DegreeBound(-1)
        with self.assertRaises(PreconditionError):
            macaulay_member(ring.parse("x^4"), ideal(ring, "x"), DegreeBound(3))
        with self.assertRaises(PreconditionError):
            macaulay_member(ring.parse("x"), ideal(ring, "x^3"), DegreeBound(2))
        with self.assertRaises(OracleLimitError):
            macaulay_member(ring.parse("x"), ideal(ring, "x"), DegreeBound(8), max_cells=10)

    def test_default_bound(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        bound = default_degree_bound(ring.parse("x^3"), ideal(ring, "x*y", "y^2"))
        self.assertEqual(bound.D, 10)

    def test_agrees_with_engine_on_homogeneous_instances(self) -> None:
        rng = random.Random(200)
        rings = [
            PolyRing.create(p, names)
            for p in (2, 3, 5)
            for names in (["x", "y"], ["x", "y", "z"])
        ]
        agreements = 0
        found_in = found_out = 0
        for index in range(210):
            ring = rings[index % len(rings)]
            target = random_ideal(ring, rng, max_degree=2, homogeneous=True)
            if rng.random() < 0.5:
                f = ring.zero()
                for g in target.generators:
                    f = f + random_polynomial(ring, rng, 1, 2) * g
            else:
                f = random_polynomial(ring, rng, 3, 3)
            verdict = macaulay_member(f, target, default_degree_bound(f, target))
            engine = member(f, target)
            self.assertEqual(engine, verdict is MembershipVerdict.IN, (str(f), str(target)))
            agreements += 1
            if engine:
                found_in += 1
            else:
                found_out += 1
        self.assertGreaterEqual(agreements, 200)
        self.assertGreater(found_in, 0)
        self.assertGreater(found_out, 0)

    def test_agrees_with_engine_on_inhomogeneous_instances(self) -> None:
        rng = random.Random(404)
        cases = [(p, ["x", "y"], 4) for p in (2, 3, 5)]
        cases += [(p, ["x", "y", "z"], 3) for p in (2, 3)]
        found_in = found_out = 0
        for index in range(50):
            p, names, degree = cases[index % len(cases)]
            ring = PolyRing.create(p, names)
            target = random_ideal(ring, rng, max_generators=3, max_degree=degree, max_terms=3)
            if index % 2:
                f = ring.zero()
                for g in target.generators:
                    f = f + random_polynomial(ring, rng, 1, 2) * g
            else:
                f = random_polynomial(ring, rng, degree, 3)
            bound = default_degree_bound(f, target)
            maxdeg = max(f.total_degree, *(g.total_degree for g in target.generators))
            self.assertEqual(bound.D, 2 * maxdeg + 4)
            engine = member(f, target)
            verdict = macaulay_member(f, target, bound)
            self.assertEqual(engine, verdict is MembershipVerdict.IN, (p, str(f), str(target)))
            if engine:
                found_in += 1
            else:
                found_out += 1
        self.assertGreater(found_in, 0)
        self.assertGreater(found_out, 0)


class MonomialOracleTests(unittest.TestCase):
    def test_examples(self) -> None:
        ring = PolyRing.create(2, ["x", "y", "z"])
        self.assertTrue(
            ideal_equal(
                monomial_colon(ideal(ring, "x^2", "y^2"), (1, 0, 0)), ideal(ring, "x", "y^2")
            )
        )
        self.assertTrue(
            ideal_equal(monomial_intersect(ideal(ring, "x"), ideal(ring, "y")), ideal(ring, "x*y"))
        )
        self.assertTrue(
            monomial_colon(ideal(ring, "x*y", "x*z", "y*z"), ring.parse("x*y*z")).is_unit()
        )

    def test_non_monomial_input(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        with self.assertRaises(PreconditionError):
            monomial_colon(ideal(ring, "x + y"), (1, 0))
        with self.assertRaises(PreconditionError):
            monomial_colon(ideal(ring, "x"), ring.parse("x + y"))
        with self.assertRaises(PreconditionError):
            monomial_intersect(ideal(ring, "x"), ideal(ring, "x*y + y"))

    def test_agrees_with_engine(self) -> None:
        rng = random.Random(100)
        checked = 0
        for p in (2, 3, 5):
            ring = PolyRing.create(p, ["x", "y", "z"])
            for _ in range(35):
                left = random_monomial_ideal(ring, rng)
                right = random_monomial_ideal(ring, rng)
                m = ring.monomial([rng.randint(0, 2) for _ in range(3)])
                self.assertTrue(
                    ideal_equal(colon(left, m), monomial_colon(left, m)), (str(left), str(m))
                )
                self.assertTrue(
                    ideal_equal(intersect(left, right), monomial_intersect(left, right)),
                    (str(left), str(right)),
                )
                checked += 1
        self.assertGreaterEqual(checked, 100)


class PrincipalColonTests(unittest.TestCase):
    def test_examples(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        xy = ring.parse("x*y")
        self.assertEqual(principal_colon(ring.parse("x^2*y^2"), xy), xy)
        f = ring.parse("y^2 + x^3")
        self.assertEqual(principal_colon(f, f), ring.one())
        self.assertEqual(principal_colon(f**3, f), f**2)

    def test_times_f_recovers_frobenius_power(self) -> None:
        rng = random.Random(7)
        for p in (2, 3, 5):
            ring = PolyRing.create(p, ["x", "y"])
            for _ in range(10):
                f = random_polynomial(ring, rng, 2, 3, min_degree=1)
                if not f:
                    continue
                self.assertEqual(principal_colon(f**p, f) * f, f**p)

    def test_rejects_non_powers(self) -> None:
        ring = PolyRing.create(2, ["x", "y"])
        with self.assertRaises(PreconditionError):
            principal_colon(ring.parse("x^2 + 1"), ring.parse("x"))
        with self.assertRaises(PreconditionError):
            principal_colon(ring.parse("x^2*y"), ring.parse("x"))
        with self.assertRaises(PreconditionError):
            principal_colon(ring.parse("x"), ring.one())


class HypersurfaceFedderTests(unittest.TestCase):
    def test_examples(self) -> None:
        self.assertTrue(hypersurface_fedder(PolyRing.create(5, ["x", "y"]).parse("x*y")))
        self.assertFalse(hypersurface_fedder(PolyRing.create(7, ["x", "y"]).parse("y^2 + x^3")))
        self.assertTrue(hypersurface_fedder(PolyRing.create(2, ["x", "y"]).parse("x")))

    def test_preconditions_and_cap(self) -> None:
        ring = PolyRing.create(3, ["x", "y"])
        with self.assertRaises(PreconditionError):
            hypersurface_fedder(ring.parse("x + 1"))
        with self.assertRaises(PreconditionError):
            hypersurface_fedder(ring.zero())
        with self.assertRaises(OracleLimitError):
            hypersurface_fedder(ring.parse("x + y"), max_terms=1)

    def test_agrees_with_fedder_test(self) -> None:
        rng = random.Random(31)
        for p in (2, 3, 5):
            ring = PolyRing.create(p, ["x", "y"])
            for _ in range(12):
                f = random_polynomial(ring, rng, 3, 3, min_degree=1)
                if not f:
                    continue
                subject = RingPresentation(ring, Ideal.principal(f))
                self.assertEqual(fedder_test(subject).fpure, hypersurface_fedder(f), str(f))


if __name__ == "__main__":
    unittest.main()
