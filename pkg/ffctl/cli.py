from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, NoReturn, TextIO

from .config import AppConfig
from .errors import FfctlError, InputError, ResourceLimitError
from .fsing import (
    FEDDER_CITATION,
    GRADED_ANNIHILATOR_CITATION,
    IDENTITY_CITATIONS,
    U_GENERATOR_CITATION,
    RingPresentation,
    annihilator_chain,
    certify_big_test_element,
    fedder_test,
    u_generators,
    verify_identities,
)
from .groebner import Ideal, groebner_basis
from .ideal_ops import bracket_power, colon_ideal, intersect
from .jobspec import COMMANDS, JobSpec, RawValue, build_job, read_job_text
from .polyring import ORDER_KINDS, Polynomial, format_polynomial

LOGGER = logging.getLogger("ffctl.cli")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_LIMIT = 2

FLAG_KEYS = ("p", "vars", "a", "b", "u", "c", "e", "cap", "samples", "seed", "workers", "order")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="ffctl",
        description="F-purity and Fedder-criterion computations over F_p[x_1, ..., x_n].",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--input", type=Path, help="job file with key = value lines")
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    parser.add_argument("--order", choices=ORDER_KINDS)
    parser.add_argument("--cap", help="annihilator chain cap")
    parser.add_argument("--max-pairs", type=int, dest="max_pairs")
    parser.add_argument("--samples", help="identity samples for verify")
    parser.add_argument("--seed", help="sampler seed for verify")
    parser.add_argument("--workers", help="worker threads for verify")
    parser.add_argument("--p")
    parser.add_argument("--vars")
    parser.add_argument("--a", help="generators of the defining ideal")
    parser.add_argument("--b", help="second ideal for colon and intersect")
    parser.add_argument("--u")
    parser.add_argument("--c")
    parser.add_argument("--e", help="bracket exponent")
    parser.add_argument("--command", dest="command_key", choices=COMMANDS)
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    parser.add_argument(
        "--init-config", action="store_true", help="write the default config file if missing"
    )
    return parser


def load_job(opts: argparse.Namespace, config: AppConfig) -> JobSpec:
    """Job file keys, overridden by flags; the positional command wins over both."""
    raw: dict[str, RawValue] = {}
    if opts.input is not None:
        try:
            text = opts.input.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {opts.input}: {exc.strerror}") from None
        raw.update(read_job_text(text))
    for key in FLAG_KEYS:
        value = getattr(opts, key)
        if value is not None:
            raw[key] = RawValue(str(value))
    if opts.command_key:
        raw["command"] = RawValue(opts.command_key)
    if opts.command:
        raw["command"] = RawValue(opts.command)
    if opts.json:
        raw["output"] = RawValue("json")

    limits = config.limits
    if opts.max_pairs is not None:
        if opts.max_pairs < 1:
            raise InputError("--max-pairs must be a positive integer")
        limits = replace(limits, max_pairs=opts.max_pairs)
    return build_job(raw, limits=limits, default_order=config.order)


def serialize_ideal(ideal: Ideal) -> list[str]:
    """Reduced Gröbner basis under the ring's order, as generator strings."""
    return [format_polynomial(g) for g in groebner_basis(ideal)]


def _text_ideal(generators: list[str]) -> str:
    return "(" + ", ".join(generators) + ")"


def _poly(f: Polynomial | None) -> str | None:
    return None if f is None else format_polynomial(f)


def execute(spec: JobSpec, config: AppConfig) -> dict[str, Any]:
    """Run one job and return the report payload."""
    ring = spec.ring
    a = Ideal(ring, spec.a)
    citations: list[str] = []
    result: dict[str, Any]
    command = spec.command

    if command == "gb":
        result = {"basis": serialize_ideal(a)}
    elif command in ("colon", "intersect"):
        b = Ideal(ring, spec.b or ())
        ideal = colon_ideal(a, b) if command == "colon" else intersect(a, b)
        result = {"ideal": serialize_ideal(ideal)}
    elif command == "bracket":
        result = {"e": spec.e, "ideal": serialize_ideal(bracket_power(a, spec.e))}
    else:
        presentation = RingPresentation(ring, a)
        if command == "fedder":
            report = fedder_test(presentation)
            result = {
                "fpure": report.fpure,
                "witness": _poly(report.witness_u),
                "fedder_ideal": serialize_ideal(report.fedder_ideal),
            }
            citations = [FEDDER_CITATION]
        elif command == "ugens":
            gens = u_generators(presentation, avoidance_cap=config.avoidance_cap)
            result = {"t": len(gens), "u": [format_polynomial(u) for u in gens]}
            citations = [FEDDER_CITATION, U_GENERATOR_CITATION]
        elif command == "chain":
            assert spec.u is not None
            cap = config.chain_cap if spec.cap is None else spec.cap
            chain = annihilator_chain(presentation, spec.u, cap, max_cap=config.chain_cap_max)
            result = {
                "u": format_polynomial(chain.u),
                "cap": chain.cap,
                "entries": [
                    {"n": e.n, "nu": e.nu, "ideal": serialize_ideal(e.ideal)}
                    for e in chain.entries
                ],
                "ascending_verified": chain.ascending_verified,
                "stabilized_at": chain.stabilized_at,
                "unit_at": chain.unit_at,
                "stability": chain.stable_through_cap,
            }
            citations = [GRADED_ANNIHILATOR_CITATION]
        elif command == "certify":
            assert spec.c is not None
            certificate = certify_big_test_element(presentation, spec.c)
            failed = certificate.failed_checks
            result = {
                "c": format_polynomial(certificate.c),
                "conclusion": certificate.conclusion.value,
                "first_failure": failed[0] if failed else None,
                "checks": [
                    {
                        "name": check.name,
                        "verdict": check.verdict.value,
                        "justification": check.justification,
                    }
                    for check in certificate.checks
                ],
            }
            citations = [check.justification for check in certificate.checks]
            citations += list(certificate.citations)
        else:
            samples = config.samples if spec.samples is None else spec.samples
            seed = config.seed if spec.seed is None else spec.seed
            workers = config.workers if spec.workers is None else spec.workers
            identities = verify_identities(presentation, samples, seed=seed, workers=workers)
            result = {
                "samples": identities.samples,
                "seed": identities.seed,
                "all_passed": identities.all_passed,
                "identities": [
                    {
                        "name": r.name,
                        "passed": r.passed,
                        "checked": r.checked,
                        "counterexample": r.counterexample,
                    }
                    for r in identities.results
                ],
            }
            citations = [IDENTITY_CITATIONS[r.name] for r in identities.results]

    return {
        "command": command,
        "ring": {"p": ring.p, "vars": list(ring.variables), "order": str(ring.order)},
        "result": result,
        "citations": citations,
    }


def _text_value(key: str, value: Any) -> str:
    if isinstance(value, list):
        if key in ("basis", "ideal", "fedder_ideal"):
            return _text_ideal(value)
        return ", ".join(str(item) for item in value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    return str(value)


def format_text(payload: dict[str, Any]) -> str:
    ring = payload["ring"]
    lines = [
        f"command: {payload['command']}",
        f"ring: F_{ring['p']}[{', '.join(ring['vars'])}] ({ring['order']})",
    ]
    for key, value in payload["result"].items():
        if key == "entries":
            for entry in value:
                lines.append(
                    f"  b_{entry['n']} (nu={entry['nu']}): {_text_ideal(entry['ideal'])}"
                )
        elif key in ("checks", "identities"):
            for item in value:
                status = item.get("verdict") or ("pass" if item["passed"] else "fail")
                lines.append(f"  {item['name']}: {status}")
                if item.get("counterexample"):
                    lines.append(f"    {item['counterexample']}")
        else:
            lines.append(f"{key}: {_text_value(key, value)}")
    for citation in payload["citations"]:
        lines.append(f"cite: {citation}")
    return "\n".join(lines) + "\n"


def format_json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


def run(spec: JobSpec, config: AppConfig, out: TextIO | None = None) -> int:
    """Execute ``spec`` and write its report; returns the process exit status."""
    stream = out or sys.stdout
    try:
        payload = execute(spec, config)
    except ResourceLimitError as exc:
        LOGGER.error("ffctl: resource limit: %s", exc)
        return EXIT_LIMIT
    except FfctlError as exc:
        LOGGER.error("ffctl: error: %s", exc)
        return EXIT_INPUT
    stream.write(format_json(payload) if spec.output == "json" else format_text(payload))
    return EXIT_OK
