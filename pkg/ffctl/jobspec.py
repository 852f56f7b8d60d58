"""Job files: flat ``key = value`` lines describing one ffctl run.

    # node at p = 2
    p = 2
    vars = x, y
    a = [x*y]
    command = chain
    u = x*y
    cap = 3

Blank lines and ``#`` comments are ignored. ``a`` and ``b`` take bracketed
generator lists; ``vars`` takes names with or without brackets.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from .errors import JobSpecError, PolynomialSyntaxError, PreconditionError
from .polyring import ORDER_KINDS, Limits, Polynomial, PolyRing

COMMANDS = ("gb", "colon", "intersect", "bracket", "fedder", "ugens", "chain", "certify", "verify")
OUTPUTS = ("text", "json")
INT_KEYS = ("p", "cap", "samples", "e", "seed", "workers")
KNOWN_KEYS = ("p", "vars", "a", "b", "u", "c", "order", "command", "output", *INT_KEYS[1:])
REQUIRED_KEYS = ("p", "vars", "a", "command")
REQUIRED_ARGUMENTS = {"chain": "u", "certify": "c", "colon": "b", "intersect": "b"}


@dataclass(frozen=True)
class RawValue:
    """Unparsed value text and where it started (line 0 for command-line flags)."""

    text: str
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class JobSpec:
    ring: PolyRing
    a: tuple[Polynomial, ...]
    command: str
    b: tuple[Polynomial, ...] | None = None
    u: Polynomial | None = None
    c: Polynomial | None = None
    cap: int | None = None
    samples: int | None = None
    e: int = 1
    seed: int | None = None
    workers: int | None = None
    output: str = "text"

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def vars(self) -> tuple[str, ...]:
        return self.ring.variables


def read_job_text(text: str) -> dict[str, RawValue]:
    """Split a job file into raw values; duplicate or unknown keys are errors."""
    raw: dict[str, RawValue] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0]
        if not content.strip():
            continue
        if "=" not in content:
            column = len(content) - len(content.lstrip()) + 1
            raise JobSpecError("expected 'key = value'", lineno, column)
        key_part, value_part = content.split("=", 1)
        key = key_part.strip()
        key_column = len(key_part) - len(key_part.lstrip()) + 1
        if key not in KNOWN_KEYS:
            raise JobSpecError(f"unknown key {key!r}", lineno, key_column)
        if key in raw:
            raise JobSpecError(f"duplicate key {key!r}", lineno, key_column)
        value_column = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        raw[key] = RawValue(value_part.strip(), lineno, value_column)
    return raw


def _parse_int(key: str, raw: RawValue) -> int:
    try:
        return int(raw.text)
    except ValueError:
        raise JobSpecError(
            f"{key} must be an integer, got {raw.text!r}", raw.line, raw.column
        ) from None


def _split_list(key: str, raw: RawValue) -> list[tuple[str, int]]:
    """Items of ``[x, y]`` (brackets optional) with their column offsets."""
    text = raw.text
    offset = 0
    if text.startswith("["):
        if not text.endswith("]"):
            raise JobSpecError(f"{key} list is missing its closing ']'", raw.line, raw.column)
        text = text[1:-1]
        offset = 1
    elif text.endswith("]"):
        raise JobSpecError(f"{key} list is missing its opening '['", raw.line, raw.column)
    items: list[tuple[str, int]] = []
    if not text.strip():
        return items
    start = 0
    for piece in text.split(","):
        stripped = piece.strip()
        lead = len(piece) - len(piece.lstrip())
        if not stripped:
            raise JobSpecError(
                f"empty entry in {key} list", raw.line, raw.column + offset + start
            )
        items.append((stripped, offset + start + lead))
        start += len(piece) + 1
    return items


def _parse_poly(key: str, text: str, column: int, raw: RawValue, ring: PolyRing) -> Polynomial:
    try:
        return ring.parse(text)
    except PolynomialSyntaxError as exc:
        raise JobSpecError(
            f"{key}: {exc.message}", raw.line, raw.column + column + exc.position
        ) from None
    except PreconditionError as exc:
        raise JobSpecError(f"{key}: {exc}", raw.line, raw.column + column) from None


def _parse_poly_list(key: str, raw: RawValue, ring: PolyRing) -> tuple[Polynomial, ...]:
    return tuple(
        _parse_poly(key, item, column, raw, ring) for item, column in _split_list(key, raw)
    )


def build_job(
    raw: Mapping[str, RawValue],
    *,
    limits: Limits | None = None,
    default_order: str = "grevlex",
) -> JobSpec:
    """Validate raw values and parse every polynomial in the declared ring."""
    for key in REQUIRED_KEYS:
        if key not in raw:
            raise JobSpecError(f"missing required key {key!r}")

    command_raw = raw["command"]
    command = command_raw.text.strip()
    if command not in COMMANDS:
        raise JobSpecError(
            f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}",
            command_raw.line,
            command_raw.column,
        )
    needed = REQUIRED_ARGUMENTS.get(command)
    if needed and needed not in raw:
        raise JobSpecError(f"{command} requires {needed}")

    order = default_order
    if "order" in raw:
        order = raw["order"].text.strip().lower()
        if order not in ORDER_KINDS:
            raise JobSpecError(
                f"order must be one of {', '.join(ORDER_KINDS)}, got {order!r}",
                raw["order"].line,
                raw["order"].column,
            )

    output = "text"
    if "output" in raw:
        output = raw["output"].text.strip().lower()
        if output not in OUTPUTS:
            raise JobSpecError(
                f"output must be text or json, got {output!r}",
                raw["output"].line,
                raw["output"].column,
            )

    p_raw = raw["p"]
    p = _parse_int("p", p_raw)
    vars_raw = raw["vars"]
    names = [name for name, _ in _split_list("vars", vars_raw)]
    try:
        ring = PolyRing.create(p, names, order, limits)
    except PreconditionError as exc:
        where = p_raw if str(exc).startswith("p must") else vars_raw
        raise JobSpecError(str(exc), where.line, where.column) from None

    ints = {key: _parse_int(key, raw[key]) for key in INT_KEYS[1:] if key in raw}
    for key, low in (("cap", 0), ("samples", 0), ("e", 0), ("workers", 1)):
        if ints.get(key, low) < low:
            raise JobSpecError(f"{key} must be at least {low}", raw[key].line, raw[key].column)

    single = {
        key: _parse_poly(key, raw[key].text, 0, raw[key], ring) for key in ("u", "c") if key in raw
    }
    return JobSpec(
        ring=ring,
        a=_parse_poly_list("a", raw["a"], ring),
        command=command,
        b=_parse_poly_list("b", raw["b"], ring) if "b" in raw else None,
        u=single.get("u"),
        c=single.get("c"),
        cap=ints.get("cap"),
        samples=ints.get("samples"),
        e=ints.get("e", 1),
        seed=ints.get("seed"),
        workers=ints.get("workers"),
        output=output,
    )


def parse_input(
    text: str,
    *,
    limits: Limits | None = None,
    default_order: str = "grevlex",
) -> JobSpec:
    return build_job(read_job_text(text), limits=limits, default_order=default_order)
