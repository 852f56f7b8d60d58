from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from typing import Any, cast

from .fsing import DEFAULT_AVOIDANCE_CAP, DEFAULT_CHAIN_CAP, MAX_CHAIN_CAP
from .paths import CONFIG_DIR
from .polyring import ORDER_KINDS, Limits

LOGGER = logging.getLogger("ffctl.config")
MAX_ENGINE_LIMIT = 10**8
CHAIN_CAP_CEILING = 32
MAX_SEARCH_CAP = 10**9
MAX_SAMPLES = 100_000
MAX_WORKERS = 64
MAX_PAIRS_ENV = "FFCTL_MAX_PAIRS"


@dataclass
class AppConfig:
    max_pairs: int
    max_terms: int
    order: str
    chain_cap: int
    chain_cap_max: int
    avoidance_cap: int
    samples: int
    seed: int
    workers: int

    @property
    def limits(self) -> Limits:
        return Limits(max_pairs=self.max_pairs, max_terms=self.max_terms)


DEFAULT_CONFIG = AppConfig(
    max_pairs=100_000,
    max_terms=250_000,
    order="grevlex",
    chain_cap=DEFAULT_CHAIN_CAP,
    chain_cap_max=MAX_CHAIN_CAP,
    avoidance_cap=DEFAULT_AVOIDANCE_CAP,
    samples=10,
    seed=0,
    workers=1,
)


CONFIG_PATH = CONFIG_DIR / "config.json"


def ensure_config() -> bool:
    """Write the default config unless one exists; True if a file was created."""
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
    if CONFIG_PATH.exists():
        return False
    write_config(DEFAULT_CONFIG)
    return True


def _strip_json_comments(text: str) -> str:
    lines: list[str] = []
    for line in text.splitlines():
        stripped = line.lstrip()
        if stripped.startswith("//") or stripped.startswith("#"):
            continue
        lines.append(line)
    return "\n".join(lines)


def _strip_trailing_commas(text: str) -> str:
    out: list[str] = []
    in_string = False
    escaped = False
    for i, ch in enumerate(text):
        if in_string:
            out.append(ch)
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == ",":
            rest = text[i + 1 :].lstrip()
            if rest[:1] in ("}", "]"):
                continue
        out.append(ch)
    return "".join(out)


def _relaxed_json_text(text: str) -> str:
    return _strip_trailing_commas(_strip_json_comments(text))


def _clamp(value: Any, low: int, high: int, default: int) -> int:
    if isinstance(value, bool):
        return default
    try:
        number = int(value)
    except (TypeError, ValueError):
        return default
    return max(low, min(high, number))


def _as_int(value: Any, default: int) -> int:
    if isinstance(value, bool):
        return default
    try:
        return int(value)
    except (TypeError, ValueError):
        return default


def _as_dict(value: object) -> dict[str, Any]:
    if isinstance(value, dict):
        return cast(dict[str, Any], value)
    return {}


def _pick(section: dict[str, Any], root: dict[str, Any], key: str, default: Any) -> Any:
    if key in section:
        return section.get(key)
    if key in root:
        return root.get(key)
    return default


def _sanitize_order(value: object, default: str) -> str:
    if not isinstance(value, str):
        return default
    normalized = value.strip().lower()
    if normalized in ORDER_KINDS:
        return normalized
    return default


def _read_config_data() -> dict[str, Any] | None:
    if not CONFIG_PATH.exists():
        return {}
    try:
        raw = CONFIG_PATH.read_text(encoding="utf-8")
        data = json.loads(raw)
    except (OSError, json.JSONDecodeError):
        try:
            raw = CONFIG_PATH.read_text(encoding="utf-8")
            data = json.loads(_relaxed_json_text(raw))
        except (OSError, json.JSONDecodeError):
            return None
    return _as_dict(data)


def _env_max_pairs(current: int) -> int:
    raw = os.environ.get(MAX_PAIRS_ENV)
    if raw is None:
        return current
    try:
        value = int(raw.strip())
    except ValueError:
        value = 0
    if value < 1:
        LOGGER.warning("Ignoring %s=%r; expected a positive integer", MAX_PAIRS_ENV, raw)
        return current
    return min(value, MAX_ENGINE_LIMIT)


def load_config() -> AppConfig:
    """Config file (missing means defaults), then the environment override."""
    root = _read_config_data()
    if root is None:
        LOGGER.warning("Config parse failed; using defaults")
        root = {}

    engine = _as_dict(root.get("engine"))
    fsing = _as_dict(root.get("fsing"))
    verify = _as_dict(root.get("verify"))
    d = DEFAULT_CONFIG

    chain_cap_max = _clamp(
        _pick(fsing, root, "chain_cap_max", d.chain_cap_max),
        0,
        CHAIN_CAP_CEILING,
        d.chain_cap_max,
    )
    max_pairs = _clamp(
        _pick(engine, root, "max_pairs", d.max_pairs), 1, MAX_ENGINE_LIMIT, d.max_pairs
    )
    return AppConfig(
        max_pairs=_env_max_pairs(max_pairs),
        max_terms=_clamp(
            _pick(engine, root, "max_terms", d.max_terms), 1, MAX_ENGINE_LIMIT, d.max_terms
        ),
        order=_sanitize_order(_pick(engine, root, "order", d.order), d.order),
        chain_cap=_clamp(
            _pick(fsing, root, "chain_cap", d.chain_cap),
            0,
            chain_cap_max,
            min(d.chain_cap, chain_cap_max),
        ),
        chain_cap_max=chain_cap_max,
        avoidance_cap=_clamp(
            _pick(fsing, root, "avoidance_cap", d.avoidance_cap),
            1,
            MAX_SEARCH_CAP,
            d.avoidance_cap,
        ),
        samples=_clamp(_pick(verify, root, "samples", d.samples), 0, MAX_SAMPLES, d.samples),
        seed=_as_int(_pick(verify, root, "seed", d.seed), d.seed),
        workers=_clamp(_pick(verify, root, "workers", d.workers), 1, MAX_WORKERS, d.workers),
    )


def write_config(config: AppConfig) -> None:
    CONFIG_DIR.mkdir(parents=True, exist_ok=True)
    d = DEFAULT_CONFIG
    chain_cap_max = _clamp(config.chain_cap_max, 0, CHAIN_CAP_CEILING, d.chain_cap_max)
    payload = {
        "engine": {
            "max_pairs": _clamp(config.max_pairs, 1, MAX_ENGINE_LIMIT, d.max_pairs),
            "max_terms": _clamp(config.max_terms, 1, MAX_ENGINE_LIMIT, d.max_terms),
            "order": _sanitize_order(config.order, d.order),
        },
        "fsing": {
            "chain_cap": _clamp(config.chain_cap, 0, chain_cap_max, d.chain_cap),
            "chain_cap_max": chain_cap_max,
            "avoidance_cap": _clamp(config.avoidance_cap, 1, MAX_SEARCH_CAP, d.avoidance_cap),
        },
        "verify": {
            "samples": _clamp(config.samples, 0, MAX_SAMPLES, d.samples),
            "seed": int(config.seed),
            "workers": _clamp(config.workers, 1, MAX_WORKERS, d.workers),
        },
    }
    CONFIG_PATH.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
