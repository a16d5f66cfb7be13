"""Inverters from JSON descriptors, and hex (de)serialization of advice."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping

from . import bits as B
from .errors import ConfigError
from .hellman import hellman_inverter
from .inverters import Inverter, full_table_inverter, max_index_inverter, null_inverter, zero_advice_affine_inverter
from .rng import Rng

KINDS = ("full-table", "null", "max-index", "zero-advice-affine", "hellman")


def inverter_from_descriptor(desc: Mapping) -> Inverter:
    """Build an inverter from e.g. ``{"kind": "hellman", "n": 1009, "m_tables": 10, "t_chain": 10, "seed": 7}``.

    zero-advice-affine takes ``"g": [..]`` or ``"g": "identity"``.
    """
    kind = desc.get("kind")
    try:
        n = int(desc["n"])
        if kind == "full-table":
            return full_table_inverter(n, desc.get("rule", "smallest"))
        if kind == "null":
            return null_inverter(n)
        if kind == "max-index":
            return max_index_inverter(n)
        if kind == "zero-advice-affine":
            g = desc.get("g", "identity")
            if g == "identity":
                g = list(range(1, n + 1))
            if len(g) != n:
                raise ConfigError(f"g has {len(g)} entries, expected {n}")
            return zero_advice_affine_inverter(g)
        if kind == "hellman":
            rng = Rng(int(desc["seed"]))
            chains = desc.get("chains")
            return hellman_inverter(n, int(desc["m_tables"]), int(desc["t_chain"]), rng, chains)
    except KeyError as exc:
        raise ConfigError(f"descriptor for {kind!r} is missing {exc}") from exc
    raise ConfigError(f"unknown inverter kind {kind!r}; expected one of {', '.join(KINDS)}")


def load_descriptor(spec: str) -> dict:
    """A kind name, inline JSON, or a path to a JSON file."""
    text = spec.strip()
    if text.startswith("{"):
        return json.loads(text)
    path = Path(spec)
    if path.suffix == ".json":
        if not path.exists():
            raise ConfigError(f"descriptor file {spec} does not exist")
        return json.loads(path.read_text())
    if text in KINDS:
        return {"kind": text}
    raise ConfigError(f"cannot read inverter descriptor {spec!r}")


def advice_to_hex(advice: str) -> dict:
    return {"bits": len(advice), "hex": B.bits_to_hex(advice)}


def advice_from_hex(obj: Mapping) -> str:
    return B.hex_to_bits(obj["hex"], int(obj["bits"]))
