"""Classical Hellman time/memory tradeoff inverter over [n], n prime.

Table k re-randomizes with the affine map h_k(x) = a_k*x + b_k over GF(n)
(on labels via x -> x - 1) and iterates x -> h_k(f(x)) for t_chain steps.

Advice layout (every word ceil(log2 n) bits, field elements x - 1):

    for each table k = 1..m_tables:
        a_k, b_k
        chains pairs (endpoint, startpoint), sorted by (endpoint, startpoint)

so s = m_tables * (2 + 2*chains) * ceil(log2 n).
"""

from __future__ import annotations

import functools
import math

from . import bits as B
from .errors import ParameterError
from .field import FnTable, is_prime
from .inverters import AdaptiveInverter, Oracle
from .rng import Rng


def _step(a: int, b: int, n: int, v: int) -> int:
    return (a * (v - 1) + b) % n + 1


@functools.lru_cache(maxsize=64)
def _parse(advice: str, n: int, m_tables: int, chains: int):
    width = B.word_bits(n)
    words = B.unpack_words(advice, width)
    per = 2 + 2 * chains
    tables = []
    for k in range(m_tables):
        block = words[k * per : (k + 1) * per]
        a, b = block[0], block[1]
        ends: dict[int, list[int]] = {}
        for c in range(chains):
            end, start = block[2 + 2 * c] + 1, block[3 + 2 * c] + 1
            ends.setdefault(end, []).append(start)
        tables.append((a, b, ends))
    return tables


def hellman_inverter(n: int, m_tables: int, t_chain: int, rng: Rng, chains: int | None = None) -> AdaptiveInverter:
    """Build the inverter; table maps and start points come from ``rng``.

    ``chains`` (per table) defaults to ceil(n / (m_tables * t_chain)), so the
    tables jointly cover about n points.
    """
    if not is_prime(n):
        raise ParameterError(f"hellman inverter needs prime n, got {n}")
    if m_tables < 1 or t_chain < 1:
        raise ParameterError("m_tables and t_chain must be >= 1")
    if m_tables * t_chain**2 > n**3:
        raise ParameterError("m_tables * t_chain^2 exceeds n^3")
    if chains is None:
        chains = max(1, math.ceil(n / (m_tables * t_chain)))
    width = B.word_bits(n)
    maps = [(1 + rng.below(n - 1), rng.below(n)) for _ in range(m_tables)]
    starts = [tuple(int(v) + 1 for v in rng.integers(n, chains)) for _ in range(m_tables)]
    q = m_tables * t_chain

    def preprocess(f: FnTable) -> str:
        words = []
        for (a, b), st in zip(maps, starts):
            pairs = []
            for x0 in st:
                x = x0
                for _ in range(t_chain):
                    x = _step(a, b, n, f(x))
                pairs.append((x, x0))
            pairs.sort()
            words.extend([a, b])
            for end, x0 in pairs:
                words.extend([end - 1, x0 - 1])
        return B.pack_words(words, width)

    def decode(y: int, advice: str, oracle: Oracle) -> int:
        used = 0
        for a, b, ends in _parse(advice, n, m_tables, chains):
            z = _step(a, b, n, y)
            for j in range(t_chain):
                for x0 in ends.get(z, ()):
                    # candidate sits t_chain - 1 - j steps down the chain
                    need = t_chain - j
                    if used + need > q:
                        return y
                    x = x0
                    for _ in range(t_chain - 1 - j):
                        x = _step(a, b, n, oracle(x))
                    used += need
                    if oracle(x) == y:
                        return x
                if j == t_chain - 1:
                    break
                if used >= q:
                    return y
                z = _step(a, b, n, oracle(z))
                used += 1
        return y

    s = m_tables * (2 + 2 * chains) * width
    return AdaptiveInverter(
        n=n,
        s=s,
        q=q,
        preprocess=preprocess,
        decode=decode,
        advice_add=None,
        descriptor={
            "kind": "hellman",
            "n": n,
            "m_tables": m_tables,
            "t_chain": t_chain,
            "chains": chains,
            "seed": rng.master_seed,
        },
    )
