"""Set-disjointness via a linear-advice inverter, with exact bit accounting.

Party A holds a in {0,1}^n, party B holds b. One round:

    public d <- [n]; B draws y <- [n]
    A builds f_A (zero label at shift(i, d) where a_i = 1, uniform elsewhere)
    B builds f_B (y at shift(i, d) where b_i = 1, uniform elsewhere)
    A -> B   P(f_A)                                   s bits        [advice]
    B        c = P(f_A) + P(f_B) = P(f_A + f_B)
    B emulates Dec^f(y, c); per oracle query r:
      B -> A   r                                      L bits        [query]
      A -> B   framing bit + f_A(r)                   L + 1 bits    [answer]
      B        feeds f_A(r) + f_B(r) to the decoder
    B -> A   i = shift(x, -d) and b_i                 L + 1 bits    [final]
    A -> B   reject flag, end marker                  2 bits        [verdict]
    both output False iff a_i = b_i = 1

with L = ceil(log2 n). The itemization sums to at most
s + 2q(L + 1) + L + 3. All additions are in Z_n on labels (zero label = 1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import bits as B
from .errors import LinearityViolation, SubProtocolBudget
from .field import FnTable, add_pointwise, from_field
from .inverters import AdaptiveInverter, QueryOracle
from .rng import Rng

ZERO_LABEL = from_field(0)


@dataclass(frozen=True)
class DisjointnessInput:
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(v) for v in self.a)
        b = tuple(int(v) for v in self.b)
        if len(a) != len(b):
            raise ValueError("inputs must have equal length")
        if any(v not in (0, 1) for v in a + b):
            raise ValueError("inputs are bit vectors")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def intersection(self) -> tuple[int, ...]:
        return tuple(i for i, (u, v) in enumerate(zip(self.a, self.b), start=1) if u and v)

    @property
    def in_promise(self) -> bool:
        """Member of Q: at most one common element."""
        return len(self.intersection) <= 1


@dataclass(frozen=True)
class Message:
    step: int
    sender: str
    tag: str
    payload: str
    bit_count: int = -1

    def __post_init__(self):
        if self.bit_count < 0:
            object.__setattr__(self, "bit_count", len(self.payload))

    @property
    def payload_hex(self) -> str:
        return B.bits_to_hex(self.payload)


@dataclass(frozen=True)
class Transcript:
    messages: tuple[Message, ...]
    outputs: tuple[bool, bool]
    n: int
    s: int
    q: int
    rounds: int = 1
    advice_bits: int | None = None  # k for the additive variant; None means s

    @property
    def total_bits(self) -> int:
        return sum(m.bit_count for m in self.messages)

    @property
    def accepted(self) -> bool:
        return self.outputs[0]

    @property
    def bound(self) -> int:
        first = self.s if self.advice_bits is None else self.advice_bits
        return self.rounds * cc_bound(first, self.q, self.n)

    def audit(self) -> list[str]:
        """Recompute every count from its payload; returns the problems found."""
        problems = []
        for k, m in enumerate(self.messages):
            if m.bit_count != len(m.payload):
                problems.append(f"message {k}: bit_count {m.bit_count} != payload length {len(m.payload)}")
        if self.outputs[0] != self.outputs[1]:
            problems.append("parties disagree on the output")
        if self.total_bits > self.bound:
            problems.append(f"total_bits {self.total_bits} exceeds bound {self.bound}")
        return problems


def cc_bound(s: int, q: int, n: int) -> int:
    """s + 2q(ceil(log2 n) + 1) + ceil(log2 n) + 3."""
    if n < 2:
        raise ValueError("n must be >= 2")
    L = B.word_bits(n)
    return s + 2 * q * (L + 1) + L + 3


def shift(i: int, d: int, n: int) -> int:
    """1-based cyclic shift ((i + d - 1) mod n) + 1."""
    return (i + d - 1) % n + 1


def build_fa(a: Sequence[int], d: int, rng: Rng) -> FnTable:
    n = len(a)
    vals = (rng.integers(n, n) + 1).tolist()
    for i, bit in enumerate(a, start=1):
        if bit:
            vals[shift(i, d, n) - 1] = ZERO_LABEL
    return FnTable(n, tuple(vals))


def build_fb(b: Sequence[int], d: int, y: int, rng: Rng) -> FnTable:
    n = len(b)
    vals = (rng.integers(n, n) + 1).tolist()
    for i, bit in enumerate(b, start=1):
        if bit:
            vals[shift(i, d, n) - 1] = y
    return FnTable(n, tuple(vals))


def _label_add(u: int, v: int, n: int) -> int:
    return (u + v - 2) % n + 1


def _emulate_and_finish(
    inv: AdaptiveInverter,
    inp: DisjointnessInput,
    d: int,
    y: int,
    f_a: FnTable,
    f_b: FnTable,
    c: str | None,
    msgs: list[Message],
) -> tuple[bool, bool]:
    n = inp.n
    L = B.word_bits(n)

    def forward(r: int) -> int:
        msgs.append(Message(6, "B", "query", B.int_to_bits(r - 1, L)))
        ans = f_a(r)
        msgs.append(Message(6, "A", "answer", "1" + B.int_to_bits(ans - 1, L)))
        return _label_add(ans, f_b(r), n)

    if c is None:
        # advice sub-protocol failed: B forces an accepting final message
        i, b_i = 1, 0
    else:
        x, _ = inv.invert(y, forward, c)
        i = shift(x, -d, n)
        b_i = inp.b[i - 1]
    msgs.append(Message(7, "B", "final", B.int_to_bits(i - 1, L) + str(b_i)))
    reject = bool(inp.a[i - 1] and b_i)
    msgs.append(Message(8, "A", "verdict", ("1" if reject else "0") + "1"))
    return (not reject, not reject)


def _setup(inp: DisjointnessInput, rng: Rng):
    n = inp.n
    if n < 2:
        raise ValueError("protocol needs n >= 2")
    public, r_a, r_b = rng.split(0), rng.split(1), rng.split(2)
    d = public.below(n) + 1
    y = r_b.below(n) + 1
    f_a = build_fa(inp.a, d, r_a)
    f_b = build_fb(inp.b, d, y, r_b)
    return d, y, f_a, f_b


def run_protocol(inv: AdaptiveInverter, inp: DisjointnessInput, rng: Rng) -> Transcript:
    """One execution of the reduction protocol."""
    if inv.advice_add is None:
        raise LinearityViolation("inverter declares no advice group; preprocessing not linear")
    if inv.n != inp.n:
        raise ValueError(f"inverter is over n={inv.n}, input over n={inp.n}")
    d, y, f_a, f_b = _setup(inp, rng)
    return run_protocol_fixed(inv, inp, d, y, f_a, f_b)


def run_protocol_fixed(
    inv: AdaptiveInverter, inp: DisjointnessInput, d: int, y: int, f_a: FnTable, f_b: FnTable
) -> Transcript:
    """The protocol with its randomness (d, y, f_A, f_B) supplied by the caller."""
    if inv.advice_add is None:
        raise LinearityViolation("inverter declares no advice group; preprocessing not linear")
    msgs: list[Message] = []
    adv_a = inv.advice(f_a)
    msgs.append(Message(4, "A", "advice", adv_a))
    c = inv.advice_add(adv_a, inv.advice(f_b))
    if c != inv.advice(add_pointwise(f_a, f_b)):
        raise LinearityViolation("P(f_A) + P(f_B) != P(f_A + f_B) on this run")
    outputs = _emulate_and_finish(inv, inp, d, y, f_a, f_b, c, msgs)
    return Transcript(tuple(msgs), outputs, inp.n, inv.s, inv.q)


def run_repeated(t: int, inv: AdaptiveInverter, inp: DisjointnessInput, rng: Rng) -> Transcript:
    """t independent rounds; accept only if every round accepts."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if t == 1:
        return run_protocol(inv, inp, rng)
    msgs: list[Message] = []
    ok = True
    for k in range(t):
        tr = run_protocol(inv, inp, rng.split(1000 + k))
        msgs.extend(tr.messages)
        ok = ok and tr.accepted
    return Transcript(tuple(msgs), (ok, ok), inp.n, inv.s, inv.q, rounds=t)


@dataclass(frozen=True)
class AdviceSubProtocol:
    """Two-party protocol computing P(f_1 + f_2) at B with budget ``k`` bits.

    ``run(f_a, f_b, rng)`` returns ``(advice or None, messages)``; ``None``
    marks a failed execution.
    """

    k: int
    run: Callable[[FnTable, FnTable, Rng], tuple[str | None, list[Message]]]
    name: str = "custom"


def verbatim_subprotocol(inv: AdaptiveInverter, gamma: float = 0.0) -> AdviceSubProtocol:
    """A sends f_A word by word; B computes P(f_A + f_B) locally.

    With probability ``gamma`` the execution is declared failed.
    """
    n = inv.n
    L = B.word_bits(n)

    def run(f_a: FnTable, f_b: FnTable, rng: Rng):
        payload = B.pack_words((v - 1 for v in f_a.values), L)
        msgs = [Message(4, "A", "advice", payload)]
        if gamma > 0 and rng.bernoulli(gamma):
            return None, msgs
        return inv.advice(add_pointwise(f_a, f_b)), msgs

    return AdviceSubProtocol(n * L, run, f"verbatim(gamma={gamma})")


def linear_subprotocol(inv: AdaptiveInverter) -> AdviceSubProtocol:
    """The linear case phrased as a sub-protocol: A sends P(f_A), k = s."""
    if inv.advice_add is None:
        raise LinearityViolation("inverter declares no advice group")

    def run(f_a: FnTable, f_b: FnTable, rng: Rng):
        adv = inv.advice(f_a)
        return inv.advice_add(adv, inv.advice(f_b)), [Message(4, "A", "advice", adv)]

    return AdviceSubProtocol(inv.s, run, "linear")


def run_additive(sub: AdviceSubProtocol, inv: AdaptiveInverter, inp: DisjointnessInput, rng: Rng) -> Transcript:
    """The protocol with the advice steps replaced by ``sub``."""
    if inv.n != inp.n:
        raise ValueError(f"inverter is over n={inv.n}, input over n={inp.n}")
    d, y, f_a, f_b = _setup(inp, rng)
    c, sub_msgs = sub.run(f_a, f_b, rng.split(3))
    used = sum(m.bit_count for m in sub_msgs)
    if used > sub.k:
        raise SubProtocolBudget(f"sub-protocol used {used} bits, budget {sub.k}")
    msgs = list(sub_msgs)
    outputs = _emulate_and_finish(inv, inp, d, y, f_a, f_b, c, msgs)
    return Transcript(tuple(msgs), outputs, inp.n, inv.s, inv.q, advice_bits=sub.k)


def brute_disjoint(inp: DisjointnessInput) -> bool:
    return not any(u and v for u, v in zip(inp.a, inp.b))


# ---------------------------------------------------------------- families


def disjoint_pair(n: int, rng: Rng, size: int | None = None) -> DisjointnessInput:
    """Uniform member of Q^0 with |X| = |Y| = size (default floor(n/4))."""
    size = n // 4 if size is None else size
    if 2 * size > n:
        raise ValueError("sets too large to be disjoint")
    perm = _permutation(n, rng)
    xs, ys = perm[:size], perm[size : 2 * size]
    return _from_sets(n, xs, ys)


def intersecting_pair(n: int, rng: Rng, size: int | None = None) -> DisjointnessInput:
    """Uniform member of Q^1 with |X| = |Y| = size (default max(1, floor(n/4)))."""
    size = max(1, n // 4) if size is None else size
    if 2 * size - 1 > n or size < 1:
        raise ValueError("bad set size for an intersecting pair")
    perm = _permutation(n, rng)
    common = perm[0]
    xs = [common] + perm[1:size]
    ys = [common] + perm[size : 2 * size - 1]
    return _from_sets(n, xs, ys)


def _permutation(n: int, rng: Rng) -> list[int]:
    keys = rng.words(n).tolist()
    return [i for _, i in sorted(zip(keys, range(1, n + 1)))]


def _from_sets(n: int, xs, ys) -> DisjointnessInput:
    a = [0] * n
    b = [0] * n
    for i in xs:
        a[i - 1] = 1
    for i in ys:
        b[i - 1] = 1
    return DisjointnessInput(tuple(a), tuple(b))


# ---------------------------------------------------------------- export


def transcript_to_jsonl(tr: Transcript) -> str:
    lines = [
        json.dumps(
            {"step": m.step, "sender": m.sender, "tag": m.tag, "bits": m.bit_count, "payload_hex": m.payload_hex},
            sort_keys=True,
        )
        for m in tr.messages
    ]
    summary = {
        "summary": True,
        "outputs": list(tr.outputs),
        "total_bits": tr.total_bits,
        "n": tr.n,
        "s": tr.s,
        "q": tr.q,
        "rounds": tr.rounds,
        "advice_bits": tr.advice_bits,
        "bound": tr.bound,
    }
    lines.append(json.dumps(summary, sort_keys=True))
    return "\n".join(lines) + "\n"


@dataclass
class AuditResult:
    ok: bool
    transcripts: int = 0
    total_bits: int = 0
    problems: list[str] = field(default_factory=list)


def audit_jsonl(text: str) -> AuditResult:
    """Re-verify every message and summary in a JSONL transcript export.

    Several transcripts may be concatenated; each ends with its summary line.
    """
    res = AuditResult(ok=True)
    running = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec.get("summary"):
            res.transcripts += 1
            if rec["total_bits"] != running:
                res.problems.append(f"line {lineno}: summary total {rec['total_bits']} != recomputed {running}")
            first = rec["s"] if rec.get("advice_bits") is None else rec["advice_bits"]
            bound = rec["rounds"] * cc_bound(first, rec["q"], rec["n"])
            if rec["bound"] != bound:
                res.problems.append(f"line {lineno}: recorded bound {rec['bound']} != {bound}")
            if running > bound:
                res.problems.append(f"line {lineno}: total {running} exceeds bound {bound}")
            if rec["outputs"][0] != rec["outputs"][1]:
                res.problems.append(f"line {lineno}: parties disagree")
            res.total_bits += running
            running = 0
            continue
        bits = rec["bits"]
        hexstr = rec["payload_hex"]
        if len(hexstr) != (bits + 3) // 4:
            res.problems.append(f"line {lineno}: {len(hexstr)} hex digits cannot carry exactly {bits} bits")
        elif bits and int(hexstr, 16).bit_length() > bits:
            res.problems.append(f"line {lineno}: payload exceeds {bits} bits")
        running += bits
    if running:
        res.problems.append("trailing messages without a summary line")
    res.ok = not res.problems
    return res
