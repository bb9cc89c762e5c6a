"""The generic three-algorithm retrieval engine.

A ``Scheme`` packages everything one protocol needs: a family of n query
arrays (one per retrievable index, given by a row callback over a structured
randomness space), the n alpha maps that encode the database as a function
F_x(z) = sum_tau x_tau * alpha_tau(z), and a reconstruction-coefficient
callback returning (lambda, omega) with

    alpha(row(i, ell)) . lambda = omega * e_n^(i).

The engine then provides the querying / answering / reconstructing
algorithms, exact communication accounting, and the structural checks
(orthogonal-array strength, unit-vector span) that protocols must pass.

Answers live in R^D for a base ring R and a per-protocol dimension D; the
pairing of a lambda block with an answer is the dot product over R, which
degenerates to ring multiplication for scalar protocols (D = 1).
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .errors import (
    CapExceeded,
    DimensionMismatch,
    InconsistentAnswer,
    MalformedQuery,
    OAFailure,
    ParamError,
    SpanFailure,
)

LevelPoint = tuple[int, ...]
Answer = tuple  # D ring elements
DEFAULT_ROW_CAP = 10**6


class Aux(NamedTuple):
    """Client-side reconstruction state: the retrieval index and the
    randomness draw that produced the queries."""

    i: int
    ell: tuple[int, ...]


class Codec:
    """Fixed-width byte codec for a flat tuple of small integers.

    A codec is an ordered list of fields.  A ``("u", m)`` field holds one
    residue in [0, m), serialized as the minimal whole number of bytes for a
    canonical residue, little-endian.  A ``("b", L)`` field holds L bits
    (L separate 0/1 values), packed LSB-first into ceil(L / 8) bytes.

    ``raw_bits`` is the information-theoretic width sum(log2 m) + sum(L),
    a float; ``coded_bits`` rounds each field up to whole bits; ``nbytes``
    is the serialized width.
    """

    def __init__(self, fields: Sequence[tuple[str, int]]):
        self.fields = tuple(fields)
        raw = 0.0
        coded = 0
        nbytes = 0
        nvalues = 0
        for kind, arg in self.fields:
            if kind == "u":
                if arg < 2:
                    raise ParamError("residue field modulus must be >= 2")
                raw += math.log2(arg)
                bits = (arg - 1).bit_length()
                coded += bits
                nbytes += (bits + 7) // 8
                nvalues += 1
            elif kind == "b":
                if arg < 1:
                    raise ParamError("bit field length must be >= 1")
                raw += arg
                coded += arg
                nbytes += (arg + 7) // 8
                nvalues += arg
            else:
                raise ParamError(f"unknown field kind {kind!r}")
        self.raw_bits = raw
        self.coded_bits = coded
        self.nbytes = nbytes
        self.nvalues = nvalues

    @classmethod
    def uints(cls, modulus: int, count: int) -> "Codec":
        return cls((("u", modulus),) * count)

    @classmethod
    def bit_groups(cls, *lengths: int) -> "Codec":
        return cls(tuple(("b", n) for n in lengths))

    def validate(self, values: Sequence[int]) -> None:
        if len(values) != self.nvalues:
            raise MalformedQuery(
                f"expected {self.nvalues} values, got {len(values)}"
            )
        pos = 0
        for kind, arg in self.fields:
            if kind == "u":
                v = values[pos]
                if not 0 <= v < arg:
                    raise MalformedQuery(f"value {v} out of range [0, {arg})")
                pos += 1
            else:
                for v in values[pos : pos + arg]:
                    if v not in (0, 1):
                        raise MalformedQuery(f"bit value {v} not in {{0, 1}}")
                pos += arg

    def encode(self, values: Sequence[int]) -> bytes:
        self.validate(values)
        out = bytearray()
        pos = 0
        for kind, arg in self.fields:
            if kind == "u":
                width = ((arg - 1).bit_length() + 7) // 8
                out += values[pos].to_bytes(width, "little")
                pos += 1
            else:
                packed = 0
                for offset, v in enumerate(values[pos : pos + arg]):
                    packed |= v << offset
                out += packed.to_bytes((arg + 7) // 8, "little")
                pos += arg
        return bytes(out)

    def decode(self, data: bytes) -> tuple[int, ...]:
        if len(data) != self.nbytes:
            raise MalformedQuery(
                f"expected {self.nbytes} bytes, got {len(data)}"
            )
        values = []
        pos = 0
        for kind, arg in self.fields:
            if kind == "u":
                width = ((arg - 1).bit_length() + 7) // 8
                v = int.from_bytes(data[pos : pos + width], "little")
                if v >= arg:
                    raise MalformedQuery(f"residue {v} out of range [0, {arg})")
                values.append(v)
                pos += width
            else:
                width = (arg + 7) // 8
                packed = int.from_bytes(data[pos : pos + width], "little")
                if packed >> arg:
                    raise MalformedQuery("padding bits must be zero")
                values.extend((packed >> k) & 1 for k in range(arg))
                pos += width
        return tuple(values)

    def space_size(self) -> int:
        size = 1
        for kind, arg in self.fields:
            size *= arg if kind == "u" else 2**arg
        return size

    def enumerate_values(self, cap: int = DEFAULT_ROW_CAP):
        """All value tuples of this codec, in lexicographic field order."""
        if self.space_size() > cap:
            raise CapExceeded(
                f"codec space of {self.space_size()} values exceeds cap {cap}"
            )
        ranges = []
        for kind, arg in self.fields:
            if kind == "u":
                ranges.append(range(arg))
            else:
                ranges.extend([range(2)] * arg)
        return itertools.product(*ranges)


@dataclass(frozen=True)
class Scheme:
    """One complete protocol instantiation.

    ``row(i, ell)`` returns the k queries for index i under randomness ell,
    where ell is a tuple drawn componentwise from ``radices``.  ``alpha(tau,
    z)`` evaluates the tau-th encoding map at a level point, returning a
    D-tuple over ``ring``.  ``recon(i, ell)`` returns (lambda, omega):
    lambda is k blocks of D ring elements and omega is a nonzero ring
    element (1 for every protocol except the group-ring one).

    Instances are immutable and safe to share across threads.
    """

    name: str
    n: int
    k: int
    t: int
    ring: object
    answer_dim: int
    level_codec: Codec
    answer_codec: Codec
    radices: tuple[int, ...]
    row: Callable[[int, tuple[int, ...]], tuple[LevelPoint, ...]]
    alpha: Callable[[int, LevelPoint], Answer]
    recon: Callable[[int, tuple[int, ...]], tuple[tuple[Answer, ...], object]]
    report: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParamError("n must be >= 1")
        if not 1 <= self.t < self.k:
            raise ParamError("privacy threshold must satisfy 1 <= t < k")

    @property
    def num_rows(self) -> int:
        """N, the number of rows of each query array."""
        size = 1
        for r in self.radices:
            size *= r
        return size

    def enumerate_randomness(self, cap: int = DEFAULT_ROW_CAP):
        if self.num_rows > cap:
            raise CapExceeded(
                f"randomness space of {self.num_rows} rows exceeds cap {cap}"
            )
        return itertools.product(*(range(r) for r in self.radices))

    def sample_randomness(self, rng: random.Random) -> tuple[int, ...]:
        # randrange draws unbiased values via rejection on getrandbits.
        return tuple(rng.randrange(r) for r in self.radices)

    def flatten_answer(self, answer: Answer) -> tuple[int, ...]:
        flat: list[int] = []
        for el in answer:
            flat.extend(self.ring.to_ints(el))
        return tuple(flat)

    def unflatten_answer(self, flat: Sequence[int]) -> Answer:
        width = len(self.ring.component_moduli)
        if len(flat) != width * self.answer_dim:
            raise MalformedQuery("answer has wrong width")
        return tuple(
            self.ring.from_ints(flat[j * width : (j + 1) * width])
            for j in range(self.answer_dim)
        )


def query_gen(scheme: Scheme, i: int, seed: int) -> tuple[tuple[LevelPoint, ...], Aux]:
    """The querying algorithm: draw ell uniformly, emit row(i, ell) and aux.

    Deterministic for a fixed seed.
    """
    if not 0 <= i < scheme.n:
        raise ParamError(f"index {i} out of range [0, {scheme.n})")
    rng = random.Random(seed)
    ell = scheme.sample_randomness(rng)
    return scheme.row(i, ell), Aux(i, ell)


def answer(scheme: Scheme, x: Sequence[int], q: LevelPoint) -> Answer:
    """The answering algorithm: F_x(q) = sum over set bits of alpha(tau, q).

    Touches every set database entry, Omega(n) work in the worst case; the
    query is validated against the level codec first.
    """
    if len(x) != scheme.n:
        raise ParamError(f"database length {len(x)} != n = {scheme.n}")
    scheme.level_codec.validate(q)
    ring = scheme.ring
    acc = [ring.zero] * scheme.answer_dim
    for tau, bit in enumerate(x):
        if bit:
            vec = scheme.alpha(tau, q)
            acc = [ring.add(a, v) for a, v in zip(acc, vec)]
    return tuple(acc)


def pair(ring, lam_block: Answer, ans: Answer):
    """Dot product of a lambda block with one server's answer."""
    if len(lam_block) != len(ans):
        raise DimensionMismatch("lambda block / answer width mismatch")
    acc = ring.zero
    for l, a in zip(lam_block, ans):
        acc = ring.add(acc, ring.mul(l, a))
    return acc


def reconstruct(scheme: Scheme, aux: Aux, answers: Sequence[Answer]) -> int:
    """Combine the k answers: y = sum_j <lambda_j, a_j>, output 1 iff y = omega.

    An honest execution yields y = omega * x_i, so y is always 0 or omega;
    anything else signals a corrupted or mismatched answer.
    """
    if len(answers) != scheme.k:
        raise ParamError(f"expected {scheme.k} answers, got {len(answers)}")
    lam, omega = scheme.recon(aux.i, aux.ell)
    ring = scheme.ring
    y = ring.zero
    for lam_j, a_j in zip(lam, answers):
        y = ring.add(y, pair(ring, lam_j, a_j))
    if y == omega:
        return 1
    if y == ring.zero:
        return 0
    raise InconsistentAnswer(
        f"combined value {y!r} is neither 0 nor omega {omega!r}"
    )


@dataclass(frozen=True)
class CommCost:
    """Exact communication accounting for one scheme.

    raw bits follow the k * (log2|S| + log2|R|) formula with real-valued
    logs; coded bits round each codec field to whole bits; payload bytes are
    what actually crosses the wire.
    """

    k: int
    level_raw_bits: float
    answer_raw_bits: float
    level_bytes: int
    answer_bytes: int

    @property
    def raw_bits(self) -> float:
        return self.k * (self.level_raw_bits + self.answer_raw_bits)

    @property
    def payload_bytes(self) -> int:
        return self.k * (self.level_bytes + self.answer_bytes)


def comm_cost(scheme: Scheme) -> CommCost:
    return CommCost(
        k=scheme.k,
        level_raw_bits=scheme.level_codec.raw_bits,
        answer_raw_bits=scheme.answer_codec.raw_bits,
        level_bytes=scheme.level_codec.nbytes,
        answer_bytes=scheme.answer_codec.nbytes,
    )


def span_check(scheme: Scheme, i: int, ell: tuple[int, ...]) -> None:
    """Verify alpha(row(i, ell)) . lambda = omega * e_n^(i) with omega != 0.

    Materializes all n alpha rows at the given queries; raises SpanFailure
    with the offending tau on the first mismatch.
    """
    queries = scheme.row(i, ell)
    lam, omega = scheme.recon(i, ell)
    ring = scheme.ring
    if omega == ring.zero:
        raise SpanFailure(f"{scheme.name}: omega is zero at (i={i}, ell={ell})")
    for tau in range(scheme.n):
        acc = ring.zero
        for q, lam_j in zip(queries, lam):
            acc = ring.add(acc, pair(ring, lam_j, scheme.alpha(tau, q)))
        expected = omega if tau == i else ring.zero
        if acc != expected:
            raise SpanFailure(
                f"{scheme.name}: row tau={tau} pairs to {acc!r}, "
                f"expected {expected!r} at (i={i}, ell={ell})"
            )


def oa_strength_check(
    rows: Sequence[Sequence],
    levels: Sequence,
    t: int,
    cap: int = DEFAULT_ROW_CAP,
) -> int:
    """Return the index lambda of an orthogonal array of strength t.

    Every t-column subarray must contain every t-tuple of levels exactly
    N / s^t times; raises OAFailure naming the offending column set and
    tuple otherwise.
    """
    n_rows = len(rows)
    if n_rows == 0:
        raise ParamError("array must have at least one row")
    if n_rows > cap:
        raise CapExceeded(f"{n_rows} rows exceed the materialization cap {cap}")
    n_cols = len(rows[0])
    if not 1 <= t <= n_cols:
        raise ParamError(f"strength {t} out of range [1, {n_cols}]")
    s = len(levels)
    level_set = set(levels)
    for r, row_vals in enumerate(rows):
        for v in row_vals:
            if v not in level_set:
                raise ParamError(f"row {r} contains {v!r} outside the level set")
    if n_rows % s**t != 0:
        raise OAFailure(
            f"{n_rows} rows cannot cover {s}^{t} tuples an equal number of times"
        )
    lam = n_rows // s**t
    for cols in itertools.combinations(range(n_cols), t):
        counts = Counter(tuple(row[c] for c in cols) for row in rows)
        if len(counts) != s**t:
            missing = next(
                tup
                for tup in itertools.product(sorted(level_set, key=repr), repeat=t)
                if tup not in counts
            )
            raise OAFailure(f"columns {cols}: tuple {missing!r} never appears")
        for tup, count in counts.items():
            if count != lam:
                raise OAFailure(
                    f"columns {cols}: tuple {tup!r} appears {count} times, "
                    f"expected {lam}"
                )
    return lam


def scheme_levels(scheme: Scheme, cap: int = DEFAULT_ROW_CAP) -> list[LevelPoint]:
    """The full level set S of a scheme, via its level codec."""
    return [tuple(v) for v in scheme.level_codec.enumerate_values(cap)]


def scheme_oa_index(scheme: Scheme, i: int, cap: int = DEFAULT_ROW_CAP) -> int:
    """Materialize Q^(i) and check it is an OA at the scheme's strength."""
    rows = [scheme.row(i, ell) for ell in scheme.enumerate_randomness(cap)]
    return oa_strength_check(rows, scheme_levels(scheme, cap), scheme.t, cap)
