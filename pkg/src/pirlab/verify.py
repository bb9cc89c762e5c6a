"""Exhaustive, oracle-grade verification suites.

Correctness runs the full query/answer/reconstruct round trip for every
(database, index, randomness) triple, forcing the randomness
deterministically instead of sampling.  Privacy compares the projected
query multisets of every index pair for every size-t server coalition -
an exact multiset identity, never a statistical test.  The communication
audit compares measured transcript bytes against the codec widths.

Reports are plain data with deterministic line-oriented and key-value
serializations; repeated runs produce byte-identical output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .engine import (
    Aux,
    Scheme,
    answer,
    comm_cost,
    reconstruct,
    scheme_oa_index,
    span_check,
)
from .errors import (
    BudgetExceeded,
    CapExceeded,
    InconsistentAnswer,
    Mismatch,
    ParamError,
)

DEFAULT_CORRECTNESS_BUDGET = 2**8 * 8 * 10**5
DEFAULT_PRIVACY_CAP = 10**6


def all_databases(n: int):
    """Every bit vector of length n, in numeric order."""
    for value in range(2**n):
        yield tuple((value >> j) & 1 for j in range(n))


def structured_databases(n: int):
    """Zero, all-ones, and every unit vector; with the (i, ell)-exhaustive
    round trip and answer linearity this still pins the full behaviour when
    2^n databases are out of budget."""
    yield (0,) * n
    yield (1,) * n
    for tau in range(n):
        yield tuple(1 if j == tau else 0 for j in range(n))


@dataclass
class CorrectnessReport:
    protocol: str
    databases_tested: int = 0
    pairs_tested: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_lines(self) -> list[str]:
        lines = [
            f"correctness {self.protocol}: "
            f"{'PASS' if self.passed else 'FAIL'} "
            f"({self.databases_tested} databases x {self.pairs_tested} (i, ell) pairs)"
        ]
        for item in self.failures[:10]:
            lines.append(f"  counterexample: {item}")
        return lines

    def to_kv(self) -> dict:
        kv = {
            "suite": "correctness",
            "protocol": self.protocol,
            "pass": self.passed,
            "databases": self.databases_tested,
            "pairs": self.pairs_tested,
            "failures": len(self.failures),
        }
        if self.failures:
            kv["first_failure"] = str(self.failures[0])
        return kv


@dataclass
class PrivacyReport:
    protocol: str
    t: int
    subset_verdicts: dict = field(default_factory=dict)
    uniform_verdicts: dict = field(default_factory=dict)
    counterexample: tuple | None = None

    @property
    def passed(self) -> bool:
        return all(self.subset_verdicts.values())

    @property
    def uniform(self) -> bool:
        return all(self.uniform_verdicts.values())

    def to_lines(self) -> list[str]:
        lines = [
            f"privacy {self.protocol} (t={self.t}): "
            f"{'PASS' if self.passed else 'FAIL'}; "
            f"uniform marginals: {'yes' if self.uniform else 'no'}"
        ]
        if self.counterexample is not None:
            coalition, i1, i2, row = self.counterexample
            lines.append(
                f"  counterexample: coalition {coalition} distinguishes "
                f"i={i1} from i={i2}, first differing projected row {row!r}"
            )
        return lines

    def to_kv(self) -> dict:
        kv = {
            "suite": "privacy",
            "protocol": self.protocol,
            "t": self.t,
            "pass": self.passed,
            "uniform": self.uniform,
            "coalitions": len(self.subset_verdicts),
        }
        if self.counterexample is not None:
            kv["counterexample"] = str(self.counterexample)
        return kv


def exhaustive_correctness(
    scheme: Scheme,
    databases=None,
    budget: int = DEFAULT_CORRECTNESS_BUDGET,
) -> CorrectnessReport:
    """Full round trip for every (x, i, ell); ell is forced, not sampled."""
    n = scheme.n
    big_n = scheme.num_rows
    if databases is None:
        if 2**n * n * big_n > budget:
            raise BudgetExceeded(
                f"2^{n} databases x {n} indices x {big_n} rows exceeds "
                f"budget {budget}; pass an explicit database list"
            )
        databases = list(all_databases(n))
    else:
        databases = [tuple(x) for x in databases]
        if len(databases) * n * big_n > budget:
            raise BudgetExceeded(
                f"{len(databases)} databases x {n} x {big_n} exceeds budget {budget}"
            )

    report = CorrectnessReport(protocol=scheme.name)
    report.databases_tested = len(databases)
    ells = list(scheme.enumerate_randomness())
    alpha_cache: dict = {}
    ring = scheme.ring

    def cached_answer(x, q):
        acc = [ring.zero] * scheme.answer_dim
        for tau, bit in enumerate(x):
            if bit:
                key = (tau, q)
                vec = alpha_cache.get(key)
                if vec is None:
                    vec = scheme.alpha(tau, q)
                    alpha_cache[key] = vec
                acc = [ring.add(a, v) for a, v in zip(acc, vec)]
        return tuple(acc)

    pairs = 0
    for i in range(n):
        for ell in ells:
            pairs += 1
            queries = scheme.row(i, ell)
            aux = Aux(i, ell)
            for x in databases:
                answers = [cached_answer(x, q) for q in queries]
                try:
                    got = reconstruct(scheme, aux, answers)
                except InconsistentAnswer as exc:
                    report.failures.append(
                        (x, i, ell, f"inconsistent answer: {exc}")
                    )
                    continue
                if got != x[i]:
                    report.failures.append((x, i, ell, f"got {got}, want {x[i]}"))
    report.pairs_tested = pairs
    return report


def exhaustive_privacy(
    scheme: Scheme,
    t: int | None = None,
    cap: int = DEFAULT_PRIVACY_CAP,
) -> PrivacyReport:
    """Exact multiset equality of projected queries across all index pairs.

    Also reports (separately) whether every projected multiset is the
    uniform multiset over S^t, which is stronger than the privacy
    definition itself requires.
    """
    if t is None:
        t = scheme.t
    if not 1 <= t < scheme.k:
        raise ParamError(f"need 1 <= t < k = {scheme.k}, got t = {t}")
    if scheme.num_rows > cap:
        raise CapExceeded(
            f"randomness space {scheme.num_rows} exceeds privacy cap {cap}"
        )
    ells = list(scheme.enumerate_randomness(cap))
    level_space = scheme.level_codec.space_size()
    report = PrivacyReport(protocol=scheme.name, t=t)
    for coalition in itertools.combinations(range(scheme.k), t):
        multisets = []
        for i in range(scheme.n):
            rows = sorted(
                tuple(scheme.row(i, ell)[j] for j in coalition) for ell in ells
            )
            multisets.append(rows)
        equal = all(ms == multisets[0] for ms in multisets[1:])
        report.subset_verdicts[coalition] = equal
        if not equal and report.counterexample is None:
            bad = next(
                idx for idx, ms in enumerate(multisets) if ms != multisets[0]
            )
            diff = next(
                (a, b)
                for a, b in itertools.zip_longest(multisets[0], multisets[bad])
                if a != b
            )
            report.counterexample = (coalition, 0, bad, diff)
        # Uniformity: every tuple of S^t appears exactly N / s^t times.
        lam, remainder = divmod(len(ells), level_space**t)
        uniform = remainder == 0 and all(
            _is_uniform(ms, lam) for ms in multisets
        )
        report.uniform_verdicts[coalition] = bool(uniform)
    return report


def _is_uniform(sorted_rows: list, lam: int) -> bool:
    counts: dict = {}
    for row in sorted_rows:
        counts[row] = counts.get(row, 0) + 1
    return all(c == lam for c in counts.values()) and (
        len(counts) * lam == len(sorted_rows)
    )


def span_check_all(scheme: Scheme, cap: int = DEFAULT_PRIVACY_CAP) -> int:
    """span_check over the full (i, ell) grid; returns the number checked."""
    count = 0
    for i in range(scheme.n):
        for ell in scheme.enumerate_randomness(cap):
            span_check(scheme, i, ell)
            count += 1
    return count


def oa_family_check(scheme: Scheme, cap: int = DEFAULT_PRIVACY_CAP) -> dict[int, int]:
    """Every query array of the family must be an OA at the scheme's t."""
    return {i: scheme_oa_index(scheme, i, cap) for i in range(scheme.n)}


@dataclass
class CommAudit:
    protocol: str
    raw_bits: float
    expected_payload_bytes: int
    measured_payload_bytes: int
    framing_bytes: int
    per_server: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.expected_payload_bytes == self.measured_payload_bytes

    def to_lines(self) -> list[str]:
        return [
            f"comm {self.protocol}: {'PASS' if self.passed else 'FAIL'} "
            f"(raw {self.raw_bits:g} bits, payload "
            f"{self.measured_payload_bytes} bytes, expected "
            f"{self.expected_payload_bytes}, framing {self.framing_bytes} bytes)"
        ]

    def to_kv(self) -> dict:
        return {
            "suite": "comm",
            "protocol": self.protocol,
            "pass": self.passed,
            "raw_bits": self.raw_bits,
            "expected_payload_bytes": self.expected_payload_bytes,
            "measured_payload_bytes": self.measured_payload_bytes,
            "framing_bytes": self.framing_bytes,
        }


def comm_audit(scheme: Scheme, transcript) -> CommAudit:
    """Assert measured payload bytes match the codec widths exactly.

    Raises Mismatch naming the first differing server and direction.
    """
    cost = comm_cost(scheme)
    audit = CommAudit(
        protocol=scheme.name,
        raw_bits=cost.raw_bits,
        expected_payload_bytes=cost.payload_bytes,
        measured_payload_bytes=transcript.payload_bytes,
        framing_bytes=transcript.framing_bytes,
        per_server=[
            (e.server, e.query_payload_bytes, e.answer_payload_bytes)
            for e in transcript.entries
        ],
    )
    for entry in transcript.entries:
        if entry.query_payload_bytes != cost.level_bytes:
            raise Mismatch(
                f"server {entry.server}: query payload "
                f"{entry.query_payload_bytes} bytes != {cost.level_bytes}"
            )
        if entry.answer_payload_bytes != cost.answer_bytes:
            raise Mismatch(
                f"server {entry.server}: answer payload "
                f"{entry.answer_payload_bytes} bytes != {cost.answer_bytes}"
            )
    return audit


def check_answer_linearity(scheme: Scheme, x, q) -> None:
    """answer(x, q) must equal the sum over set bits of the unit-vector
    answers - the database encoding is linear."""
    ring = scheme.ring
    total = [ring.zero] * scheme.answer_dim
    for tau, bit in enumerate(x):
        if bit:
            unit = tuple(1 if j == tau else 0 for j in range(scheme.n))
            vec = answer(scheme, unit, q)
            total = [ring.add(a, v) for a, v in zip(total, vec)]
    direct = answer(scheme, x, q)
    if tuple(total) != direct:
        raise Mismatch(f"answer not linear at x={x}, q={q}")


def run_all_suites(scheme: Scheme, budget=DEFAULT_CORRECTNESS_BUDGET, cap=DEFAULT_PRIVACY_CAP):
    """Correctness + privacy + span + OA; returns (reports, all_passed)."""
    reports = []
    ok = True
    try:
        correctness = exhaustive_correctness(scheme, budget=budget)
    except BudgetExceeded:
        correctness = exhaustive_correctness(
            scheme, databases=list(structured_databases(scheme.n)), budget=budget
        )
    reports.append(correctness)
    ok &= correctness.passed
    privacy = exhaustive_privacy(scheme, cap=cap)
    reports.append(privacy)
    ok &= privacy.passed
    return reports, ok
