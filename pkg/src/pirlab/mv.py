"""Ingredient factory for the matching-vector protocols.

Produces canonical sets, matching-vector families (by deterministic
brute-force search with an independent invariant checker), decoding
polynomials (the product construction and a sparse search), and the
parity-constrained set pair needed by the Mersenne-prime indicator protocol.

The searches here replace constructions that only exist asymptotically in
the literature; at desk scale a verified search result is just as good and
considerably easier to audit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    ExtField,
    PrimeField,
    SparsePoly,
    crt_combine,
    find_order_element,
    is_prime,
    squarefree_factors,
    try_solve_mod_prime,
)
from .errors import (
    DecodingPolyInvalid,
    Exhausted,
    NiceSetError,
    ParamError,
)

DEFAULT_VECTOR_CAP = 10**6
DEFAULT_SEARCH_BUDGET = 5_000_000


def canonical_set(m: int) -> tuple[int, ...]:
    """The 2^r - 1 nonzero residues of Z_m whose residue mod every prime
    factor lies in {0, 1}, for squarefree m with r prime factors."""
    factors = squarefree_factors(m)
    out = []
    for pattern in itertools.product((0, 1), repeat=len(factors)):
        if any(pattern):
            out.append(crt_combine(pattern, factors))
    return tuple(sorted(out))


@dataclass(frozen=True)
class MatchingFamily:
    """Vector pairs with <u_i, v_i> = 0 and all cross inner products
    confined to the target set (in both directions)."""

    m: int
    h: int
    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    target_set: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.u)

    def take(self, n: int) -> "MatchingFamily":
        if n > self.n:
            raise ParamError(f"family has only {self.n} pairs, need {n}")
        return MatchingFamily(self.m, self.h, self.u[:n], self.v[:n], self.target_set)


def _dot_mod(a: Sequence[int], b: Sequence[int], m: int) -> int:
    return sum(x * y for x, y in zip(a, b)) % m


def check_matching_family(family: MatchingFamily) -> list[str]:
    """Independent invariant checker; returns human-readable violations.

    Deliberately shares no code with the search: it just recomputes every
    ordered inner product from the definition.
    """
    violations = []
    target = set(family.target_set)
    for i in range(family.n):
        d = _dot_mod(family.u[i], family.v[i], family.m)
        if d != 0:
            violations.append(f"<u_{i}, v_{i}> = {d} != 0")
    for i in range(family.n):
        for j in range(family.n):
            if i == j:
                continue
            d = _dot_mod(family.u[i], family.v[j], family.m)
            if d not in target:
                violations.append(f"<u_{i}, v_{j}> = {d} not in target set")
    return violations


def search_matching_family(
    m: int,
    h: int,
    target_set: Sequence[int],
    n_target: int,
    side_constraint: bool = False,
    vector_cap: int = DEFAULT_VECTOR_CAP,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> MatchingFamily:
    """Greedy backtracking search for a size-n_target matching family in
    Z_m^h, deterministic in the lexicographic vector enumeration.

    ``side_constraint`` additionally requires <u_i, 1> != 0, which the
    Mersenne indicator protocol needs for its shift argument.  Raises
    Exhausted when the candidate space (or the node budget) runs out below
    the target.
    """
    if m**h > vector_cap:
        raise ParamError(f"m^h = {m**h} exceeds the enumeration cap {vector_cap}")
    if n_target < 1:
        raise ParamError("n_target must be >= 1")
    target = set(x % m for x in target_set)
    if 0 in target:
        raise ParamError("target set must exclude 0")
    vectors = list(itertools.product(range(m), repeat=h))
    zero = (0,) * h
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for u in vectors:
        # A zero u or v forces a cross product of 0, impossible once the
        # family has a second member.
        if n_target > 1 and u == zero:
            continue
        if side_constraint and sum(u) % m == 0:
            continue
        for v in vectors:
            if n_target > 1 and v == zero:
                continue
            if _dot_mod(u, v, m) == 0:
                pairs.append((u, v))

    chosen: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    visited = 0

    def compatible(u, v) -> bool:
        for u2, v2 in chosen:
            if _dot_mod(u, v2, m) not in target:
                return False
            if _dot_mod(u2, v, m) not in target:
                return False
        return True

    def extend(start: int) -> bool:
        nonlocal visited
        if len(chosen) == n_target:
            return True
        for idx in range(start, len(pairs)):
            visited += 1
            if visited > budget:
                return False
            u, v = pairs[idx]
            if compatible(u, v):
                chosen.append((u, v))
                if extend(idx + 1):
                    return True
                chosen.pop()
        return False

    if not extend(0):
        raise Exhausted(
            f"no size-{n_target} family found in Z_{m}^{h} "
            f"({visited} nodes visited)"
        )
    family = MatchingFamily(
        m=m,
        h=h,
        u=tuple(u for u, _ in chosen),
        v=tuple(v for _, v in chosen),
        target_set=tuple(sorted(target)),
    )
    problems = check_matching_family(family)
    if problems:  # pragma: no cover - guards against search bugs
        raise Exhausted("search returned an invalid family: " + "; ".join(problems))
    return family


@dataclass(frozen=True)
class DecodingPoly:
    """A sparse polynomial over F_p vanishing on {g^d : d in the canonical
    set of m} and normalized to take value 1 at theta = 1."""

    m: int
    p: int
    g: int
    monomials: tuple[tuple[int, int], ...]  # (exponent in Z_m, coeff in F_p)

    @property
    def k(self) -> int:
        return len(self.monomials)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.monomials)

    @property
    def coefficients(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.monomials)

    def as_sparse_poly(self, field: PrimeField) -> SparsePoly:
        return SparsePoly(field, self.monomials)

    def validate(self) -> None:
        """Re-verify the defining identities with the generic evaluator."""
        field = PrimeField(self.p)
        poly = self.as_sparse_poly(field)
        for delta in canonical_set(self.m):
            value = poly.evaluate(pow(self.g, delta, self.p))
            if value != 0:
                raise DecodingPolyInvalid(
                    f"P(g^{delta}) = {value} != 0 (m={self.m}, p={self.p})"
                )
        if poly.evaluate(1) != 1:
            raise DecodingPolyInvalid(f"P(1) = {poly.evaluate(1)} != 1")


def trivial_decoding_poly(m: int, p: int, g: int | None = None) -> DecodingPoly:
    """The product construction prod (theta - g^d) / prod (1 - g^d) over the
    canonical set, with at most 2^r monomials."""
    field = PrimeField(p)
    if g is None:
        g = find_order_element(field, m)
    s_m = canonical_set(m)
    # Dense expansion of the monic product, lowest degree first.
    coeffs = [1]
    for delta in s_m:
        root = pow(g, delta, p)
        new = [0] * (len(coeffs) + 1)
        for k, c in enumerate(coeffs):
            new[k + 1] = (new[k + 1] + c) % p
            new[k] = (new[k] - c * root) % p
        coeffs = new
    at_one = sum(coeffs) % p
    scale = field.inv(at_one)
    monomials = tuple(
        (d, c * scale % p) for d, c in enumerate(coeffs) if c * scale % p
    )
    poly = DecodingPoly(m=m, p=p, g=g, monomials=monomials)
    poly.validate()
    return poly


def sparse_decoding_poly_search(
    m: int,
    p: int,
    g: int | None = None,
    k_target: int = 3,
    symmetry_reduction: bool = False,
    budget: int | None = None,
) -> DecodingPoly:
    """Search for a decoding polynomial with k_target < 2^r monomials.

    Exponent subsets of Z_m are enumerated lexicographically; for each, the
    root constraints plus the normalization P(1) = 1 form a small linear
    system whose first consistent solution wins.  With
    ``symmetry_reduction`` on, only subsets containing exponent 0 are tried:
    multiplying a solution by theta^(-d_min) shifts its exponents to include
    0 without changing the roots or P(1), so this restriction loses nothing
    while shrinking the space by a factor of about m / k.  (Scaling the
    exponent set by a unit of Z_m is NOT a symmetry: it moves the root set
    off the canonical powers, so no scaling dedup is applied.)
    """
    r = len(squarefree_factors(m))
    if not 1 <= k_target < 2**r:
        raise ParamError(
            f"k_target must be in [1, 2^{r}) = [1, {2**r}); "
            f"the product construction already achieves 2^{r}"
        )
    field = PrimeField(p)
    if g is None:
        g = find_order_element(field, m)
    s_m = canonical_set(m)
    gpow = [1] * m
    for j in range(1, m):
        gpow[j] = gpow[j - 1] * g % p

    def try_exponents(exps: tuple[int, ...]) -> DecodingPoly | None:
        rows = [[gpow[delta * d % m] for d in exps] for delta in s_m]
        rows.append([1] * len(exps))
        rhs = [0] * len(s_m) + [1]
        coeffs = try_solve_mod_prime(rows, rhs, p)
        if coeffs is None or any(c == 0 for c in coeffs):
            return None
        monomials = tuple(sorted(zip(exps, coeffs)))
        poly = DecodingPoly(m=m, p=p, g=g, monomials=monomials)
        poly.validate()
        return poly

    if symmetry_reduction:
        candidates = (
            (0,) + rest for rest in itertools.combinations(range(1, m), k_target - 1)
        )
    else:
        candidates = itertools.combinations(range(m), k_target)
    tried = 0
    for exps in candidates:
        tried += 1
        if budget is not None and tried > budget:
            raise Exhausted(f"sparse search budget {budget} exhausted")
        poly = try_exponents(exps)
        if poly is not None:
            return poly
    raise Exhausted(
        f"no {k_target}-monomial decoding polynomial for m={m} over F_{p} "
        f"({tried} exponent sets tried)"
    )


@dataclass(frozen=True)
class NiceSets:
    """The (S0, S1) pair with the even-intersection property
    |S0 ^ (sigma + delta * S1)| = 0 mod 2 for all shifts sigma and all
    delta in the power-of-two subgroup."""

    s0: tuple[int, ...]
    s1: tuple[int, ...]
    gamma: int


def two_subgroup(p: int) -> tuple[int, ...]:
    """The subgroup <2> = {1, 2, 4, ...} of F_p^* for Mersenne p = 2^r - 1."""
    r = (p + 1).bit_length() - 1
    if 2**r - 1 != p or not is_prime(p):
        raise ParamError(f"{p} is not a Mersenne prime")
    return tuple(pow(2, j, p) for j in range(r))


def yekhanin_nice_sets(p: int) -> NiceSets:
    """Compute (S0, S1 = {0, 1, gamma}) for a Mersenne prime p = 2^r - 1.

    gamma satisfies 1 + g + g^gamma = 0 in F_{2^r}; S0 is the support of
    the first vector in a deterministic basis of the dual of the span of
    the incidence vectors of all sets sigma + delta * S1.
    """
    subgroup = two_subgroup(p)
    r = len(subgroup)
    f2r = ExtField(2, r)
    g = f2r.gen
    gamma = f2r.dlog(g, f2r.add(f2r.one, g))
    s1 = (0, 1, gamma)
    rows = []
    for sigma in range(p):
        for delta in subgroup:
            vec = [0] * p
            for s in s1:
                vec[(sigma + delta * s) % p] = 1
            rows.append(vec)
    from .algebra import kernel_mod_prime

    basis = kernel_mod_prime(rows, 2)
    for vec in basis:
        support = tuple(i for i, b in enumerate(vec) if b)
        if support:
            return NiceSets(s0=support, s1=s1, gamma=gamma)
    raise NiceSetError(f"the dual space for p={p} contains no nonzero vector")


def k_r_table(r: int) -> int:
    """Server counts achieved by the known good Mersenne moduli."""
    if r < 2:
        raise ParamError("r must be >= 2")
    if r <= 103:
        if r % 2 == 0:
            return 3 ** (r // 2)
        return 8 * 3 ** ((r - 3) // 2)
    return 3**51 * 2 ** (r - 102)
