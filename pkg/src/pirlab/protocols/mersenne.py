"""Three-server schemes over a Mersenne prime p = 2^r - 1.

Queries are shifts w + d_j * v_i of a uniform vector w in F_p^h along the
matched vector v_i, at the three offsets d = (0, 1, gamma) where gamma
satisfies 1 + g + g^gamma = 0 in F_{2^r}.

The indicator variant answers with p parity bits - the memberships of
<u_tau, z + rho * 1> in the parity-balanced set S0 for every shift rho -
and the client selects one bit per server.  The exponent variant answers
with the single field element g^<u_tau, z>; there the three-term polynomial
1 + theta + theta^gamma vanishes on g^<2> and kills every off-index term.
"""

from __future__ import annotations

from ..algebra import ExtField, PrimeField, SparsePoly
from ..engine import Codec, Scheme
from ..errors import DecodingPolyInvalid, ParamError
from ..mv import MatchingFamily, NiceSets, check_matching_family, two_subgroup


def _validate_family(p: int, family: MatchingFamily, side_constraint: bool):
    subgroup = set(two_subgroup(p))
    if family.m != p:
        raise ParamError(f"family lives in Z_{family.m}^h, expected Z_{p}^h")
    if not set(family.target_set) <= subgroup:
        raise ParamError("family target set must lie in the subgroup <2>")
    problems = check_matching_family(family)
    if problems:
        raise ParamError("invalid matching family: " + "; ".join(problems))
    if side_constraint:
        for i, u in enumerate(family.u):
            if sum(u) % p == 0:
                raise ParamError(f"<u_{i}, 1> = 0; the shift argument needs != 0")


def _field_with_generator(p: int):
    r = len(two_subgroup(p))
    f2r = ExtField(2, r)
    g = f2r.gen
    gamma = f2r.dlog(g, f2r.add(f2r.one, g))
    return r, f2r, g, gamma


def build_yekhanin(p: int, family: MatchingFamily, nice: NiceSets) -> Scheme:
    _validate_family(p, family, side_constraint=True)
    r, f2r, g, gamma = _field_with_generator(p)
    if nice.gamma != gamma:
        raise ParamError(f"nice sets built for gamma={nice.gamma}, field gives {gamma}")
    if not nice.s0:
        raise ParamError("S0 must be nonempty")
    h, n = family.h, family.n
    offsets = (0, 1, gamma)
    s0_set = frozenset(nice.s0)
    field2 = PrimeField(2)
    u_sums = [sum(u) % p for u in family.u]

    def row(i, ell):
        v = family.v[i]
        return tuple(
            tuple((w + d * vc) % p for w, vc in zip(ell, v)) for d in offsets
        )

    def alpha(tau, z):
        base = sum(uc * zc for uc, zc in zip(family.u[tau], z)) % p
        step = u_sums[tau]
        return tuple(
            1 if (base + rho * step) % p in s0_set else 0 for rho in range(p)
        )

    def recon(i, ell):
        base = sum(uc * wc for uc, wc in zip(family.u[i], ell)) % p
        step = u_sums[i]
        # <u_i, 1> != 0 makes rho -> base + rho*step a bijection of F_p,
        # so some rho lands in S0; take the smallest.
        rho = next(r0 for r0 in range(p) if (base + r0 * step) % p in s0_set)
        selector = tuple(1 if j == rho else 0 for j in range(p))
        return (selector,) * 3, 1

    return Scheme(
        name="yekhanin",
        n=n,
        k=3,
        t=1,
        ring=field2,
        answer_dim=p,
        level_codec=Codec.uints(p, h),
        answer_codec=Codec.bit_groups(p),
        radices=(p,) * h,
        row=row,
        alpha=alpha,
        recon=recon,
        report={
            "protocol": "yekhanin",
            "n": n,
            "k": 3,
            "t": 1,
            "p": p,
            "r": r,
            "h": h,
            "gamma": gamma,
            "offsets": offsets,
            "s0": tuple(nice.s0),
            "s1": tuple(nice.s1),
            "family_u": family.u,
            "family_v": family.v,
            "levels": f"F_{p}^{h}",
            "answers": f"F_2^{p} membership vector",
        },
    )


def build_raghavendra(p: int, family: MatchingFamily) -> Scheme:
    _validate_family(p, family, side_constraint=False)
    r, f2r, g, gamma = _field_with_generator(p)
    h, n = family.h, family.n
    offsets = (0, 1, gamma)
    poly = SparsePoly(f2r, ((0, f2r.one), (1, f2r.one), (gamma, f2r.one)))
    for delta in two_subgroup(p):
        val = poly.evaluate(f2r.pow(g, delta))
        if val != f2r.zero:
            raise DecodingPolyInvalid(f"1 + theta + theta^{gamma} != 0 at g^{delta}")
    if poly.evaluate(f2r.one) != f2r.one:
        raise DecodingPolyInvalid("polynomial must take value 1 at theta = 1")

    gpow = [f2r.one]
    for _ in range(p - 1):
        gpow.append(f2r.mul(gpow[-1], g))

    def row(i, ell):
        v = family.v[i]
        return tuple(
            tuple((w + d * vc) % p for w, vc in zip(ell, v)) for d in offsets
        )

    def alpha(tau, z):
        e = sum(uc * zc for uc, zc in zip(family.u[tau], z)) % p
        return (gpow[e],)

    def recon(i, ell):
        e = sum(uc * wc for uc, wc in zip(family.u[i], ell)) % p
        coeff = gpow[-e % p]
        return ((coeff,),) * 3, f2r.one

    return Scheme(
        name="raghavendra",
        n=n,
        k=3,
        t=1,
        ring=f2r,
        answer_dim=1,
        level_codec=Codec.uints(p, h),
        answer_codec=Codec.bit_groups(r),
        radices=(p,) * h,
        row=row,
        alpha=alpha,
        recon=recon,
        report={
            "protocol": "raghavendra",
            "n": n,
            "k": 3,
            "t": 1,
            "p": p,
            "r": r,
            "h": h,
            "gamma": gamma,
            "offsets": offsets,
            "family_u": family.u,
            "family_v": family.v,
            "levels": f"F_{p}^{h}",
            "answers": f"F_(2^{r})",
        },
    )
