"""Two-server scheme from the cube / covering-code construction.

The database is laid out as a cube of side h = ceil(n^(1/3)); each index is
a cell (i1, i2, i3).  A query is a triple of subsets of [h], encoded as
h-bit masks, and the second server receives the first server's triple with
the bits i1, i2, i3 toggled.  An answer carries 3h + 1 parity bits: the
parity of x over the queried box, plus the parities over every
single-coordinate perturbation of the box along each axis.  Selecting the
box bit and the i1/i2/i3 perturbation bits from both answers and XOR-ing
recovers x_i; the total payload is exactly 12h + 2 raw bits.
"""

from __future__ import annotations

from ..algebra import PrimeField
from ..engine import Codec, Scheme
from ..errors import ParamError


def side_length(n: int) -> int:
    h = 1
    while h**3 < n:
        h += 1
    return h


def build_cgks(n: int) -> Scheme:
    if n < 1:
        raise ParamError("n must be >= 1")
    h = side_length(n)
    zeta = 2**h
    field = PrimeField(2)
    dim = 3 * h + 1

    def coords(idx: int) -> tuple[int, int, int]:
        return idx // (h * h), (idx // h) % h, idx % h

    def row(i, ell):
        l1, l2, l3 = ell
        i1, i2, i3 = coords(i)
        return (
            (l1, l2, l3),
            (l1 ^ (1 << i1), l2 ^ (1 << i2), l3 ^ (1 << i3)),
        )

    def alpha(tau, z):
        mask_u, mask_v, mask_w = z
        t1, t2, t3 = coords(tau)
        in_u = (mask_u >> t1) & 1
        in_v = (mask_v >> t2) & 1
        in_w = (mask_w >> t3) & 1
        bits = [in_u & in_v & in_w]
        for c in range(h):
            bits.append((((mask_u ^ (1 << c)) >> t1) & 1) & in_v & in_w)
        for c in range(h):
            bits.append(in_u & (((mask_v ^ (1 << c)) >> t2) & 1) & in_w)
        for c in range(h):
            bits.append(in_u & in_v & (((mask_w ^ (1 << c)) >> t3) & 1))
        return tuple(bits)

    def recon(i, ell):
        i1, i2, i3 = coords(i)
        block = [0] * dim
        block[0] = 1
        block[1 + i1] = 1
        block[1 + h + i2] = 1
        block[1 + 2 * h + i3] = 1
        lam_block = tuple(block)
        return (lam_block, lam_block), 1

    return Scheme(
        name="cgks",
        n=n,
        k=2,
        t=1,
        ring=field,
        answer_dim=dim,
        level_codec=Codec.uints(zeta, 3),
        answer_codec=Codec.bit_groups(1, h, h, h),
        radices=(zeta, zeta, zeta),
        row=row,
        alpha=alpha,
        recon=recon,
        report={
            "protocol": "cgks",
            "n": n,
            "k": 2,
            "t": 1,
            "h": h,
            "levels": f"triples of subsets of [{h}] (3 x {h}-bit masks)",
            "answers": f"F_2^{dim} parity vector",
            "raw_bits": float(12 * h + 2),
        },
    )
