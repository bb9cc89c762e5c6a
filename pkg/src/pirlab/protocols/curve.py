"""t-private schemes from polynomial curves over F_p.

Both constructions hide the retrieval index on a random degree-t curve
q(theta) = u_i + R * (theta, ..., theta^t) through the index's exponent
vector u_i, and query the curve at theta = 1 .. k.  Each server evaluates
the database polynomial F_x(z) = sum x_tau * z^(u_tau) at its point; the
restriction of F_x to the curve is a low-degree univariate polynomial
phi(theta) whose value at 0 is exactly x_i.

The plain variant recovers phi(0) by Lagrange interpolation from k values
(degree bound d = floor((k-1)/t)).  The derivative variant additionally
ships the h partial derivatives of F_x, which yield phi'(j) through the
chain rule, doubling the usable constraints (d = floor((2k-1)/t)).
"""

from __future__ import annotations

import itertools
import math

from ..algebra import PrimeField, try_solve_mod_prime
from ..engine import Codec, Scheme
from ..errors import ParamError, SingularMatrix


def weight_d_vectors(h: int, d: int, n: int) -> list[tuple[int, ...]]:
    """First n indicator vectors of d-subsets of [h], in colexicographic
    order of the subsets (deterministic and reproducible)."""
    if math.comb(h, d) < n:
        raise ParamError(f"C({h},{d}) = {math.comb(h, d)} < n = {n}")
    subsets = sorted(itertools.combinations(range(h), d), key=lambda s: s[::-1])
    vectors = []
    for subset in subsets[:n]:
        vec = [0] * h
        for c in subset:
            vec[c] = 1
        vectors.append(tuple(vec))
    return vectors


def minimal_h(d: int, n: int) -> int:
    h = max(d, 1)
    while math.comb(h, d) < n:
        h += 1
    return h


def _curve_points(u_i, ell, h, t, k, p):
    """Evaluate q(theta) = u_i + R*(theta..theta^t) at theta = 1..k."""
    rows = [ell[c * t : (c + 1) * t] for c in range(h)]
    points = []
    for j in range(1, k + 1):
        powers = [pow(j, b, p) for b in range(1, t + 1)]
        points.append(
            tuple(
                (u_i[c] + sum(r * w for r, w in zip(rows[c], powers))) % p
                for c in range(h)
            )
        )
    return tuple(points)


def build_lagrange(n: int, t: int, k: int, p: int, h: int | None = None) -> Scheme:
    field = PrimeField(p)
    if p <= k:
        raise ParamError(f"need prime p > k, got p={p}, k={k}")
    if not 1 <= t < k:
        raise ParamError("need 1 <= t < k")
    d = (k - 1) // t
    if d < 1:
        raise ParamError(f"degree bound floor((k-1)/t) = {d} < 1")
    if h is None:
        h = minimal_h(d, n)
    u_vectors = weight_d_vectors(h, d, n)
    supports = [tuple(c for c, bit in enumerate(u) if bit) for u in u_vectors]

    # Lagrange basis values at 0 for the points 1..k; independent of (i, ell).
    lam = []
    for j in range(1, k + 1):
        val = 1
        for j2 in range(1, k + 1):
            if j2 != j:
                val = val * j2 % p * field.inv((j2 - j) % p) % p
        lam.append((val,))
    lam_tuple = (tuple(lam), 1)

    def row(i, ell):
        return _curve_points(u_vectors[i], ell, h, t, k, p)

    def alpha(tau, z):
        acc = 1
        for c in supports[tau]:
            acc = acc * z[c] % p
        return (acc,)

    def recon(i, ell):
        return lam_tuple

    return Scheme(
        name="lagrange",
        n=n,
        k=k,
        t=t,
        ring=field,
        answer_dim=1,
        level_codec=Codec.uints(p, h),
        answer_codec=Codec.uints(p, 1),
        radices=(p,) * (h * t),
        row=row,
        alpha=alpha,
        recon=recon,
        report={
            "protocol": "lagrange",
            "n": n,
            "k": k,
            "t": t,
            "p": p,
            "h": h,
            "d": d,
            "levels": f"F_{p}^{h}",
            "answers": f"F_{p}",
            "lambda": tuple(l[0] for l in lam),
        },
    )


def hermite_basis_matrix(k: int, p: int, points=None) -> list[list[int]]:
    """The 2k x 2k evaluation matrix mapping the coefficients of a degree
    < 2k polynomial to (phi(theta_1), phi'(theta_1), ..., phi(theta_k),
    phi'(theta_k)), over F_p."""
    if points is None:
        points = list(range(1, k + 1))
    matrix = []
    for c in range(2 * k):
        mrow = []
        for theta in points:
            mrow.append(pow(theta, c, p))
            mrow.append(c * pow(theta, c - 1, p) % p if c else 0)
        matrix.append(mrow)
    return matrix


def hermite_recovery_vector(k: int, p: int, points=None) -> list[int]:
    """mu with M * mu = e1: phi(0) = (phi(th_1), phi'(th_1), ...) . mu."""
    matrix = hermite_basis_matrix(k, p, points)
    rhs = [1] + [0] * (2 * k - 1)
    mu = try_solve_mod_prime(matrix, rhs, p)
    if mu is None:
        raise SingularMatrix(
            f"evaluation matrix singular over F_{p}; the field is too small"
        )
    return mu


def build_wy_hermite(n: int, t: int, k: int, p: int, h: int | None = None) -> Scheme:
    field = PrimeField(p)
    if p <= 2 * k - 1:
        raise ParamError(f"need prime p > 2k-1, got p={p}, k={k}")
    if not 1 <= t < k:
        raise ParamError("need 1 <= t < k")
    d = (2 * k - 1) // t
    if h is None:
        h = minimal_h(d, n)
    u_vectors = weight_d_vectors(h, d, n)
    supports = [tuple(c for c, bit in enumerate(u) if bit) for u in u_vectors]
    mu = hermite_recovery_vector(k, p)

    def row(i, ell):
        return _curve_points(u_vectors[i], ell, h, t, k, p)

    def alpha(tau, z):
        support = supports[tau]
        value = 1
        for c in support:
            value = value * z[c] % p
        out = [value]
        support_set = set(support)
        for c in range(h):
            if c not in support_set:
                out.append(0)
                continue
            partial = 1
            for c2 in support:
                if c2 != c:
                    partial = partial * z[c2] % p
            out.append(partial)
        return tuple(out)

    def recon(i, ell):
        rows = [ell[c * t : (c + 1) * t] for c in range(h)]
        blocks = []
        for j in range(1, k + 1):
            # Tangent of the curve at theta = j: R * (1, 2j, ..., t*j^(t-1)).
            dpow = [(b + 1) * pow(j, b, p) % p for b in range(t)]
            tangent = [
                sum(r * w for r, w in zip(rows[c], dpow)) % p for c in range(h)
            ]
            m_val = mu[2 * (j - 1)]
            m_der = mu[2 * (j - 1) + 1]
            blocks.append(
                (m_val,) + tuple(m_der * tc % p for tc in tangent)
            )
        return tuple(blocks), 1

    return Scheme(
        name="hermite",
        n=n,
        k=k,
        t=t,
        ring=field,
        answer_dim=h + 1,
        level_codec=Codec.uints(p, h),
        answer_codec=Codec.uints(p, h + 1),
        radices=(p,) * (h * t),
        row=row,
        alpha=alpha,
        recon=recon,
        report={
            "protocol": "hermite",
            "n": n,
            "k": k,
            "t": t,
            "p": p,
            "h": h,
            "d": d,
            "levels": f"F_{p}^{h}",
            "answers": f"F_{p}^{h + 1} (value plus gradient)",
            "mu": tuple(mu),
        },
    )
