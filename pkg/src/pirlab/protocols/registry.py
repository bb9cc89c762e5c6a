"""Name-based construction of desk-scale scheme instances.

The registry performs the ingredient searches (matching families, decoding
polynomials, parity sets) with deterministic budgets and injects them into
the protocol builders, so a server and a client constructing the same named
configuration always agree on every derived object.
"""

from __future__ import annotations

from ..engine import Scheme
from ..errors import ParamError
from ..mv import (
    search_matching_family,
    sparse_decoding_poly_search,
    trivial_decoding_poly,
    two_subgroup,
    yekhanin_nice_sets,
)
from .cube import build_cgks
from .curve import build_lagrange, build_wy_hermite
from .mersenne import build_raghavendra, build_yekhanin
from .ring import build_dvir_gopi, build_efremenko, build_gks
from .toy import broken_demo, toy_instance

PROTOCOL_NAMES = (
    "toy",
    "cgks",
    "lagrange",
    "hermite",
    "yekhanin",
    "raghavendra",
    "efremenko",
    "dvir-gopi",
    "gks",
    "broken-demo",
)


def _require(config: dict, *keys: str) -> list:
    missing = [k for k in keys if config.get(k) is None]
    if missing:
        raise ParamError(f"missing parameter(s): {', '.join(missing)}")
    return [config[k] for k in keys]


def _mersenne_family(p: int, n: int, h: int, side: bool):
    return search_matching_family(
        p, h, two_subgroup(p), n, side_constraint=side
    )


def _canonical_family(m: int, n: int, h: int):
    from ..mv import canonical_set

    return search_matching_family(m, h, canonical_set(m), n)


def build_named(name: str, config: dict | None = None) -> Scheme:
    """Construct the named scheme from a flat parameter dict.

    Recognized keys: n, t, k, p, m, h, sparse_k, seed-independent search
    budgets are fixed.  Raises ParamError for unknown names or missing
    parameters.
    """
    config = dict(config or {})
    if name == "toy":
        return toy_instance()
    if name == "broken-demo":
        return broken_demo()
    if name == "cgks":
        (n,) = _require(config, "n")
        return build_cgks(n)
    if name == "lagrange":
        n, t, k, p = _require(config, "n", "t", "k", "p")
        return build_lagrange(n, t, k, p, h=config.get("h"))
    if name == "hermite":
        n, t, k, p = _require(config, "n", "t", "k", "p")
        return build_wy_hermite(n, t, k, p, h=config.get("h"))
    if name == "yekhanin":
        p = config.get("p", 7)
        n = config.get("n", 3)
        h = config.get("h", 3)
        family = _mersenne_family(p, n, h, side=True)
        return build_yekhanin(p, family, yekhanin_nice_sets(p))
    if name == "raghavendra":
        p = config.get("p", 7)
        n = config.get("n", 3)
        h = config.get("h", 3)
        family = _mersenne_family(p, n, h, side=True)
        return build_raghavendra(p, family)
    if name == "efremenko":
        m, p = _require(config, "m", "p")
        n = config.get("n", 3)
        h = config.get("h", 3)
        family = _canonical_family(m, n, h)
        sparse_k = config.get("sparse_k")
        if sparse_k:
            poly = sparse_decoding_poly_search(
                m, p, k_target=sparse_k, symmetry_reduction=True
            )
        else:
            poly = trivial_decoding_poly(m, p)
        return build_efremenko(m, p, family, poly)
    if name == "dvir-gopi":
        (m,) = _require(config, "m")
        n = config.get("n", 3)
        h = config.get("h", 3)
        return build_dvir_gopi(m, _canonical_family(m, n, h))
    if name == "gks":
        m, p = _require(config, "m", "p")
        n = config.get("n", 3)
        h = config.get("h", 3)
        family = _canonical_family(m * p, n, h)
        return build_gks(m, p, family)
    raise ParamError(f"unknown protocol {name!r}")


def desk_schemes() -> list[Scheme]:
    """The standard small instances used by the verification suites."""
    return [
        build_named("toy"),
        build_named("cgks", {"n": 8}),
        build_named("lagrange", {"n": 3, "t": 1, "k": 3, "p": 5}),
        build_named("hermite", {"n": 4, "t": 1, "k": 2, "p": 7}),
        build_named("yekhanin"),
        build_named("raghavendra"),
        build_named("efremenko", {"m": 6, "p": 7}),
        build_named("dvir-gopi", {"m": 6}),
        build_named("gks", {"m": 2, "p": 3}),
    ]
