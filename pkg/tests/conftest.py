import pytest

from pirlab.mv import (
    canonical_set,
    search_matching_family,
    trivial_decoding_poly,
    two_subgroup,
    yekhanin_nice_sets,
)


@pytest.fixture(scope="session")
def mersenne_family():
    return search_matching_family(7, 3, two_subgroup(7), 3, side_constraint=True)


@pytest.fixture(scope="session")
def canonical_family_6():
    return search_matching_family(6, 3, canonical_set(6), 3)


@pytest.fixture(scope="session")
def nice_sets_7():
    return yekhanin_nice_sets(7)


@pytest.fixture(scope="session")
def poly_6_7():
    return trivial_decoding_poly(6, 7)
