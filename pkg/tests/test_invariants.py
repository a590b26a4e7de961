from __future__ import annotations

import pytest

from algebra.cohomology import NonJordanError, cohomology_dims
from algebra.invariants import NonNilpotentError, invariant_profile, orbit_dim, power_chain
from algebra.tensor import StructureTensor, apply_basis_change
from catalog.loader import load_catalog
from catalog.models import AlgebraId
from catalog.profiles import ProfileCache
from scalars.field import ExactScalar


@pytest.fixture
def square():
    """e1e1 = e2."""
    return StructureTensor.from_products(2, {(0, 0): {1: 1}})


@pytest.fixture(scope="module")
def profiles():
    return ProfileCache(load_catalog())


class TestSmallAlgebras:
    def test_square_profile(self, square):
        profile = invariant_profile(square)
        assert profile.ann_dim == 1
        assert profile.power_dims == (2, 1, 0)
        assert profile.nilindex == 3
        assert profile.nilpotency_type == (1, 1)
        assert profile.der_dim == 2
        assert profile.orbit_dim == 2
        assert profile.center_dim == 2
        assert profile.associative
        assert profile.j2_dim == 1
        assert profile.aut_dim == profile.der_dim

    def test_square_coboundaries(self, square):
        z2, b2, h2 = cohomology_dims(square)
        assert b2 == 4 - 2
        assert h2 == z2 - b2

    def test_zero_algebra(self):
        profile = invariant_profile(StructureTensor.zero_algebra(2))
        assert profile.ann_dim == 2
        assert profile.power_dims == (2, 0)
        assert profile.nilindex == 2
        assert profile.nilpotency_type == (2,)
        assert profile.der_dim == 4
        assert profile.orbit_dim == 0
        assert (profile.z2_dim, profile.b2_dim, profile.h2_dim) == (6, 0, 6)

    def test_idempotent_is_not_nilpotent(self):
        with pytest.raises(NonNilpotentError):
            power_chain(StructureTensor.from_products(1, {(0, 0): {0: 1}}))

    def test_cohomology_needs_jordan(self):
        tensor = StructureTensor.from_products(2, {(0, 0): {1: 1}, (1, 1): {0: 1}})
        with pytest.raises(NonJordanError):
            cohomology_dims(tensor)

    def test_profile_invariant_under_basis_change(self, square):
        g = [[ExactScalar(1), ExactScalar(3)], [ExactScalar(0), ExactScalar(-2)]]
        assert invariant_profile(apply_basis_change(square, g)) == invariant_profile(square)

    def test_field_value_aliases(self, square):
        profile = invariant_profile(square, with_cohomology=False)
        assert profile.field_value("aut_dim") == 2
        assert profile.field_value("j2_dim") == 1
        assert profile.field_value("nilindex") == 3
        assert profile.h2_dim is None

    def test_to_dict_lists(self, square):
        data = invariant_profile(square, with_cohomology=False).to_dict()
        assert data["power_dims"] == [2, 1, 0]
        assert data["j2_dim"] == 1


class TestCatalogFacts:
    def test_orbit_dimensions(self, profiles):
        assert profiles.get("J_21").orbit_dim == 22
        assert profiles.get("J_22").orbit_dim == 21
        assert profiles.get("J_40").orbit_dim == 21

    def test_family_sample_orbit(self, profiles):
        sample = AlgebraId.of("J_27", {"e": "2", "f": "3"})
        # two parameters lift 19 to the 21 of the family union
        assert profiles.get(sample).orbit_dim == 19

    def test_annihilators(self, profiles):
        assert profiles.get("J_40").ann_dim == 2
        assert profiles.get(AlgebraId.of("J_27", {"e": "2", "f": "3"})).ann_dim == 1

    def test_jacobi(self, profiles):
        assert profiles.get("J_12").jacobi_dim == 4
        assert profiles.get("J_13").jacobi_dim == 3

    def test_h2(self, profiles):
        assert profiles.get("J_19", with_cohomology=True).h2_dim == 6
        assert profiles.get("J_11", with_cohomology=True).h2_dim == 15

    def test_cache_upgrades_to_cohomology(self):
        cache = ProfileCache(load_catalog())
        plain = cache.get("eps_25")
        assert plain.h2_dim is None
        full = cache.get("eps_25", with_cohomology=True)
        assert full.orbit_dim == 0
        assert full.h2_dim is not None
        assert len(cache) == 1

    def test_orbit_dim_helper(self, profiles):
        tensor = profiles.catalog.instantiate("eps_1")
        assert orbit_dim(tensor) == 25 - 5
