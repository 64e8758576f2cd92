import pytest

from spectra.geometry import DomainPair, RadialProfile
from spectra.mesh import MeshParams


@pytest.fixture(scope="session")
def star_pair() -> DomainPair:
    """Three-fold star domain with a three-fold star obstacle."""
    return DomainPair(
        outer=RadialProfile(3, (1.0, -0.2)),
        inner=RadialProfile(3, (0.35, -0.1)),
    )


@pytest.fixture(scope="session")
def disk_pair() -> DomainPair:
    return DomainPair(
        outer=RadialProfile(3, (1.0,)),
        inner=RadialProfile(3, (0.3,)),
    )


@pytest.fixture(scope="session")
def coarse_params() -> MeshParams:
    """Cheap resolution for unit-level checks."""
    return MeshParams(target_h=0.05, refinement_levels=0)


@pytest.fixture(scope="session")
def medium_params() -> MeshParams:
    return MeshParams(target_h=0.03, refinement_levels=1)
