import pytest
from hypothesis import settings

from fanokstab.construction_b import all_families

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def families():
    return {f.family_id: f for f in all_families()}


@pytest.fixture(scope="session")
def reports(families):
    from fanokstab.beta import beta_report

    return {k: beta_report(f) for k, f in families.items()}
