import os

import pytest
from hypothesis import HealthCheck, settings

from ellsurf.exactalg import GF, QQ, Poly

# every property suite runs at least 200 cases; deadlines off since some
# cases solve small Groebner systems
settings.register_profile(
    "ellsurf",
    max_examples=200,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large, HealthCheck.filter_too_much],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ellsurf"))

PROPERTY_CASES = 200


@pytest.fixture
def t():
    return Poly.gen(QQ)


def poly_t(F, coeffs):
    return Poly(F, coeffs, "t")


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("ELLSURF_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("ELLSURF_OFFLINE", "1")


__all__ = ["GF", "PROPERTY_CASES", "poly_t"]
