import pytest

from faultshield import named_params


@pytest.fixture(params=["kyber", "dilithium", "falcon", "ntru"])
def pset(request):
    return named_params(request.param)
