import cmath
import math

import pytest
from hypothesis import settings

from bianchi.ring import SUPPORTED_D, ring_params

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def omega_complex(d: int) -> complex:
    """w as a complex number, straight from its definition."""
    root = cmath.sqrt(d)
    return (1 + root) / 2 if d % 4 == 1 else root


def as_complex(q) -> complex:
    return q.x + q.y * omega_complex(q.params.d)


@pytest.fixture(params=SUPPORTED_D, ids=lambda d: f"d{d}")
def params(request):
    return ring_params(request.param)


def close(a: complex, b: complex, tol=1e-9) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


__all__ = ["omega_complex", "as_complex", "close", "math"]
