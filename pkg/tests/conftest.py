import numpy as np
import pytest

from quasistar.models import (
    build_function_model,
    build_group_algebra,
    build_matrix_algebra,
    build_product_group_algebra,
    build_symmetric_group_algebra,
)

MODEL_FACTORIES = {
    "Z1": lambda: build_group_algebra(1),
    "Z2": lambda: build_group_algebra(2),
    "Z5": lambda: build_group_algebra(5),
    "Z2xZ3": lambda: build_product_group_algebra(2, 3),
    "S3": lambda: build_symmetric_group_algebra(3),
    "M2": lambda: build_matrix_algebra(2),
    "grid5": lambda: build_function_model(5, [0.1, 0.3, 0.2, 0.25, 0.15]),
}


@pytest.fixture(params=sorted(MODEL_FACTORIES))
def model(request):
    return MODEL_FACTORIES[request.param]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def basis(n, k):
    e = np.zeros(n, dtype=complex)
    e[k] = 1.0
    return e
