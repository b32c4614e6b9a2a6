import os

import pytest

from oacone import DesignSpace, constraint_matrix, hilbert_basis, read_basis, write_basis

CACHE_DIR = os.path.join(os.path.dirname(__file__), "_cache")

TABLE1_HISTOGRAM = {8: 60, 12: 224, 16: 162, 20: 960, 24: 7680, 28: 8384, 32: 5760, 36: 2912}


@pytest.fixture(scope="session")
def design_2p5():
    return DesignSpace((2, 2, 2, 2, 2))


@pytest.fixture(scope="session")
def basis_2p5(design_2p5):
    """The Hilbert basis of OA(., 2^5, 2), computed once and cached on disk."""
    os.makedirs(CACHE_DIR, exist_ok=True)
    path = os.path.join(CACHE_DIR, "basis_2p5_t2.txt")
    if os.path.exists(path):
        basis = read_basis(path, design_2p5, 2)
        if basis.size_histogram() == TABLE1_HISTOGRAM:
            return basis
    matrix = constraint_matrix(design_2p5, 2)
    basis = hilbert_basis(matrix)
    write_basis(basis, path)
    return basis


@pytest.fixture(scope="session")
def basis_2p5_path(basis_2p5):
    return os.path.join(CACHE_DIR, "basis_2p5_t2.txt")
