import pytest

from bipolar_blowup import geometry
from bipolar_blowup.boundary_data import harmonic_extension
from bipolar_blowup.objs.field_objs import BoundaryKind, FourierBoundaryData
from bipolar_blowup.objs.geometry_objs import DiskPairGeometry

R_I = 2.0
R_E = 5.0


def make_frame(eps: float, r_i: float = R_I, r_e: float = R_E):
    return geometry.derive_frame(DiskPairGeometry(r_i=r_i, r_e=r_e, eps=eps))


def make_field(kind: BoundaryKind, cos_coeffs=(1.0,), sin_coeffs=()):
    return harmonic_extension(FourierBoundaryData(kind=kind, r_e=R_E, cos_coeffs=cos_coeffs, sin_coeffs=sin_coeffs))


@pytest.fixture(scope="session")
def frame():
    """r_i = 2, r_e = 5, eps = 1/50."""
    return make_frame(1.0 / 50.0)


@pytest.fixture(scope="session")
def wide_frame():
    """r_i = 2, r_e = 5, eps = 1/8."""
    return make_frame(1.0 / 8.0)


@pytest.fixture(scope="session")
def cos_dirichlet():
    return make_field(BoundaryKind.DIRICHLET)


@pytest.fixture(scope="session")
def cos_neumann():
    return make_field(BoundaryKind.NEUMANN)


@pytest.fixture(scope="session")
def balanced_dirichlet():
    """g_d = cos t + cos(2t) / 2, whose gradient vanishes at the near-touch point."""
    return make_field(BoundaryKind.DIRICHLET, cos_coeffs=(1.0, 0.5))
