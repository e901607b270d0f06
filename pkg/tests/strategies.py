"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from qjacobi.algebra import Subalgebra, basis_monomials, random_homogeneous


def _has_basis(k, which):
    return bool(basis_monomials(k, which))


@st.composite
def homogeneous(draw, which=Subalgebra.JSinf, kmin=0, kmax=8, terms=4):
    k = draw(st.integers(kmin, kmax).filter(lambda k: _has_basis(k, which)))
    seed = draw(st.integers(0, 2**30))
    return random_homogeneous(k, which, seed, terms=terms)


@st.composite
def forms(draw, kmax=6):
    """Inhomogeneous forms: sums of up to three homogeneous pieces."""
    parts = draw(st.lists(homogeneous(kmax=kmax, terms=3), min_size=1, max_size=3))
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out
