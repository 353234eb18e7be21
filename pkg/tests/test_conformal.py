import itertools

import pytest

from conformal_ops.action import natural_lift
from conformal_ops.conformal import (
    EUCLIDEAN_INVARIANTS,
    Generator,
    Signature,
    bracket_in_basis,
    divergence,
    euclidean_invariant,
    generator_components,
    generators,
    lie_derivative_density,
    metric_entry,
)
from conformal_ops.errors import ContractViolation
from conformal_ops.poly import ETA, X, XI, Rational, SymbolPoly, Variable, monomials_up_to, parse_poly

from conftest import SIGNATURES

ALL_SIGS = [s for sigs in SIGNATURES.values() for s in sigs]


def test_metric_entries():
    assert metric_entry(Signature(2, 0), 1, 1) == 1
    assert metric_entry(Signature(1, 1), 2, 2) == -1
    assert metric_entry(Signature(1, 1), 1, 2) == 0
    with pytest.raises(ContractViolation):
        metric_entry(Signature(1, 1), 3, 1)


def test_signature_validation():
    with pytest.raises(ContractViolation):
        Signature(0, 0)
    assert Signature.parse("2,1") == Signature(2, 1)
    assert str(Signature(2, 1)) == "2,1"
    with pytest.raises(ValueError):
        Signature.parse("2;1")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_generator_count(n):
    assert len(generators(Signature(n, 0))) == n + n * (n - 1) // 2 + 1 + n


def test_generator_validation():
    sig = Signature(2, 0)
    with pytest.raises(ContractViolation):
        Generator.rotation(sig, 2, 1)
    with pytest.raises(ContractViolation):
        Generator.translation(sig, 3)
    assert Generator.parse("rotation(1,2)", sig) == Generator.rotation(sig, 1, 2)
    assert Generator.parse("dilation", sig).label == "dilation"


def test_components_examples():
    sig = Signature(2, 0)
    assert generator_components(Generator.translation(sig, 1)) == (
        SymbolPoly.constant(2, 1),
        SymbolPoly.zero(2),
    )
    assert generator_components(Generator.dilation(sig)) == (SymbolPoly.x(2, 1), SymbolPoly.x(2, 2))
    c1, c2 = generator_components(Generator.inversion(sig, 1))
    assert c1 == parse_poly("x2^2 - x1^2", 2)
    assert c2 == parse_poly("-2*x1*x2", 2)


def test_inversion_divergence():
    for sig in ALL_SIGS:
        for i in range(1, sig.n + 1):
            expect = SymbolPoly.x(sig.n, i) * (-2 * sig.n * sig.g(i))
            assert divergence(generator_components(Generator.inversion(sig, i))) == expect


def test_lie_derivative_examples():
    sig = Signature(2, 0)
    x1 = SymbolPoly.x(2, 1)
    assert lie_derivative_density(Generator.dilation(sig), 0, x1) == x1
    lam = Rational(3, 7)
    assert lie_derivative_density(Generator.dilation(sig), lam, SymbolPoly.constant(2, 1)) == SymbolPoly.constant(
        2, 2 * lam
    )
    assert lie_derivative_density(Generator.translation(sig, 1), Rational(5, 3), x1**2) == x1 * 2


def test_lie_derivative_rejects_momenta():
    with pytest.raises(ContractViolation):
        lie_derivative_density(Generator.dilation(Signature(2, 0)), 0, SymbolPoly.xi(2, 1))


def test_invariant_examples():
    assert euclidean_invariant("R_xixi", Signature(2, 0)) == parse_poly("xi1^2 + xi2^2", 2)
    assert euclidean_invariant("R_xieta", Signature(1, 1)) == parse_poly("xi1*eta1 - xi2*eta2", 2)
    assert euclidean_invariant("R_xx", Signature(1, 1)) == parse_poly("x1^2 - x2^2", 2)
    assert euclidean_invariant("R_xxi", Signature(1, 1)) == parse_poly("x1*xi1 + x2*xi2", 2)


@pytest.mark.parametrize("sig", ALL_SIGS, ids=str)
def test_lie_algebra_closure(sig):
    gens = generators(sig)
    for a, b in itertools.combinations(gens, 2):
        bracket_in_basis(a, b)


def test_known_brackets():
    sig = Signature(2, 0)
    t1, d = Generator.translation(sig, 1), Generator.dilation(sig)
    assert bracket_in_basis(t1, d) == {t1: 1}
    inv1 = Generator.inversion(sig, 1)
    # [d_1, |x|^2 d_1 - 2 x_1 x^j d_j] = -2 x^j d_j... i.e. a multiple of the dilation
    assert bracket_in_basis(t1, inv1) == {d: -2}


@pytest.mark.parametrize("sig", ALL_SIGS, ids=str)
def test_representation_on_densities(sig):
    n = sig.n
    lam = Rational(2, 7)
    gens = generators(sig)
    monos = monomials_up_to([Variable(X, i) for i in range(1, n + 1)], 4 if n < 3 else 3)
    for a, b in itertools.combinations(gens, 2):
        coeffs = bracket_in_basis(a, b)
        for m in monos:
            f = SymbolPoly(n, {m: 1})
            lhs = SymbolPoly.zero(n)
            for g, c in coeffs.items():
                lhs = lhs + lie_derivative_density(g, lam, f) * c
            rhs = lie_derivative_density(a, lam, lie_derivative_density(b, lam, f)) - lie_derivative_density(
                b, lam, lie_derivative_density(a, lam, f)
            )
            assert lhs == rhs, (a, b, f)


_FAMILIES = {"R_xx": (XI,), "R_xxi": (XI,), "R_xixi": (XI,), "R_xieta": (XI, ETA), "R_etaeta": (XI, ETA)}


@pytest.mark.parametrize("sig", ALL_SIGS, ids=str)
def test_euclidean_invariance(sig):
    # rotations fix all five contractions; translations only the x-free ones
    for which in EUCLIDEAN_INVARIANTS:
        P = euclidean_invariant(which, sig)
        for g in generators(sig):
            if g.kind == "rotation" or (g.kind == "translation" and which not in ("R_xx", "R_xxi")):
                assert natural_lift(generator_components(g), 0, P, _FAMILIES[which]).is_zero(), (which, g)


@pytest.mark.parametrize("sig", ALL_SIGS, ids=str)
def test_translations_single_out_rxixi(sig):
    n = sig.n
    for which in ("R_xx", "R_xxi", "R_xixi"):
        P = euclidean_invariant(which, sig)
        killed = all(P.diff(Variable(X, i)).is_zero() for i in range(1, n + 1))
        assert killed == (which == "R_xixi")
