from __future__ import annotations

import random
from fractions import Fraction

import pytest

from src.wallcross.automorphism import (
    Covector,
    Endomorphism,
    KFactor,
    WallCrossingMap,
    check_symplectic,
    apply,
    compose,
    elementary_K,
    expand_factorization,
    extract_invariants,
    factorize_unit_series,
    k_factor_map,
    log_identity_holds,
    mobius_omega_tilde,
    mobius_transform,
    render_k_factors,
)
from src.wallcross.demos import pentagon_identity_holds
from src.wallcross.errors import (
    BeyondCutoffError,
    CutoffMismatchError,
    IncoherentEnergyError,
    NonPrimitiveError,
    NonUnitSeriesError,
    WallCrossError,
)
from src.wallcross.lattice import BoundaryVector, Charge, sympl_pairing
from src.wallcross.novikov import Truncation, TruncatedSeries

V = BoundaryVector
X, Y = V(1, 0), V(0, 1)


@pytest.fixture
def deg8() -> Truncation:
    return Truncation.degree(8)


def mono(c, z, t, tr) -> TruncatedSeries:
    return TruncatedSeries.monomial(c, z, t, tr)


def test_wall_map_acts_by_normal(deg8: Truncation) -> None:
    f = TruncatedSeries.one(deg8) + mono(1, Y, 1, deg8)
    wall = WallCrossingMap(Y, Covector(1, 0), f)
    assert wall(mono(1, X, 0, deg8)) == mono(1, X, 0, deg8) * f
    assert wall(mono(1, Y, 0, deg8)) == mono(1, Y, 0, deg8)


def test_wall_map_validation(deg8: Truncation) -> None:
    f = TruncatedSeries.one(deg8) + mono(1, Y, 1, deg8)
    with pytest.raises(WallCrossError, match="annihilate"):
        WallCrossingMap(Y, Covector(0, 1), f)
    with pytest.raises(NonPrimitiveError):
        WallCrossingMap(V(0, 2), Covector(1, 0), f)
    with pytest.raises(WallCrossError, match="not along"):
        WallCrossingMap(Y, Covector(1, 0), f + mono(1, X, 1, deg8))
    with pytest.raises(NonUnitSeriesError):
        WallCrossingMap(Y, Covector(1, 0), f + mono(1, Y, 0, deg8))


def test_elementary_K_formula(deg8: Truncation) -> None:
    k = elementary_K(Charge(X + Y, 2), 1, "default", deg8)
    # sigma(1,1) = -1, <(1,0),(1,1)> = 1
    image = k(mono(1, X, 0, deg8))
    assert image == mono(1, X, 0, deg8) * (TruncatedSeries.one(deg8) + mono(1, X + Y, 2, deg8))


def test_elementary_K_with_multiple_class(deg8: Truncation) -> None:
    k = elementary_K(Charge(V(2, 0), 2), Fraction(1, 2), "default", deg8)
    base = TruncatedSeries.one(deg8) - mono(1, V(2, 0), 2, deg8)
    # exponent Omega * <v, gamma> = 1/2 * <(0,1),(2,0)> = -1
    assert k(mono(1, Y, 0, deg8)) == mono(1, Y, 0, deg8) * base ** -1


def test_flavor_charge_is_identity(deg8: Truncation, caplog) -> None:
    k = elementary_K(Charge(V(0, 0), 1), 3, "default", deg8)
    assert k.is_identity()
    assert "flavor" in caplog.text
    f = TruncatedSeries.one(deg8) + mono(2, X + Y, 3, deg8)
    assert k(f) == f


def test_compose_with_inverse_is_identity(deg8: Truncation) -> None:
    k = elementary_K(Charge(V(1, 2), 3), 1, "default", deg8)
    assert compose([k, k.inverse()], deg8).is_identity()
    assert compose([], deg8).is_identity()


def test_pentagon_identity() -> None:
    assert pentagon_identity_holds(8)


def test_pentagon_identity_fails_without_middle_factor(deg8: Truncation) -> None:
    k1 = elementary_K(Charge(X, 1), 1, "default", deg8)
    k2 = elementary_K(Charge(Y, 1), 1, "default", deg8)
    assert compose([k1, k2], deg8) != compose([k2, k1], deg8)


def test_commuting_for_zero_pairing() -> None:
    rng = random.Random(11)
    tr = Truncation.degree(6)
    checked = 0
    while checked < 50:
        g1 = V(rng.randint(-2, 2), rng.randint(-2, 2))
        k = rng.randint(-2, 2)
        g2 = g1.scale(k)
        if g1.is_zero() or g2.is_zero() or sympl_pairing(g1, g2) != 0:
            continue
        e1, e2 = rng.randint(1, 3), rng.randint(1, 3)
        o1, o2 = Fraction(rng.randint(-3, 3), rng.randint(1, 3)), Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        a = elementary_K(Charge(g1, e1), o1, "default", tr)
        b = elementary_K(Charge(g2, e2), o2, "default", tr)
        assert compose([a, b], tr) == compose([b, a], tr)
        checked += 1


def test_factorization_round_trip() -> None:
    rng = random.Random(5)
    for _ in range(100):
        coeffs = [Fraction(1)] + [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(8)]
        for eps in (0, 1):
            d = factorize_unit_series(coeffs, eps, 8)
            assert expand_factorization(d, eps, 8) == coeffs


def test_factorization_of_initial_wall() -> None:
    # 1 + x with eps = 1 is (1 - (-1) x)^{1}
    d = factorize_unit_series([1, 1], 1, 6)
    assert d == {1: 1, 2: 0, 3: 0, 4: 0, 5: 0, 6: 0}
    with pytest.raises(NonUnitSeriesError):
        factorize_unit_series([2, 1], 1, 3)
    with pytest.raises(WallCrossError):
        factorize_unit_series([1, 1], 2, 3)


def test_mobius_transform() -> None:
    c = mobius_transform({1: Fraction(1)}, 4)
    assert c == {1: 1, 2: Fraction(1, 4), 3: Fraction(1, 9), 4: Fraction(1, 16)}
    c = mobius_transform({1: Fraction(1), 2: Fraction(3)}, 4)
    assert c[2] == 3 + Fraction(1, 4)
    assert c[4] == 3 * Fraction(1, 4) + Fraction(1, 16)


def test_log_identity_holds() -> None:
    rng = random.Random(3)
    for _ in range(20):
        d = {k: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for k in range(1, 9)}
        for eps in (0, 1):
            assert log_identity_holds(d, eps, 8)


def test_extract_invariants_initial_wall() -> None:
    tr = Truncation.degree(6)
    F = TruncatedSeries.one(tr) + mono(1, X, 1, tr)
    table = extract_invariants(F, X)
    assert table.omega(1) == 1
    assert all(table.omega(l) == 0 for l in range(2, 7))
    for l in range(1, 7):
        assert table.omega_tilde(l) == Fraction((-1) ** (l - 1), l * l)
    assert mobius_omega_tilde(table) == table.omega_tilde_values


@pytest.mark.parametrize("n", [1, 2, 3])
def test_extract_invariants_multiple_singularity(n: int) -> None:
    tr = Truncation.degree(6)
    F = (TruncatedSeries.one(tr) + mono(1, X, 1, tr)) ** n
    table = extract_invariants(F, X)
    assert table.omega(1) == n
    for l in range(1, 7):
        assert table.omega_tilde(l) == Fraction(n * (-1) ** (l - 1), l * l)


def test_extract_invariants_epsilon_changes_omega_only() -> None:
    tr = Truncation.degree(4)
    F = TruncatedSeries.one(tr) + mono(1, X, 1, tr)
    odd = extract_invariants(F, X, epsilon=1)
    even = extract_invariants(F, X, epsilon=0)
    assert odd.omega_tilde_values == even.omega_tilde_values
    assert even.omega(1) == -1
    assert mobius_omega_tilde(even) == even.omega_tilde_values


def test_extract_invariants_energy_unit() -> None:
    tr = Truncation.energy(10)
    F = TruncatedSeries.one(tr) + mono(1, X + Y, 3, tr)
    table = extract_invariants(F, X + Y)
    assert table.order == 3
    assert table.energy_unit == 3
    assert table.omega_tilde(2) == Fraction(-1, 4)
    assert render_k_factors(table.k_factors()) == "K[(1,1),E=3]^1"


def test_explicit_order_past_the_cutoff() -> None:
    tr = Truncation.energy(10)
    F = TruncatedSeries.one(tr) + mono(1, X + Y, 3, tr)
    assert extract_invariants(F, X + Y, order=3).omega(3) == 0
    with pytest.raises(BeyondCutoffError, match="l=4"):
        extract_invariants(F, X + Y, order=4)
    G = TruncatedSeries.one(Truncation.degree(3)) + mono(1, X, 1, Truncation.degree(3))
    assert extract_invariants(G, X, order=3).omega_tilde(3) == Fraction(1, 9)
    with pytest.raises(BeyondCutoffError):
        extract_invariants(G, X, order=4)


def test_apply_checks_cutoffs(deg8: Truncation) -> None:
    wall = WallCrossingMap(X, Covector(0, -1), TruncatedSeries.one(deg8) + mono(1, X, 1, deg8))
    assert apply(wall, mono(1, Y, 0, deg8)) == mono(1, Y, 0, deg8) * wall.func ** -1
    with pytest.raises(CutoffMismatchError):
        apply(wall, mono(1, Y, 0, Truncation.degree(4)))


def test_incoherent_energies() -> None:
    tr = Truncation.energy(10)
    F = TruncatedSeries.one(tr) + mono(1, X, 1, tr) + mono(1, V(2, 0), 3, tr)
    with pytest.raises(IncoherentEnergyError, match="incoherent energies at query point"):
        extract_invariants(F, X)
    G = TruncatedSeries.one(tr) + mono(1, X, 1, tr) + mono(1, X, 2, tr)
    with pytest.raises(IncoherentEnergyError):
        extract_invariants(G, X)


def test_extract_rejects_off_direction_terms() -> None:
    tr = Truncation.degree(4)
    F = TruncatedSeries.one(tr) + mono(1, Y, 1, tr)
    with pytest.raises(WallCrossError):
        extract_invariants(F, X)


def test_k_factor_reconstruction_matches_wall() -> None:
    tr = Truncation.degree(6)
    F = (TruncatedSeries.one(tr) + mono(1, X, 1, tr)) ** 2
    table = extract_invariants(F, X)
    wall = WallCrossingMap(X, Covector(0, -1), F)
    rebuilt = compose([k_factor_map(k, table.epsilon, tr) for k in table.k_factors()], tr)
    assert rebuilt == wall.to_endomorphism()


def test_flavor_decoupling() -> None:
    tr = Truncation.degree(6)
    F = TruncatedSeries.one(tr) + mono(1, X, 1, tr)
    wall = WallCrossingMap(X, Covector(0, -1), F)
    flavor = elementary_K(Charge(V(0, 0), 1), 2, "default", tr)
    endo = compose([flavor, wall, flavor], tr)
    assert endo == wall.to_endomorphism()
    assert KFactor(Charge(X, 1), Fraction(1)).render() == "K[(1,0),E=1]^1"


def test_symplectic_check(deg8: Truncation) -> None:
    for gamma in (X, Y, X + Y, V(2, 1), V(1, -2)):
        assert check_symplectic(elementary_K(Charge(gamma, 1), 1, "default", deg8))
    one = TruncatedSeries.one(deg8)
    bad = Endomorphism(mono(1, X, 0, deg8) * (one + mono(1, X, 1, deg8)), mono(1, Y, 0, deg8))
    assert not check_symplectic(bad)
    good = compose([elementary_K(Charge(X, 1), 1, "default", deg8), elementary_K(Charge(Y, 1), 2, "default", deg8)], deg8)
    assert check_symplectic(good)
