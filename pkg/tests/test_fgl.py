import sympy

import pytest

from hopffg.algebra import GradedPoly, Universe
from hopffg.fgl import (
    OrdinaryFGL,
    builtin_fgl,
    extract_associativity_constraints,
    fgl_commutativity,
    fgl_inverse,
    verify_fgl,
)
from hopffg.series import TruncatedSeries

from oracles import fgl_assoc_residuals, multiply_back, poly_to_sympy

Z = Universe("Z")


def law(coeffs, cutoff, name="F"):
    series = TruncatedSeries.from_coefficients(
        Z, 1, ("x", "y"), cutoff,
        {md: GradedPoly.const(Z, c) for md, c in coeffs.items()},
    )
    return OrdinaryFGL(name, series)


def test_additive_and_multiplicative_pass_at_10():
    assert verify_fgl(builtin_fgl("additive", 10)).verdict == "pass"
    assert verify_fgl(builtin_fgl("multiplicative", 10)).verdict == "pass"


def test_unit_axiom_failures_located():
    bad = law({(1, 0): 2, (0, 1): 1}, 4)
    rep = verify_fgl(bad)
    assert rep.verdict == "fail"
    assert rep.failures[0].location == (1, 0)
    assert rep.failures[0].residual == "1"


def test_x2y_fails_and_oracle_agrees_on_location():
    coeffs = {(1, 0): 1, (0, 1): 1, (2, 1): 1}
    bad = law(coeffs, 8)
    rep = verify_fgl(bad)
    assert rep.verdict == "fail"
    engine_locs = {f.location for f in rep.failures}
    oracle = fgl_assoc_residuals(coeffs, 8)
    assert set(oracle) == engine_locs
    first_engine = min(engine_locs, key=lambda m: (sum(m), m))
    first_oracle = min(oracle, key=lambda m: (sum(m), m))
    assert first_engine == first_oracle == (1, 1, 1)
    assert oracle[(1, 1, 1)] == 2


def test_passing_law_has_no_oracle_residuals():
    coeffs = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    assert fgl_assoc_residuals(coeffs, 9) == {}
    assert verify_fgl(law(coeffs, 9)).verdict == "pass"


def test_inverse_additive_is_minus_x():
    theta = fgl_inverse(builtin_fgl("additive", 6))
    assert theta.canonical_str() == "-x"


def test_inverse_multiplicative_alternates_certified_by_multiply_back():
    F = builtin_fgl("multiplicative", 12)
    theta = fgl_inverse(F)
    got = {md[0]: c.constant_coefficient() for md, c in theta.terms.items()}
    assert got == {d: (-1) ** d for d in range(1, 13)}
    coeffs = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    assert multiply_back(coeffs, got, 12) == 0


def test_inverse_left_right_agree_for_commutative():
    F = law({(1, 0): 1, (0, 1): 1, (1, 1): 3, (2, 2): -1}, 8)
    assert fgl_inverse(F, "left") == fgl_inverse(F, "right")


def test_inverse_requires_unit_axiom():
    with pytest.raises(ValueError):
        fgl_inverse(law({(1, 0): 1, (0, 1): 3}, 4))


def test_commutativity_report():
    F = law({(1, 0): 1, (0, 1): 1, (2, 1): 1}, 5)
    rep = fgl_commutativity(F)
    assert rep.verdict == "fail"
    assert rep.failures[0].location == (1, 2)


def test_builtin_generic_unknown_counts():
    g3 = builtin_fgl("generic", 3)
    assert sorted(g3.series.universe.central) == ["a11", "a12"]
    g4 = builtin_fgl("generic", 4)
    assert sorted(g4.series.universe.central) == ["a11", "a12", "a13", "a22"]
    free = builtin_fgl("generic", 3, commutative=False)
    assert sorted(free.series.universe.central) == ["a11", "a12", "a21"]


def test_builtin_generic_specializations():
    # all unknowns zero is the additive law; a11 = 1 the multiplicative one
    g = builtin_fgl("generic", 3)
    assert g.series.coefficient((1, 1)).canonical_str() == "a11"
    assert g.series.coefficient((1, 2)).canonical_str() == "a12"
    assert g.series.coefficient((2, 1)).canonical_str() == "a12"


def test_generic_degrees_follow_convention():
    g = builtin_fgl("generic", 4)
    uni = g.series.universe
    assert uni.degree("a11") == -2
    assert uni.degree("a12") == -4
    assert uni.degree("a22") == -6


def test_constraints_empty_through_degree_3():
    assert extract_associativity_constraints(builtin_fgl("generic", 3), 3) == []


def test_constraints_match_standalone_bruteforce_at_degree_4():
    g = builtin_fgl("generic", 4)
    engine = extract_associativity_constraints(g, 4)
    a11, a12, a13, a22 = sympy.symbols("a11 a12 a13 a22")
    coeffs = {
        (1, 0): 1, (0, 1): 1,
        (1, 1): a11, (1, 2): a12, (2, 1): a12,
        (1, 3): a13, (3, 1): a13, (2, 2): a22,
    }
    oracle = fgl_assoc_residuals(coeffs, 4)
    syms = {(0, str(s)): s for s in (a11, a12, a13, a22)}
    engine_map = {c.location: poly_to_sympy(c.relation, syms) for c in engine}
    assert set(engine_map) == set(oracle)
    for loc, expr in oracle.items():
        assert sympy.expand(engine_map[loc] - expr) == 0
    # ordering is graded-lex
    locs = [c.location for c in engine]
    assert locs == sorted(locs, key=lambda m: (sum(m), m))


def test_multiplicative_instance_satisfies_constraints():
    g = builtin_fgl("generic", 4)
    constraints = extract_associativity_constraints(g, 4)
    assert constraints  # degree 4 is nonempty
    for c in constraints:
        total = 0
        for mono, coeff in c.relation.terms.items():
            value = coeff
            for (_, name), exp in mono:
                value *= (1 if name == "a11" else 0) ** exp
            total += value
        assert total == 0


def test_constraint_symmetry_under_argument_reversal():
    g = builtin_fgl("generic", 4)
    constraints = {c.location: c.relation for c in extract_associativity_constraints(g, 4)}
    for (i, j, k), rel in constraints.items():
        mirror = constraints.get((k, j, i))
        assert mirror is not None
        assert mirror == rel or mirror == -rel


def test_verify_fgl_monotone_in_cutoff():
    bad = law({(1, 0): 1, (0, 1): 1, (2, 1): 1}, 8)
    previous_fail = False
    for w in range(1, 9):
        rep = verify_fgl(bad, w)
        if previous_fail:
            assert rep.verdict == "fail"
        previous_fail = previous_fail or rep.verdict == "fail"
    assert previous_fail
