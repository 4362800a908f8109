"""Ordinary formal group laws over a graded ring.

Covers axiom verification, the inverse series, stock laws (additive,
multiplicative, generic with fresh unknowns), and extraction of the
polynomial relations among the unknowns that associativity imposes on a
generic ansatz.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .algebra import GeneratorDecl, GradedPoly, Universe, grlex_key
from .report import Failure, make_report
from .series import TruncatedSeries, solve_functional_inverse


@dataclass
class OrdinaryFGL:
    """A two-variable series with scalar (arity-1) coefficients.

    Valid laws have coefficient 1 on each variable and no constant term;
    that is what ``verify_fgl`` checks, the constructor stores anything.
    """

    name: str
    series: TruncatedSeries


def _three_var_sides(series, cutoff):
    """F(F(x,y),z) and F(x,F(y,z)) at the given cutoff."""
    S = series.at_cutoff(cutoff)
    u, v = S.vars
    xyz = ("x", "y", "z")
    uni, arity = S.universe, S.arity

    def var(name):
        return TruncatedSeries.variable(uni, arity, xyz, name, cutoff)

    f_xy = S.retag(var_map={u: "x", v: "y"}, new_vars=xyz)
    f_yz = S.retag(var_map={u: "y", v: "z"}, new_vars=xyz)
    lhs = S.substitute({u: f_xy, v: var("z")})
    rhs = S.substitute({u: var("x"), v: f_yz})
    return lhs, rhs


def verify_fgl(F, cutoff=None):
    """Unit and associativity checks modulo the cutoff.

    Failures carry the offending multidegree ((i,0)/(0,j) for unit,
    (i,j,k) for associativity) in graded-lex order.
    """
    started = time.perf_counter()
    S = F.series
    W = S.cutoff if cutoff is None else cutoff
    if W > S.cutoff:
        raise ValueError(f"cutoff {W} exceeds the series cutoff {S.cutoff}")
    S = S.truncate(W)
    failures = []
    unit_locs = {(i, j) for (i, j) in S.support() if i == 0 or j == 0}
    unit_locs |= {(0, 0), (1, 0), (0, 1)}
    for loc in sorted(unit_locs, key=grlex_key):
        i, j = loc
        want = 1 if (i, j) in ((1, 0), (0, 1)) else 0
        diff = S.coefficient(loc) - want
        diff = diff.truncate_weight(W - i - j)
        if diff:
            failures.append(Failure(loc, diff.canonical_str()))
    lhs, rhs = _three_var_sides(S, W)
    for md, residual in lhs.residuals(rhs):
        failures.append(Failure(md, residual.canonical_str()))
    return make_report(F.name, "fgl", W, failures, started)


def fgl_commutativity(F, cutoff=None):
    """Coefficientwise F(x,y) = F(y,x) check."""
    started = time.perf_counter()
    S = F.series if cutoff is None else F.series.truncate(cutoff)
    u, v = S.vars
    swapped = S.retag(var_map={u: v, v: u})
    failures = [
        Failure(md, res.canonical_str()) for md, res in S.residuals(swapped)
    ]
    return make_report(F.name, "fgl-commutativity", S.cutoff, failures, started)


def fgl_inverse(F, which="right"):
    """The series theta with F(x, theta(x)) = 0 modulo the cutoff."""
    unit = verify_fgl(F)
    # only the unit axiom gates the solve; filter associativity locations
    unit_failures = [f for f in unit.failures if len(f.location) == 2]
    if unit_failures:
        raise ValueError(
            f"{F.name} fails the unit axiom at {unit_failures[0].location}"
        )
    return solve_functional_inverse(F.series, which)


def builtin_fgl(kind, max_degree, commutative=True, name=None):
    """Stock laws: additive, multiplicative, or the generic unknown ansatz.

    The generic ansatz is x + y + sum a_ij x^i y^j over fresh unknown
    generators of degree 2(1-i-j); with ``commutative`` the unknowns are
    identified a_ij = a_ji.  The series cutoff is max_degree + 1 so the
    weight-1 unknowns attached to top-degree monomials survive storage.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    if kind in ("additive", "multiplicative"):
        uni = Universe("Z")
        one = GradedPoly.one(uni, 1)
        coeffs = {(1, 0): one, (0, 1): one}
        if kind == "multiplicative":
            coeffs[(1, 1)] = one
        series = TruncatedSeries.from_coefficients(
            uni, 1, ("x", "y"), max_degree, coeffs
        )
        return OrdinaryFGL(name or kind, series)
    if kind != "generic":
        raise ValueError(f"unknown builtin kind {kind!r}")
    if max_degree > 9:
        raise ValueError("generic ansatz limited to max_degree <= 9 (name scheme)")
    gens = {}
    for i in range(1, max_degree):
        for j in range(1, max_degree):
            if i + j > max_degree:
                continue
            key = (min(i, j), max(i, j)) if commutative else (i, j)
            if key not in gens:
                gens[key] = GeneratorDecl(
                    f"a{key[0]}{key[1]}",
                    degree=2 * (1 - i - j),
                    unknown=True,
                )
    uni = Universe(
        name or f"lazard{max_degree}",
        central=[gens[k] for k in sorted(gens)],
    )
    one = GradedPoly.one(uni, 1)
    coeffs = {(1, 0): one, (0, 1): one}
    for i in range(1, max_degree):
        for j in range(1, max_degree):
            if i + j > max_degree:
                continue
            key = (min(i, j), max(i, j)) if commutative else (i, j)
            coeffs[(i, j)] = GradedPoly.gen(uni, gens[key].name)
    series = TruncatedSeries.from_coefficients(
        uni, 1, ("x", "y"), max_degree + 1, coeffs
    )
    return OrdinaryFGL(name or f"generic{max_degree}", series)


@dataclass(frozen=True)
class Constraint:
    """One emitted relation: the residual at a target monomial."""

    location: tuple
    relation: GradedPoly

    def __str__(self):
        loc = ",".join(str(x) for x in self.location)
        return f"[{loc}] {self.relation.canonical_str()}"


def extract_associativity_constraints(F, max_degree):
    """Relations among the unknowns from F(F(x,y),z) - F(x,F(y,z)).

    Emitted per monomial x^i y^j z^k with i+j+k <= max_degree, zero
    residuals omitted, graded-lex order.  Internally computed at weight
    cutoff 2*max_degree - 1, which keeps every coefficient of variable
    degree <= max_degree exact (coefficient weight of any composite term
    is at most its variable degree minus one).
    """
    W = max_degree
    internal = max(2 * W - 1, F.series.cutoff)
    lhs, rhs = _three_var_sides(F.series, internal)
    out = []
    for md, residual in lhs.residuals(rhs):
        if sum(md) > W:
            continue
        for known, poly in residual.partition_by_known().items():
            if known:
                # unknown-linear relation multiplied by a concrete ring monomial
                label = md + (GradedPoly(residual.universe, residual.arity,
                                         {known: 1}).canonical_str(),)
            else:
                label = md
            out.append(Constraint(label, poly))
    out.sort(key=lambda c: grlex_key(c.location[:3]))
    return out
