"""Truncated formal power series in 1-3 variables with polynomial coefficients.

The truncation budget is a single weight cutoff W: a term c * x^e is kept
when weight(c) + |e| <= W, each variable power counting weight 1.  That
is what makes substitution converge when the substituted series have
augmentation-positive constant terms.  Variables separately carry
cohomological degree 2 for grading checks; the two bookkeepings never
mix.
"""

from __future__ import annotations

from .algebra import GradedPoly, UniverseError, grlex_key


class SeriesError(ValueError):
    """Variable/arity mismatch or a substitution that cannot converge."""


class TruncatedSeries:
    """Finitely supported multidegree -> coefficient map, valid mod weight > cutoff."""

    __slots__ = ("universe", "arity", "vars", "cutoff", "terms")

    def __init__(self, universe, arity, vars, cutoff, terms):
        if not 1 <= len(vars) <= 3:
            raise SeriesError("series take 1 to 3 variables")
        if cutoff < 0:
            raise SeriesError("cutoff must be nonnegative")
        self.universe = universe
        self.arity = arity
        self.vars = tuple(vars)
        self.cutoff = cutoff
        clean = {}
        for md, coeff in terms.items():
            if coeff.arity != arity or (
                coeff.universe is not universe and coeff.universe != universe
            ):
                raise SeriesError("coefficient disagrees with series universe/arity")
            d = sum(md)
            if d > cutoff:
                continue
            kept = coeff.truncate_weight(cutoff - d)
            if kept:
                clean[tuple(md)] = kept
        self.terms = clean

    # -- construction --------------------------------------------------

    @classmethod
    def zero(cls, universe, arity, vars, cutoff):
        return cls(universe, arity, vars, cutoff, {})

    @classmethod
    def constant(cls, poly, vars, cutoff):
        zero_md = (0,) * len(vars)
        return cls(poly.universe, poly.arity, vars, cutoff, {zero_md: poly})

    @classmethod
    def variable(cls, universe, arity, vars, name, cutoff):
        idx = vars.index(name)
        md = tuple(1 if i == idx else 0 for i in range(len(vars)))
        return cls(
            universe, arity, vars, cutoff, {md: GradedPoly.one(universe, arity)}
        )

    @classmethod
    def from_coefficients(cls, universe, arity, vars, cutoff, coefficient_map):
        return cls(universe, arity, vars, cutoff, dict(coefficient_map))

    # -- queries ---------------------------------------------------------

    def coefficient(self, md):
        md = tuple(md)
        got = self.terms.get(md)
        if got is not None:
            return got
        return GradedPoly.zero(self.universe, self.arity)

    def support(self):
        return sorted(self.terms, key=grlex_key)

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.coefficient((0,) * len(self.vars))

    # -- comparisons -------------------------------------------------------

    def _require_compatible(self, other):
        if self.universe != other.universe:
            raise SeriesError("series live over different universes")
        if self.arity != other.arity:
            raise SeriesError(f"coefficient arity mismatch {self.arity} vs {other.arity}")
        if self.vars != other.vars:
            raise SeriesError(f"variable mismatch {self.vars} vs {other.vars}")

    def residuals(self, other):
        """Nonzero coefficients of self - other at the common cutoff, graded-lex."""
        self._require_compatible(other)
        w = min(self.cutoff, other.cutoff)
        out = []
        for md in sorted(set(self.terms) | set(other.terms), key=grlex_key):
            if sum(md) > w:
                continue
            diff = (self.coefficient(md) - other.coefficient(md)).truncate_weight(
                w - sum(md)
            )
            if diff:
                out.append((md, diff))
        return out

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        try:
            self._require_compatible(other)
        except SeriesError:
            return False
        return not self.residuals(other)

    __hash__ = None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, GradedPoly)):
            other = TruncatedSeries.constant(
                other
                if isinstance(other, GradedPoly)
                else GradedPoly.const(self.universe, other, self.arity),
                self.vars,
                self.cutoff,
            )
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._require_compatible(other)
        acc = dict(self.terms)
        for md, c in other.terms.items():
            prev = acc.get(md)
            acc[md] = c if prev is None else prev + c
        return TruncatedSeries(
            self.universe, self.arity, self.vars, min(self.cutoff, other.cutoff), acc
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(
            self.universe,
            self.arity,
            self.vars,
            self.cutoff,
            {md: -c for md, c in self.terms.items()},
        )

    def __sub__(self, other):
        if isinstance(other, (int, GradedPoly, TruncatedSeries)):
            return self + (-other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, GradedPoly)):
            poly = (
                other
                if isinstance(other, GradedPoly)
                else GradedPoly.const(self.universe, other, self.arity)
            )
            return TruncatedSeries(
                self.universe,
                self.arity,
                self.vars,
                self.cutoff,
                {md: c * poly for md, c in self.terms.items()},
            )
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._require_compatible(other)
        w = min(self.cutoff, other.cutoff)
        acc = {}
        for md1, c1 in self.terms.items():
            for md2, c2 in other.terms.items():
                md = tuple(a + b for a, b in zip(md1, md2))
                if sum(md) > w:
                    continue
                prod = c1 * c2
                prev = acc.get(md)
                acc[md] = prod if prev is None else prev + prod
        return TruncatedSeries(self.universe, self.arity, self.vars, w, acc)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = TruncatedSeries.constant(
            GradedPoly.one(self.universe, self.arity), self.vars, self.cutoff
        )
        for _ in range(n):
            result = result * self
        return result

    # -- reshaping -------------------------------------------------------------

    def truncate(self, cutoff):
        if cutoff > self.cutoff:
            raise SeriesError(
                f"cannot raise cutoff {self.cutoff} to {cutoff} without new data"
            )
        return TruncatedSeries(self.universe, self.arity, self.vars, cutoff, self.terms)

    def at_cutoff(self, cutoff):
        """Reinterpret the stored finite data at another cutoff.

        Raising the cutoff treats absent coefficients as exact zeros;
        callers must know the data is polynomial, not truncated.
        """
        return TruncatedSeries(self.universe, self.arity, self.vars, cutoff, self.terms)

    def map_coefficients(self, fn, arity=None):
        mapped = {md: fn(c) for md, c in self.terms.items()}
        new_arity = arity
        universe = self.universe
        for c in mapped.values():
            universe = c.universe
            if new_arity is None:
                new_arity = c.arity
            break
        if new_arity is None:
            new_arity = self.arity
        return TruncatedSeries(universe, new_arity, self.vars, self.cutoff, mapped)

    def retag(self, tag_map=None, var_map=None, new_vars=None, arity=None):
        """Relabel coefficient factor tags and/or rename and embed variables.

        ``tag_map`` must be injective.  ``var_map`` maps every current
        variable to a member of ``new_vars`` (defaults to the current
        tuple); absent positions get exponent zero.
        """
        arity = arity if arity is not None else self.arity
        if tag_map:
            vals = list(tag_map.values())
            if len(set(vals)) != len(vals):
                raise SeriesError("tag map must be injective")
        new_vars = tuple(new_vars) if new_vars is not None else self.vars
        var_map = var_map or {v: v for v in self.vars}
        if set(var_map) != set(self.vars):
            raise SeriesError("variable map must cover exactly the current variables")
        positions = []
        for v in self.vars:
            target = var_map[v]
            if target not in new_vars:
                raise SeriesError(f"target variable {target!r} not among {new_vars}")
            positions.append(new_vars.index(target))
        if len(set(positions)) != len(positions):
            raise SeriesError("variable map must be injective")
        acc = {}
        for md, c in self.terms.items():
            new_md = [0] * len(new_vars)
            for pos, e in zip(positions, md):
                new_md[pos] = e
            if tag_map:
                c = c.retag(tag_map, arity)
            elif arity != c.arity:
                c = c.with_arity(arity)
            acc[tuple(new_md)] = c
        return TruncatedSeries(self.universe, arity, new_vars, self.cutoff, acc)

    # -- substitution --------------------------------------------------------

    def substitute(self, assignments):
        """Evaluate the series with every variable replaced by a series.

        All replacement series must agree on universe, arity, variables
        and the arity must match this series' coefficients.  Each one
        needs a zero or augmentation-positive constant term, which is
        what makes the sum finite under the weight cutoff.
        """
        if set(assignments) != set(self.vars):
            raise SeriesError(
                f"substitution must cover exactly {self.vars}, got {sorted(assignments)}"
            )
        targets = [assignments[v] for v in self.vars]
        first = targets[0]
        for t in targets[1:]:
            first._require_compatible(t)
        if first.universe != self.universe or first.arity != self.arity:
            raise SeriesError("substituted series disagree with coefficient universe/arity")
        for v, t in zip(self.vars, targets):
            c0 = t.constant_term()
            if not c0.augmentation_positive():
                raise SeriesError(
                    f"constant term of replacement for {v!r} has a weight-0 part"
                )
        cutoff = min([self.cutoff] + [t.cutoff for t in targets])
        out_vars = first.vars
        result = TruncatedSeries.zero(self.universe, self.arity, out_vars, cutoff)
        powers = [{0: None} for _ in targets]  # per-variable power cache

        def power(i, n):
            cache = powers[i]
            if n in cache and cache[n] is not None:
                return cache[n]
            if n == 0:
                p = TruncatedSeries.constant(
                    GradedPoly.one(self.universe, self.arity), out_vars, cutoff
                )
            else:
                p = power(i, n - 1) * targets[i]
            cache[n] = p
            return p

        for md, coeff in self.terms.items():
            term = TruncatedSeries.constant(coeff, out_vars, cutoff)
            for i, e in enumerate(md):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    # -- rendering -----------------------------------------------------------

    def canonical_str(self):
        if not self.terms:
            return "0"
        chunks = []
        # within a total degree, earlier variables first (x before y)
        for md in sorted(self.terms, key=lambda m: (sum(m), tuple(-e for e in m))):
            coeff = self.terms[md]
            var_part = "*".join(
                (v if e == 1 else f"{v}^{e}")
                for v, e in zip(self.vars, md)
                if e
            )
            cs = coeff.canonical_str()
            if not var_part:
                chunks.append(cs)
                continue
            if cs == "1":
                chunks.append(var_part)
            elif cs == "-1":
                chunks.append(f"-{var_part}")
            elif any(op in cs[1:] for op in "+-"):
                chunks.append(f"({cs})*{var_part}")
            else:
                chunks.append(f"{cs}*{var_part}")
        text = chunks[0]
        for chunk in chunks[1:]:
            if chunk.startswith("-"):
                text += f" - {chunk[1:]}"
            else:
                text += f" + {chunk}"
        return text

    def __repr__(self):
        return f"<series {self.canonical_str()} mod weight>{self.cutoff}>"


def geometric_inverse(poly, weight_cap):
    """Inverse of 1 + n with n of weight >= 1, truncated at the cap."""
    one = GradedPoly.one(poly.universe, poly.arity)
    nil = poly - one
    if nil.constant_coefficient() != 0:
        raise SeriesError(
            f"leading coefficient {poly.canonical_str()} is not a truncation-unit"
        )
    acc = one
    term = one
    for _ in range(weight_cap):
        term = (term * (-nil)).truncate_weight(weight_cap)
        if term.is_zero():
            break
        acc = acc + term
    return acc


def solve_functional_inverse(F, which="right", var_name=None):
    """Degree-by-degree solve of F(x, theta(x)) = 0 (or the left variant).

    Requires the linear coefficients of F to be truncation-units
    (1 + weight >= 1) and the constant term to be zero or
    augmentation-positive.  The result has no weight-0 constant part and
    is the unique such solution modulo the cutoff.
    """
    if len(F.vars) != 2:
        raise SeriesError("functional inverse needs a two-variable series")
    if which not in ("left", "right"):
        raise ValueError("which must be 'left' or 'right'")
    u, v = F.vars
    c10 = F.coefficient((1, 0))
    c01 = F.coefficient((0, 1))
    c00 = F.coefficient((0, 0))
    for c, label in ((c10, u), (c01, v)):
        if c.constant_coefficient() != 1:
            raise SeriesError(
                f"leading coefficient of {label!r} is not a truncation-unit: "
                f"{c.canonical_str()}"
            )
    if not c00.augmentation_positive():
        raise SeriesError("constant term has a weight-0 part")
    pivot = c01 if which == "right" else c10
    W = F.cutoff
    name = var_name or "x"
    x = TruncatedSeries.variable(F.universe, F.arity, (name,), name, W)
    theta = TruncatedSeries.zero(F.universe, F.arity, (name,), W)
    for d in range(1, W + 1):
        if which == "right":
            residual = F.substitute({u: x, v: theta})
        else:
            residual = F.substitute({u: theta, v: x})
        rd = residual.coefficient((d,))
        if rd.is_zero():
            continue
        inv = geometric_inverse(pivot, W - d)
        td = (-(inv * rd)).truncate_weight(W - d)
        theta = theta + TruncatedSeries(
            F.universe, F.arity, (name,), W, {(d,): td}
        )
    return theta
