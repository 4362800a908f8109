"""Exact graded sparse polynomials over named generators.

One class carries elements of the base ring R, of an algebra H over it,
and of tensor powers of H.  Base-ring generators are *central*: they get
factor tag 0 and commute across tensor factors (the tensor product is
taken over R, so r(x)1 = 1(x)r).  Algebra generators carry a factor tag
between 1 and the arity of the element; an element of arity 1 with tags
in {0,1} is the usual untagged polynomial.

Two gradings coexist and never mix: the cohomological *degree* of a
generator (any integer, often negative) and its filtration *weight*
(>= 1), which is what truncation cuts by.  Weight >= 1 per generator is
what makes every truncation finite even when degrees are unbounded
below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class UniverseError(ValueError):
    """Mismatched generator universes, unknown names, or bad tags."""


_IDENT_OK = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def _check_identifier(name):
    if not name or name[0].isdigit() or not set(name) <= _IDENT_OK:
        raise UniverseError(f"bad generator name {name!r}")


@dataclass(frozen=True)
class GeneratorDecl:
    """A named generator with its cohomological degree and filtration weight."""

    name: str
    degree: int
    weight: int = 1
    unknown: bool = False


class Universe:
    """Namespace of generators a polynomial may mention.

    ``central`` generators belong to the base ring (tag 0 always);
    ``tagged`` generators belong to the algebra whose tensor powers are
    being formed and carry a factor tag between 1 and the arity.
    """

    def __init__(self, name, central=(), tagged=()):
        self.name = name
        self.central = {}
        self.tagged = {}
        for decl in central:
            self._add(self.central, decl)
        for decl in tagged:
            self._add(self.tagged, decl)

    def _add(self, table, decl):
        _check_identifier(decl.name)
        if decl.name in self.central or decl.name in self.tagged:
            raise UniverseError(f"duplicate generator {decl.name!r} in {self.name!r}")
        if decl.weight < 1:
            raise UniverseError(f"generator {decl.name!r} must have weight >= 1")
        table[decl.name] = decl

    def decl(self, name):
        d = self.central.get(name) or self.tagged.get(name)
        if d is None:
            raise UniverseError(f"unknown generator {name!r} in {self.name!r}")
        return d

    def is_tagged(self, name):
        if name in self.tagged:
            return True
        if name in self.central:
            return False
        raise UniverseError(f"unknown generator {name!r} in {self.name!r}")

    def degree(self, name):
        return self.decl(name).degree

    def weight(self, name):
        return self.decl(name).weight

    def with_central(self, extra, name=None):
        """A new universe with additional central generators."""
        return Universe(
            name or self.name,
            central=list(self.central.values()) + list(extra),
            tagged=self.tagged.values(),
        )

    def _key(self):
        return (
            self.name,
            tuple(sorted(self.central.items())),
            tuple(sorted(self.tagged.items())),
        )

    def __eq__(self, other):
        return isinstance(other, Universe) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Universe({self.name!r}, central={sorted(self.central)}, tagged={sorted(self.tagged)})"


# A monomial is a sorted tuple of ((tag, name), exponent) with exponent > 0.
_EMPTY = ()


def _canon_coeff(c):
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise TypeError(f"coefficients must be int or Fraction, got {type(c).__name__}")


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for key, e in m2:
        acc[key] = acc.get(key, 0) + e
    return tuple(sorted(acc.items()))


class GradedPoly:
    """Sparse polynomial with exact integer or rational coefficients.

    ``terms`` maps canonical monomials to nonzero coefficients, so
    equality is structural.  Instances are immutable by convention and
    every operation returns a fresh value.
    """

    __slots__ = ("universe", "arity", "terms")

    def __init__(self, universe, arity, terms):
        self.universe = universe
        self.arity = arity
        self.terms = terms

    # -- construction -------------------------------------------------

    @classmethod
    def from_terms(cls, universe, arity, items):
        """Build from (monomial-entries, coefficient) pairs, validating names and tags."""
        if arity < 1:
            raise UniverseError("arity must be >= 1")
        acc = {}
        for entries, coeff in items:
            mono = {}
            for (tag, name), exp in entries:
                if exp == 0:
                    continue
                if exp < 0:
                    raise UniverseError(f"negative exponent on {name!r}")
                if universe.is_tagged(name):
                    if not 1 <= tag <= arity:
                        raise UniverseError(
                            f"factor tag {tag} on {name!r} outside 1..{arity}"
                        )
                else:
                    if tag != 0:
                        raise UniverseError(f"central generator {name!r} cannot carry tag {tag}")
                mono[(tag, name)] = mono.get((tag, name), 0) + exp
            key = tuple(sorted(mono.items()))
            acc[key] = acc.get(key, 0) + coeff
        return cls(universe, arity, _strip(acc))

    @classmethod
    def zero(cls, universe, arity=1):
        return cls(universe, arity, {})

    @classmethod
    def const(cls, universe, value, arity=1):
        value = _canon_coeff(value)
        return cls(universe, arity, {} if value == 0 else {_EMPTY: value})

    @classmethod
    def one(cls, universe, arity=1):
        return cls.const(universe, 1, arity)

    @classmethod
    def gen(cls, universe, name, tag=None, arity=None):
        if universe.is_tagged(name):
            tag = 1 if tag is None else tag
            if tag < 1:
                raise UniverseError(f"tagged generator {name!r} needs a tag >= 1")
        else:
            if tag not in (None, 0):
                raise UniverseError(f"central generator {name!r} cannot carry tag {tag}")
            tag = 0
        arity = max(tag, 1) if arity is None else arity
        if tag > arity:
            raise UniverseError(f"tag {tag} exceeds arity {arity}")
        return cls(universe, arity, {(((tag, name), 1),): 1})

    # -- structural queries -------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def constant_coefficient(self):
        return self.terms.get(_EMPTY, 0)

    def monomial_weight(self, mono):
        return sum(e * self.universe.weight(name) for (_, name), e in mono)

    def monomial_degree(self, mono):
        return sum(e * self.universe.degree(name) for (_, name), e in mono)

    def min_weight(self):
        """Least monomial weight, or None for the zero polynomial."""
        if not self.terms:
            return None
        return min(self.monomial_weight(m) for m in self.terms)

    def augmentation_positive(self):
        """True when every monomial has weight >= 1 (no scalar part)."""
        w = self.min_weight()
        return w is None or w >= 1

    def homogeneous_degree(self):
        """Common degree of all monomials; 'zero' for 0; None when mixed."""
        if not self.terms:
            return "zero"
        degs = {self.monomial_degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def tagged_occurrences(self):
        occ = set()
        for mono in self.terms:
            for (tag, name), _ in mono:
                if tag != 0:
                    occ.add((tag, name))
        return occ

    def max_tag(self):
        best = 0
        for mono in self.terms:
            for (tag, _), _ in mono:
                if tag > best:
                    best = tag
        return best

    # -- arithmetic ----------------------------------------------------

    def _require_compatible(self, other):
        if self.universe != other.universe:
            raise UniverseError(
                f"mismatched generator universes {self.universe.name!r} vs {other.universe.name!r}"
            )
        if self.arity != other.arity:
            raise UniverseError(f"mismatched arities {self.arity} vs {other.arity}")

    def _coerce(self, other):
        if isinstance(other, GradedPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return GradedPoly.const(self.universe, other, self.arity)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._require_compatible(other)
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            acc[mono] = acc.get(mono, 0) + c
        return GradedPoly(self.universe, self.arity, _strip(acc))

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(
            self.universe, self.arity, {m: -c for m, c in self.terms.items()}
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _canon_coeff(other)
            if other == 0:
                return GradedPoly.zero(self.universe, self.arity)
            return GradedPoly(
                self.universe,
                self.arity,
                {m: _canon_coeff(c * other) for m, c in self.terms.items()},
            )
        if not isinstance(other, GradedPoly):
            return NotImplemented
        self._require_compatible(other)
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                key = _mono_mul(m1, m2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return GradedPoly(self.universe, self.arity, _strip(acc))

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = GradedPoly.one(self.universe, self.arity)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (
            self.universe == other.universe
            and self.arity == other.arity
            and self.terms == other.terms
        )

    __hash__ = None

    # -- weight filtration ---------------------------------------------

    def truncate_weight(self, cutoff):
        """Drop every monomial of weight > cutoff.  Idempotent."""
        kept = {
            m: c for m, c in self.terms.items() if self.monomial_weight(m) <= cutoff
        }
        if len(kept) == len(self.terms):
            return self
        return GradedPoly(self.universe, self.arity, kept)

    # -- homomorphisms and retagging ------------------------------------

    def apply_map(self, images, *, arity, universe=None):
        """Apply the algebra-homomorphism extension of a generator map.

        ``images`` maps (tag, name) pairs to polynomials in the target.
        Central generators without an image map to themselves; a tagged
        generator without an image is an error.
        """
        target = universe or (
            next(iter(images.values())).universe if images else self.universe
        )
        for img in images.values():
            if img.universe != target or img.arity != arity:
                raise UniverseError("generator images disagree on target universe/arity")
        out = GradedPoly.zero(target, arity)
        power_cache = {}
        for mono, coeff in self.terms.items():
            acc = GradedPoly.const(target, coeff, arity)
            for (tag, name), exp in mono:
                key = (tag, name)
                if key in images:
                    cached = power_cache.get((key, exp))
                    if cached is None:
                        cached = images[key] ** exp
                        power_cache[(key, exp)] = cached
                    acc = acc * cached
                elif tag == 0:
                    acc = acc * GradedPoly(
                        target, arity, {(((0, name), exp),): 1}
                    )
                else:
                    raise UniverseError(f"generator {name!r}<{tag}> without image")
            out = out + acc
        return out

    def map_tags(self, tag_map, arity):
        """Relabel factor tags; merging two tags multiplies the factors."""
        acc = {}
        for mono, coeff in self.terms.items():
            entries = {}
            for (tag, name), exp in mono:
                nt = tag if tag == 0 else tag_map(tag)
                if nt != 0 and not 1 <= nt <= arity:
                    raise UniverseError(f"retag sends {name!r}<{tag}> outside 1..{arity}")
                key = (nt, name)
                entries[key] = entries.get(key, 0) + exp
            key = tuple(sorted(entries.items()))
            acc[key] = acc.get(key, 0) + coeff
        return GradedPoly(self.universe, arity, _strip(acc))

    def retag(self, mapping, arity=None):
        """Injective tag relabeling, e.g. {1: 2, 2: 3} to shift factors."""
        vals = list(mapping.values())
        if len(set(vals)) != len(vals):
            raise UniverseError("retag map must be injective")
        arity = arity if arity is not None else max(vals + [self.arity])
        return self.map_tags(lambda t: mapping.get(t, t), arity)

    def with_arity(self, arity):
        if self.max_tag() > arity:
            raise UniverseError(f"element uses tags beyond arity {arity}")
        if arity == self.arity:
            return self
        return GradedPoly(self.universe, arity, self.terms)

    def to_universe(self, target):
        """Re-home the element in another universe declaring the same names."""
        for mono in self.terms:
            for (tag, name), _ in mono:
                d1, d2 = self.universe.decl(name), target.decl(name)
                if (d1.degree, d1.weight) != (d2.degree, d2.weight):
                    raise UniverseError(f"generator {name!r} declared differently in target")
                if tag != 0 and not target.is_tagged(name):
                    raise UniverseError(f"generator {name!r} is central in target")
                if tag == 0 and self.universe.is_tagged(name):
                    raise UniverseError(f"generator {name!r} is tagged in source")
        return GradedPoly(target, self.arity, dict(self.terms))

    def partition_by_known(self):
        """Split each monomial into (non-unknown part, unknown part).

        Returns {known-monomial: polynomial in unknown generators only},
        the shape needed to turn a residual into relations among
        unknowns.  The unknown-only polynomials live in a sub-universe.
        """
        unknowns = [
            d
            for d in list(self.universe.central.values())
            if d.unknown
        ]
        sub = Universe(self.universe.name + "/unknowns", central=unknowns)
        out = {}
        for mono, coeff in self.terms.items():
            known, unk = [], []
            for (tag, name), exp in mono:
                if tag == 0 and self.universe.decl(name).unknown:
                    unk.append(((tag, name), exp))
                else:
                    known.append(((tag, name), exp))
            kkey = tuple(known)
            ukey = tuple(unk)
            bucket = out.setdefault(kkey, {})
            bucket[ukey] = bucket.get(ukey, 0) + coeff
        return {
            k: GradedPoly(sub, 1, _strip(v))
            for k, v in sorted(out.items())
        }

    # -- rendering -------------------------------------------------------

    def _sort_key(self, mono):
        return (self.monomial_weight(mono), mono)

    def canonical_str(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=self._sort_key):
            coeff = self.terms[mono]
            factors = []
            for (tag, name), exp in mono:
                shown = name if (tag == 0 or self.arity == 1) else f"{name}<{tag}>"
                factors.append(shown if exp == 1 else f"{shown}^{exp}")
            if not factors:
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(coeff))] + factors)
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"<{self.canonical_str()} in {self.universe.name}^(x){self.arity}>"


def _strip(terms):
    return {m: _canon_coeff(c) for m, c in terms.items() if c != 0}


# Arity-1 elements over untagged generators are plain ring elements;
# higher arity means an element of a tensor power.  Same class either way.
TensorElement = GradedPoly


def homogeneity_check(p):
    """('zero', None) | ('homogeneous', d) | ('inhomogeneous', None)."""
    d = p.homogeneous_degree()
    if d == "zero":
        return ("zero", None)
    if d is None:
        return ("inhomogeneous", None)
    return ("homogeneous", d)


def grlex_key(multidegree):
    """Graded-lex sort key: total degree first, then lexicographic."""
    return (sum(multidegree), tuple(multidegree))
