"""Hopf algebra structure maps at arbitrary tensor positions, plus a verifier.

A spec stores one coproduct, counit and antipode image per generator;
every structure map extends multiplicatively from there.  The antipode
is extended as an algebra homomorphism, which is only legitimate because
everything here is commutative; the antihomomorphism subtlety is real
but not represented.
"""

from __future__ import annotations

import random
import time

from .algebra import GeneratorDecl, GradedPoly, Universe, UniverseError
from .report import Failure, VerificationReport, make_report


class HopfAlgebraSpec:
    """Generators with degrees plus per-generator coproduct/counit/antipode images.

    ``ring`` is the central base universe; the spec's own ``universe``
    adds the Hopf generators as tagged.  The constructor checks shapes
    (arities, counit centrality), not the Hopf axioms; ``verify_hopf``
    does the axioms.
    """

    def __init__(self, name, ring, generators, delta, counit, antipode):
        self.name = name
        self.ring = ring
        self.generators = list(generators)
        self.universe = Universe(
            name, central=ring.central.values(), tagged=self.generators
        )
        self.delta = {}
        self.counit = {}
        self.antipode = {}
        for g in self.generators:
            for table, images, want_arity in (
                (self.delta, delta, 2),
                (self.counit, counit, 1),
                (self.antipode, antipode, 1),
            ):
                img = images[g.name]
                if img.universe != self.universe:
                    img = img.to_universe(self.universe)
                if img.max_tag() > want_arity:
                    raise UniverseError(
                        f"image of {g.name!r} uses tags beyond arity {want_arity}"
                    )
                table[g.name] = img.with_arity(want_arity)
            eps = self.counit[g.name]
            if eps.tagged_occurrences():
                raise UniverseError(
                    f"counit of {g.name!r} must land in the base ring"
                )

    def gen_element(self, name, tag=1, arity=None):
        return GradedPoly.gen(self.universe, name, tag=tag, arity=arity)

    def unit_of_counit(self, name):
        """eta(eps(g)) as an arity-1 element."""
        return self.counit[name]

    def __eq__(self, other):
        if not isinstance(other, HopfAlgebraSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.ring == other.ring
            and self.generators == other.generators
            and self.delta == other.delta
            and self.counit == other.counit
            and self.antipode == other.antipode
        )

    __hash__ = None

    def __repr__(self):
        return f"HopfAlgebraSpec({self.name!r}, gens={[g.name for g in self.generators]})"


def _shift_gen(universe, name, tag, arity):
    return GradedPoly.gen(universe, name, tag=tag, arity=arity)


def delta_at(H, element, position):
    """Coproduct applied to factor ``position``; output lands in positions p, p+1."""
    r = max(element.arity, element.max_tag())
    if not 1 <= position <= r:
        raise UniverseError(f"position {position} outside 1..{r}")
    arity = r + 1
    images = {}
    for tag, name in element.tagged_occurrences():
        if tag < position:
            images[(tag, name)] = _shift_gen(H.universe, name, tag, arity)
        elif tag == position:
            images[(tag, name)] = H.delta[name].retag(
                {1: position, 2: position + 1}, arity
            )
        else:
            images[(tag, name)] = _shift_gen(H.universe, name, tag + 1, arity)
    return element.apply_map(images, arity=arity, universe=H.universe)


def eps_at(H, element, position):
    """Counit applied to factor ``position``; higher tags shift down."""
    r = max(element.arity, element.max_tag())
    if not 1 <= position <= r:
        raise UniverseError(f"position {position} outside 1..{r}")
    arity = max(r - 1, 1)
    images = {}
    for tag, name in element.tagged_occurrences():
        if tag < position:
            images[(tag, name)] = _shift_gen(H.universe, name, tag, arity)
        elif tag == position:
            images[(tag, name)] = H.counit[name].with_arity(arity)
        else:
            images[(tag, name)] = _shift_gen(H.universe, name, tag - 1, arity)
    return element.apply_map(images, arity=arity, universe=H.universe)


def antipode_at(H, element, position):
    """Antipode applied in place at factor ``position``."""
    r = max(element.arity, element.max_tag())
    if not 1 <= position <= r:
        raise UniverseError(f"position {position} outside 1..{r}")
    images = {}
    for tag, name in element.tagged_occurrences():
        if tag == position:
            images[(tag, name)] = H.antipode[name].retag({1: position}, r)
        else:
            images[(tag, name)] = _shift_gen(H.universe, name, tag, r)
    return element.apply_map(images, arity=r, universe=H.universe)


def mu_merge(element, position):
    """Multiply factors ``position`` and ``position + 1`` together."""
    r = max(element.arity, element.max_tag())
    if not 1 <= position <= r - 1:
        raise UniverseError(f"position {position} outside 1..{r - 1}")
    arity = max(r - 1, 1)
    return element.map_tags(
        lambda t: t if t <= position else t - 1, arity
    )


def flip(element):
    """Swap the two factors of an arity-2 element."""
    if max(element.arity, element.max_tag()) != 2:
        raise UniverseError("flip needs an arity-2 element")
    return element.map_tags(lambda t: 3 - t, 2)


def _axiom_failures(H, label, element, cutoff):
    """Residuals of the Hopf axioms on a single arity-1 element."""
    failures = []
    d1 = delta_at(H, element, 1)
    # (id (x) Delta)Delta - (Delta (x) id)Delta
    co = (delta_at(H, d1, 2) - delta_at(H, d1, 1)).truncate_weight(cutoff)
    if co:
        failures.append(Failure(f"{label}/coassoc", co.canonical_str()))
    eps_target = element.truncate_weight(cutoff)
    left = eps_at(H, d1, 1).truncate_weight(cutoff)
    if left != eps_target:
        failures.append(
            Failure(f"{label}/counit-left", (left - eps_target).canonical_str())
        )
    right = eps_at(H, d1, 2).truncate_weight(cutoff)
    if right != eps_target:
        failures.append(
            Failure(f"{label}/counit-right", (right - eps_target).canonical_str())
        )
    # eta(eps(element)): central part of the counit applied at the only factor
    unit_image = eps_at(H, element, 1).truncate_weight(cutoff)
    anti_r = mu_merge(antipode_at(H, d1, 2), 1).truncate_weight(cutoff)
    if anti_r != unit_image:
        failures.append(
            Failure(f"{label}/antipode-right", (anti_r - unit_image).canonical_str())
        )
    anti_l = mu_merge(antipode_at(H, d1, 1), 1).truncate_weight(cutoff)
    if anti_l != unit_image:
        failures.append(
            Failure(f"{label}/antipode-left", (anti_l - unit_image).canonical_str())
        )
    return failures


def verify_hopf(H, cutoff, random_products=20, seed=0):
    """Check coassociativity, counit and antipode axioms modulo the cutoff.

    Generator checks suffice because the maps extend multiplicatively;
    the randomized products guard the extension machinery itself.
    Failures are aggregated in generator-declaration order.
    """
    started = time.perf_counter()
    failures = []
    for g in H.generators:
        failures.extend(
            _axiom_failures(H, g.name, H.gen_element(g.name), cutoff)
        )
    rng = random.Random(seed)
    names = [g.name for g in H.generators]
    for i in range(random_products if names else 0):
        element = GradedPoly.one(H.universe, 1)
        budget = rng.randint(1, max(cutoff, 1))
        while budget > 0:
            name = rng.choice(names)
            w = H.universe.weight(name)
            if w > budget:
                break
            element = element * H.gen_element(name)
            budget -= w
        failures.extend(_axiom_failures(H, f"random{i}", element, cutoff))
    return make_report(H.name, "hopf-axioms", cutoff, failures, started)


def builtin_hopf(kind, n, degree_step=-2, ring=None, names=None, name=None):
    """Construct a stock Hopf algebra: primitive or binomial generators.

    Primitive: Delta g = g<1> + g<2>, S g = -g.  Binomial: Delta c_k =
    sum c_i<1> c_{k-i}<2> with c_0 = 1, and S solved recursively so the
    antipode axiom holds by construction.
    """
    if kind not in ("primitive", "binomial"):
        raise ValueError(f"unknown builtin kind {kind!r}")
    if n < 1:
        raise ValueError("need at least one generator")
    ring = ring if ring is not None else Universe("Z")
    prefix = "b" if kind == "primitive" else "c"
    if names is None:
        names = [f"{prefix}{i}" for i in range(1, n + 1)]
    if len(names) != n:
        raise ValueError(f"expected {n} generator names, got {len(names)}")
    gens = [
        GeneratorDecl(names[i], degree=degree_step * (i + 1)) for i in range(n)
    ]
    universe = Universe(name or f"{kind}{n}", central=ring.central.values(), tagged=gens)
    delta, counit, antipode = {}, {}, {}
    if kind == "primitive":
        for g in gens:
            e1 = GradedPoly.gen(universe, g.name, tag=1, arity=2)
            e2 = GradedPoly.gen(universe, g.name, tag=2, arity=2)
            delta[g.name] = e1 + e2
            counit[g.name] = GradedPoly.zero(universe, 1)
            antipode[g.name] = -GradedPoly.gen(universe, g.name)
    else:
        one2 = GradedPoly.one(universe, 2)

        def c(i, tag):
            if i == 0:
                return one2
            return GradedPoly.gen(universe, names[i - 1], tag=tag, arity=2)

        s_images = {0: GradedPoly.one(universe, 1)}
        for k in range(1, n + 1):
            delta[names[k - 1]] = sum(
                (c(i, 1) * c(k - i, 2) for i in range(k + 1)),
                GradedPoly.zero(universe, 2),
            )
            counit[names[k - 1]] = GradedPoly.zero(universe, 1)
            # antipode axiom sum_{i=0..k} c_i S(c_{k-i}) = 0 solved for S(c_k)
            acc = GradedPoly.zero(universe, 1)
            for i in range(1, k + 1):
                ci = GradedPoly.gen(universe, names[i - 1])
                acc = acc + ci * s_images[k - i]
            s_images[k] = -acc
            antipode[names[k - 1]] = s_images[k]
    return HopfAlgebraSpec(
        name or f"{kind}{n}", ring, gens, delta, counit, antipode
    )
