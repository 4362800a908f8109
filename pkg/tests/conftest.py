import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hopffg.algebra import GradedPoly
from hopffg.fgl import builtin_fgl
from hopffg.hopf import builtin_hopf
from hopffg.hopffgl import HopfFGL, trivial_extension
from hopffg.series import TruncatedSeries

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def primitive_b():
    return builtin_hopf("primitive", 1, -2, names=["b"], name="Hb")


@pytest.fixture(scope="session")
def binomial_c4():
    return builtin_hopf("binomial", 4, -2, name="Hc")


@pytest.fixture(scope="session")
def binomial_c6():
    return builtin_hopf("binomial", 6, -2, name="Hc6")


@pytest.fixture(scope="session")
def trivial_extensions(primitive_b, binomial_c4):
    out = []
    for kind in ("additive", "multiplicative"):
        for H in (primitive_b, binomial_c4):
            F = builtin_fgl(kind, 6)
            out.append(trivial_extension(F, H))
    return out


def perturb(G, location, element, scale=1, name=None):
    """Add scale*element to the coefficient at ``location``."""
    series = G.series
    coeffs = dict(series.terms)
    base = series.coefficient(location)
    coeffs[location] = base + element * scale
    new = TruncatedSeries.from_coefficients(
        series.universe, series.arity, series.vars, series.cutoff, coeffs
    )
    return HopfFGL(name or f"{G.name}~{location}", G.hopf, new)


def perturbation_corpus(trivial_exts, count=16, cutoff=5, seed=20240612):
    """Deterministic single-coefficient perturbations of the trivial lifts."""
    rng = random.Random(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < 400:
        attempts += 1
        G = rng.choice(trivial_exts)
        uni = G.hopf.universe
        gens = sorted(uni.tagged)
        name = rng.choice(gens)
        tag = rng.choice((1, 2))
        power = rng.choice((1, 1, 2))
        scale = rng.choice((1, -1, 2))
        i = rng.randint(0, 3)
        j = rng.randint(0 if i >= 1 else 1, 3)
        if i + j < 1 or i + j > 4:
            continue
        element = GradedPoly.gen(uni, name, tag=tag, arity=2) ** power
        if i + j == 1:
            # keep the construction invariant (eps x eps) = 1 intact:
            # the perturbation is augmentation-positive, so it survives
            pass
        base = G.series.truncate(cutoff)
        G5 = HopfFGL(G.name, G.hopf, base)
        out.append(
            perturb(G5, (i, j), element, scale, name=f"{G.name}#p{len(out)}")
        )
    assert len(out) == count
    return out
