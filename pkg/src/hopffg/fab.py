"""Exact gcd/divisibility calculus of classifying-space limits.

Transition multipliers of stable homotopy generators, limit-sequence
and stable-equivalence-chain validation, finite direct limits as
explicit subgroups of Q, and the admissibility predicates.  Everything
here is plain integer arithmetic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .report import Failure, make_report

STABLE_CHAIN_NOTE = (
    "only the numeric chain conditions are checked; the tensor-by-trivial "
    "isomorphism data of stable equivalence is out of scope"
)


@dataclass(frozen=True)
class PairChain:
    """Ordered pairs (k_j, l_j) of positive integers, optionally with dim X."""

    name: str
    pairs: tuple
    dim: int | None = None

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("chain needs at least one pair")
        for k, l in self.pairs:
            if k < 1 or l < 1:
                raise ValueError("chain entries must be >= 1")
        if self.dim is not None and self.dim < 0:
            raise ValueError("dim must be nonnegative")


@dataclass(frozen=True)
class LimitGroup:
    """trivial | integers | fraction (the subgroup (1/denominator)Z of Q)."""

    kind: str
    denominator: int = 1
    inverted_primes: frozenset = field(default_factory=frozenset)

    def describe(self):
        if self.kind == "trivial":
            return "0"
        if self.kind == "integers":
            return "Z"
        primes = ",".join(str(p) for p in sorted(self.inverted_primes))
        return f"(1/{self.denominator})Z, inverted primes {{{primes}}}"


TRIVIAL_GROUP = LimitGroup("trivial")
INTEGERS = LimitGroup("integers")


def transition_multiplier(k, l, m, n):
    """gcd(m,n)/gcd(k,l), defined when the (k,l) stage maps into (m,n)."""
    if m % k or n % l:
        raise ValueError(f"no morphism: need {k}|{m} and {l}|{n}")
    return math.gcd(m, n) // math.gcd(k, l)


def stable_homotopy_group(r, k, l):
    """The stable homotopy group in dimension r below the range 2*min(k,l)."""
    if r < 0:
        raise ValueError("dimension must be nonnegative")
    if r >= 2 * min(k, l):
        raise ValueError(f"dimension {r} outside the stable range < {2 * min(k, l)}")
    if r % 2 == 0 and r > 2:
        return INTEGERS
    return TRIVIAL_GROUP


def validate_limit_sequence(chain):
    """Divisibility and coprimality along the chain; unboundedness is advisory.

    A finite prefix cannot witness k_j, l_j -> infinity, so the strictly-
    increasing proxy is reported as a note, never as a verdict.
    """
    started = time.perf_counter()
    failures = []
    pairs = chain.pairs
    for j in range(1, len(pairs)):
        (pk, pl), (ck, cl) = pairs[j - 1], pairs[j]
        if ck % pk or cl % pl:
            failures.append(
                Failure(j, f"divisibility fails: ({pk},{pl}) -/-> ({ck},{cl})")
            )
    for j, (k, l) in enumerate(pairs):
        g = math.gcd(k, l)
        if g != 1:
            failures.append(Failure(j, f"gcd({k},{l}) = {g}"))
    failures.sort(key=lambda f: f.location)
    notes = []
    first, last = pairs[0], pairs[-1]
    if len(pairs) > 1 and last[0] > first[0] and last[1] > first[1]:
        notes.append("unboundedness proxy holds: last entries strictly exceed first")
    else:
        notes.append("unboundedness proxy not witnessed by this finite prefix")
    return make_report(chain.name, "limit-sequence", None, failures, started, notes)


def validate_stable_chain(chain, first, last):
    """Endpoint equality (as unordered pairs) and adjacent coprimality."""
    started = time.perf_counter()
    failures = []
    pairs = chain.pairs
    if sorted(pairs[0]) != sorted(first):
        failures.append(Failure(0, f"first pair {pairs[0]} is not {tuple(first)}"))
    if sorted(pairs[-1]) != sorted(last):
        failures.append(
            Failure(len(pairs) - 1, f"last pair {pairs[-1]} is not {tuple(last)}")
        )
    for i in range(len(pairs) - 1):
        (t1, u1), (t2, u2) = pairs[i], pairs[i + 1]
        g = math.gcd(t1 * t2, u1 * u2)
        if g != 1:
            failures.append(Failure(i, f"gcd({t1 * t2},{u1 * u2}) = {g}"))
    failures.sort(key=lambda f: f.location)
    return make_report(
        chain.name, "stable-chain", None, failures, started, [STABLE_CHAIN_NOTE]
    )


def tensor_admissible(k, l, m, n):
    """Whether the product of the (k,l) and (m,n) objects stays in the class."""
    return math.gcd(k * m, l * n) == 1


def representative_exists(k, l, dim_x):
    """Whether every class over a dim_x complex has a (k,l)-stage representative."""
    return math.gcd(k, l) == 1 and 2 * min(k, l) > dim_x


def _prime_factors(n):
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def finite_direct_limit(multipliers):
    """Colimit of Z --a1--> Z --a2--> ... as a subgroup of Q.

    All multipliers 1 gives Z back; otherwise the colimit is generated
    by 1/(prod a_i), and the inverted primes classify the localization
    the infinite limit would perform.
    """
    product = 1
    for a in multipliers:
        if a < 1:
            raise ValueError("multipliers must be positive")
        product *= a
    if product == 1:
        return INTEGERS
    return LimitGroup(
        "fraction", denominator=product, inverted_primes=frozenset(_prime_factors(product))
    )
