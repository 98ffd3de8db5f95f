"""Vector measures on finite Boolean algebras and exact opinion pooling.

A measure assigns one vector per atom; events are atom subsets and the
measure is additive by construction.  Extending a measure over the unit
cube of per-atom weights (each coordinate the bias of an independent coin)
turns likelihood comparison into an ordinary profile over a polytope, so
the whole aggregation pipeline applies: axiom checks, synthesis with
certificates, and exact recovery of pooling weights.

Two auxiliary checks live here as well: a brute-force cancellation oracle
for induced likelihood relations, and a quantitative convexity-gap
measurement for discretized ranges (the finite stand-in for non-atomic
range convexity, which no finite algebra can reproduce exactly).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Callable, Iterable, Optional, Sequence, Union

from .linalg import AffineMap, DimensionMismatchError, Vector, vadd, vec, vneg, zeros
from .cones import OrderRelationResult, Relation, classify, member
from .pareto import check_axioms
from .profiles import Domain, Profile, Representation, check_DR, cube_domain
from .spaces import Povs
from .aggregate import (
    AffineSolution,
    AxiomFailedError,
    SynthesisResult,
    solve_affine,
    synthesize,
)


class UnknownAtomError(KeyError):
    pass


class NotZeroAtEmptyError(ValueError):
    """The representation has a nonzero value at the empty event."""


@dataclass(frozen=True)
class FiniteAlgebra:
    atoms: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atom names must be unique")

    def index_of(self, atom: str) -> int:
        try:
            return self.atoms.index(atom)
        except ValueError:
            raise UnknownAtomError(atom) from None

    def event(self, names: Iterable[str]) -> frozenset[str]:
        ev = frozenset(names)
        for a in ev:
            if a not in self.atoms:
                raise UnknownAtomError(a)
        return ev

    @property
    def full_event(self) -> frozenset[str]:
        return frozenset(self.atoms)


@dataclass(frozen=True)
class VectorMeasure:
    algebra: FiniteAlgebra
    space: Povs
    atom_values: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.atom_values) != len(self.algebra.atoms):
            raise DimensionMismatchError("one value vector per atom required")
        for v in self.atom_values:
            if len(v) != self.space.dim:
                raise DimensionMismatchError("atom value dim vs target space")


def measure_of(vm: VectorMeasure, event: Iterable[str]) -> Vector:
    """Value of an event: the sum of its atoms' values (finite additivity)."""
    ev = vm.algebra.event(event)
    total = zeros(vm.space.dim)
    for atom in vm.algebra.atoms:
        if atom in ev:
            total = vadd(total, vm.atom_values[vm.algebra.index_of(atom)])
    return total


def likelihood_compare(vm: VectorMeasure, a: Iterable[str], b: Iterable[str]) -> OrderRelationResult:
    return classify(vm.space.order, measure_of(vm, a), measure_of(vm, b))


def extend(vm: VectorMeasure) -> Representation:
    """Mixture-preserving representation of the measure on the weight cube.

    Indicator vertices evaluate to the event values; a general cube point
    weights each atom by its coin bias.  The offset is zero, so the empty
    event maps to the origin.
    """
    n = len(vm.algebra.atoms)
    matrix = tuple(
        tuple(vm.atom_values[j][i] for j in range(n)) for i in range(vm.space.dim)
    )
    return Representation(vm.space, AffineMap(matrix, zeros(vm.space.dim)))


def restrict(algebra: FiniteAlgebra, rep: Representation) -> VectorMeasure:
    """Read a vector measure back off a cube representation.

    Requires value zero at the all-zero vertex; atom values are the images
    of the unit indicators.  ``extend`` followed by ``restrict`` is the
    identity, and that is asserted here.
    """
    n = len(algebra.atoms)
    if rep.map.matrix and rep.map.input_dim != n:
        raise DimensionMismatchError("representation input dim vs atom count")
    if any(x != 0 for x in rep.map.offset):
        raise NotZeroAtEmptyError("cube representation is nonzero at the empty event")
    values = []
    for j in range(n):
        indicator = tuple(Fraction(1 if k == j else 0) for k in range(n))
        values.append(rep.map(indicator))
    vm = VectorMeasure(algebra, rep.space, tuple(values))
    assert extend(vm).map.matrix == rep.map.matrix, "extend/restrict round trip broke"
    return vm


@dataclass(frozen=True)
class PositivityNontriviality:
    positive: bool
    nontrivial: bool
    exhaustive: bool
    positivity_witness: Optional[frozenset[str]] = None
    nontriviality_witness: Optional[frozenset[str]] = None


def check_positivity_nontriviality(
    vm: VectorMeasure, enumeration_cap: int = 2 ** 20
) -> PositivityNontriviality:
    """Event positivity and non-triviality of the induced likelihood order.

    Atomwise positivity is sufficient by additivity and necessary because
    singletons are events; non-triviality genuinely needs enumeration
    (atoms may be incomparable to zero while a union is strictly above).
    """
    atoms = vm.algebra.atoms
    positive = True
    pos_witness = None
    for atom, value in zip(atoms, vm.atom_values):
        if not member(vm.space.order, value).holds:
            positive = False
            pos_witness = frozenset([atom])
            break
    n = len(atoms)
    exhaustive = 2 ** n <= enumeration_cap
    order = vm.space.order

    def strictly_positive(value: Vector) -> bool:
        return member(order, value).holds and not member(order, vneg(value)).holds

    nontrivial = False
    nt_witness = None
    if exhaustive:
        for mask in range(2 ** n):
            value = zeros(vm.space.dim)
            for j in range(n):
                if (mask >> j) & 1:
                    value = vadd(value, vm.atom_values[j])
            if strictly_positive(value):
                nontrivial = True
                nt_witness = frozenset(atoms[j] for j in range(n) if (mask >> j) & 1)
                break
    else:
        # Incomplete check: singletons and the full event only.
        candidates = [frozenset([a]) for a in atoms] + [vm.algebra.full_event]
        for ev in candidates:
            if strictly_positive(measure_of(vm, ev)):
                nontrivial = True
                nt_witness = ev
                break
    return PositivityNontriviality(positive, nontrivial, exhaustive, pos_witness, nt_witness)


# ---------------------------------------------------------------------------
# Pooling through convexification.


@dataclass(frozen=True)
class PoolReport:
    profile: Profile
    synthesis: SynthesisResult
    dr_holds: bool
    affine: Optional[AffineSolution]


def cube_profile(
    algebra: FiniteAlgebra,
    individual_vms: Sequence[VectorMeasure],
    social_vm: VectorMeasure,
) -> Profile:
    domain = cube_domain(len(algebra.atoms))
    reps = tuple(extend(vm) for vm in individual_vms)
    return Profile(domain, reps, extend(social_vm))


def pool(
    algebra: FiniteAlgebra,
    individual_vms: Sequence[VectorMeasure],
    social_vm: VectorMeasure,
    mixture_samples: int = 500,
) -> PoolReport:
    """Aggregate likelihoods: axioms, certified synthesis, weight recovery.

    Raises AxiomFailedError with the failing report (the private-information
    urn is the canonical case).  Under domain richness the affine solution
    pins down the pooling weights with zero constant.
    """
    for vm in individual_vms:
        if vm.algebra.atoms != algebra.atoms:
            raise ValueError("measure algebra mismatch")
    if social_vm.algebra.atoms != algebra.atoms:
        raise ValueError("social measure algebra mismatch")
    profile = cube_profile(algebra, individual_vms, social_vm)
    synthesis = synthesize(profile, "P4", mixture_samples=mixture_samples)
    dr = check_DR(profile)
    affine = None
    if dr:
        sol = solve_affine(profile)
        assert isinstance(sol, AffineSolution)
        affine = sol
    return PoolReport(profile, synthesis, dr, affine)


# ---------------------------------------------------------------------------
# Cancellation oracle.


LikelihoodRelation = Callable[[frozenset, frozenset], bool]


@dataclass(frozen=True)
class GfcViolation:
    premises: tuple[tuple[frozenset, frozenset], ...]
    conclusion: tuple[frozenset, frozenset]
    repetition: int


@dataclass(frozen=True)
class GfcResult:
    holds: bool
    violation: Optional[GfcViolation] = None


def gfc_check(
    algebra: FiniteAlgebra,
    likelihood: Union[VectorMeasure, LikelihoodRelation],
    k_max: int,
) -> GfcResult:
    """Brute-force the repetition-cancellation schema up to length k_max.

    The schema implemented: whenever indicator sums balance, i.e.
    sum_{m<k}(1_{A_m} - 1_{B_m}) + r (1_{A_k} - 1_{B_k}) = 0 with r >= 1,
    and A_m is weakly more likely than B_m for every m < k, then B_k must
    be weakly more likely than A_k.  Any additively represented relation
    satisfies it; the oracle exists to certify that and to expose failures
    of hand-built relations.  Exponential in the atom count, so capped.
    """
    atoms = algebra.atoms
    n = len(atoms)
    if n > 8:
        raise ValueError("cancellation oracle is exponential; at most 8 atoms")
    if isinstance(likelihood, VectorMeasure):
        vm = likelihood

        def likes(a: frozenset, b: frozenset) -> bool:
            rel = likelihood_compare(vm, a, b).relation
            return rel in (Relation.STRICT_GREATER, Relation.EQUIVALENT)

    else:
        likes = likelihood

    events = []
    for mask in range(2 ** n):
        events.append(frozenset(atoms[j] for j in range(n) if (mask >> j) & 1))

    def indicator_diff(a: frozenset, b: frozenset):
        return tuple((atom in a) - (atom in b) for atom in atoms)

    pairs = [(a, b) for a in events for b in events]
    diff_of = {pair: indicator_diff(*pair) for pair in pairs}
    by_diff: dict[tuple, list] = {}
    for pair, d in diff_of.items():
        by_diff.setdefault(d, []).append(pair)
    rel_pairs = [pair for pair in pairs if likes(*pair)]

    zero = (0,) * n
    for k in range(1, k_max + 1):
        for premises in iter_product(rel_pairs, repeat=k - 1):
            partial = zero
            for pair in premises:
                d = diff_of[pair]
                partial = tuple(x + y for x, y in zip(partial, d))
            for r in range(1, k_max + 1):
                if any(x % r for x in partial):
                    continue
                needed = tuple(-x // r for x in partial)
                for a_k, b_k in by_diff.get(needed, ()):
                    if not likes(b_k, a_k):
                        return GfcResult(
                            False,
                            GfcViolation(tuple(premises), (a_k, b_k), r),
                        )
    return GfcResult(True)


# ---------------------------------------------------------------------------
# Range-convexity gap.


@dataclass(frozen=True)
class LyapunovGap:
    gap: Fraction
    range_size: int
    pairs_checked: int
    exhaustive: bool


def lyapunov_gap(
    atom_count: int,
    measures: Sequence[Sequence],
    sample_pairs: int = 400,
    seed: int = 7,
    pair_budget: int = 20000,
) -> LyapunovGap:
    """Worst midpoint distance from the joint range of subset sums.

    For each pair of range points the target is their midpoint, and the
    distance is the sup-norm gap to the nearest achievable range point.  A
    uniform single measure on n cells yields a gap of at most 1/n, shrinking
    as the discretization refines; that quantitative statement replaces the
    non-atomic range-convexity theorem, which has no finite counterpart.
    """
    if atom_count > 16:
        raise ValueError("exhaustive subset enumeration is capped at 16 atoms")
    ms = [vec(m) for m in measures]
    for m in ms:
        if len(m) != atom_count:
            raise DimensionMismatchError("measure length vs atom count")
    points = set()
    k = len(ms)
    for mask in range(2 ** atom_count):
        val = tuple(
            sum((m[j] for j in range(atom_count) if (mask >> j) & 1), Fraction(0))
            for m in ms
        )
        points.add(val)
    pts = sorted(points)
    pairs = []
    if len(pts) * (len(pts) - 1) // 2 <= pair_budget:
        exhaustive = True
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                pairs.append((pts[i], pts[j]))
    else:
        exhaustive = False
        rng = random.Random(seed)
        for _ in range(sample_pairs):
            pairs.append((rng.choice(pts), rng.choice(pts)))
    worst = Fraction(0)
    for p, q in pairs:
        target = tuple((a + b) / 2 for a, b in zip(p, q))
        best = None
        for r in pts:
            dist = max((abs(a - b) for a, b in zip(r, target)), default=Fraction(0))
            if best is None or dist < best:
                best = dist
                if best == 0:
                    break
        if best is not None and best > worst:
            worst = best
    return LyapunovGap(worst, len(pts), len(pairs), exhaustive)
