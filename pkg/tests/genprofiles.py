"""Deterministic random instance generators for the acceptance suite.

Everything is seeded, so reruns exercise identical instances.  Generated
profiles deliberately mix positive cases (weighted sums, lexicographic
stacks, copies of one individual) with negative ones (ignored individuals,
trivially ordered social spaces) so the round trip between axiom checks
and synthesis is tested in both directions.
"""

from __future__ import annotations

import random
from fractions import Fraction

from coneagg.cones import LexCompose, OrthantCone, PolyhedralV, TrivialCone, lineality
from coneagg.linalg import AffineMap, mat, vec
from coneagg.profiles import Domain, Profile, Representation, check_DR, simplex_domain
from coneagg.spaces import Povs, real_line

F = Fraction


def _rational(rng, lo=-3, hi=3, den=2):
    return F(rng.randint(lo, hi), rng.randint(1, den))


def _matrix(rng, rows, cols, lo=-3, hi=3):
    return mat([[_rational(rng, lo, hi) for _ in range(cols)] for _ in range(rows)])


def random_cone(rng, dim):
    kind = rng.choice(["orthant", "polyhedral_v", "lex"] if dim >= 2 else ["orthant", "polyhedral_v"])
    if kind == "orthant":
        return OrthantCone(dim)
    if kind == "lex":
        return LexCompose(OrthantCone(dim - 1), OrthantCone(1))
    for _ in range(20):
        count = rng.randint(1, dim + 1)
        gens = tuple(
            vec([rng.randint(-2, 2) for _ in range(dim)]) for _ in range(count)
        )
        gens = tuple(g for g in gens if any(x != 0 for x in g))
        if not gens:
            continue
        cone = PolyhedralV(gens, dim)
        if lineality(cone).dim == 0:
            return cone
    return OrthantCone(dim)


def random_representation(rng, ambient, dim, cone):
    return Representation(
        Povs(dim, cone), AffineMap(_matrix(rng, dim, ambient), vec([_rational(rng) for _ in range(dim)]))
    )


def generated_profile(index: int) -> Profile:
    """Profile number ``index`` of the acceptance family."""
    rng = random.Random(51000 + index)
    outcomes = rng.randint(2, 4)
    domain = simplex_domain(outcomes)
    k = rng.randint(2, 4)
    standard = rng.random() < 0.55
    if standard:
        individuals = tuple(
            Representation(
                real_line(),
                AffineMap(_matrix(rng, 1, outcomes, -4, 4), vec([0])),
            )
            for _ in range(k)
        )
        variant = rng.choice(["weighted_sum", "weighted_sum", "lex_stack", "ignored", "trivial"])
        if variant == "weighted_sum":
            weights = [F(rng.randint(1, 5), rng.randint(1, 2)) for _ in range(k)]
            row = [
                sum(w * ind.map.matrix[0][c] for w, ind in zip(weights, individuals))
                for c in range(outcomes)
            ]
            offset = _rational(rng)
            social = Representation(real_line(), AffineMap(mat([row]), vec([offset])))
        elif variant == "lex_stack":
            rows = [individuals[0].map.matrix[0], individuals[1].map.matrix[0]]
            cone = LexCompose(OrthantCone(1), OrthantCone(1))
            social = Representation(Povs(2, cone), AffineMap(mat(rows), vec([0, 0])))
        elif variant == "ignored":
            social = Representation(
                real_line(), AffineMap(individuals[0].map.matrix, vec([0]))
            )
        else:
            social = Representation(
                Povs(1, TrivialCone(1)),
                AffineMap(_matrix(rng, 1, outcomes, -2, 2), vec([0])),
            )
    else:
        individuals = []
        for _ in range(k):
            dim = rng.randint(1, 3)
            cone = random_cone(rng, dim)
            individuals.append(random_representation(rng, outcomes, dim, cone))
        individuals = tuple(individuals)
        j = rng.randrange(k)
        variant = rng.choice(["copy", "copy", "trivial"])
        if variant == "copy":
            social = individuals[j]
        else:
            social = Representation(
                Povs(1, TrivialCone(1)),
                AffineMap(_matrix(rng, 1, outcomes, -2, 2), vec([0])),
            )
    return Profile(domain, individuals, social)


def planted_affine_instance(index: int):
    """A DR-true profile whose social map is a planted affine combination."""
    rng = random.Random(72000 + index)
    for _ in range(50):
        outcomes = rng.randint(3, 4)
        domain = simplex_domain(outcomes)
        k = rng.randint(2, 3)
        individuals = tuple(
            Representation(
                real_line(), AffineMap(_matrix(rng, 1, outcomes, -4, 4), vec([0]))
            )
            for _ in range(k)
        )
        d0 = rng.randint(1, 2)
        l_star = _matrix(rng, d0, k)
        b_star = vec([_rational(rng) for _ in range(d0)])
        joint = AffineMap.stack([r.map for r in individuals])
        social_matrix = mat(
            [
                [
                    sum(l_star[r][i] * joint.matrix[i][c] for i in range(k))
                    for c in range(outcomes)
                ]
                for r in range(d0)
            ]
        )
        social = Representation(
            Povs(d0, OrthantCone(d0)), AffineMap(social_matrix, b_star)
        )
        profile = Profile(domain, individuals, social)
        if check_DR(profile):
            return profile, l_star, b_star
    raise RuntimeError("could not generate a rich planted instance")


def weighted_sum_instance(index: int):
    """Simplex profile with positive planted weights and a constant."""
    rng = random.Random(83000 + index)
    for _ in range(50):
        outcomes = rng.randint(3, 4)
        domain = simplex_domain(outcomes)
        k = rng.randint(2, 4)
        individuals = tuple(
            Representation(
                real_line(), AffineMap(_matrix(rng, 1, outcomes, -4, 4), vec([0]))
            )
            for _ in range(k)
        )
        weights = [F(rng.randint(1, 6), rng.randint(1, 3)) for _ in range(k)]
        b = _rational(rng)
        row = [
            sum(w * ind.map.matrix[0][c] for w, ind in zip(weights, individuals))
            for c in range(outcomes)
        ]
        social = Representation(real_line(), AffineMap(mat([row]), vec([b])))
        profile = Profile(domain, individuals, social)
        if check_DR(profile):
            return profile, weights, b
    raise RuntimeError("could not generate a rich weighted-sum instance")


def pooling_instance(index: int):
    """Random probability measures with a planted convex social combination."""
    from coneagg.pooling import FiniteAlgebra, VectorMeasure, cube_profile

    rng = random.Random(94000 + index)
    for _ in range(80):
        atoms = rng.randint(3, 6)
        names = tuple(f"a{i}" for i in range(atoms))
        algebra = FiniteAlgebra(names)
        k = rng.randint(2, min(4, atoms - 1))
        measures = []
        for _ in range(k):
            raw = [rng.randint(1, 6) for _ in range(atoms)]
            total = sum(raw)
            measures.append(
                VectorMeasure(
                    algebra, real_line(), tuple(vec([F(r, total)]) for r in raw)
                )
            )
        raw_w = [rng.randint(1, 5) for _ in range(k)]
        total_w = sum(raw_w)
        alphas = [F(r, total_w) for r in raw_w]
        social_values = []
        for j in range(atoms):
            social_values.append(
                vec([sum(a * m.atom_values[j][0] for a, m in zip(alphas, measures))])
            )
        social = VectorMeasure(algebra, real_line(), tuple(social_values))
        profile = cube_profile(algebra, measures, social)
        if check_DR(profile):
            return algebra, measures, social, alphas
    raise RuntimeError("could not generate a rich pooling instance")
