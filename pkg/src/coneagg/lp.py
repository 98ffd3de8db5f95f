"""Exact rational linear feasibility with replayable Farkas certificates.

``lp_decide`` accepts a system of EQ / GEQ / GT rows and either produces an
exact rational witness (strict rows satisfied strictly) or an infeasibility
certificate: multipliers over the original rows, nonnegative on inequality
rows and signed on equality rows, whose combination collapses to ``0 >= c``
with ``c > 0``, or to ``0 > c`` with ``c >= 0`` when a strict row carries
positive weight.

Strategy: homogenize with an extra coordinate ``tau > 0`` and maximize a
shared slack ``t`` for the strict block (bounded by ``t <= 1``); the system
is feasible iff the optimum is positive.  When it is not, the transposed
alternative system (a plain EQ/GEQ feasibility problem) is solved and its
witness is exactly the Farkas certificate.  Certificates are re-multiplied
and checked before being returned.

The simplex core uses Bland's rule throughout, so identical inputs yield
identical witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .linalg import (
    ONE,
    ZERO,
    DimensionMismatchError,
    Vector,
    frac,
    vec,
    zeros,
)

try:  # gmpy2's mpq is a drop-in exact rational, roughly 10x faster to pivot
    from gmpy2 import mpq as _mpq

    def _to_fast(x):
        return _mpq(x.numerator, x.denominator)

    def _from_fast(x):
        return Fraction(int(x.numerator), int(x.denominator))

    _FAST_ZERO = _mpq(0)
    _FAST_ONE = _mpq(1)
    _FAST_MINUS_ONE = _mpq(-1)
except ImportError:  # pragma: no cover - exercised only without gmpy2
    def _to_fast(x):
        return x

    def _from_fast(x):
        return x if isinstance(x, Fraction) else Fraction(x)

    _FAST_ZERO = ZERO
    _FAST_ONE = ONE
    _FAST_MINUS_ONE = Fraction(-1)


class Rel(Enum):
    EQ = "eq"
    GEQ = "geq"
    GT = "gt"


@dataclass(frozen=True)
class Constraint:
    rel: Rel
    coeffs: Vector
    rhs: Fraction

    @staticmethod
    def make(rel: Rel, coeffs, rhs=0) -> "Constraint":
        return Constraint(rel, vec(coeffs), frac(rhs))

    def holds_at(self, x: Vector) -> bool:
        lhs = sum((c * v for c, v in zip(self.coeffs, x)), ZERO)
        if self.rel is Rel.EQ:
            return lhs == self.rhs
        if self.rel is Rel.GEQ:
            return lhs >= self.rhs
        return lhs > self.rhs


@dataclass(frozen=True)
class LinearConstraintSystem:
    dim: int
    rows: tuple[Constraint, ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row.coeffs) != self.dim:
                raise DimensionMismatchError(
                    f"row has {len(row.coeffs)} coefficients in a dim-{self.dim} system"
                )


@dataclass(frozen=True)
class Feasible:
    witness: Vector


@dataclass(frozen=True)
class Infeasible:
    certificate: Vector


LpResult = Union[Feasible, Infeasible]


class LpInternalError(RuntimeError):
    """The solver or certificate verification reached an impossible state."""


# ---------------------------------------------------------------------------
# Simplex core: maximize c.x subject to A x = b, x >= 0.


_OPTIMAL = "optimal"
_INFEASIBLE = "infeasible"
_UNBOUNDED = "unbounded"


def _pivot(tableau, obj, basis, row, col):
    piv = tableau[row][col]
    tableau[row] = [x / piv for x in tableau[row]]
    prow = tableau[row]
    for i, trow in enumerate(tableau):
        if i != row and trow[col] != 0:
            f = trow[col]
            tableau[i] = [x - f * y for x, y in zip(trow, prow)]
    if obj[col] != 0:
        f = obj[col]
        obj[:] = [x - f * y for x, y in zip(obj, prow)]
    basis[row] = col


def _run_simplex(tableau, obj, basis, ncols_allowed):
    """Bland-rule iterations; obj holds reduced costs (z_j - c_j) and value."""
    while True:
        col = None
        for j in range(ncols_allowed):
            if obj[j] < 0:
                col = j
                break
        if col is None:
            return _OPTIMAL
        row = None
        best = None
        for i, trow in enumerate(tableau):
            if trow[col] > 0:
                ratio = trow[-1] / trow[col]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best = ratio
                    row = i
        if row is None:
            return _UNBOUNDED
        _pivot(tableau, obj, basis, row, col)


def _objective_row(tableau, basis, cost, ncols):
    obj = []
    for j in range(ncols + 1):
        s = _FAST_ZERO
        for i, trow in enumerate(tableau):
            cb = cost[basis[i]]
            if cb != 0:
                s += cb * trow[j]
        if j < ncols:
            s -= cost[j]
        obj.append(s)
    return obj


def simplex_maximize(a_rows: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
                     c: Sequence[Fraction]):
    """Two-phase exact simplex.  Returns (status, x, value)."""
    m = len(a_rows)
    n = len(c)
    tableau = []
    for row, rhs in zip(a_rows, b):
        frow = [_to_fast(x) for x in row]
        frhs = _to_fast(rhs)
        if frhs < 0:
            tableau.append([-x for x in frow] + [-frhs])
        else:
            tableau.append(frow + [frhs])
    # artificial columns n .. n+m-1
    for i, trow in enumerate(tableau):
        art = [_FAST_ZERO] * m
        art[i] = _FAST_ONE
        tableau[i] = trow[:-1] + art + [trow[-1]]
    basis = [n + i for i in range(m)]
    cost1 = [_FAST_ZERO] * n + [_FAST_MINUS_ONE] * m
    obj = _objective_row(tableau, basis, cost1, n + m)
    status = _run_simplex(tableau, obj, basis, n + m)
    if status != _OPTIMAL:
        raise LpInternalError("phase 1 cannot be unbounded")
    value1 = obj[-1]  # equals c_B . b for the phase-1 cost
    if value1 < 0:
        return _INFEASIBLE, None, None
    # Drive remaining artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            piv_col = None
            for j in range(n):
                if tableau[i][j] != 0:
                    piv_col = j
                    break
            if piv_col is None:
                continue  # redundant row
            _pivot(tableau, obj, basis, i, piv_col)
        keep.append(i)
    tableau = [tableau[i][:n] + [tableau[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    cost2 = [_to_fast(x) for x in c]
    obj = _objective_row(tableau, basis, cost2, n)
    status = _run_simplex(tableau, obj, basis, n)
    if status == _UNBOUNDED:
        return _UNBOUNDED, None, None
    x = [ZERO] * n
    for i, bi in enumerate(basis):
        x[bi] = _from_fast(tableau[i][-1])
    return _OPTIMAL, tuple(x), _from_fast(obj[-1])


# ---------------------------------------------------------------------------
# Feasibility with certificates.


def _homogenize(sys: LinearConstraintSystem):
    """Split rows into strict / nonstrict / equality blocks over (x, tau)."""
    strict, nonstrict, equalities = [], [], []
    for idx, row in enumerate(sys.rows):
        h = row.coeffs + (-row.rhs,)
        if row.rel is Rel.GT:
            strict.append((idx, h))
        elif row.rel is Rel.GEQ:
            nonstrict.append((idx, h))
        else:
            equalities.append((idx, h))
    tau_row = tuple(ZERO for _ in range(sys.dim)) + (ONE,)
    strict.append((None, tau_row))  # tau > 0 closes the homogenization
    return strict, nonstrict, equalities


def _feasibility_lp(sys: LinearConstraintSystem):
    """Build and solve: maximize t with strict rows >= t, t <= 1."""
    n1 = sys.dim + 1
    strict, nonstrict, equalities = _homogenize(sys)
    n_t = 2 * n1
    n_slack_strict = n_t + 1
    n_slack_nonstrict = n_slack_strict + len(strict)
    ncols = n_slack_nonstrict + len(nonstrict) + 1  # + bound slack
    rows, rhs = [], []

    def z_coeffs(h):
        return [h[j] for j in range(n1)] + [-h[j] for j in range(n1)]

    for k, (_, h) in enumerate(strict):
        row = z_coeffs(h) + [ZERO] * (ncols - n_t)
        row[n_t] = Fraction(-1)
        row[n_slack_strict + k] = Fraction(-1)
        rows.append(row)
        rhs.append(ZERO)
    for j, (_, h) in enumerate(nonstrict):
        row = z_coeffs(h) + [ZERO] * (ncols - n_t)
        row[n_slack_nonstrict + j] = Fraction(-1)
        rows.append(row)
        rhs.append(ZERO)
    for _, h in equalities:
        row = z_coeffs(h) + [ZERO] * (ncols - n_t)
        rows.append(row)
        rhs.append(ZERO)
    bound = [ZERO] * ncols
    bound[n_t] = ONE
    bound[ncols - 1] = ONE
    rows.append(bound)
    rhs.append(ONE)
    cost = [ZERO] * ncols
    cost[n_t] = ONE
    status, x, value = simplex_maximize(rows, rhs, cost)
    if status != _OPTIMAL:
        raise LpInternalError(f"slack maximization ended with status {status}")
    z = tuple(x[j] - x[n1 + j] for j in range(n1))
    return value, z


def _alternative_certificate(sys: LinearConstraintSystem) -> Vector:
    """Solve the transposed system; its witness is the Farkas certificate."""
    strict, nonstrict, equalities = _homogenize(sys)
    n1 = sys.dim + 1
    np_, nq, nr = len(strict), len(nonstrict), len(equalities)
    ncols = np_ + nq + 2 * nr
    rows, rhs = [], []
    for coord in range(n1):
        row = []
        row.extend(h[coord] for _, h in strict)
        row.extend(h[coord] for _, h in nonstrict)
        for _, h in equalities:
            row.extend((h[coord], -h[coord]))
        rows.append(row)
        rhs.append(ZERO)
    norm = [ONE] * np_ + [ZERO] * (ncols - np_)
    rows.append(norm)
    rhs.append(ONE)
    status, y, _ = simplex_maximize(rows, rhs, [ZERO] * ncols)
    if status != _OPTIMAL:
        raise LpInternalError("alternative system must be feasible when the primal is not")
    cert = [ZERO] * len(sys.rows)
    for k, (idx, _) in enumerate(strict):
        if idx is not None:
            cert[idx] = y[k]
    for j, (idx, _) in enumerate(nonstrict):
        cert[idx] = y[np_ + j]
    for l, (idx, _) in enumerate(equalities):
        cert[idx] = y[np_ + nq + 2 * l] - y[np_ + nq + 2 * l + 1]
    return tuple(cert)


def verify_witness(sys: LinearConstraintSystem, x: Vector) -> bool:
    if len(x) != sys.dim:
        return False
    return all(row.holds_at(x) for row in sys.rows)


def verify_certificate(sys: LinearConstraintSystem, cert: Vector) -> bool:
    """Re-multiply the certificate and check it derives a contradiction."""
    if len(cert) != len(sys.rows):
        return False
    combo = list(zeros(sys.dim))
    rhs_combo = ZERO
    strict_weight = ZERO
    for mult, row in zip(cert, sys.rows):
        if row.rel is not Rel.EQ and mult < 0:
            return False
        if mult == 0:
            continue
        for j, cj in enumerate(row.coeffs):
            combo[j] += mult * cj
        rhs_combo += mult * row.rhs
        if row.rel is Rel.GT:
            strict_weight += mult
    if any(c != 0 for c in combo):
        return False
    if strict_weight > 0:
        return rhs_combo >= 0
    return rhs_combo > 0


def lp_decide(sys: LinearConstraintSystem) -> LpResult:
    """Decide exact feasibility; see the module docstring for semantics."""
    value, z = _feasibility_lp(sys)
    if value > 0:
        tau = z[sys.dim]
        if tau <= 0:
            raise LpInternalError("positive slack with nonpositive tau")
        witness = tuple(z[j] / tau for j in range(sys.dim))
        if not verify_witness(sys, witness):
            raise LpInternalError("witness failed re-evaluation")
        return Feasible(witness)
    cert = _alternative_certificate(sys)
    if not verify_certificate(sys, cert):
        raise LpInternalError("certificate failed re-multiplication")
    return Infeasible(cert)
