"""Fibre counting on a torus T_{r,r}, r = e^s, via branch decomposition.

The system f = alpha0, g = beta0 splits into k branch systems
f = alpha0, g^(1/k) = eps^(-i) beta~0. Subtracting W~(g^(1/k)) from the
first equation turns branch i into

    residual(x, y) = alpha0 - W~(eps^(-i) beta~0),   g^(1/k)(x, y) = eps^(-i) beta~0,

which can only have torus solutions when the right-hand side has the valuation
of the residual's leading monomial. Feasible branches are rescaled to the unit
torus, seeded from the monomial system and lifted by Newton iteration.

All size comparisons are valuation comparisons with exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Optional

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import (
    ConvergenceError,
    FieldExtensionRequired,
    HenselPreconditionError,
    SeedError,
    TorusError,
    TorusFibreError,
)
from .laurent2 import LaurentSeries2, jacobian_det, torus_substitute
from .puiseux import INF, PuiseuxElement, t_power
from .reduction import REACHED_TARGET, ReductionResult, WPoly
from .scalars import Field, Scalar


# ---------------------------------------------------------------------------
# base point


@dataclass(frozen=True)
class TorusSpec:
    s: Fraction
    x1: PuiseuxElement
    y1: PuiseuxElement
    eps: Scalar
    k: int

    def __post_init__(self):
        if self.s <= 0:
            raise TorusError(f"torus level must be positive, got {self.s}")
        vx, vy = self.x1.valuation(), self.y1.valuation()
        if vx != vy or vx != -self.s:
            raise TorusError(f"base point valuations ({vx}, {vy}) do not match level {self.s}")
        one = self.eps.field.one
        if self.eps ** self.k != one or any(self.eps ** j == one for j in range(1, self.k)):
            raise ValueError(f"eps is not a primitive {self.k}-th root of unity")

    @classmethod
    def standard(cls, field: Field, s, k: int) -> "TorusSpec":
        """Base point x1 = y1 = t^s and eps = zeta_k."""
        if not field.has_roots_of_unity(k):
            raise FieldExtensionRequired(k)
        s = Fraction(s)
        p = t_power(field, s)
        return cls(s, p, p, field.primitive_root_of_unity(k), k)

    @property
    def field(self) -> Field:
        return self.x1.field


# ---------------------------------------------------------------------------
# feasibility


@dataclass
class FeasibilityVerdict:
    i: int
    valuation: object
    expected: Fraction
    feasible: bool
    decided: bool
    rhs: PuiseuxElement

    def to_json(self) -> dict:
        return {"i": self.i, "valuation": _val_str(self.valuation), "expected": str(self.expected),
                "feasible": self.feasible, "decided": self.decided}


def _val_str(v) -> str:
    return "inf" if v == INF else str(Fraction(v))


def branch_feasibility(alpha0: PuiseuxElement, beta_tilde0: PuiseuxElement, w: WPoly, eps_i: Scalar,
                       spec: TorusSpec, residual_leading, f_degree: Optional[int] = None,
                       n: Optional[int] = None, i: int = 0) -> FeasibilityVerdict:
    """Compare v(alpha0 - W~(eps_i^(-1) beta~0)) with the residual's torus valuation.

    ``w`` must already be rescaled to the root index k. ``residual_leading``
    gives the degree 2 - n of the residual; the feasibility threshold is
    -(2 - n) s.
    """
    s = spec.s
    target_deg = residual_leading.degree
    if n is not None and target_deg != 2 - n:
        raise TorusError(f"residual degree {target_deg} is not 2 - n = {2 - n}")
    if f_degree is not None and alpha0.terms and alpha0.valuation() != -f_degree * s:
        raise TorusError(f"v(alpha0) = {alpha0.valuation()} but deg f = {f_degree} at level {s}")
    if n is not None and beta_tilde0.valuation() != -Fraction(n, spec.k) * s:
        raise TorusError(f"v(beta~0) = {beta_tilde0.valuation()} does not match n/k = {Fraction(n, spec.k)}")
    rhs = alpha0 - w.evaluate(beta_tilde0.scale(eps_i.inv()))
    expected = -target_deg * s
    if rhs.terms:
        v = rhs.valuation()
        return FeasibilityVerdict(i, v, expected, v == expected, True, rhs)
    # zero down to the floor: only decided if the floor lies above the threshold
    bound = rhs.valuation_bound()
    decided = bound > expected
    return FeasibilityVerdict(i, bound, expected, False, decided, rhs)


# ---------------------------------------------------------------------------
# normalized systems


@dataclass
class HenselSystem:
    """Two equations F1 = F2 = 0 over Puiseux coefficients on the unit torus.

    ``tails`` holds (slope, shift) per equation: unknown coefficients at total
    degree D have valuation >= -slope * D + shift.
    """

    f1: LaurentSeries2
    f2: LaurentSeries2
    tails: tuple = ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)))
    jacobian: Optional[LaurentSeries2] = None
    alpha_bar: Optional[PuiseuxElement] = None
    beta_bar: Optional[PuiseuxElement] = None
    leads: tuple = ()

    def __post_init__(self):
        if self.jacobian is None:
            self.jacobian = jacobian_det(self.f1, self.f2)
        self._partials = [(eq.diff_x(), eq.diff_y()) for eq in (self.f1, self.f2)]

    @property
    def field(self) -> Field:
        return self.f1.ring.field

    def _eval(self, series, x, y, eq: int, derivative: bool = False) -> PuiseuxElement:
        slope, shift = self.tails[eq]
        if derivative:
            shift = shift - slope
        return series.evaluate(x, y, slope, shift)

    def residual(self, x, y) -> tuple[PuiseuxElement, PuiseuxElement]:
        return self._eval(self.f1, x, y, 0), self._eval(self.f2, x, y, 1)

    def jacobian_matrix(self, x, y):
        return [[self._eval(d, x, y, eq, True) for d in self._partials[eq]] for eq in (0, 1)]

    def jacobian_value(self, x, y) -> PuiseuxElement:
        (a, b), (c, d) = self.jacobian_matrix(x, y)
        return a * d - b * c

    def caps(self) -> tuple:
        """Value floors of F1, F2 at valuation-0 points."""
        out = []
        for eq, series in ((0, self.f1), (1, self.f2)):
            slope, shift = self.tails[eq]
            out.append(None if series.floor is None else slope * series.floor - shift)
        return tuple(out)

    def tail_in_ideal(self) -> bool:
        """Non-leading, non-constant coefficients have positive valuation."""
        for eq, series in enumerate((self.f1, self.f2)):
            lead = self.leads[eq] if self.leads else None
            for e, c in series.terms.items():
                if e == lead or e == (0, 0):
                    if c.valuation_bound() < 0:
                        return False
                elif not c.valuation_bound() > 0:
                    return False
        return True


def _monomial_value(spec: TorusSpec, i: int, j: int) -> PuiseuxElement:
    return (spec.x1 ** i) * (spec.y1 ** j)


def _normalize_one(series: LaurentSeries2, exponent: tuple, lead_coeff, spec: TorusSpec, rhs: PuiseuxElement):
    subst = torus_substitute(series, spec.x1, spec.y1)
    norm = _monomial_value(spec, *exponent).scale(lead_coeff)
    ninv = norm.inv()
    scaled = LaurentSeries2(subst.ring, {e: c.mul(ninv) for e, c in subst.terms.items()}, subst.floor)
    rhs_bar = rhs * ninv
    eq = scaled - LaurentSeries2.constant(subst.ring, rhs_bar)
    return eq, (spec.s, -norm.valuation()), rhs_bar


def normalize_to_unit_torus(residual: LaurentSeries2, groot: LaurentSeries2, spec: TorusSpec,
                            d: Scalar, alpha_rhs: PuiseuxElement, beta_rhs: PuiseuxElement) -> HenselSystem:
    """Rescale the branch system so that solutions on T_{r,r} land on T_{1,1}.

    X -> x1 X, Y -> y1 Y, then divide the first equation by d x1^(1-n1) y1^(1-n2)
    and the second by the leading term of g^(1/k) at (x1, y1).
    """
    rlf = residual.leading_form()
    glf = groot.leading_form()
    if not rlf.is_monomial or rlf.coefficient != d:
        raise TorusError(f"residual leading form is not {d} X^a Y^b")
    f1, tail1, alpha_bar = _normalize_one(residual, rlf.exponent, d, spec, alpha_rhs)
    f2, tail2, beta_bar = _normalize_one(groot, glf.exponent, glf.coefficient, spec, beta_rhs)
    system = HenselSystem(f1, f2, (tail1, tail2), alpha_bar=alpha_bar, beta_bar=beta_bar,
                          leads=(rlf.exponent, glf.exponent))
    if not system.tail_in_ideal():
        raise TorusError("normalized tails are not in the maximal ideal")
    return system


# ---------------------------------------------------------------------------
# monomial system


def smith_normal_form_2x2(m):
    """Unimodular U, V with U m V = diag(d1, d2), d1 | d2, d_i >= 0."""
    S, U, V = smith_normal_decomp(Matrix(m), domain=ZZ)
    U = [[int(U[r, c]) for c in range(2)] for r in range(2)]
    V = [[int(V[r, c]) for c in range(2)] for r in range(2)]
    diag = [int(S[0, 0]), int(S[1, 1])]
    for i in range(2):
        if diag[i] < 0:
            diag[i] = -diag[i]
            U[i] = [-u for u in U[i]]
    return U, tuple(diag), V


def exponent_matrix(n1: int, n2: int, k: int):
    return [[1 - n1, 1 - n2], [n1 // k, n2 // k]]


def _det2(m) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _all_roots(a: PuiseuxElement, d: int) -> list[PuiseuxElement]:
    if d == 1:
        return [a]
    if not a.field.has_roots_of_unity(d):
        raise FieldExtensionRequired(d)
    h = a.principal_root(d)
    return [h.scale(a.field.root_of_unity(d, j)) for j in range(d)]


def solve_monomial_system(m, alpha_bar: PuiseuxElement, beta_bar: PuiseuxElement) -> list[tuple]:
    """All (x, y) with x^m00 y^m01 = alpha_bar and x^m10 y^m11 = beta_bar."""
    if _det2(m) == 0:
        raise ValueError("singular exponent matrix")
    U, (d1, d2), V = smith_normal_form_2x2(m)
    p_rhs = (alpha_bar ** U[0][0]) * (beta_bar ** U[0][1])
    q_rhs = (alpha_bar ** U[1][0]) * (beta_bar ** U[1][1])
    seeds = []
    for P, Q in product(_all_roots(p_rhs, d1), _all_roots(q_rhs, d2)):
        x = (P ** V[0][0]) * (Q ** V[0][1])
        y = (P ** V[1][0]) * (Q ** V[1][1])
        seeds.append((x, y))
    return seeds


def solve_reduced_monomial(n1: int, n2: int, k: int, alpha_bar: PuiseuxElement,
                           beta_bar: PuiseuxElement) -> list[tuple]:
    """Seeds of X^(1-n1) Y^(1-n2) = alpha_bar, X^(n1/k) Y^(n2/k) = beta_bar."""
    if n1 % k or n2 % k:
        raise ValueError(f"k={k} must divide n1={n1} and n2={n2}")
    assert n1 != n2, "exponent matrix is singular for n1 = n2"
    seeds = solve_monomial_system(exponent_matrix(n1, n2, k), alpha_bar, beta_bar)
    assert len(seeds) == abs(n1 - n2) // k
    return seeds


def check_monomial_solution(m, sol, alpha_bar, beta_bar) -> bool:
    x, y = sol
    lhs1 = (x ** m[0][0]) * (y ** m[0][1])
    lhs2 = (x ** m[1][0]) * (y ** m[1][1])
    return lhs1.agrees(alpha_bar) and lhs2.agrees(beta_bar)


def closed_form_check(n1: int, n2: int, k: int, sol, alpha_bar, beta_bar) -> bool:
    """y^((n1-n2)/k) = beta_bar^(n1-1) alpha_bar^(n1/k) and x = alpha_bar beta_bar^k / y."""
    x, y = sol
    lhs = y ** ((n1 - n2) // k)
    rhs = (beta_bar ** (n1 - 1)) * (alpha_bar ** (n1 // k))
    return lhs.agrees(rhs) and x.agrees(alpha_bar * (beta_bar ** k) / y)


def kernel_roots_of_unity(m, field: Field) -> list[tuple]:
    """Brute force: all (zeta_N^a, zeta_N^b), N = |det m|, solving the unit system."""
    N = abs(_det2(m))
    if not field.has_roots_of_unity(N):
        raise FieldExtensionRequired(N)
    out = []
    for a, b in product(range(N), repeat=2):
        if (m[0][0] * a + m[0][1] * b) % N == 0 and (m[1][0] * a + m[1][1] * b) % N == 0:
            out.append((field.root_of_unity(N, a), field.root_of_unity(N, b)))
    return out


# ---------------------------------------------------------------------------
# Hensel lifting


@dataclass
class LiftResult:
    x: PuiseuxElement
    y: PuiseuxElement
    residual_valuations: tuple
    log: list
    jacobian_at_seed: PuiseuxElement
    schedule: str

    @property
    def iterations(self) -> int:
        return len(self.log) - 1


def _min_val(vals):
    return min(vals)


def hensel_lift(system: HenselSystem, seed: tuple, budget=10, schedule: str = "newton",
                guard: int = 8) -> LiftResult:
    """Newton iteration from ``seed`` until both residual valuations exceed ``budget``.

    ``schedule="chord"`` freezes the Jacobian at the seed; this converges
    linearly but to the same point, which serves as a uniqueness check.
    """
    budget = Fraction(budget)
    x, y = seed
    if x.valuation() != 0 or y.valuation() != 0:
        raise SeedError("seed is not on the unit torus")
    r1, r2 = system.residual(x, y)
    v = (r1.valuation_bound(), r2.valuation_bound())
    if not _min_val(v) > 0:
        raise SeedError(f"seed residual valuations {v} are not positive")
    J = system.jacobian_matrix(x, y)
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    if not det.terms or det.valuation() != 0:
        raise HenselPreconditionError(f"jacobian at seed has valuation {det.valuation()}, not 0")
    jac_seed = det
    log = [v]
    caps = system.caps()
    max_iter = math.ceil(math.log2(max(budget, 2))) + guard
    if schedule == "chord":
        max_iter = int(budget) + guard
    elif schedule != "newton":
        raise ValueError(f"unknown schedule {schedule!r}")
    dinv = det.inv()
    while not _min_val(v) > budget:
        if len(log) > max_iter:
            raise ConvergenceError(f"no convergence after {max_iter} steps; residual valuations {v}")
        if any(c is not None and -c <= budget for c in caps):
            raise ConvergenceError(f"equation precision {caps} does not reach budget {budget}")
        if schedule == "newton" and len(log) > 1:
            J = system.jacobian_matrix(x, y)
            det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
            dinv = det.inv()
        (a, b), (c, d) = J
        dx = (d * r1 - b * r2) * dinv
        dy = (a * r2 - c * r1) * dinv
        x, y = x - dx, y - dy
        r1, r2 = system.residual(x, y)
        v = (r1.valuation_bound(), r2.valuation_bound())
        log.append(v)
    return LiftResult(x, y, v, log, jac_seed, schedule)


def newton_doubles(log: list, caps=None) -> bool:
    """Residual valuation at least doubles per step, unless the value is precision-capped."""
    for prev, cur in zip(log, log[1:]):
        p, c = _min_val(prev), _min_val(cur)
        capped = caps is not None and any(cp is not None and c >= -cp for cp in caps)
        if not (c >= 2 * p or capped):
            return False
    return True


def hensel_lift_1d(coeffs: list, seed: PuiseuxElement, budget=10, guard: int = 8) -> PuiseuxElement:
    """Root of sum coeffs[i] x^i near ``seed`` by one-variable Newton.

    Values are truncated just below t^(-budget), so exact inputs are fine.
    """
    budget = Fraction(budget)
    cap = -budget - 1

    def value(x, cs):
        total = PuiseuxElement.zero(x.field, cap)
        for c in reversed(cs):
            total = total.mul(x, cap) + c
        return total.truncate(cap)

    dcoeffs = [c * i for i, c in enumerate(coeffs)][1:]
    x = seed
    r = value(x, coeffs)
    if not r.valuation_bound() > 0:
        raise SeedError("seed residual is not in the maximal ideal")
    dv = value(x, dcoeffs)
    if not dv.terms or dv.valuation() != 0:
        raise HenselPreconditionError("derivative at seed is not a unit")
    steps = 0
    while not r.valuation_bound() > budget:
        steps += 1
        if steps > math.ceil(math.log2(max(budget, 2))) + guard:
            raise ConvergenceError("one-variable Newton did not converge")
        x = x - r / value(x, dcoeffs)
        r = value(x, coeffs)
    return x


# ---------------------------------------------------------------------------
# auxiliary polynomial system


@dataclass
class PolySystem4:
    """Equations in (U, V, X, Y) with Puiseux coefficients.

    Terms map (a, b, c, d) -> coefficient of U^a V^b X^c Y^d. ``caps`` holds the
    value floor of each equation at valuation-0 points (None if exact).
    """

    equations: list
    caps: list
    n_original: int = 2

    def evaluate(self, eq: int, point) -> PuiseuxElement:
        return _eval4(self.equations[eq], point, self.caps[eq])

    def diff(self, eq: int, var: int) -> dict:
        out = {}
        for e, c in self.equations[eq].items():
            if e[var]:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = c * e[var]
        return out

    def jacobian_matrix(self, point):
        return [[_eval4(self.diff(eq, var), point, self.caps[eq]) for var in range(4)]
                for eq in range(len(self.equations))]

    @staticmethod
    def to_aux(x, y):
        return (x.inv(), y.inv(), x, y)

    @staticmethod
    def from_aux(point):
        return point[2], point[3]


def _eval4(terms: dict, point, cap) -> PuiseuxElement:
    field = point[0].field
    total = PuiseuxElement(field, {}, cap)
    for e, c in terms.items():
        term = c
        for var, p in zip(point, e):
            for _ in range(p):
                term = term.mul(var, cap)
        total = total + term
    return total if cap is None else total.truncate(cap)


def laurent_to_polynomial_system(system: HenselSystem) -> PolySystem4:
    """Replace X^-i by U^i and Y^-j by V^j, adding U X - 1 and V Y - 1.

    A polynomial input stays polynomial and needs no auxiliary equations.
    """
    eqs, caps = [], []
    needs_aux = False
    for series, cap in zip((system.f1, system.f2), system.caps()):
        terms = {}
        for (i, j), c in series.terms.items():
            e = (max(-i, 0), max(-j, 0), max(i, 0), max(j, 0))
            needs_aux = needs_aux or i < 0 or j < 0
            terms[e] = terms[e] + c if e in terms else c
        eqs.append(terms)
        caps.append(cap)
    if needs_aux:
        one = PuiseuxElement.constant(system.field, 1)
        eqs.append({(1, 0, 1, 0): one, (0, 0, 0, 0): -one})
        eqs.append({(0, 1, 0, 1): one, (0, 0, 0, 0): -one})
        caps += [None, None]
    return PolySystem4(eqs, caps)


def det_laplace(m) -> PuiseuxElement:
    """Determinant by cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for c in range(n):
        if not m[0][c].terms and m[0][c].floor is None:
            continue
        minor = [row[:c] + row[c + 1:] for row in m[1:]]
        term = m[0][c] * det_laplace(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0].scale(0)


def _solve_linear(m, rhs):
    """Gaussian elimination, pivoting on the entry of least valuation."""
    n = len(m)
    a = [list(row) + [r] for row, r in zip(m, rhs)]
    for col in range(n):
        piv = min(range(col, n), key=lambda r: a[r][col].valuation())
        if not a[piv][col].terms:
            raise HenselPreconditionError("singular linear system")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inv()
        for r in range(n):
            if r != col and a[r][col].terms:
                q = a[r][col] * inv
                a[r] = [a[r][c] - q * a[col][c] for c in range(n + 1)]
    return [a[r][n] / a[r][r] for r in range(n)]


def newton_polynomial_system(poly: PolySystem4, point, budget=10, guard: int = 8):
    """Newton iteration for the square auxiliary system; returns (point, log)."""
    budget = Fraction(budget)
    point = list(point)
    n = len(poly.equations)
    vals = [poly.evaluate(e, point) for e in range(n)]
    log = [tuple(v.valuation_bound() for v in vals)]
    if not min(log[0]) > 0:
        raise SeedError("auxiliary seed residual is not in the maximal ideal")
    while not min(log[-1]) > budget:
        if len(log) > math.ceil(math.log2(max(budget, 2))) + guard:
            raise ConvergenceError("auxiliary Newton did not converge")
        J = poly.jacobian_matrix(point)
        delta = _solve_linear(J, vals)
        point = [p - dp for p, dp in zip(point, delta)]
        vals = [poly.evaluate(e, point) for e in range(n)]
        log.append(tuple(v.valuation_bound() for v in vals))
    return tuple(point), log


# ---------------------------------------------------------------------------
# the fibre report


@dataclass
class LiftedSolution:
    x: PuiseuxElement
    y: PuiseuxElement
    residual_valuations: tuple
    iterations: int

    def to_json(self) -> dict:
        from .serialize import puiseux_to_json
        return {"x": puiseux_to_json(self.x), "y": puiseux_to_json(self.y),
                "residual_valuations": [_val_str(v) for v in self.residual_valuations],
                "iterations": self.iterations}


@dataclass
class BranchRecord:
    i: int
    feasible: bool
    seed_count: int = 0
    lifted: list = dc_field(default_factory=list)
    residual_valuations: list = dc_field(default_factory=list)
    verdict: Optional[FeasibilityVerdict] = None
    error: Optional[str] = None
    system: Optional[HenselSystem] = None
    seeds: list = dc_field(default_factory=list)
    lifts: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "i": self.i, "feasible": self.feasible, "seeds": self.seed_count,
            "lifted": [s.to_json() for s in self.lifted],
            "residual_valuations": [_val_str(v) for v in self.residual_valuations],
            "verdict": None if self.verdict is None else self.verdict.to_json(),
            "error": self.error,
        }


@dataclass
class FibreReport:
    branches: list
    total_count: int
    claimed_count: int
    level: Fraction
    budget: Fraction

    @property
    def gap(self) -> int:
        return self.claimed_count - self.total_count

    @property
    def complete(self) -> bool:
        """No branch failed; otherwise the total is only a lower bound."""
        return all(b.error is None for b in self.branches)

    def to_json(self) -> dict:
        return {"branches": [b.to_json() for b in self.branches], "total": self.total_count,
                "claimed": self.claimed_count, "gap": self.gap, "complete": self.complete,
                "level": str(self.level), "budget": str(self.budget)}


def count_fibre(f: LaurentSeries2, g: LaurentSeries2, red: ReductionResult, spec: TorusSpec,
                budget=10) -> FibreReport:
    """Count solutions of f = f(x1, y1), g = g(x1, y1) on the torus through (x1, y1)."""
    if red.status != REACHED_TARGET:
        raise TorusFibreError(f"reduction status is {red.status}, not {REACHED_TARGET}")
    n1, n2 = g.leading_form().exponent
    n, k = n1 + n2, red.k
    if spec.k != k:
        raise TorusError(f"torus spec has k={spec.k}, reduction has k={k}")
    groot = red.groot
    wk = red.w_rescaled
    alpha0 = f.evaluate(spec.x1, spec.y1)
    beta0 = groot.evaluate(spec.x1, spec.y1)
    d = red.d
    branches = []
    for i in range(k):
        eps_i = spec.eps ** i
        rec = BranchRecord(i, False)
        branches.append(rec)
        try:
            verdict = branch_feasibility(alpha0, beta0, wk, eps_i, spec, red.residual_leading,
                                         f.degree(), n, i)
            rec.verdict = verdict
            if not verdict.decided:
                rec.error = "undecidable at this floor; deepen the floors"
                continue
            if not verdict.feasible:
                continue
            rec.feasible = True
            beta_i = beta0.scale(eps_i.inv())
            system = normalize_to_unit_torus(red.residual, groot, spec, d, verdict.rhs, beta_i)
            rec.system = system
            seeds = solve_reduced_monomial(n1, n2, k, system.alpha_bar, system.beta_bar)
            rec.seeds = seeds
            rec.seed_count = len(seeds)
            for seed in seeds:
                lift = hensel_lift(system, seed, budget)
                rec.lifts.append(lift)
                rec.lifted.append(LiftedSolution(lift.x, lift.y, lift.residual_valuations, lift.iterations))
            if rec.lifted:
                rec.residual_valuations = [min(s.residual_valuations[e] for s in rec.lifted) for e in (0, 1)]
        except (TorusFibreError, ValueError, ZeroDivisionError) as exc:
            rec.error = f"{type(exc).__name__}: {exc}"
    total = sum(len(b.lifted) for b in branches)
    return FibreReport(branches, total, abs(n1 - n2), spec.s, Fraction(budget))


def to_original(spec: TorusSpec, sol) -> tuple:
    """Undo the torus rescaling: (X, Y) on T_{1,1} to (x1 X, y1 Y)."""
    x, y = sol
    return spec.x1 * x, spec.y1 * y
