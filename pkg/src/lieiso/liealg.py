"""Lie-algebra data model and the isomorphism decision algorithms.

An algebra is a dimension, a list of parameters, a structure-constant table
(only i < j stored; antisymmetry is implied) whose entries are polynomials in
the parameters, and a semi-algebraic constraint system on the parameters.
The Jacobi identity is validated modulo the constraint equations.

Isomorphism goes through the bracket-compatibility polynomial system: for a
candidate matrix with unknown entries, every bracket must be preserved and a
fresh unknown z enforces 1 - z*det = 0.  Over C the system is triangularized
(complete); over R the semi-algebraic engine decides it (Unknown is honest).
Parametric pairs are projected onto the joint parameter space instead.

Matrix convention: column j of a matrix holds the coordinates of the image
of the j-th basis vector, so the entry in row s, column i is z_is.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .chains import (
    Decomposition,
    RegularChain,
    TriangularSet,
    sat_membership,
    triangularize,
)
from .config import Budget, BudgetExceededError
from .polyring import Polynomial, VarOrder, parse_polynomial
from .realsolve import (
    SAS,
    IsolatingBox,
    RealVerdict,
    eval_box,
    rational_sequence,
    real_points_of_chain,
    sas_has_real_solution,
)
from .projection import ConstructibleSet, RealRegion, project_complex, project_real


# ----------------------------------------------------------------------
# exact complex rationals (enough for witnesses in Q(i))


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def of(cls, x):
        if isinstance(x, GaussianRational):
            return x
        return cls(Fraction(x), 0)

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        o = GaussianRational.of(other)
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {abs(self.im)}*i"


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    num = _isqrt_exact(x.numerator)
    den = _isqrt_exact(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _isqrt_exact(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def gaussian_sqrt(g: GaussianRational):
    """Square root inside Q(i), or None when it does not exist there."""
    if g.im == 0:
        r = _rational_sqrt(g.re)
        if r is not None:
            return GaussianRational(r, 0)
        r = _rational_sqrt(-g.re)
        if r is not None:
            return GaussianRational(0, r)
        return None
    norm = _rational_sqrt(g.re * g.re + g.im * g.im)
    if norm is None:
        return None
    x2 = (g.re + norm) / 2
    x = _rational_sqrt(x2)
    if x is None or x == 0:
        return None
    y = g.im / (2 * x)
    return GaussianRational(x, y)


# ----------------------------------------------------------------------
# exact linear algebra over the rationals


def _rref(rows):
    """Reduced row echelon form over Fraction; returns (rows, pivot_cols)."""
    rows = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [row for row in rows[:r]], pivots


def _span_dim(vectors):
    vecs = [v for v in vectors if any(x != 0 for x in v)]
    if not vecs:
        return 0, []
    rows, _ = _rref(vecs)
    return len(rows), rows


def _det_generic(rows, zero, one):
    """Determinant by first-row expansion with memoization on column masks;
    entries only need +, *, - (works for polynomials and exact numbers)."""
    n = len(rows)
    full = (1 << n) - 1
    memo = {}

    def go(colmask):
        if colmask == 0:
            return one
        got = memo.get(colmask)
        if got is not None:
            return got
        r = n - bin(colmask).count("1")
        total = zero
        sign = 1
        c = 0
        m = colmask
        while m:
            if m & 1:
                a = rows[r][c]
                is_zero = a.is_zero() if hasattr(a, "is_zero") else a == 0
                if not is_zero:
                    sub = go(colmask ^ (1 << c))
                    term = a * sub
                    total = total + term if sign > 0 else total - term
                sign = -sign
            m >>= 1
            c += 1
        memo[colmask] = total
        return total

    return go(full)


# ----------------------------------------------------------------------
# the algebra itself


class JacobiFailure(Exception):
    def __init__(self, residuals):
        self.residuals = residuals
        super().__init__(f"Jacobi identity fails; {len(residuals)} nonzero residuals")


@dataclass
class LieAlgebra:
    n: int
    basis: list
    params: list
    table: dict  # (i, j) with i < j -> tuple of n coefficient Polynomials
    constraints: SAS | None = None
    name: str = ""

    @classmethod
    def from_table(cls, n, brackets: Mapping, params: Sequence[str] = (), constraints=None,
                   basis=None, name=""):
        """brackets: {(i, j): {k: coeff}} with 1-based indices i < j; coeff is
        a number or a polynomial-grammar string over the parameters."""
        params = list(params)
        order = VarOrder(params) if params else VarOrder(["_const"])
        basis = list(basis) if basis else [f"e{k}" for k in range(1, n + 1)]
        table = {}
        for (i, j), comp in brackets.items():
            if not (1 <= i < j <= n):
                raise ValueError(f"bracket indices must satisfy 1 <= i < j <= n, got ({i},{j})")
            vec = [Polynomial.zero(order) for _ in range(n)]
            for k, coeff in comp.items():
                if isinstance(coeff, str):
                    vec[k - 1] = parse_polynomial(coeff, order)
                else:
                    vec[k - 1] = Polynomial.const(order, coeff)
            table[(i, j)] = tuple(vec)
        cons = constraints or SAS(order)
        return cls(n, basis, params, table, cons, name)

    @property
    def param_order(self) -> VarOrder:
        if self.table:
            return next(iter(self.table.values()))[0].order
        if self.constraints is not None:
            return self.constraints.order
        return VarOrder(self.params) if self.params else VarOrder(["_const"])

    def bracket_coeff(self, i, j, k):
        """Coefficient of basis vector k in [e_i, e_j] (1-based, any i, j)."""
        order = self.param_order
        if i == j:
            return Polynomial.zero(order)
        if i < j:
            vec = self.table.get((i, j))
            return vec[k - 1] if vec else Polynomial.zero(order)
        vec = self.table.get((j, i))
        return -vec[k - 1] if vec else Polynomial.zero(order)

    def is_parametric(self):
        return bool(self.params)

    def rename_params(self, suffix: str) -> "LieAlgebra":
        if not self.params:
            return self
        new_names = [p + suffix for p in self.params]
        new_order = VarOrder(new_names)
        mapping = dict(zip(self.params, new_names))
        table = {
            key: tuple(c.rename(new_order, mapping) for c in vec)
            for key, vec in self.table.items()
        }
        cons = self.constraints
        new_cons = SAS(
            new_order,
            equations=[p.rename(new_order, mapping) for p in cons.equations],
            nonneg=[p.rename(new_order, mapping) for p in cons.nonneg],
            positive=[p.rename(new_order, mapping) for p in cons.positive],
            nonzero=[p.rename(new_order, mapping) for p in cons.nonzero],
        ) if cons else None
        return LieAlgebra(self.n, list(self.basis), new_names, table, new_cons, self.name)

    def numeric_bracket(self, u, v):
        """Bracket of two rational coefficient vectors (parameter-free only)."""
        if self.params:
            raise ValueError("numeric bracket needs a parameter-free algebra")
        n = self.n
        out = [Fraction(0)] * n
        for i in range(1, n + 1):
            if u[i - 1] == 0:
                continue
            for j in range(1, n + 1):
                if v[j - 1] == 0 or i == j:
                    continue
                f = u[i - 1] * v[j - 1]
                for k in range(1, n + 1):
                    c = self.bracket_coeff(i, j, k)
                    if not c.is_zero():
                        out[k - 1] += f * c.constant_value()
        return out


def validate(L: LieAlgebra, budget: Budget | None = None):
    """Check the Jacobi identity as polynomial identities in the parameters,
    modulo the constraint equations.  Raises JacobiFailure with the nonzero
    residuals, returns True otherwise."""
    order = L.param_order
    budget = budget or Budget()
    residuals = []
    for i, j, k in itertools.combinations(range(1, L.n + 1), 3):
        for s in range(1, L.n + 1):
            total = Polynomial.zero(order)
            for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                # [[X_a, X_b], X_c] component s
                for m in range(1, L.n + 1):
                    cab = L.bracket_coeff(a, b, m)
                    if cab.is_zero():
                        continue
                    cmc = L.bracket_coeff(m, c, s)
                    if cmc.is_zero():
                        continue
                    total = total + cab * cmc
            if not total.is_zero():
                residuals.append(((i, j, k), s, total))
    if not residuals:
        return True
    cons_eqs = L.constraints.equations if L.constraints else []
    if cons_eqs:
        D = triangularize(cons_eqs, order, budget)
        bad = []
        for key, s, r in residuals:
            if not all(sat_membership(r, chain) for chain in D):
                bad.append((key, s, r))
        if not bad:
            return True
        raise JacobiFailure(bad)
    raise JacobiFailure(residuals)


# ----------------------------------------------------------------------
# the isomorphism system


@dataclass
class IsoSystem:
    order: VarOrder
    n: int
    param_names: list
    z_names: list          # row-major z11 ... znn
    det_name: str
    equations: list        # bracket equations + 1 - z*det
    bracket_equations: list
    det_equation: Polynomial
    side_equations: list   # F0 u F1 moved into the big order
    nonzero: list          # H0 u H1
    nonneg: list
    positive: list

    @property
    def nparams(self):
        return len(self.param_names)


def _zname(i, k):
    return f"z{i}_{k}"


def iso_system(L: LieAlgebra, M: LieAlgebra) -> IsoSystem:
    """The bracket-compatibility system for a candidate isomorphism from L
    to M: z_ks coefficients, one equation per (i<j, s) that is not
    identically zero, plus 1 - z*det.  Parameters (if any) rank lowest,
    matrix unknowns row-major above them, the det unknown on top."""
    if L.n != M.n:
        raise ValueError(f"dimension mismatch: {L.n} vs {M.n}")
    n = L.n
    A, B = L, M
    if A.params and B.params and set(A.params) & set(B.params):
        A = A.rename_params("_a")
        B = B.rename_params("_b")
    params = list(A.params) + list(B.params)
    znames = [_zname(i, k) for i in range(1, n + 1) for k in range(1, n + 1)]
    det_name = "z"
    order = VarOrder(params + znames + [det_name])

    def z(i, k):
        return Polynomial.variable(order, _zname(i, k))

    def lift(p):
        return p.rename(order)

    eqs = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for s in range(1, n + 1):
                total = Polynomial.zero(order)
                for k in range(1, n + 1):
                    a = A.bracket_coeff(i, j, k)
                    if not a.is_zero():
                        total = total + z(k, s) * lift(a)
                for k in range(1, n + 1):
                    for l in range(1, n + 1):
                        if k == l:
                            continue
                        b = B.bracket_coeff(k, l, s)
                        if not b.is_zero():
                            total = total - z(i, k) * z(j, l) * lift(b)
                if not total.is_zero():
                    eqs.append(total)
    rows = [[z(i, k) for k in range(1, n + 1)] for i in range(1, n + 1)]
    det = _det_generic(rows, Polynomial.zero(order), Polynomial.const(order, 1))
    det_eq = Polynomial.const(order, 1) - Polynomial.variable(order, det_name) * det
    side_eqs, nonzero, nonneg, positive = [], [], [], []
    for alg in (A, B):
        cons = alg.constraints
        if cons is None:
            continue
        side_eqs.extend(lift(p) for p in cons.equations)
        nonzero.extend(lift(p) for p in cons.nonzero)
        nonneg.extend(lift(p) for p in cons.nonneg)
        positive.extend(lift(p) for p in cons.positive)
    return IsoSystem(
        order=order,
        n=n,
        param_names=params,
        z_names=znames,
        det_name=det_name,
        equations=eqs + side_eqs + [det_eq],
        bracket_equations=eqs,
        det_equation=det_eq,
        side_equations=side_eqs,
        nonzero=nonzero,
        nonneg=nonneg,
        positive=positive,
    )


# ----------------------------------------------------------------------
# linear preprocessing: Gauss-eliminate z-unknowns with rational pivots


def _gauss_reduce(sys: IsoSystem):
    """Eliminate matrix unknowns that occur linearly with a rational pivot
    coefficient and are the highest-ranked unknown of their equation.
    Returns (remaining equations, assignments name -> expression)."""
    order = sys.order
    zset = {order.index(nm) for nm in sys.z_names}
    eqs = [e for e in sys.bracket_equations + sys.side_equations]
    assignments = {}
    changed = True
    while changed:
        changed = False
        best = None
        for idx, e in enumerate(eqs):
            if e.is_zero():
                continue
            top = None
            linear = True
            for exps, _c in e.terms.items():
                zdeg = sum(exps[i] for i in zset)
                if zdeg > 1:
                    linear = False
                    break
                for i in zset:
                    if exps[i]:
                        top = max(top, i) if top is not None else i
            if not linear or top is None:
                continue
            coeff = e.coeff_of_power(top, 1)
            if not coeff.is_constant():
                continue
            if e.degree_in(top) != 1:
                continue
            if best is None or len(e.terms) < len(eqs[best[0]].terms):
                best = (idx, top, coeff.constant_value())
        if best is None:
            break
        idx, top, c = best
        e = eqs[idx]
        name = order.names[top]
        expr = (e.coeff_of_power(top, 0)) * Fraction(-1, 1) * (1 / c)
        sub = {name: expr}
        eqs = [p.substitute(sub) for k, p in enumerate(eqs) if k != idx]
        assignments = {nm: val.substitute(sub) for nm, val in assignments.items()}
        assignments[name] = expr
        changed = True
    eqs = [e for e in eqs if not e.is_zero()]
    return eqs, assignments


def _reduced_system(sys: IsoSystem):
    """Equations after the linear pass, with the determinant equation rebuilt
    from the substituted matrix (the variety is unchanged)."""
    order = sys.order
    eqs, assignments = _gauss_reduce(sys)
    n = sys.n

    def entry(i, k):
        nm = _zname(i, k)
        if nm in assignments:
            return assignments[nm]
        return Polynomial.variable(order, nm)

    rows = [[entry(i, k) for k in range(1, n + 1)] for i in range(1, n + 1)]
    det = _det_generic(rows, Polynomial.zero(order), Polynomial.const(order, 1))
    det_eq = Polynomial.const(order, 1) - Polynomial.variable(order, sys.det_name) * det
    return eqs, assignments, det, det_eq


def _attach_assignments(chain_polys, assignments, order, solver_prem=None):
    """Extend a chain over the reduced variables with the pivot relations
    z_v - expr (each monic linear at its own level)."""
    from .chains import _Solver

    solver = _Solver(order, Budget())
    extra = []
    for name, expr in assignments.items():
        p = Polynomial.variable(order, name) - expr
        red = solver.prem_chain(p, chain_polys)
        vi = order.index(name)
        if not red.is_zero() and red.mvar_index() == vi and red.degree_in(vi) == 1:
            extra.append(red.primitive())
        else:
            extra.append(p.primitive())
    return tuple(sorted(chain_polys + tuple(extra), key=lambda t: t.mvar_index()))


# ----------------------------------------------------------------------
# verdicts


class IsoVerdict:
    ISOMORPHIC = "isomorphic"
    NOT_ISOMORPHIC = "not_isomorphic"
    UNKNOWN = "unknown"

    def __init__(self, status, field_label, matrix=None, evidence=None, verified=False):
        self.status = status
        self.field = field_label
        self.matrix = matrix       # rows in display layout, or None
        self.evidence = evidence or {}
        self.verified = verified

    def __repr__(self):
        return f"IsoVerdict({self.status}, field={self.field}, verified={self.verified})"


def _matrix_from_values(values, n):
    """Display layout: entry (row s, col i) is z_is."""
    rows = []
    for s in range(1, n + 1):
        rows.append([values[_zname(i, s)] for i in range(1, n + 1)])
    return rows


# ----------------------------------------------------------------------
# verification


def verify_isomorphism(L: LieAlgebra, M: LieAlgebra, matrix) -> bool:
    """Exact check that the matrix (display layout, entries rational or
    Gaussian rational) preserves brackets and has nonzero determinant."""
    if L.params or M.params:
        raise ValueError("verification needs parameter-free algebras")
    n = L.n
    if len(matrix) != n or any(len(row) != n for row in matrix):
        return False
    ent = [[GaussianRational.of(matrix[r][c]) for c in range(n)] for r in range(n)]
    det = _det_generic(ent, GaussianRational(0), GaussianRational(1))
    if det.is_zero():
        return False
    # column i = image of basis vector i
    def col(i):
        return [ent[r][i - 1] for r in range(n)]

    def bracket_M(u, v):
        out = [GaussianRational(0) for _ in range(n)]
        for a in range(1, n + 1):
            if u[a - 1].is_zero():
                continue
            for b in range(1, n + 1):
                if a == b or v[b - 1].is_zero():
                    continue
                f = u[a - 1] * v[b - 1]
                for k in range(1, n + 1):
                    c = M.bracket_coeff(a, b, k)
                    if not c.is_zero():
                        out[k - 1] = out[k - 1] + f * c.constant_value()
        return out

    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = [GaussianRational(0) for _ in range(n)]
            for k in range(1, n + 1):
                a = L.bracket_coeff(i, j, k)
                if not a.is_zero():
                    ck = col(k)
                    lhs = [x + GaussianRational.of(a.constant_value()) * y for x, y in zip(lhs, ck)]
            rhs = bracket_M(col(i), col(j))
            if any(not (x - y).is_zero() for x, y in zip(lhs, rhs)):
                return False
    return True


def _verify_box_witness(sys_eqs, order, box: IsolatingBox, det_name):
    """A box witness is valid when every equation's interval straddles zero
    and the det unknown's interval excludes zero after refinement."""
    box.refine(4)
    grid = {}
    for nm, iv in box.intervals.items():
        grid[order.index(nm)] = iv
    for e in sys_eqs:
        if not (e.variables() <= set(grid)):
            return False
        lo, hi = eval_box(e, grid)
        if lo > 0 or hi < 0:
            return False
    return True


# ----------------------------------------------------------------------
# witness extraction


def _exact_solve_chain(chain_polys, order, field, budget, seed=0, avoid=()):
    """Try to produce an exact solution point of a chain: free variables get
    small rational samples avoiding the initials, bound variables are solved
    bottom-up in Q (and Q(i) when field is C).  Returns {name: value} with
    Fraction or GaussianRational values, or None."""
    mvars = {t.mvar_index() for t in chain_polys}
    occupied = set()
    for t in chain_polys:
        occupied |= t.variables()
    free = sorted(occupied - mvars)
    initials = [t.ranked_view().init for t in chain_polys]
    samples = [()] if not free else None
    if samples is None:
        from .realsolve import sample_tuples

        samples = sample_tuples(len(free), budget, seed)
    for sample in samples:
        bind = {order.names[i]: v for i, v in zip(free, sample)}
        if any(i.evaluate(bind).is_zero() for i in initials if not i.is_constant()):
            continue
        values = {order.names[i]: GaussianRational.of(v) for i, v in zip(free, sample)}
        ok = True
        for t in chain_polys:
            vi = t.mvar_index()
            name = order.names[vi]
            root = _solve_univariate_exact(t, vi, values, field)
            if root is None:
                ok = False
                break
            values[name] = root
        if ok:
            return values
    return None


def _poly_value(p: Polynomial, values):
    """Evaluate p at exact values (Fraction/GaussianRational per name)."""
    total = GaussianRational(0)
    names = p.order.names
    for exps, c in p.terms.items():
        term = GaussianRational.of(Fraction(c))
        for i, e in enumerate(exps):
            if e:
                v = values[names[i]]
                base = GaussianRational.of(v)
                for _ in range(e):
                    term = term * base
        total = total + term
    return total


def _solve_univariate_exact(t: Polynomial, vi, values, field):
    """Solve t = 0 for its main variable after substituting known values.
    Degree 1 always; degree 2 via the quadratic formula when the square root
    stays in Q (field R) or Q(i) (field C)."""
    d = t.degree_in(vi)
    coeffs = []
    for k in range(d + 1):
        coeffs.append(_poly_value(t.coeff_of_power(vi, k), values))
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    if len(coeffs) <= 1:
        return None
    if len(coeffs) == 2:
        return (-coeffs[0]) / coeffs[1]
    if len(coeffs) == 3:
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        disc = b * b - a * c * 4
        root = gaussian_sqrt(disc)
        if root is None:
            return None
        if field == "R" and (root.im != 0 or disc.im != 0):
            # no real root in Q; a real algebraic root may exist but is not exact
            if disc.im == 0 and disc.re >= 0:
                return None  # sqrt irrational
            return None
        for sgn in (1, -1):
            cand = (-b + root * sgn) / (a * 2)
            if field == "R" and cand.im != 0:
                continue
            return cand
        return None
    # try small rational roots for higher degrees
    for cand in itertools.islice(rational_sequence(0), 20):
        val = GaussianRational(0)
        x = GaussianRational.of(cand)
        for co in reversed(coeffs):
            val = val * x + co
        if val.is_zero():
            return cand if field == "R" else GaussianRational.of(cand)
    return None


def extract_isomorphism(D, sys: IsoSystem, assignments, field, budget, seed=0):
    """Choose a chain, sample its free variables deterministically, back
    substitute, and return (matrix, values) with exact entries; falls back to
    None when no exact point is found within the budget."""
    order = sys.order
    for chain in D:
        polys = _attach_assignments(chain.polys, assignments, order)
        values = _exact_solve_chain(polys, order, field, budget, seed)
        if values is None:
            continue
        # every matrix unknown needs a value; unconstrained ones default to 0
        full = {}
        ok = True
        for nm in sys.z_names:
            if nm in values:
                full[nm] = values[nm]
            else:
                full[nm] = GaussianRational(0)
        # validate against all equations (cheap exact check)
        for e in sys.bracket_equations:
            vals = dict(full)
            for nm in order.names:
                if nm not in vals:
                    vals[nm] = GaussianRational(0)
            if not _poly_value(e, vals).is_zero():
                ok = False
                break
        if not ok:
            continue
        rows = _matrix_from_values(full, sys.n)
        det = _det_generic(
            [[GaussianRational.of(rows[r][c]) for c in range(sys.n)] for r in range(sys.n)],
            GaussianRational(0),
            GaussianRational(1),
        )
        if det.is_zero():
            continue
        return rows, full
    return None, None


def _simplify_entry(g: GaussianRational):
    if g.im == 0:
        return g.re
    return g


# ----------------------------------------------------------------------
# decision algorithms


def is_isomorphic_complex(L: LieAlgebra, M: LieAlgebra, budget: Budget | None = None,
                          seed: int = 0) -> IsoVerdict:
    """Triangularize the bracket-compatibility system over C; empty means not
    isomorphic, otherwise a witness matrix is extracted and verified."""
    if L.params or M.params:
        raise ValueError("use param_iso_complex for parametric algebras")
    if L.n != M.n:
        return IsoVerdict(IsoVerdict.NOT_ISOMORPHIC, "C", evidence={"reason": "dimension mismatch"})
    budget = budget or Budget()
    sys = iso_system(L, M)
    eqs, assignments, det, det_eq = _reduced_system(sys)
    try:
        D = triangularize(eqs + [det_eq], sys.order, budget, nonzero=[det])
    except BudgetExceededError as exc:
        return IsoVerdict(IsoVerdict.UNKNOWN, "C", evidence={"reason": str(exc)})
    if D.is_empty():
        return IsoVerdict(IsoVerdict.NOT_ISOMORPHIC, "C",
                          evidence={"reason": "empty triangular decomposition"})
    matrix, values = extract_isomorphism(D, sys, assignments, "C", budget, seed)
    evidence = {"chains": len(D)}
    if matrix is not None:
        display = [[_simplify_entry(GaussianRational.of(x)) for x in row] for row in matrix]
        ok = verify_isomorphism(L, M, display)
        return IsoVerdict(IsoVerdict.ISOMORPHIC, "C", display, evidence, verified=ok)
    # no exact point found; the chain itself certifies nonemptiness over C
    chain = D.chains[0]
    evidence["witness_chain"] = [p.to_str() for p in chain.polys]
    return IsoVerdict(IsoVerdict.ISOMORPHIC, "C", None, evidence, verified=True)


def is_isomorphic_real(L: LieAlgebra, M: LieAlgebra, budget: Budget | None = None,
                       seed: int = 0) -> IsoVerdict:
    """Decide real isomorphism through the semi-algebraic engine; Unknown is
    an honest outcome when the chain structure defeats the sampler."""
    if L.params or M.params:
        raise ValueError("use param_iso_real for parametric algebras")
    if L.n != M.n:
        return IsoVerdict(IsoVerdict.NOT_ISOMORPHIC, "R", evidence={"reason": "dimension mismatch"})
    budget = budget or Budget()
    sys = iso_system(L, M)
    eqs, assignments, det, det_eq = _reduced_system(sys)
    sas = SAS(sys.order, equations=eqs + [det_eq])
    verdict = sas_has_real_solution(sas, budget, seed)
    if verdict.status == RealVerdict.EMPTY:
        return IsoVerdict(IsoVerdict.NOT_ISOMORPHIC, "R", evidence={"reason": verdict.reason})
    if verdict.status == RealVerdict.UNKNOWN:
        return IsoVerdict(IsoVerdict.UNKNOWN, "R", evidence={"reason": verdict.reason})
    evidence = {"witness_box": {n: (str(lo), str(hi)) for n, (lo, hi) in verdict.witness.intervals.items()}}
    # prefer an exact rational matrix when the witness allows one
    matrix = _rational_matrix_from_box(sys, assignments, verdict.witness)
    if matrix is not None:
        ok = verify_isomorphism(L, M, matrix)
        if ok:
            return IsoVerdict(IsoVerdict.ISOMORPHIC, "R", matrix, evidence, verified=True)
    box_ok = _verify_box_witness(eqs + [det_eq], sys.order, verdict.witness, sys.det_name)
    interval_matrix = _interval_matrix_from_box(sys, assignments, verdict.witness)
    return IsoVerdict(IsoVerdict.ISOMORPHIC, "R", interval_matrix, evidence, verified=box_ok)


def _rational_matrix_from_box(sys: IsoSystem, assignments, box: IsolatingBox):
    """If every matrix unknown resolves to an exact rational at the witness
    (degenerate interval, or a linear pivot of rationals), build the matrix."""
    values = {}
    for nm, (lo, hi) in box.intervals.items():
        if lo == hi:
            values[nm] = Fraction(lo)
    for nm in sys.z_names:
        if nm in values:
            continue
        if nm in assignments:
            expr = assignments[nm]
            if expr.variable_names() <= set(values):
                values[nm] = expr.evaluate(values).constant_value()
                continue
        if nm not in box.intervals:
            values[nm] = Fraction(0)
    if not all(nm in values for nm in sys.z_names):
        return None
    # confirm the candidate solves the full system exactly
    full = dict(values)
    for nm, (lo, hi) in box.intervals.items():
        if nm not in full:
            if lo == hi:
                full[nm] = Fraction(lo)
    for e in sys.bracket_equations:
        if not (e.variable_names() <= set(full)):
            return None
        if not e.evaluate(full).is_zero():
            return None
    rows = _matrix_from_values({nm: values[nm] for nm in sys.z_names}, sys.n)
    det = _det_generic(
        [[GaussianRational.of(x) for x in row] for row in rows],
        GaussianRational(0), GaussianRational(1),
    )
    if det.is_zero():
        return None
    return rows


def _interval_matrix_from_box(sys: IsoSystem, assignments, box: IsolatingBox):
    grid = {}
    order = sys.order
    for nm, iv in box.intervals.items():
        grid[order.index(nm)] = iv
    rows = []
    for s in range(1, sys.n + 1):
        row = []
        for i in range(1, sys.n + 1):
            nm = _zname(i, s)
            if nm in box.intervals:
                row.append(box.intervals[nm])
            elif nm in assignments and assignments[nm].variables() <= set(grid):
                row.append(eval_box(assignments[nm], grid))
            else:
                row.append((Fraction(0), Fraction(0)))
        rows.append(row)
    return rows


# ----------------------------------------------------------------------
# invariants prefilter


def invariant_prefilter(L: LieAlgebra, M: LieAlgebra):
    """Compare dimensions of the derived series, lower central series and
    center.  'distinguished' is a sound certificate of non-isomorphism."""
    if L.params or M.params:
        raise ValueError("prefilter needs parameter-free algebras")
    sig_l = _invariant_signature(L)
    sig_m = _invariant_signature(M)
    if sig_l != sig_m:
        return ("distinguished", {"left": sig_l, "right": sig_m})
    return ("indistinguishable", {"left": sig_l, "right": sig_m})


def _invariant_signature(L: LieAlgebra):
    n = L.n
    basis = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def bracket_span(A_rows, B_rows):
        vecs = []
        for u in A_rows:
            for v in B_rows:
                vecs.append(L.numeric_bracket(u, v))
        return _span_dim(vecs)[1]

    derived = []
    cur = basis
    while True:
        nxt = bracket_span(cur, cur)
        derived.append(len(nxt))
        if not nxt or (len(derived) > 1 and derived[-1] == derived[-2]) or len(derived) > n:
            break
        cur = nxt
    lower = []
    cur = basis
    while True:
        nxt = bracket_span(basis, cur)
        lower.append(len(nxt))
        if not nxt or (len(lower) > 1 and lower[-1] == lower[-2]) or len(lower) > n:
            break
        cur = nxt
    # center: vectors commuting with every basis vector
    rows = []
    for j in range(1, n + 1):
        # row block: for unknown vector x, [x, e_j] = sum_i x_i [e_i, e_j]
        block = [[Fraction(0)] * n for _ in range(n)]
        for i in range(1, n + 1):
            for k in range(1, n + 1):
                c = L.bracket_coeff(i, j, k)
                if not c.is_zero():
                    block[k - 1][i - 1] = c.constant_value()
        rows.extend(block)
    rank = _span_dim([r for r in rows])[0] if any(any(x != 0 for x in r) for r in rows) else 0
    center_dim = n - rank
    return {
        "derived_series": tuple(derived),
        "lower_central_series": tuple(lower),
        "center_dim": center_dim,
    }


# ----------------------------------------------------------------------
# parametric algorithms


def param_iso_complex(L: LieAlgebra, M: LieAlgebra, budget: Budget | None = None) -> ConstructibleSet:
    """Parameter conditions for complex isomorphism: project the combined
    system onto the joint parameter space."""
    budget = budget or Budget()
    sys = iso_system(L, M)
    eqs, assignments, det, det_eq = _reduced_system(sys)
    return project_complex(eqs + sys.side_equations + [det_eq], sys.nonzero,
                           sys.nparams, sys.order, budget)


def param_iso_real(L: LieAlgebra, M: LieAlgebra, budget: Budget | None = None,
                   seed: int = 0) -> RealRegion:
    """Parameter conditions for real isomorphism: sound cell-sampled image."""
    budget = budget or Budget()
    sys = iso_system(L, M)
    eqs, assignments, det, det_eq = _reduced_system(sys)
    S = SAS(
        sys.order,
        equations=eqs + sys.side_equations + [det_eq],
        nonneg=sys.nonneg,
        positive=sys.positive,
        nonzero=sys.nonzero,
    )
    return project_real(S, sys.nparams, sys.order, budget, seed)


# ----------------------------------------------------------------------
# utilities for tests and the CLI


def conjugate(L: LieAlgebra, P_rows) -> LieAlgebra:
    """Change of basis by an invertible rational matrix (columns are the new
    basis vectors in old coordinates); structure constants transform along."""
    if L.params:
        raise ValueError("conjugation needs a parameter-free algebra")
    n = L.n
    P = [[Fraction(x) for x in row] for row in P_rows]
    det = _det_generic(
        [[GaussianRational.of(x) for x in row] for row in P],
        GaussianRational(0), GaussianRational(1),
    )
    if det.is_zero():
        raise ValueError("change of basis must be invertible")
    Pinv = _mat_inverse(P)
    brackets = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            u = [P[r][i - 1] for r in range(n)]
            v = [P[r][j - 1] for r in range(n)]
            w = L.numeric_bracket(u, v)
            coords = [sum(Pinv[r][k] * w[k] for k in range(n)) for r in range(n)]
            comp = {k + 1: coords[k] for k in range(n) if coords[k] != 0}
            if comp:
                brackets[(i, j)] = comp
    return LieAlgebra.from_table(n, brackets, name=f"{L.name}~conj" if L.name else "conj")


def _mat_inverse(P):
    n = len(P)
    aug = [list(map(Fraction, P[i])) + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    rows, pivots = _rref(aug)
    if len(rows) < n or pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rows]
