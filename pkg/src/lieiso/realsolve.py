"""Real-solution existence for semi-algebraic systems built on regular chains.

Zero-dimensional chains are handled completely: real points are enumerated
bottom-up by isolating the roots of iterated resultants with Sturm sequences
and certifying each candidate coordinate by an exact sign change of the chain
polynomial over the lower boxes.  Positive-dimensional chains get a sound,
possibly incomplete treatment: a chain member involving only its own main
variable and having no real root proves emptiness, and otherwise rational
samples for the free variables are tried until a witness appears or the
budget runs out (verdict Unknown).

Every sign claim is established either by an exact rational evaluation, by an
interval evaluation that excludes zero, or by a zero/regular split of the
chain; nothing is ever decided by floating point.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .config import Budget, BudgetExceededError
from .chains import (
    EngineError,
    Regular,
    RegularChain,
    TriangularSet,
    Zero,
    ZeroDivisor,
    is_regular,
    sat_membership,
    triangularize,
)
from .polyring import (
    Polynomial,
    VarOrder,
    derivative,
    diff,
    divexact,
    gcd,
    res_chain,
)


# ----------------------------------------------------------------------
# semi-algebraic systems and verdicts


@dataclass
class SAS:
    """Conjunction of equations, inequalities and inequations:
    every f = 0, every n >= 0, every p > 0, every h != 0."""

    order: VarOrder
    equations: list = field(default_factory=list)
    nonneg: list = field(default_factory=list)
    positive: list = field(default_factory=list)
    nonzero: list = field(default_factory=list)

    def all_sign_polys(self):
        return list(self.nonneg) + list(self.positive) + list(self.nonzero)


class IsolatingBox:
    """Per-variable rational intervals certified to contain exactly one real
    solution; refinable when backed by a live chain point."""

    def __init__(self, intervals: dict, point=None):
        self.intervals = dict(intervals)  # name -> (lo, hi), lo <= hi
        self._point = point

    def interval(self, name):
        return self.intervals[name]

    def refine(self, rounds: int = 1):
        if self._point is not None:
            self._point.refine_all(rounds)
            self.intervals.update(self._point.named_intervals())
        return self

    def sync(self):
        if self._point is not None:
            self.intervals.update(self._point.named_intervals())
        return self

    def midpoint(self, name):
        lo, hi = self.intervals[name]
        return (lo + hi) / 2

    def __repr__(self):
        parts = ", ".join(f"{n} in [{lo}, {hi}]" for n, (lo, hi) in sorted(self.intervals.items()))
        return f"IsolatingBox({parts})"


class RealVerdict:
    NONEMPTY = "nonempty"
    EMPTY = "empty"
    UNKNOWN = "unknown"

    def __init__(self, status, witness=None, reason=""):
        self.status = status
        self.witness = witness
        self.reason = reason

    @classmethod
    def nonempty(cls, witness, reason="witness found"):
        return cls(cls.NONEMPTY, witness, reason)

    @classmethod
    def empty(cls, reason):
        return cls(cls.EMPTY, None, reason)

    @classmethod
    def unknown(cls, reason):
        return cls(cls.UNKNOWN, None, reason)

    def __repr__(self):
        if self.status == self.NONEMPTY:
            return f"RealVerdict(nonempty, witness={self.witness!r})"
        return f"RealVerdict({self.status}, {self.reason!r})"


# ----------------------------------------------------------------------
# exact univariate toolkit (dense Fraction coefficient lists)


def _dense(p: Polynomial, vi: int):
    if any(i != vi for i in p.variables()):
        raise ValueError(f"{p} is not univariate in {p.order.names[vi]}")
    out = [Fraction(0)] * (p.degree_in(vi) + 1)
    for exps, c in p.terms.items():
        out[exps[vi]] = Fraction(c)
    return out


def _utrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _uderiv(c):
    return [c[k] * k for k in range(1, len(c))]


def _urem(a, b):
    a = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    while len(a) - 1 >= db and a:
        k = (len(a) - 1) - db
        f = a[-1] * inv
        for i in range(db + 1):
            a[k + i] -= f * b[i]
        a.pop()
        _utrim(a)
    return a


def _ueval(c, x):
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _usqfree(c):
    """Squarefree part via gcd with the derivative (monic Euclid)."""
    c = _utrim(list(c))
    if len(c) <= 2:
        return c
    a, b = list(c), _uderiv(c)
    while b:
        a, b = b, _utrim(_urem(a, b))
    # a ~ gcd(c, c'); divide it out
    if len(a) <= 1:
        return c
    g = [x / a[-1] for x in a]
    q = []
    rem = list(c)
    dg = len(g) - 1
    while len(rem) - 1 >= dg and rem:
        f = rem[-1]
        q.append(f)
        k = (len(rem) - 1) - dg
        for i in range(dg + 1):
            rem[k + i] -= f * g[i]
        rem.pop()
        _utrim(rem)
    if _utrim(rem):
        raise EngineError("squarefree division left a remainder")
    return list(reversed(q))


def _sturm_chain(c):
    chain = [list(c), _uderiv(c)]
    while chain[-1]:
        nxt = [-x for x in _urem(chain[-2], chain[-1])]
        _utrim(nxt)
        if not nxt:
            break
        chain.append(nxt)
    return [s for s in chain if s]


def _sign_variations(chain, x):
    signs = []
    for c in chain:
        v = _ueval(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(chain, a, b):
    """Number of distinct real roots in (a, b] for a squarefree base."""
    return _sign_variations(chain, a) - _sign_variations(chain, b)


def _root_bound(c):
    lead = abs(c[-1])
    m = max(abs(x) for x in c[:-1]) if len(c) > 1 else Fraction(0)
    return m / lead + 1


def _nonroot_between(c, a, b):
    """A rational point strictly inside (a, b) that is not a root of c."""
    step = (b - a) / 2
    cand = a + step
    for _ in range(64):
        if _ueval(c, cand) != 0:
            return cand
        step /= 2
        cand = a + step
    raise EngineError("could not find a non-root subdivision point")


class _UnivariateRoots:
    """Isolated real roots of a squarefree univariate polynomial with a
    shared Sturm chain for later refinement."""

    def __init__(self, coeffs):
        self.coeffs = coeffs
        self.sturm = _sturm_chain(coeffs)

    def isolate(self):
        c = self.coeffs
        if len(c) <= 1:
            return []
        bound = _root_bound(c)
        lo, hi = -bound - 1, bound + 1
        out = []
        stack = [(lo, hi, _count_roots(self.sturm, lo, hi))]
        while stack:
            a, b, n = stack.pop()
            if n == 0:
                continue
            if n == 1:
                out.append((a, b))
                continue
            mid = _nonroot_between(c, a, b)
            left = _count_roots(self.sturm, a, mid)
            stack.append((a, mid, left))
            stack.append((mid, b, n - left))
        out.sort()
        return out

    def refine(self, box):
        a, b = box
        mid = _nonroot_between(self.coeffs, a, b)
        if _count_roots(self.sturm, a, mid) == 1:
            return (a, mid)
        return (mid, b)


def isolate_real_roots(p: Polynomial):
    """Disjoint rational intervals, one per real root of a squarefree
    univariate polynomial, collectively exhaustive."""
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.is_constant():
        return []
    vi = p.mvar_index()
    coeffs = _usqfree(_dense(p, vi))
    name = p.order.names[vi]
    roots = _UnivariateRoots(coeffs)
    return [IsolatingBox({name: box}) for box in roots.isolate()]


# ----------------------------------------------------------------------
# rational interval arithmetic


def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _iv_mul(a, b):
    vals = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(vals), max(vals))


def _iv_pow(a, k):
    if k == 0:
        return (Fraction(1), Fraction(1))
    lo, hi = a
    plo, phi = lo ** k, hi ** k
    if k % 2 == 1:
        return (plo, phi)
    m = min(plo, phi)
    if lo <= 0 <= hi:
        m = Fraction(0)
    return (m, max(plo, phi))


def eval_box(p: Polynomial, boxes: dict):
    """Interval evaluation of p over per-variable-index rational intervals;
    variables without a box must not occur."""
    total = (Fraction(0), Fraction(0))
    for exps, c in p.terms.items():
        term = (Fraction(c), Fraction(c))
        for i, e in enumerate(exps):
            if e:
                term = _iv_mul(term, _iv_pow(boxes[i], e))
        total = _iv_add(total, term)
    return total


def _iv_excludes_zero(iv):
    return iv[0] > 0 or iv[1] < 0


# ----------------------------------------------------------------------
# real points of zero-dimensional chains


class _Level:
    __slots__ = ("vi", "roots", "box")

    def __init__(self, vi, roots, box):
        self.vi = vi
        self.roots = roots  # _UnivariateRoots of the eliminant
        self.box = box


class ChainPoint:
    """One real solution of a zero-dimensional squarefree chain, represented
    by one isolating interval per algebraic variable plus exact rational
    values for pre-bound variables."""

    def __init__(self, order, chain, levels, exact):
        self.order = order
        self.chain = chain
        self.levels = levels  # list of _Level, ascending
        self.exact = dict(exact)  # vi -> Fraction

    def boxes_by_index(self):
        out = {lv.vi: lv.box for lv in self.levels}
        for vi, val in self.exact.items():
            out[vi] = (val, val)
        return out

    def named_intervals(self):
        return {self.order.names[vi]: box for vi, box in self.boxes_by_index().items()}

    def refine_all(self, rounds=1):
        for _ in range(rounds):
            for lv in self.levels:
                lv.box = lv.roots.refine(lv.box)

    def refine_until_excludes_zero(self, p: Polynomial, budget: Budget):
        """Interval of p at this point, refined until it excludes zero.
        Raises BudgetExceededError if the rounds run out (p may be zero)."""
        for _ in range(budget.refine_rounds):
            iv = eval_box(p, self.boxes_by_index())
            if _iv_excludes_zero(iv):
                return iv
            self.refine_all()
        raise BudgetExceededError("sign refinement budget exhausted")

    def as_isolating_box(self):
        return IsolatingBox(self.named_intervals(), point=self)


def _self_contained(polys):
    mvars = {t.mvar_index() for t in polys}
    return all(t.variables() <= mvars for t in polys)


def real_points_of_chain(T, budget: Budget | None = None, presets: dict | None = None):
    """All real solutions of a zero-dimensional squarefree regular chain,
    as refinable isolating boxes.  `presets` may bind outer variables to
    exact rationals (used when sampling free variables)."""
    budget = budget or Budget()
    polys = T.polys if isinstance(T, RegularChain) else tuple(T)
    if not polys:
        raise ValueError("empty chain has no isolated points")
    order = polys[0].order
    exact = dict(presets or {})
    points = [ChainPoint(order, polys, [], exact)]
    lower_polys = []
    usable = set(exact)
    for t in polys:
        vi = t.mvar_index()
        usable.add(vi)
        if not (t.variables() <= usable):
            if not points:
                return []
            raise ValueError("chain is not zero-dimensional over the bound variables")
        t_inst = t.evaluate({order.names[i]: v for i, v in exact.items()}) if exact else t
        elim = res_chain(t_inst, lower_polys)
        if elim.is_zero() or elim.degree_in(vi) == 0:
            raise EngineError(f"degenerate eliminant at level {order.names[vi]}")
        coeffs = _usqfree(_dense(elim, vi))
        roots = _UnivariateRoots(coeffs)
        boxes = roots.isolate()
        new_points = []
        for pt in points:
            for box in boxes:
                placed = _certify(pt, t_inst, vi, roots, box, budget)
                if placed is not None:
                    new_points.append(placed)
        points = new_points
        if not points:
            return []
        lower_polys.append(t_inst)
    return [pt.as_isolating_box() for pt in points]


def _certify(pt: ChainPoint, t: Polynomial, vi, roots, box, budget: Budget):
    """Accept the candidate coordinate interval iff t changes sign across it
    over the lower point; endpoints are never roots, so this terminates."""
    order = pt.order
    name = order.names[vi]
    if not pt.levels and not pt.exact:
        # first level: t is univariate, roots of its eliminant are its own
        new = ChainPoint(order, pt.chain, list(pt.levels), pt.exact)
        new.levels.append(_Level(vi, roots, box))
        return new
    lo_poly = t.evaluate({name: box[0]})
    hi_poly = t.evaluate({name: box[1]})
    work = ChainPoint(order, pt.chain, [_Level(l.vi, l.roots, l.box) for l in pt.levels], pt.exact)
    for _ in range(budget.refine_rounds):
        grid = work.boxes_by_index()
        iv_lo = eval_box(lo_poly, grid)
        iv_hi = eval_box(hi_poly, grid)
        if _iv_excludes_zero(iv_lo) and _iv_excludes_zero(iv_hi):
            if (iv_lo[0] > 0) == (iv_hi[0] > 0):
                return None  # even root count, i.e. none
            work.levels.append(_Level(vi, roots, box))
            return work
        work.refine_all()
    raise BudgetExceededError("candidate certification budget exhausted")


# ----------------------------------------------------------------------
# border polynomial


def _squarefree_radical(p: Polynomial) -> Polynomial:
    g = p
    for vi in sorted(p.variables()):
        g = gcd(g, diff(p, p.order.names[vi]))
        if g.is_constant():
            return p.primitive()
    return divexact(p, g).primitive()


def border_polynomial(T, H: Sequence[Polynomial] = (), budget: Budget | None = None) -> Polynomial:
    """Primitive squarefree part of the product of the iterated resultants of
    der(t) for t in the chain and of every h in H against the chain; lives in
    the free variables of the chain."""
    polys = T.polys if isinstance(T, RegularChain) else tuple(T)
    if not polys:
        order = H[0].order if H else None
        if order is None:
            raise ValueError("border polynomial of an empty system is undefined")
        prod = Polynomial.const(order, 1)
        for h in H:
            prod = prod * h
        return _squarefree_radical(prod) if not prod.is_constant() else Polynomial.const(order, 1)
    order = polys[0].order
    for h in H:
        if sat_membership(h, polys):
            raise ValueError(f"{h} vanishes on the chain: [T, H] is not a regular system")
    prod = Polynomial.const(order, 1)
    for t in polys:
        r = res_chain(derivative(t), polys)
        if r.is_zero():
            raise ValueError("chain is not squarefree: derivative resultant vanished")
        prod = prod * r
    for h in H:
        r = res_chain(h, polys)
        if r.is_zero():
            raise ValueError(f"resultant of {h} against the chain vanished")
        prod = prod * r
    if prod.is_constant():
        return Polynomial.const(order, 1)
    return _squarefree_radical(prod)


# ----------------------------------------------------------------------
# rational sampling sequences


def rational_sequence(seed: int = 0):
    """0, 1, -1, 2, -2, ... then seeded pseudo-random rationals."""
    for k in range(9):
        if k == 0:
            yield Fraction(0)
        else:
            yield Fraction(k)
            yield Fraction(-k)
    rng = random.Random(seed)
    while True:
        num = rng.randint(-24, 24)
        den = rng.randint(1, 8)
        yield Fraction(num, den)


def sample_tuples(nvars: int, budget: Budget, seed: int = 0):
    """Deterministic tuples of small rationals, low height first."""
    base = list(itertools.islice(rational_sequence(seed), max(12, budget.max_samples)))
    emitted = 0
    for radius in range(len(base)):
        for combo in itertools.product(range(radius + 1), repeat=nvars):
            if max(combo) != radius:
                continue
            yield tuple(base[i] for i in combo)
            emitted += 1
            if emitted >= budget.max_samples:
                return


# ----------------------------------------------------------------------
# the SAS decision procedure


def _split_by_signs(chain_polys, sign_polys, order, budget):
    """Refine the chain so each sign polynomial is identically zero or
    nowhere zero per branch.  Yields (branch_polys, {poly_idx: is_zero})."""
    branches = [(tuple(chain_polys), {})]
    for idx, q in enumerate(sign_polys):
        nxt = []
        for polys, tags in branches:
            res = is_regular(q, polys, budget)
            if isinstance(res, Regular):
                nxt.append((polys, {**tags, idx: False}))
            elif isinstance(res, Zero):
                nxt.append((polys, {**tags, idx: True}))
            else:
                for c in res.zero_chains:
                    nxt.append((c.polys, {**tags, idx: True}))
                for c in res.regular_chains:
                    nxt.append((c.polys, {**tags, idx: False}))
        branches = nxt
    return branches


def _point_passes(pt_box: IsolatingBox, sas: SAS, tags, budget):
    """Check the sign conditions at one certified point; tags give exact
    zeroness per sign polynomial (indexed over nonneg+positive+nonzero)."""
    polys = sas.all_sign_polys()
    n_nonneg = len(sas.nonneg)
    n_pos = len(sas.positive)
    point = pt_box._point
    for idx, q in enumerate(polys):
        is_zero = tags[idx]
        if is_zero:
            if idx < n_nonneg:
                continue  # q == 0 satisfies q >= 0
            return False  # strict > 0 or != 0 fails
        iv = point.refine_until_excludes_zero(q, budget)
        if idx < n_nonneg or idx < n_nonneg + n_pos:
            if iv[1] < 0:
                return False
    return True


def _truly_univariate_no_real_roots(t: Polynomial):
    vi = t.mvar_index()
    if t.variables() != {vi}:
        return False
    coeffs = _usqfree(_dense(t, vi))
    roots = _UnivariateRoots(coeffs)
    return not roots.isolate()


def _chain_status(chain: RegularChain, sas: SAS, budget, seed):
    order = sas.order
    polys = chain.polys
    sign_polys = sas.all_sign_polys()
    occupied = set()
    for t in polys:
        occupied |= t.variables()
    for q in sign_polys:
        occupied |= q.variables()
    mvars = {t.mvar_index() for t in polys}
    free = [order.names[i] for i in sorted(occupied - mvars)]
    if not polys:
        if not free:
            return RealVerdict.nonempty(IsolatingBox({}), "no constraints at all")
        # whole space: any rational point does, subject to sign conditions
        for sample in sample_tuples(len(free), budget, seed):
            bind = dict(zip(free, sample))
            ok = all(q.evaluate(bind).constant_value() >= 0 for q in sas.nonneg) and all(
                q.evaluate(bind).constant_value() > 0 for q in sas.positive
            ) and all(q.evaluate(bind).constant_value() != 0 for q in sas.nonzero)
            if ok:
                box = IsolatingBox({n: (v, v) for n, v in bind.items()})
                return RealVerdict.nonempty(box)
        return RealVerdict.unknown("no admissible rational sample for the free space")
    if not free:
        # zero-dimensional: complete decision
        found_unknown = False
        for branch_polys, tags in _split_by_signs(polys, sign_polys, order, budget):
            try:
                pts = real_points_of_chain(branch_polys, budget)
            except BudgetExceededError:
                found_unknown = True
                continue
            for box in pts:
                try:
                    if _point_passes(box, sas, tags, budget):
                        return RealVerdict.nonempty(box.sync())
                except BudgetExceededError:
                    found_unknown = True
        if found_unknown:
            return RealVerdict.unknown("refinement budget exhausted")
        return RealVerdict.empty("no real point of the chain satisfies the sign conditions")
    # positive-dimensional: sound pruning, then sampling
    for t in polys:
        if _truly_univariate_no_real_roots(t):
            return RealVerdict.empty(f"chain member {t.to_str()} has no real root")
    initials = [t.ranked_view().init for t in polys]
    for sample in sample_tuples(len(free), budget, seed):
        bind = dict(zip(free, sample))
        if any(i.evaluate(bind).is_zero() for i in initials):
            continue  # sample hits the initial locus
        inst_eqs = [t.evaluate(bind) for t in polys]
        inst = SAS(
            order,
            equations=inst_eqs,
            nonneg=[q.evaluate(bind) for q in sas.nonneg],
            positive=[q.evaluate(bind) for q in sas.positive],
            nonzero=[q.evaluate(bind) for q in sas.nonzero],
        )
        try:
            sub = sas_has_real_solution(inst, budget=budget, seed=seed)
        except BudgetExceededError:
            continue
        if sub.status == RealVerdict.NONEMPTY:
            merged = dict(sub.witness.intervals)
            merged.update({n: (v, v) for n, v in bind.items()})
            return RealVerdict.nonempty(IsolatingBox(merged, point=sub.witness._point))
    return RealVerdict.unknown("sampling budget exhausted on a positive-dimensional chain")


def sas_has_real_solution(S: SAS, budget: Budget | None = None, seed: int = 0) -> RealVerdict:
    """Decide whether the zero set of S over the reals is nonempty.

    Complete whenever every chain of the triangular decomposition is
    zero-dimensional or prunable; otherwise Unknown is possible.  NonEmpty
    always carries a certified witness box."""
    budget = budget or Budget()
    order = S.order
    consts_fail = [f for f in S.equations if f.is_constant() and not f.is_zero()]
    if consts_fail:
        return RealVerdict.empty("an equation is a nonzero constant")
    for q in S.positive:
        if q.is_constant() and q.constant_value() <= 0:
            return RealVerdict.empty("a strict inequality fails identically")
    for q in S.nonneg:
        if q.is_constant() and q.constant_value() < 0:
            return RealVerdict.empty("an inequality fails identically")
    for q in S.nonzero:
        if q.is_constant() and q.constant_value() == 0:
            return RealVerdict.empty("an inequation fails identically")
    try:
        D = triangularize(
            [f for f in S.equations if not f.is_zero()],
            order,
            budget,
            nonzero=[h for h in S.nonzero if not h.is_constant()],
        )
    except BudgetExceededError:
        return RealVerdict.unknown("triangular decomposition exceeded its budget")
    if D.is_empty():
        return RealVerdict.empty("no complex solutions at all")
    statuses = []
    for chain in D:
        st = _chain_status(chain, S, budget, seed)
        if st.status == RealVerdict.NONEMPTY:
            return st
        statuses.append(st)
    if all(st.status == RealVerdict.EMPTY for st in statuses):
        reasons = "; ".join(st.reason for st in statuses)
        return RealVerdict.empty(reasons)
    return RealVerdict.unknown("; ".join(st.reason for st in statuses))
