"""Regular chains and triangular decomposition over the algebraic closure.

The solver is incremental: equations are intersected one at a time against a
worklist of (pending equations, chain) tasks.  Reduction is by iterated
pseudo-division; gcds modulo a chain are computed by a branching Euclidean
scheme that splits the chain whenever a leading coefficient turns out to be a
zerodivisor.  Branches whose correctness certificate degenerates on a proper
sublocus spawn extra tasks carrying that locus as a new equation, so no part
of the variety is ever dropped.  Outputs are made squarefree and then
re-verified: every input equation must pseudo-reduce to zero modulo every
output chain, and chains failing the check are re-intersected until the
decomposition is sound.

Chains are tuples of polynomials with pairwise distinct main variables,
sorted by main-variable rank.  Everything is immutable; decomposition
branches are independent and the final chain list is order-normalized, so
results are deterministic.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from fractions import Fraction as Fr

from .config import Budget, BudgetExceededError
from .polyring import (
    Polynomial,
    VarOrder,
    content_in,
    diff,
    divexact,
    gcd,
    prem,
)


class EngineError(Exception):
    """Internal invariant violated; never a silently wrong answer."""


# ----------------------------------------------------------------------
# public value types


class TriangularSet:
    """Non-constant polynomials with pairwise distinct main variables,
    stored by ascending main-variable rank."""

    __slots__ = ("polys", "order")

    def __init__(self, polys: Sequence[Polynomial], order: VarOrder | None = None):
        polys = sorted(polys, key=lambda p: p.mvar_index())
        if polys:
            order = polys[0].order
        if order is None:
            raise ValueError("empty triangular set needs an explicit order")
        for p in polys:
            if p.is_constant():
                raise ValueError("triangular sets contain no constants")
            if p.order != order:
                raise ValueError("mixed variable orders in triangular set")
        for a, b in zip(polys, polys[1:]):
            if a.mvar_index() == b.mvar_index():
                raise ValueError(f"duplicate main variable {a.mvar()}")
        self.polys = tuple(polys)
        self.order = order

    def mvar_indices(self):
        return {p.mvar_index() for p in self.polys}

    def initials(self):
        return [p.ranked_view().init for p in self.polys]

    def initial_product(self) -> Polynomial:
        h = Polynomial.const(self.order, 1)
        for p in self.polys:
            h = h * p.ranked_view().init
        return h

    def free_variables(self):
        taken = self.mvar_indices()
        return [n for i, n in enumerate(self.order.names) if i not in taken]

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other):
        return isinstance(other, TriangularSet) and self.polys == other.polys

    def __hash__(self):
        return hash(self.polys)

    def __repr__(self):
        return "{" + ", ".join(p.to_str() for p in self.polys) + "}"


class RegularChain:
    __slots__ = ("base", "squarefree_flag")

    def __init__(self, base: TriangularSet, squarefree_flag: bool = False):
        self.base = base
        self.squarefree_flag = squarefree_flag

    @property
    def polys(self):
        return self.base.polys

    @property
    def order(self):
        return self.base.order

    def dimension(self) -> int:
        return self.order.arity - len(self.base.polys)

    def sort_text(self):
        return tuple(p.to_str() for p in self.base.polys)

    def __eq__(self, other):
        return isinstance(other, RegularChain) and self.base == other.base

    def __hash__(self):
        return hash(self.base)

    def __repr__(self):
        return f"RegularChain{self.base!r}"


class Decomposition:
    __slots__ = ("chains", "order")

    def __init__(self, chains: Sequence[RegularChain], order: VarOrder):
        self.chains = sorted(chains, key=lambda c: (len(c.polys), c.sort_text()))
        self.order = order

    def is_empty(self) -> bool:
        return not self.chains

    def __iter__(self):
        return iter(self.chains)

    def __len__(self):
        return len(self.chains)

    def __repr__(self):
        return f"Decomposition({list(self.chains)!r})"


class Regular:
    def __repr__(self):
        return "Regular"


class Zero:
    def __repr__(self):
        return "Zero"


class ZeroDivisor:
    """p vanishes on part of the quasi-component: carries the split."""

    def __init__(self, zero_chains, regular_chains):
        self.zero_chains = tuple(zero_chains)
        self.regular_chains = tuple(regular_chains)

    def __repr__(self):
        return f"ZeroDivisor(zero={list(self.zero_chains)}, regular={list(self.regular_chains)})"


# ----------------------------------------------------------------------
# solver


def _chain_key(chain):
    return tuple(p.to_str() for p in chain)


def _unique(polys):
    # insertion-ordered dedupe; set iteration order is not deterministic here
    return list(dict.fromkeys(polys))


class _Solver:
    def __init__(self, order: VarOrder, budget: Budget, nonzero: Sequence[Polynomial] = ()):
        self.order = order
        self.budget = budget
        self.steps = 0
        self.nonzero = [p for p in nonzero if not p.is_constant()]

    # -- bookkeeping ---------------------------------------------------

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget.max_steps:
            raise BudgetExceededError(f"elimination exceeded {self.budget.max_steps} steps")

    def _norm(self, p: Polynomial) -> Polynomial:
        if p.is_zero():
            return p
        prim = p.primitive()
        if prim.max_coeff_bits() > self.budget.max_coeff_bits:
            raise BudgetExceededError("coefficient size exceeded budget")
        return prim

    def _mk_chain(self, *parts):
        polys = [q for part in parts for q in part]
        polys.sort(key=lambda t: t.mvar_index())
        for a, b in zip(polys, polys[1:]):
            if a.mvar_index() == b.mvar_index():
                raise EngineError("chain levels collided")
        # degree-preserving reduction by lower levels rewrites the
        # quasi-component exactly; only accept it when it shrinks the poly.
        # stripping the polynomial content w.r.t. the main variable keeps the
        # quasi-component too (the initial's nonvanishing subsumes the content)
        out = []
        for u in polys:
            vi = u.mvar_index()
            if out and any(
                u.degree_in(t.mvar_index()) >= t.degree_in(t.mvar_index()) for t in out
            ):
                red = self.prem_chain(u, tuple(out))
                if red.is_zero():
                    # u vanishes on the lower quasi-component: vacuous level
                    continue
                red = self._norm(red)
                if (
                    red.mvar_index() == vi
                    and red.degree_in(vi) == u.degree_in(vi)
                    and len(red.terms) <= len(u.terms)
                    and red.max_coeff_bits() <= u.max_coeff_bits() + 8
                ):
                    u = red
            if len(u.terms) > 1:
                cont = content_in(u, self.order.names[vi])
                if not cont.is_constant():
                    u = self._norm(divexact(u, cont))
            out.append(u)
        return tuple(out)

    def _chain_at(self, chain, vi):
        for t in chain:
            if t.mvar_index() == vi:
                return t
        return None

    def prem_chain(self, p: Polynomial, chain) -> Polynomial:
        r = p
        for t in reversed(chain):
            if r.is_zero():
                return r
            vi = t.mvar_index()
            if r.degree_in(vi) >= t.degree_in(vi):
                r, _, _ = prem(r, t, self.order.names[vi])
        return r

    # -- task queue ----------------------------------------------------

    def _push(self, tasks, pending: Iterable[Polynomial], chain):
        clean = []
        seen = set()
        for p in pending:
            p = self._norm(p)
            if p.is_zero():
                continue
            if p.is_constant():
                return  # inconsistent branch dies
            if p not in seen:
                seen.add(p)
                clean.append(p)
        clean.sort(key=lambda p: p.sort_key())
        tasks.append((tuple(clean), chain))

    def run_tasks(self, initial):
        """Worklist solve: each task is (pending equations, chain); returns
        the chains whose pending set emptied out."""
        tasks = []
        for P, T in initial:
            self._push(tasks, P, T)
        out = []
        seen = set()
        while tasks:
            P, T = tasks.pop()
            key = (P, T)
            if key in seen:
                continue
            seen.add(key)
            self._tick()
            if any(self.prem_chain(nz, T).is_zero() for nz in self.nonzero):
                continue  # a mandatory inequation vanishes identically here
            if not P:
                out.append(T)
                if len(out) > self.budget.max_chains:
                    raise BudgetExceededError("chain count exceeded budget")
                continue
            p, rest = P[0], P[1:]
            r = self._norm(self.prem_chain(p, T))
            if r.is_zero():
                self._push(tasks, rest, T)
                continue
            if r.is_constant():
                continue
            vi = r.mvar_index()
            t = self._chain_at(T, vi)
            if t is None:
                self._rule_insert(tasks, rest, r, vi, T)
            else:
                self._rule_meet(tasks, rest, r, vi, t, T)
        return out

    # -- rule: r's main variable is free in the chain -------------------

    def _rational_root_factors(self, r, vi):
        """For a univariate r over Q, split off rational-root linear factors.
        Returns a factor list covering V(r) exactly, or None when r is not
        univariate / has no rational roots / coefficients are too large for
        the divisor scan.  Pure granularity heuristic: correctness never
        depends on it."""
        if r.variables() != {vi}:
            return None
        d = r.degree_in(vi)
        if d <= 1:
            return None
        coeffs = [c.constant_value() for c in r.coeffs_in(vi)]  # primitive ints
        v = Polynomial.variable(self.order, self.order.names[vi])
        factors = []
        low = 0
        while coeffs[low] == 0:
            low += 1
        if low:
            factors.append(v)
            coeffs = coeffs[low:]
        a0, an = abs(int(coeffs[0])), abs(int(coeffs[-1]))
        if a0 > 10**7 or an > 10**7:
            return factors + [Polynomial.from_coeffs(self.order, vi, [Polynomial.const(self.order, c) for c in coeffs])] if factors else None

        def divisors(n):
            out = []
            k = 1
            while k * k <= n:
                if n % k == 0:
                    out.append(k)
                    out.append(n // k)
                k += 1
            return sorted(set(out))

        candidates = sorted(
            {Fr(s * p, q) for p in divisors(a0) for q in divisors(an) for s in (1, -1)}
        )
        found = []
        for cand in candidates:
            # exact Horner evaluation
            acc = Fr(0)
            for c in reversed(coeffs):
                acc = acc * cand + c
            if acc == 0:
                found.append(cand)
        if not found and not factors:
            return None
        for root in found:
            # synthetic division by (v - root); input squarefree => single pass
            out = []
            acc = Fr(0)
            for c in reversed(coeffs):
                acc = acc * root + c
                out.append(acc)
            rem = out.pop()
            if rem != 0:
                raise EngineError("rational root lost during division")
            coeffs = [Fr(c) for c in reversed(out)]
            factors.append(v - Polynomial.const(self.order, root))
        if len(coeffs) > 1:
            rest_poly = Polynomial.from_coeffs(
                self.order, vi, [Polynomial.const(self.order, c) for c in coeffs]
            )
            factors.append(self._norm(rest_poly))
        return factors

    def _rule_insert(self, tasks, rest, r, vi, T):
        v = self.order.names[vi]
        cont = content_in(r, v)
        if not cont.is_constant():
            # V(r) = V(primitive part) union V(content)
            self._push(tasks, rest + (cont,), T)
            r = self._norm(divexact(r, cont))
        g = gcd(r, diff(r, v))
        if not g.is_constant():
            r = self._norm(divexact(r, g))  # same variety, lower degree
        split = self._rational_root_factors(r, vi)
        if split and len(split) > 1:
            for piece in split:
                self._push(tasks, rest + (piece,), T)
            return
        view = r.ranked_view()
        init, tail = view.init, view.tail
        lower = tuple(t for t in T if t.mvar_index() < vi)
        upper = tuple(t for t in T if t.mvar_index() > vi)
        if init.is_constant():
            self._push(tasks, rest, self._mk_chain(lower, (r,), upper))
            return
        # locus where the initial vanishes together with r
        self._push(tasks, rest + (init, tail), T)
        for br in self._regularize(init, lower):
            if br[0] == "regular":
                self._push(tasks, rest, self._mk_chain(br[1], (r,), upper))
            elif br[0] == "zero":
                self._push(tasks, rest + (tail,), self._mk_chain(br[1], upper))
            else:
                _, ch, extras = br
                self._spill_task(tasks, rest + (r,), extras, self._mk_chain(ch, upper), T)

    # -- rule: r meets the chain polynomial at its own level ------------

    def _rule_meet(self, tasks, rest, r, vi, t, T):
        v = self.order.names[vi]
        lower = tuple(x for x in T if x.mvar_index() < vi)
        upper = tuple(x for x in T if x.mvar_index() > vi)
        for br in self._gcd_mod(t, r, vi, lower):
            kind = br[0]
            if kind == "coprime":
                _, ch, cert, mults = br
                full = self._mk_chain(ch, (t,), upper)
                for extra in _unique((cert,) + mults):
                    if not extra.is_constant():
                        self._push(tasks, rest + (r, extra), full)
            elif kind == "gcd":
                _, ch, g, mults = br
                g = self._norm(g)
                dg = g.degree_in(vi)
                full = self._mk_chain(ch, (t,), upper)
                if dg == 0:
                    # gcd collapsed below the level: treat as fresh equations
                    self._push(tasks, rest + (r, g), full)
                    continue
                glead = g.coeff_of_power(vi, dg)
                newchain = self._mk_chain(ch, (g,), upper)
                pend = list(rest)
                if not self.prem_chain(r, newchain).is_zero():
                    pend.append(r)
                if not self.prem_chain(t, newchain).is_zero():
                    pend.append(t)
                self._push(tasks, pend, newchain)
                rho, _, qtil = prem(t, g, v)
                qtil = self._norm(qtil)
                dq = qtil.degree_in(vi)
                if dq >= 1:
                    self._push(tasks, rest + (r,), self._mk_chain(ch, (qtil,), upper))
                elif not qtil.is_constant():
                    self._push(tasks, rest + (r, qtil), full)
                for ell in _unique(mults + (glead,)):
                    if not ell.is_constant():
                        self._push(tasks, rest + (r, ell), full)
            else:
                _, ch, extras = br
                self._spill_task(tasks, rest + (r,), extras, self._mk_chain(ch, (t,), upper), T)

    def _spill_task(self, tasks, pending, extras, chain, original_chain):
        if not extras and chain == original_chain:
            raise EngineError("regularity split made no progress")
        self._push(tasks, tuple(pending) + tuple(extras), chain)

    # -- gcd of (f, g) modulo a lower chain, with branching --------------
    #
    # Returns branches over refinements of `lower`:
    #   ("coprime", chain, certificate, multipliers)
    #   ("gcd", chain, g, multipliers)
    #   ("spill", chain, extra_equations)
    # The certificate and every multiplier are regular modulo the branch;
    # the loci where they vanish are the caller's to cover.

    def _gcd_mod(self, f, g_in, vi, lower):
        v = self.order.names[vi]
        out = []
        stack = [(lower, f, g_in, ())]
        while stack:
            Di, a, b, mults = stack.pop()
            self._tick()
            db = b.degree_in(vi)
            if db == 0:
                for br in self._regularize(b, Di):
                    if br[0] == "regular":
                        out.append(("coprime", br[1], b, mults))
                    elif br[0] == "zero":
                        out.append(("gcd", br[1], a, mults))
                    else:
                        out.append(br)
                continue
            lc = b.coeff_of_power(vi, db)
            if lc.is_constant():
                r, extra = self._prs_step(a, b, v, vi, Di)
                if r.is_zero():
                    out.append(("gcd", Di, b, mults))
                else:
                    stack.append((Di, b, r, mults + extra))
                continue
            for br in self._regularize(lc, Di):
                if br[0] == "regular":
                    Dr = br[1]
                    r, extra = self._prs_step(a, b, v, vi, Dr)
                    if r.is_zero():
                        out.append(("gcd", Dr, b, mults + (lc,)))
                    else:
                        stack.append((Dr, b, r, mults + (lc,) + extra))
                elif br[0] == "zero":
                    b2 = self._norm(b - lc * Polynomial.variable(self.order, v) ** db)
                    if b2.is_zero():
                        out.append(("gcd", br[1], a, mults))
                    else:
                        stack.append((br[1], a, b2, mults))
                else:
                    out.append(br)
        return out

    def _prs_step(self, a, b, v, vi, chain):
        """One pseudo-division step reduced modulo the chain, content-stripped
        w.r.t. v.  The stripped content joins the degenerate multipliers: the
        primitive remainder is an associate of the true one only where the
        content does not vanish."""
        r, _, _ = prem(a, b, v)
        r = self._norm(self.prem_chain(r, chain))
        if r.is_zero() or r.degree_in(vi) == 0:
            return r, ()
        cont = content_in(r, self.order.names[vi])
        if cont.is_constant():
            return r, ()
        r = self._norm(divexact(r, cont))
        return r, (cont,)

    # -- regularity of q modulo sat(chain), with branching ---------------
    #
    # Returns ("zero", chain) / ("regular", chain) / ("spill", chain, extras)
    # branches whose quasi-components cover the input chain's.

    def _regularize(self, q, chain):
        self._tick()
        q_red = self.prem_chain(q, chain)
        if q_red.is_zero():
            return [("zero", chain)]
        q_red = self._norm(q_red)
        if q_red.is_constant():
            return [("regular", chain)]
        chain_mvars = {t.mvar_index() for t in chain}
        if not (q_red.variables() & chain_mvars):
            return [("regular", chain)]  # nonzero over the free variables only
        vi = q_red.mvar_index()
        t = self._chain_at(chain, vi)
        if t is None:
            return self._regularize_coeffs(q_red, vi, chain)
        lower = tuple(x for x in chain if x.mvar_index() < vi)
        upper = tuple(x for x in chain if x.mvar_index() > vi)
        v = self.order.names[vi]
        out = []
        for br in self._gcd_mod(t, q_red, vi, lower):
            kind = br[0]
            if kind == "coprime":
                out.append(("regular", self._mk_chain(br[1], (t,), upper)))
            elif kind == "gcd":
                _, ch, g, mults = br
                g = self._norm(g)
                dg = g.degree_in(vi)
                full = self._mk_chain(ch, (t,), upper)
                if dg == 0 or dg == t.degree_in(vi):
                    side = full
                else:
                    side = self._mk_chain(ch, (g,), upper)
                if self.prem_chain(q_red, side).is_zero():
                    out.append(("zero", side))
                else:
                    out.append(("spill", side, ()))
                if 1 <= dg < t.degree_in(vi):
                    _, _, qtil = prem(t, g, v)
                    qtil = self._norm(qtil)
                    if qtil.degree_in(vi) >= 1:
                        quot = self._mk_chain(ch, (qtil,), upper)
                        out.extend(self._regularize(q_red, quot))
                    glead = g.coeff_of_power(vi, dg)
                    for ell in _unique(mults + (glead,)):
                        if not ell.is_constant():
                            out.append(("spill", full, (ell,)))
                else:
                    for ell in _unique(mults):
                        if not ell.is_constant():
                            out.append(("spill", full, (ell,)))
            else:
                _, ch, extras = br
                out.append(("spill", self._mk_chain(ch, (t,), upper), extras))
        return out

    def _regularize_coeffs(self, q_red, vi, chain):
        coeffs = [c for c in q_red.coeffs_in(vi) if not c.is_zero()]
        coeffs.reverse()
        out = []
        work = [(chain, 0)]
        while work:
            ch, k = work.pop()
            if k == len(coeffs):
                out.append(("zero", ch))
                continue
            for br in self._regularize(coeffs[k], ch):
                if br[0] == "regular":
                    out.append(("regular", br[1]))
                elif br[0] == "zero":
                    work.append((br[1], k + 1))
                else:
                    out.append(br)
        return out

    def split_chain_rational(self, ch):
        """Split a chain at the first level whose polynomial is univariate
        with rational roots; V-union is exact, so callers may recurse."""
        for k, t in enumerate(ch):
            vi = t.mvar_index()
            if t.variables() != {vi} or t.degree_in(vi) <= 1:
                continue
            factors = self._rational_root_factors(t, vi)
            if factors and len(factors) > 1:
                return [ch[:k] + (piece,) + ch[k + 1 :] for piece in factors]
        return [ch]

    # -- squarefree normalization ----------------------------------------

    def squarefree(self, chain):
        """Split/replace chain polynomials until every der(t) is regular;
        quasi-component union is preserved."""
        result = []
        work = [(chain, 0)]
        while work:
            ch, k = work.pop()
            self._tick()
            if k >= len(ch):
                result.append(ch)
                continue
            t = ch[k]
            vi = t.mvar_index()
            v = self.order.names[vi]
            if t.degree_in(vi) == 1:
                work.append((ch, k + 1))
                continue
            dt = diff(t, v)
            lower = ch[:k]
            upper = ch[k + 1 :]
            for br in self._gcd_mod(t, dt, vi, lower):
                kind = br[0]
                if kind == "coprime":
                    work.append((self._mk_chain(br[1], (t,), upper), k + 1))
                elif kind == "gcd":
                    _, ch2, g, mults = br
                    g = self._norm(g)
                    if g.degree_in(vi) == 0:
                        work.append((self._mk_chain(ch2, (t,), upper), k + 1))
                        continue
                    _, _, qtil = prem(t, g, v)
                    qtil = self._norm(qtil)
                    if qtil.degree_in(vi) == 0:
                        # derivative degenerated: recompute this level honestly
                        for sub in self.run_tasks([((t,), self._mk_chain(ch2, upper))]):
                            work.append((sub, 0))
                    else:
                        work.append((self._mk_chain(ch2, (qtil,), upper), k))
                    glead = g.coeff_of_power(vi, g.degree_in(vi))
                    for ell in _unique(mults + (glead,)):
                        if not ell.is_constant():
                            for sub in self.run_tasks([((ell,), self._mk_chain(ch2, (t,), upper))]):
                                work.append((sub, 0))
                else:
                    _, ch2, extras = br
                    for sub in self.run_tasks([(extras, self._mk_chain(ch2, (t,), upper))]):
                        work.append((sub, 0))
        # the same chain can be reached along several branches
        uniq = {}
        for ch in result:
            uniq.setdefault(_chain_key(ch), ch)
        return list(uniq.values())


# ----------------------------------------------------------------------
# public operations


def _as_polys(T) -> tuple:
    if isinstance(T, RegularChain):
        return T.polys
    if isinstance(T, TriangularSet):
        return T.polys
    return tuple(T)


def sat_membership(p: Polynomial, T) -> bool:
    """p in sat(T), tested by iterated pseudo-division reaching exactly 0.
    T must be a regular chain."""
    polys = _as_polys(T)
    solver = _Solver(p.order, Budget())
    return solver.prem_chain(p, polys).is_zero()


def chain_dimension(T) -> int:
    polys = _as_polys(T)
    if isinstance(T, (RegularChain, TriangularSet)):
        order = T.order
    elif polys:
        order = polys[0].order
    else:
        raise ValueError("dimension of a bare empty chain needs an order")
    return order.arity - len(polys)


def is_regular(p: Polynomial, T, budget: Budget | None = None):
    """Regularity of p modulo sat(T): Regular, Zero, or ZeroDivisor carrying
    the splitting of T into chains where p is zero / regular."""
    polys = _as_polys(T)
    order = p.order
    solver = _Solver(order, budget or Budget())
    zero_chains = []
    regular_chains = []
    work = [(p, polys)]
    guard = 0
    while work:
        guard += 1
        if guard > 10_000:
            raise BudgetExceededError("regularity resolution did not settle")
        q, ch = work.pop()
        for br in solver._regularize(q, ch):
            if br[0] == "zero":
                zero_chains.append(br[1])
            elif br[0] == "regular":
                regular_chains.append(br[1])
            else:
                _, ch2, extras = br
                if extras:
                    for sub in solver.run_tasks([(extras, ch2)]):
                        work.append((q, sub))
                else:
                    work.append((q, ch2))
    if not zero_chains:
        return Regular()
    if not regular_chains:
        return Zero()
    to_rc = lambda chs: [RegularChain(TriangularSet(c, order), True) for c in chs]
    return ZeroDivisor(to_rc(zero_chains), to_rc(regular_chains))


def make_squarefree(T, budget: Budget | None = None):
    """Finitely many squarefree regular chains covering the same quasi-component."""
    polys = _as_polys(T)
    if isinstance(T, (RegularChain, TriangularSet)):
        order = T.order
    elif polys:
        order = polys[0].order
    else:
        raise ValueError("make_squarefree of a bare empty chain needs an order")
    solver = _Solver(order, budget or Budget())
    return [RegularChain(TriangularSet(c, order), True) for c in solver.squarefree(polys)]


def _normalize_chain(solver, chain):
    """Reduce each polynomial by the part of the chain below it when that
    shrinks the representation; keep degrees and initials intact."""
    out = []
    for t in chain:
        lower = tuple(out)
        vi = t.mvar_index()
        red = solver.prem_chain(t, lower)
        red = solver._norm(red)
        if (
            not red.is_zero()
            and red.mvar_index() == vi
            and red.degree_in(vi) == t.degree_in(vi)
            and len(red.terms) <= len(t.terms)
            and red.max_coeff_bits() <= max(t.max_coeff_bits(), 64)
        ):
            out.append(red)
        else:
            out.append(t)
    return tuple(out)


def triangularize(
    F: Iterable[Polynomial],
    order: VarOrder,
    budget: Budget | None = None,
    nonzero: Sequence[Polynomial] = (),
) -> Decomposition:
    """Triangular decomposition of V(F): regular chains T_i with
    V(F) = union of the quasi-components W(T_i).

    Polynomials in `nonzero` are constraints known to be nonzero in the
    caller's setting; branches where one of them vanishes identically are
    pruned (their quasi-components cannot contribute useful points).
    An empty decomposition means V(F) is empty over the algebraic closure.
    """
    budget = budget or Budget()
    eqs = []
    for f in F:
        if f.order != order:
            f = f.rename(order)
        if f.is_zero():
            continue  # V(0) is everything
        if f.is_constant():
            return Decomposition([], order)
        eqs.append(f.primitive())
    solver = _Solver(order, budget, nonzero)
    work = solver.run_tasks([(tuple(eqs), ())])
    final = []
    # soundness gate: every input must reduce to zero modulo every chain;
    # offenders get re-intersected until the decomposition verifies
    for _ in range(8):
        next_work = []
        for ch in work:
            for sq in solver.squarefree(ch):
                sq = _normalize_chain(solver, sq)
                pieces = solver.split_chain_rational(sq)
                if len(pieces) > 1:
                    next_work.extend(pieces)
                    continue
                bad = tuple(f for f in eqs if not solver.prem_chain(f, sq).is_zero())
                if bad:
                    next_work.extend(solver.run_tasks([(bad, sq)]))
                else:
                    final.append(sq)
        work = next_work
        if not work:
            break
    else:
        raise EngineError("soundness repair loop did not converge")
    uniq = {}
    for ch in final:
        uniq.setdefault(_chain_key(ch), ch)
    rcs = [RegularChain(TriangularSet(ch, order), True) for ch in uniq.values()]
    return Decomposition(rcs, order)


def chains_equivalent(A, B) -> bool:
    """Equality up to chain-equivalence: mutual sat-membership of all
    generators plus equal dimension."""
    pa, pb = _as_polys(A), _as_polys(B)
    if len(pa) != len(pb):
        return False
    return all(sat_membership(p, pb) for p in pa) and all(
        sat_membership(p, pa) for p in pb
    )


def decomposition_contains_chain(D: Decomposition, polys) -> bool:
    return any(chains_equivalent(c, polys) for c in D)


def verify_decomposition(F, D: Decomposition) -> bool:
    """Soundness check: every f in F lies in sat(T) for every chain T."""
    return all(sat_membership(f, c) for c in D for f in F)
