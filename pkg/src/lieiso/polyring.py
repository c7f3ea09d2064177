"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from exponent vectors to nonzero rational coefficients,
tied to a fixed totally ordered list of variables (later position = greater
variable).  All arithmetic is exact; nothing here ever rounds.

On top of the ring operations the module carries the elimination toolkit the
higher layers are built on: pseudo-division, multivariate gcd via polynomial
remainder sequences, resultants and iterated resultants against a triangular
set, squarefree and primitive parts, exact evaluation and substitution, and a
text grammar with a bit-exact parse/print round trip.

Polynomials are immutable values; every operation returns a fresh object, so
instances can be shared freely without synchronization.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from typing import Iterable, Mapping, Sequence


class PolyError(Exception):
    pass


class OrderMismatchError(PolyError):
    pass


class ExactDivisionError(PolyError):
    pass


class ParseError(PolyError):
    def __init__(self, message, pos=None):
        super().__init__(message)
        self.pos = pos


def _norm_coeff(c):
    # ints stay ints; integral Fractions collapse to int (cheaper arithmetic)
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return c.numerator
        return c
    if isinstance(c, int):
        return c
    raise TypeError(f"coefficient must be int or Fraction, got {type(c)!r}")


class VarOrder:
    """Ordered variable list; position is the rank (later = greater)."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r} (order has {self.names})") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def extend(self, extra: Sequence[str]) -> "VarOrder":
        """New order with `extra` appended above every existing variable."""
        return VarOrder(self.names + tuple(extra))

    def __eq__(self, other):
        return isinstance(other, VarOrder) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VarOrder({'<'.join(self.names)})"


class RankedView:
    """A non-constant polynomial split as init * mvar^mdeg + tail."""

    __slots__ = ("mvar", "mdeg", "init", "tail")

    def __init__(self, mvar, mdeg, init, tail):
        self.mvar = mvar
        self.mdeg = mdeg
        self.init = init
        self.tail = tail

    def __repr__(self):
        return f"RankedView(mvar={self.mvar}, mdeg={self.mdeg}, init={self.init}, tail={self.tail})"


class Polynomial:
    __slots__ = ("order", "terms", "_hash", "_mvar")

    def __init__(self, order: VarOrder, terms: Mapping[tuple, object], _checked=False):
        self.order = order
        if _checked:
            self.terms = dict(terms)
        else:
            arity = order.arity
            clean = {}
            for exps, c in terms.items():
                c = _norm_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
                if c == 0:
                    continue
                exps = tuple(exps)
                if len(exps) != arity or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for arity {arity}")
                clean[exps] = c
            self.terms = clean
        self._hash = None
        self._mvar = -2  # unset marker (-1 means constant)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, order: VarOrder) -> "Polynomial":
        return cls(order, {}, _checked=True)

    @classmethod
    def const(cls, order: VarOrder, c) -> "Polynomial":
        c = _norm_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        if c == 0:
            return cls.zero(order)
        return cls(order, {(0,) * order.arity: c}, _checked=True)

    @classmethod
    def variable(cls, order: VarOrder, name: str) -> "Polynomial":
        i = order.index(name)
        exps = tuple(1 if j == i else 0 for j in range(order.arity))
        return cls(order, {exps: 1}, _checked=True)

    @classmethod
    def from_coeffs(cls, order: VarOrder, vi: int, coeffs: Sequence["Polynomial"]) -> "Polynomial":
        """Rebuild sum(coeffs[d] * v^d) from v-free coefficient polynomials."""
        terms = {}
        for d, cp in enumerate(coeffs):
            if cp is None or cp.is_zero():
                continue
            for exps, c in cp.terms.items():
                e2 = list(exps)
                e2[vi] += d
                e2 = tuple(e2)
                nc = terms.get(e2, 0) + c
                if nc == 0:
                    terms.pop(e2, None)
                else:
                    terms[e2] = _norm_coeff(nc)
        return cls(order, terms, _checked=True)

    # ------------------------------------------------------------------
    # predicates and views

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.mvar_index() < 0

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise PolyError(f"{self} is not constant")
        return Fraction(next(iter(self.terms.values())))

    def mvar_index(self) -> int:
        """Index of the greatest variable occurring, -1 for constants."""
        if self._mvar != -2:
            return self._mvar
        best = -1
        for exps in self.terms:
            for i in range(len(exps) - 1, best, -1):
                if exps[i]:
                    if i > best:
                        best = i
                    break
        self._mvar = best
        return best

    def mvar(self) -> str:
        i = self.mvar_index()
        if i < 0:
            raise PolyError("constant polynomial has no main variable")
        return self.order.names[i]

    def degree_in(self, v) -> int:
        vi = v if isinstance(v, int) else self.order.index(v)
        d = 0
        for exps in self.terms:
            if exps[vi] > d:
                d = exps[vi]
        return d

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def variables(self) -> set:
        seen = set()
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    seen.add(i)
        return seen

    def variable_names(self) -> set:
        return {self.order.names[i] for i in self.variables()}

    def coeff_of_power(self, vi: int, d: int) -> "Polynomial":
        """Coefficient of v^d, as a polynomial with the v-exponent zeroed."""
        terms = {}
        for exps, c in self.terms.items():
            if exps[vi] == d:
                e2 = list(exps)
                e2[vi] = 0
                terms[tuple(e2)] = c
        return Polynomial(self.order, terms, _checked=True)

    def coeffs_in(self, vi: int) -> list:
        """Dense coefficient list [c_0, ..., c_d] w.r.t. variable index vi."""
        d = self.degree_in(vi)
        buckets = [dict() for _ in range(d + 1)]
        for exps, c in self.terms.items():
            e2 = list(exps)
            k = e2[vi]
            e2[vi] = 0
            buckets[k][tuple(e2)] = c
        return [Polynomial(self.order, b, _checked=True) for b in buckets]

    def ranked_view(self) -> RankedView:
        vi = self.mvar_index()
        if vi < 0:
            raise PolyError("ranked_view undefined for constant polynomials")
        d = self.degree_in(vi)
        init = self.coeff_of_power(vi, d)
        tail_terms = {e: c for e, c in self.terms.items() if e[vi] != d}
        tail = Polynomial(self.order, tail_terms, _checked=True)
        return RankedView(self.order.names[vi], d, init, tail)

    # ------------------------------------------------------------------
    # ring arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.order != self.order:
                raise OrderMismatchError(f"{self.order} vs {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        terms = dict(self.terms)
        for e, c in other.terms.items():
            nc = terms.get(e, 0) + c
            if nc == 0:
                terms.pop(e, None)
            else:
                terms[e] = _norm_coeff(nc)
        return Polynomial(self.order, terms, _checked=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            nc = terms.get(e, 0) - c
            if nc == 0:
                terms.pop(e, None)
            else:
                terms[e] = _norm_coeff(nc)
        return Polynomial(self.order, terms, _checked=True)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Polynomial(self.order, {e: -c for e, c in self.terms.items()}, _checked=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial.zero(self.order)
            other = _norm_coeff(other)
            return Polynomial(
                self.order,
                {e: _norm_coeff(c * other) for e, c in self.terms.items()},
                _checked=True,
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return Polynomial.zero(self.order)
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                nc = out.get(e, 0) + ca * cb
                if nc == 0:
                    out.pop(e, None)
                else:
                    out[e] = nc
        return Polynomial(self.order, {e: _norm_coeff(c) for e, c in out.items()}, _checked=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.const(self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, (int, Fraction)):
                return self.terms == Polynomial.const(self.order, other).terms
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.order.names, frozenset(self.terms.items())))
        return self._hash

    # ------------------------------------------------------------------
    # evaluation and substitution

    def evaluate(self, bindings: Mapping[str, object]) -> "Polynomial":
        """Exact substitution of rationals; unbound variables stay symbolic."""
        if not bindings:
            return self
        idx = {self.order.index(n): Fraction(v) for n, v in bindings.items()}
        terms = {}
        for exps, c in self.terms.items():
            val = Fraction(c)
            e2 = list(exps)
            for i, b in idx.items():
                k = e2[i]
                if k:
                    val *= b ** k
                    e2[i] = 0
            if val == 0:
                continue
            e2 = tuple(e2)
            nc = terms.get(e2, 0) + val
            if nc == 0:
                terms.pop(e2, None)
            else:
                terms[e2] = _norm_coeff(nc)
        return Polynomial(self.order, terms, _checked=True)

    def substitute(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace variables by polynomials (exact composition)."""
        if not mapping:
            return self
        idx = {self.order.index(n): p for n, p in mapping.items()}
        one = Polynomial.const(self.order, 1)
        powers = {i: [one] for i in idx}
        out = Polynomial.zero(self.order)
        for exps, c in self.terms.items():
            factor = None
            e2 = list(exps)
            for i, rep in idx.items():
                k = e2[i]
                if not k:
                    continue
                e2[i] = 0
                cache = powers[i]
                while len(cache) <= k:
                    cache.append(cache[-1] * rep)
                factor = cache[k] if factor is None else factor * cache[k]
            mono = Polynomial(self.order, {tuple(e2): c}, _checked=True)
            out = out + (mono if factor is None else mono * factor)
        return out

    def rename(self, order: VarOrder, name_map: Mapping[str, str] | None = None) -> "Polynomial":
        """Transport onto another order (names mapped via name_map, default identity)."""
        name_map = name_map or {}
        src = self.order.names
        pos = {}
        terms = {}
        for exps, c in self.terms.items():
            e2 = [0] * order.arity
            for i, e in enumerate(exps):
                if e:
                    if i not in pos:
                        pos[i] = order.index(name_map.get(src[i], src[i]))
                    e2[pos[i]] = e
            terms[tuple(e2)] = c
        return Polynomial(order, terms, _checked=True)

    # ------------------------------------------------------------------
    # normal forms

    def int_content_split(self):
        """(content, primitive): content*primitive == self, primitive has
        coprime integer coefficients and positive leading (lex) coefficient."""
        if not self.terms:
            return Fraction(0), self
        num_g = 0
        den_l = 1
        for c in self.terms.values():
            f = Fraction(c) if not isinstance(c, Fraction) else c
            num_g = _igcd(num_g, abs(f.numerator))
            den_l = den_l * f.denominator // _igcd(den_l, f.denominator)
        content = Fraction(num_g, den_l)
        lead = self.terms[max(self.terms)]
        if (lead < 0) != (content < 0):
            content = -content
        inv = 1 / content
        prim = Polynomial(
            self.order,
            {e: _norm_coeff(c * inv) for e, c in self.terms.items()},
            _checked=True,
        )
        return content, prim

    def primitive(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.int_content_split()[1]

    def max_coeff_bits(self) -> int:
        best = 0
        for c in self.terms.values():
            if isinstance(c, Fraction):
                b = max(c.numerator.bit_length(), c.denominator.bit_length())
            else:
                b = c.bit_length()
            if b > best:
                best = b
        return best

    def sort_key(self):
        """Deterministic ordering key: by rank, then degree, then term data."""
        return (
            self.mvar_index(),
            self.degree_in(self.mvar_index()) if self.mvar_index() >= 0 else 0,
            len(self.terms),
            sorted(self.terms.items()),
        )

    # ------------------------------------------------------------------
    # printing

    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        names = self.order.names
        for exps, c in self._sorted_terms():
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(exps)
                if e
            )
            ac = abs(Fraction(c)) if isinstance(c, Fraction) else abs(c)
            if mono:
                body = mono if ac == 1 else f"{ac}*{mono}"
            else:
                body = str(ac)
            neg = (Fraction(c) < 0) if isinstance(c, Fraction) else (c < 0)
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"<poly {self.to_str()}>"


# ----------------------------------------------------------------------
# pseudo-division


def prem(p: Polynomial, t: Polynomial, v: str):
    """Pseudo-remainder of p by t w.r.t. v.

    Returns (r, e, q) with init_v(t)^e * p == q*t + r and deg_v(r) < deg_v(t).
    The exponent e is the number of reduction steps actually taken, which is
    minimal for this division scheme (never the worst-case bound).
    """
    if p.order != t.order:
        raise OrderMismatchError("pseudo-division across different orders")
    order = p.order
    vi = order.index(v)
    dt = t.degree_in(vi)
    if dt == 0:
        raise PolyError(f"divisor is constant in {v}")
    tc = t.coeffs_in(vi)
    init_t = tc[dt]
    init_is_one = init_t.is_constant() and init_t.constant_value() == 1
    rc = p.coeffs_in(vi)
    zero = Polynomial.zero(order)
    qc = {}
    e = 0
    while len(rc) - 1 >= dt:
        lc_r = rc[-1]
        if lc_r.is_zero():
            rc.pop()
            continue
        dr = len(rc) - 1
        shift = dr - dt
        if not init_is_one:
            rc = [init_t * rcoef for rcoef in rc]
            qc = {d: init_t * cp for d, cp in qc.items()}
            e += 1
        for j in range(dt + 1):
            rc[j + shift] = rc[j + shift] - lc_r * tc[j]
        qc[shift] = qc.get(shift, zero) + lc_r
        rc.pop()  # leading entry cancels exactly
        while rc and rc[-1].is_zero():
            rc.pop()
    r = Polynomial.from_coeffs(order, vi, rc)
    qlist = [zero] * (max(qc) + 1 if qc else 0)
    for d, cp in qc.items():
        qlist[d] = cp
    q = Polynomial.from_coeffs(order, vi, qlist)
    return r, e, q


def prem_full(p: Polynomial, t: Polynomial, v: str):
    """Pseudo-remainder with the classical exponent delta+1 exactly:
    init^(delta+1) * p == q*t + r, delta = deg_v(p) - deg_v(t)."""
    vi = p.order.index(v)
    delta = p.degree_in(vi) - t.degree_in(vi)
    r, e, q = prem(p, t, v)
    want = delta + 1
    if e < want:
        init_t = t.coeff_of_power(vi, t.degree_in(vi))
        scale = init_t ** (want - e)
        r = r * scale
        q = q * scale
    return r, q


def pquo(p: Polynomial, t: Polynomial, v: str):
    """Pseudo-quotient companion of prem: returns (q, e, r)."""
    r, e, q = prem(p, t, v)
    return q, e, r


# ----------------------------------------------------------------------
# exact division and gcd


def divexact(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact multivariate division; raises ExactDivisionError if q does not divide p."""
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero():
        return p
    if q.is_constant():
        inv = 1 / q.constant_value()
        return p * inv
    order = p.order
    qe = max(q.terms)
    qc = q.terms[qe]
    rem = dict(p.terms)
    out = {}
    while rem:
        e = max(rem)
        c = rem[e]
        diff = tuple(a - b for a, b in zip(e, qe))
        if any(d < 0 for d in diff):
            raise ExactDivisionError(f"{q} does not divide {p}")
        k = Fraction(c, 1) / qc if not isinstance(c, Fraction) or not isinstance(qc, Fraction) else c / qc
        k = _norm_coeff(Fraction(c) / Fraction(qc))
        out[diff] = k
        for e2, c2 in q.terms.items():
            tgt = tuple(a + b for a, b in zip(diff, e2))
            nc = rem.get(tgt, 0) - k * c2
            if nc == 0:
                rem.pop(tgt, None)
            else:
                rem[tgt] = _norm_coeff(nc)
    return Polynomial(order, out, _checked=True)


def content_in(p: Polynomial, v: str) -> Polynomial:
    """Polynomial content of p w.r.t. v: gcd of the v-coefficients."""
    vi = p.order.index(v)
    coeffs = [c for c in p.coeffs_in(vi) if not c.is_zero()]
    if not coeffs:
        return Polynomial.zero(p.order)
    coeffs.sort(key=lambda c: (len(c.terms), c.total_degree()))
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = gcd(g, c)
    if g.is_constant():
        return Polynomial.const(p.order, 1)
    return g.primitive()


def primitive_part_in(p: Polynomial, v: str) -> Polynomial:
    c = content_in(p, v)
    if c.is_constant():
        return p.primitive()
    return divexact(p, c).primitive()


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Multivariate gcd over Q, normalized to an integer-primitive polynomial
    with positive leading coefficient (constants collapse to 1)."""
    if p.order != q.order:
        raise OrderMismatchError("gcd across different orders")
    if p.is_zero():
        return q.primitive() if not q.is_zero() else q
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return Polynomial.const(p.order, 1)
    vi = max(p.mvar_index(), q.mvar_index())
    v = p.order.names[vi]
    dp, dq = p.degree_in(vi), q.degree_in(vi)
    if dp == 0:
        return gcd(p, content_in(q, v))
    if dq == 0:
        return gcd(content_in(p, v), q)
    cp = content_in(p, v)
    cq = content_in(q, v)
    a = divexact(p, cp) if not cp.is_constant() else p.primitive()
    b = divexact(q, cq) if not cq.is_constant() else q.primitive()
    c = gcd(cp, cq)
    if a.degree_in(vi) < b.degree_in(vi):
        a, b = b, a
    one = Polynomial.const(p.order, 1)
    g = one
    h = one
    while True:
        da, db = a.degree_in(vi), b.degree_in(vi)
        delta = da - db
        r, _ = prem_full(a, b, v)
        if r.is_zero():
            gpart = primitive_part_in(b, v)
            break
        if r.degree_in(vi) == 0:
            gpart = one
            break
        a, b = b, divexact(r, g * h ** delta)
        g = a.coeff_of_power(vi, a.degree_in(vi))
        if delta == 1:
            h = g
        elif delta > 1:
            h = divexact(g ** delta, h ** (delta - 1))
    if c.is_constant():
        return gpart.primitive()
    return (c * gpart).primitive()


# ----------------------------------------------------------------------
# resultants


def resultant(p: Polynomial, q: Polynomial, v: str) -> Polynomial:
    """Resultant of p and q w.r.t. v, with the Sylvester sign convention
    (rows of p's coefficients first)."""
    if p.order != q.order:
        raise OrderMismatchError("resultant across different orders")
    order = p.order
    vi = order.index(v)
    m, n = p.degree_in(vi), q.degree_in(vi)
    if m == 0 and n == 0:
        raise PolyError(f"both arguments constant in {v}")
    if n == 0:
        return q ** m
    if m == 0:
        return p ** n
    if m < n:
        sign = -1 if (m * n) % 2 else 1
        return resultant(q, p, v) * sign
    r, e, _ = prem(p, q, v)
    if r.is_zero():
        return Polynomial.zero(order)
    d = r.degree_in(vi)
    lc = q.coeff_of_power(vi, n)
    sign = -1 if (m * n) % 2 else 1
    sub = resultant(q, r, v)
    num = sub * lc ** (m - d) * sign
    den_pow = e * n
    if den_pow == 0:
        return num
    return divexact(num, lc ** den_pow)


def res_chain(p: Polynomial, chain_polys: Iterable[Polynomial]) -> Polynomial:
    """Iterated resultant of p against a triangular set, eliminating from the
    greatest main variable down.  Levels whose main variable is absent from
    the running value are skipped, so constants pass through unchanged."""
    polys = sorted(chain_polys, key=lambda t: t.mvar_index(), reverse=True)
    r = p
    for t in polys:
        if r.is_zero():
            return r
        vi = t.mvar_index()
        if r.degree_in(vi) == 0:
            continue
        r = resultant(r, t, t.order.names[vi])
    return r


# ----------------------------------------------------------------------
# derivatives and squarefree parts


def diff(p: Polynomial, v: str) -> Polynomial:
    vi = p.order.index(v)
    terms = {}
    for exps, c in p.terms.items():
        k = exps[vi]
        if not k:
            continue
        e2 = list(exps)
        e2[vi] = k - 1
        e2 = tuple(e2)
        nc = terms.get(e2, 0) + c * k
        if nc == 0:
            terms.pop(e2, None)
        else:
            terms[e2] = _norm_coeff(nc)
    return Polynomial(p.order, terms, _checked=True)


def derivative(p: Polynomial) -> Polynomial:
    """Partial derivative w.r.t. the main variable."""
    return diff(p, p.mvar())


def squarefree_primitive_part(p: Polynomial, v: str) -> Polynomial:
    """Primitive part w.r.t. v divided by gcd with its own v-derivative."""
    vi = p.order.index(v)
    if p.degree_in(vi) == 0:
        raise PolyError(f"{p} has degree 0 in {v}")
    pp = primitive_part_in(p, v)
    g = gcd(pp, diff(pp, v))
    if g.is_constant():
        return pp
    return divexact(pp, g).primitive()


# ----------------------------------------------------------------------
# text grammar:  integers, rationals a/b, variables, + - * ^, parentheses


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            # rational literal a/b (two integer literals around a slash)
            if j < n and text[j] == "/":
                k = j + 1
                while k < n and text[k].isspace():
                    k += 1
                if k < n and text[k].isdigit():
                    m = k
                    while m < n and text[m].isdigit():
                        m += 1
                    tokens.append(("num", Fraction(int(text[i:j]), int(text[k:m])), i))
                    i = m
                    continue
            tokens.append(("num", Fraction(int(text[i:j])), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos=i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens, order: VarOrder):
        self.tokens = tokens
        self.pos = 0
        self.order = order

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", pos=tok[2])
        self.pos += 1
        return tok

    def parse_expr(self) -> Polynomial:
        kind = self.peek()[0]
        negate = False
        if kind in "+-":
            negate = self.take()[0] == "-"
        p = self.parse_term()
        if negate:
            p = -p
        while self.peek()[0] in "+-":
            op = self.take()[0]
            t = self.parse_term()
            p = p - t if op == "-" else p + t
        return p

    def parse_term(self) -> Polynomial:
        p = self.parse_factor()
        while self.peek()[0] == "*":
            self.take()
            p = p * self.parse_factor()
        return p

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("num")
            exp = tok[1]
            if exp.denominator != 1 or exp < 0:
                raise ParseError("exponent must be a non-negative integer", pos=tok[2])
            return base ** int(exp)
        return base

    def parse_base(self) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return Polynomial.const(self.order, val)
        if kind == "name":
            self.take()
            if val not in self.order:
                raise ParseError(f"unknown variable {val!r}", pos=pos)
            return Polynomial.variable(self.order, val)
        if kind == "(":
            self.take()
            p = self.parse_expr()
            self.take(")")
            return p
        if kind == "-":
            self.take()
            return -self.parse_factor()
        raise ParseError(f"unexpected token {val!r}", pos=pos)


def parse_polynomial(text: str, order: VarOrder) -> Polynomial:
    parser = _Parser(_tokenize(text), order)
    p = parser.parse_expr()
    parser.take("end")
    return p


def collect_variable_names(text: str) -> list:
    """Variable names appearing in a polynomial expression, in first-seen order."""
    seen = []
    for kind, val, _ in _tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen
