"""Images of constructible sets and real SAS zero sets under projection onto
a trailing parameter block.

Complex path: inequations are absorbed by auxiliary unknowns (1 - w*h),
the system is triangularized, and every chain contributes a block: its
parameter-level equations plus the nonvanishing of its border polynomial,
coefficient by coefficient over the remaining free unknowns.  Boundary
parameter points are recovered by recursing on the system augmented with the
border polynomial, so the block union is the exact image.

Real path: the parameter polynomials emitted by the complex pass (together
with resultant shadows of the inequality sides) cut the parameter space into
cells.  With one parameter the cells are certified sign-invariant intervals
and points, each decided at a rational sample; with more parameters the
region answers point queries by deciding the instantiated system directly,
and block samples are provenance only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .chains import EngineError, triangularize
from .config import Budget, BudgetExceededError
from .polyring import Polynomial, VarOrder, derivative, res_chain
from .realsolve import (
    SAS,
    RealVerdict,
    _UnivariateRoots,
    _dense,
    _usqfree,
    isolate_real_roots,
    rational_sequence,
    sas_has_real_solution,
)


# ----------------------------------------------------------------------
# constructible sets over the parameters


class ConstructibleSet:
    """Finite union of blocks (E, U): points with all of E zero and all of U
    nonzero.  Membership of a rational point is exact evaluation."""

    def __init__(self, order: VarOrder, param_names: Sequence[str], blocks):
        self.order = order
        self.param_names = list(param_names)
        self.blocks = blocks  # list of (equations, inequations)

    def is_empty(self):
        return not self.blocks

    def membership(self, point) -> bool:
        bind = self._bind(point)
        for eqs, ineqs in self.blocks:
            if all(e.evaluate(bind).constant_value() == 0 for e in eqs) and all(
                u.evaluate(bind).constant_value() != 0 for u in ineqs
            ):
                return True
        return False

    def _bind(self, point):
        if len(point) != len(self.param_names):
            raise ValueError(f"expected {len(self.param_names)} coordinates")
        return {n: Fraction(v) for n, v in zip(self.param_names, point)}

    def describe(self):
        out = []
        for eqs, ineqs in self.blocks:
            out.append(
                {
                    "equations": [e.to_str() for e in eqs],
                    "inequations": [u.to_str() for u in ineqs],
                }
            )
        return out

    def __repr__(self):
        return f"ConstructibleSet({self.describe()!r})"


# ----------------------------------------------------------------------
# the complex projection core


def _param_polys_of(p: Polynomial, nparams: int) -> bool:
    return all(i < nparams for i in p.variables())


def _coeffs_over_unknowns(p: Polynomial, nparams: int):
    """Coefficients of p viewed as a polynomial in its non-parameter
    variables, each a polynomial in the parameters alone."""
    buckets = {}
    for exps, c in p.terms.items():
        key = tuple(e if i >= nparams else 0 for i, e in enumerate(exps))
        low = tuple(e if i < nparams else 0 for i, e in enumerate(exps))
        buckets.setdefault(key, {})[low] = c
    return [Polynomial(p.order, terms, _checked=True) for terms in buckets.values()]


def _project_core(F, H, nparams, order, budget, extra_sign_polys=()):
    """Blocks of the complex image plus every parameter-level polynomial that
    matters for cell decompositions (border factors, equations, initials and
    resultant shadows of the sign polynomials)."""
    wnames = [f"_w{i}" for i in range(len(H))]
    ext = order.extend(wnames)
    base = [f.rename(ext) for f in F]
    rabin = []
    for w, h in zip(wnames, H):
        rabin.append(Polynomial.const(ext, 1) - Polynomial.variable(ext, w) * h.rename(ext))
    extra = [q.rename(ext) for q in extra_sign_polys]
    blocks = []
    cell_polys = []
    seen_systems = set()
    queue = [tuple(base) + tuple(rabin)]
    depth = 0
    while queue:
        depth += 1
        if depth > budget.max_projection_depth * 64:
            raise BudgetExceededError("projection recursion exceeded its budget")
        system = queue.pop()
        key = tuple(sorted(p.to_str() for p in system))
        if key in seen_systems:
            continue
        seen_systems.add(key)
        D = triangularize(list(system), ext, budget, nonzero=[h.rename(ext) for h in H])
        for chain in D:
            E = [t for t in chain.polys if _param_polys_of(t, nparams)]
            upper = [t for t in chain.polys if not _param_polys_of(t, nparams)]
            inits = []
            for e in E:
                init = e.ranked_view().init
                if not init.is_constant():
                    inits.append(init)
                cell_polys.append(e)
            cell_polys.extend(inits)
            for q in extra:
                r = res_chain(q, chain.polys)
                if not r.is_zero() and not r.is_constant():
                    for c in _coeffs_over_unknowns(r, nparams):
                        if not c.is_constant():
                            cell_polys.append(c)
            if not upper:
                blocks.append((E, inits))
                continue
            bp = Polynomial.const(ext, 1)
            degenerate = False
            for t in upper:
                r = res_chain(derivative(t), chain.polys)
                if r.is_zero():
                    degenerate = True
                    break
                bp = bp * r
            if degenerate:
                # fall back: treat the whole upper part as untrusted and
                # recurse on each initial instead
                for t in upper:
                    init = t.ranked_view().init
                    if not init.is_constant():
                        queue.append(tuple(system) + (init,))
                continue
            if bp.is_constant():
                blocks.append((E, inits))
                continue
            bp = bp.primitive()
            coeffs = [c for c in _coeffs_over_unknowns(bp, nparams)]
            nonconst = [c for c in coeffs if not c.is_constant()]
            if len(nonconst) < len(coeffs):
                # some coefficient is a nonzero constant: bp cannot vanish
                # identically on the fiber, every E-point qualifies
                blocks.append((E, inits))
            else:
                for c in nonconst:
                    blocks.append((E, inits + [c.primitive()]))
            cell_polys.extend(c.primitive() for c in nonconst)
            queue.append(tuple(system) + (bp,))
    return blocks, cell_polys, ext


def _prune_blocks(blocks, nparams, order, budget):
    """Drop blocks whose (E, U) conditions are unsatisfiable, and deduplicate."""
    param_order = VarOrder(tuple(order.names[:nparams]) + ("_u",))
    out = []
    seen = set()
    for eqs, ineqs in blocks:
        eqs2 = sorted({e.primitive() for e in eqs}, key=lambda p: p.sort_key())
        ineqs2 = sorted(
            {u.primitive() for u in ineqs if not u.is_constant()}, key=lambda p: p.sort_key()
        )
        key = (tuple(p.to_str() for p in eqs2), tuple(p.to_str() for p in ineqs2))
        if key in seen:
            continue
        seen.add(key)
        moved_eqs = [e.rename(param_order) for e in eqs2]
        sys = list(moved_eqs)
        if ineqs2:
            prod = Polynomial.const(param_order, 1)
            for u in ineqs2:
                prod = prod * u.rename(param_order)
            sys.append(Polynomial.const(param_order, 1) - Polynomial.variable(param_order, "_u") * prod)
        try:
            D = triangularize(sys, param_order, budget)
        except BudgetExceededError:
            D = None
        if D is None or not D.is_empty():
            out.append((eqs2, ineqs2))
    return out


def project_complex(
    F: Iterable[Polynomial],
    H: Iterable[Polynomial],
    nparams: int,
    order: VarOrder,
    budget: Budget | None = None,
) -> ConstructibleSet:
    """Exact image of V(F) minus V(prod H) under projection onto the lowest
    nparams variables of `order`."""
    budget = budget or Budget()
    F = list(F)
    H = [h for h in H if not h.is_constant()]
    blocks, _, _ = _project_core(F, H, nparams, order, budget)
    params = order.names[:nparams]
    param_only = VarOrder(params)
    cleaned = _prune_blocks(blocks, nparams, order, budget)
    final = [
        ([e.rename(param_only) for e in eqs], [u.rename(param_only) for u in ineqs])
        for eqs, ineqs in cleaned
    ]
    return ConstructibleSet(param_only, params, final)


# ----------------------------------------------------------------------
# real regions


class RealRegion:
    """Projection of a real SAS onto the parameters.

    With one parameter the region is a list of certified cells (points and
    open intervals of the line cut by the emitted parameter polynomials),
    each labelled in/out/unknown from a rational sample.  With several
    parameters the labelled blocks are provenance, and point queries are
    answered by deciding the instantiated system exactly.
    """

    def __init__(self, param_names, cells, system=None, nparams=0, budget=None, seed=0,
                 cellprod_coeffs=None):
        self.param_names = list(param_names)
        self.cells = cells  # list of dicts: kind/status/sample/descr
        self._system = system
        self._nparams = nparams
        self._budget = budget or Budget()
        self._seed = seed
        self._cellprod = cellprod_coeffs  # dense coeffs of the cell cut polynomial

    # -- point decisions -------------------------------------------------

    def decide_point(self, point):
        """Exact real decision of the underlying system at a parameter point."""
        if self._system is None:
            raise EngineError("region carries no backing system")
        bind = {n: Fraction(v) for n, v in zip(self.param_names, point)}
        inst = SAS(
            self._system.order,
            equations=[f.evaluate(bind) for f in self._system.equations],
            nonneg=[q.evaluate(bind) for q in self._system.nonneg],
            positive=[q.evaluate(bind) for q in self._system.positive],
            nonzero=[q.evaluate(bind) for q in self._system.nonzero],
        )
        return sas_has_real_solution(inst, self._budget, self._seed)

    def membership(self, point):
        """True / False / None (unknown) for a rational parameter point."""
        if len(point) != len(self.param_names):
            raise ValueError(f"expected {len(self.param_names)} coordinates")
        if len(self.param_names) == 1 and self._cellprod is not None:
            cell = self._locate_cell(Fraction(point[0]))
            if cell is not None:
                st = cell["status"]
                return True if st == "in" else False if st == "out" else None
        v = self.decide_point(point)
        if v.status == RealVerdict.NONEMPTY:
            return True
        if v.status == RealVerdict.EMPTY:
            return False
        return None

    def _locate_cell(self, x: Fraction):
        from .realsolve import _sturm_chain, _sign_variations, _ueval

        coeffs = self._cellprod
        if _ueval(coeffs, x) == 0:
            for cell in self.cells:
                if cell["kind"] == "point" and cell.get("root") == x:
                    return cell
            return None  # irrational-root cell cannot be hit by a rational x
        chain = _sturm_chain(coeffs)
        bound = max(abs(x), Fraction(1)) * 2 + self._root_bound()
        below = _sign_variations(chain, -bound) - _sign_variations(chain, x)
        for cell in self.cells:
            if cell["kind"] == "interval" and cell["index"] == below:
                return cell
        return None

    def _root_bound(self):
        c = self._cellprod
        lead = abs(c[-1])
        m = max((abs(v) for v in c[:-1]), default=Fraction(0))
        return m / lead + 1

    def describe(self):
        return [
            {
                "equations": cell.get("equations", []),
                "inequations": cell.get("inequations", []),
                "sign_conditions": cell.get("sign_conditions", []),
                "status": cell["status"],
                "sample": cell.get("sample_text"),
            }
            for cell in self.cells
        ]

    def __repr__(self):
        return f"RealRegion({self.describe()!r})"


def _status_of(verdict: RealVerdict):
    if verdict.status == RealVerdict.NONEMPTY:
        return "in"
    if verdict.status == RealVerdict.EMPTY:
        return "out"
    return "unknown"


def _first_rational_in(lo, hi, seed=0):
    for cand in rational_sequence(seed):
        if (lo is None or cand > lo) and (hi is None or cand < hi):
            return cand
    raise EngineError("no rational sample found in a nonempty interval")


def project_real(
    S: SAS,
    nparams: int,
    order: VarOrder,
    budget: Budget | None = None,
    seed: int = 0,
) -> RealRegion:
    """Sound projection of the real zero set of S onto the lowest nparams
    variables.  In cells are genuinely in the image (witnessed); out cells
    failed an exact emptiness proof at their sample; unknown is honest."""
    budget = budget or Budget()
    params = list(order.names[:nparams])
    blocks, cell_polys, _ = _project_core(
        S.equations, S.nonzero, nparams, order, budget,
        extra_sign_polys=list(S.nonneg) + list(S.positive),
    )
    region_system = S
    if nparams != 1:
        cells = []
        for eqs, ineqs in _prune_blocks(blocks, nparams, order, budget):
            cells.append(
                {
                    "kind": "block",
                    "status": "unknown",
                    "equations": [e.to_str() for e in eqs],
                    "inequations": [u.to_str() for u in ineqs],
                    "sign_conditions": [],
                    "sample_text": None,
                }
            )
        return RealRegion(params, cells, region_system, nparams, budget, seed)
    # one parameter: certified interval/point cells
    pname = params[0]
    param_only = VarOrder([pname])
    prod = Polynomial.const(param_only, 1)
    seen = set()
    for q in cell_polys:
        if q.is_constant():
            continue
        q1 = q.rename(param_only).primitive()
        if q1.to_str() in seen:
            continue
        seen.add(q1.to_str())
        prod = prod * q1
    region = RealRegion(params, [], region_system, nparams, budget, seed)
    if prod.is_constant():
        sample = _first_rational_in(None, None, seed)
        verdict = region.decide_point((sample,))
        region.cells = [
            {
                "kind": "interval",
                "index": 0,
                "status": _status_of(verdict),
                "sign_conditions": ["whole line"],
                "sample_text": str(sample),
            }
        ]
        region._cellprod = [Fraction(1)]
        return region
    coeffs = _usqfree(_dense(prod, 0))
    roots = _UnivariateRoots(coeffs)
    boxes = roots.isolate()
    region._cellprod = coeffs
    # identify rational roots exactly where possible
    from .realsolve import _ueval

    cells = []
    rational_roots = []
    for lo, hi in boxes:
        # small-denominator scan for an exact rational root in the box
        found = None
        mid = (lo + hi) / 2
        for den in range(1, 65):
            cand = Fraction(round(mid * den), den)
            if lo < cand < hi and _ueval(coeffs, cand) == 0:
                found = cand
                break
        rational_roots.append(found)
    for idx in range(len(boxes) + 1):
        lo = boxes[idx - 1][1] if idx > 0 else None
        hi = boxes[idx][0] if idx < len(boxes) else None
        sample = _first_rational_in(lo, hi, seed)
        verdict = region.decide_point((sample,))
        descr = []
        if lo is not None:
            descr.append(f"{pname} > root_{idx - 1}")
        if hi is not None:
            descr.append(f"{pname} < root_{idx}")
        cells.append(
            {
                "kind": "interval",
                "index": idx,
                "status": _status_of(verdict),
                "sign_conditions": descr or ["whole line"],
                "sample_text": str(sample),
            }
        )
        if idx < len(boxes):
            root = rational_roots[idx]
            if root is not None:
                verdict = region.decide_point((root,))
                cells.append(
                    {
                        "kind": "point",
                        "root": root,
                        "status": _status_of(verdict),
                        "equations": [f"{pname} - {root}" if root >= 0 else f"{pname} + {-root}"],
                        "sign_conditions": [],
                        "sample_text": str(root),
                    }
                )
            else:
                cells.append(
                    {
                        "kind": "point",
                        "root": None,
                        "status": "unknown",
                        "sign_conditions": [f"{pname} = root_{idx} (irrational)"],
                        "sample_text": None,
                    }
                )
    region.cells = cells
    return region


def membership(point, region_or_set):
    """Exact membership of a rational parameter point; True/False for
    constructible sets, True/False/None for real regions."""
    if isinstance(region_or_set, ConstructibleSet):
        return region_or_set.membership(point)
    return region_or_set.membership(point)
