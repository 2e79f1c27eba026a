"""Stalk-level obstruction tests for hypersurface singularities.

Two computations drive this module.  The first is the quotient of the
truncated de Rham complex at the origin by the differential ideal
generated by the defining equations: its cohomology detects failure of
the Poincaré lemma on the singular germ.  The second is the divergence
equation ``f*g = sum_i d(f*h_i)/dx_i`` viewed as an exact linear system
on the Taylor coefficients of the unknowns ``h_i``: a rational
certificate of infeasibility refutes solvability of the untruncated
problem, because every row is a necessary condition on any formal
solution.  Truncation soundness is asymmetric by design — infeasible
verdicts are conclusive, feasible ones are limited to the window — and
every verdict says so.

The running example throughout is the quasi-homogeneous-looking but
obstinate curve x^q + y^p + y^{p-1} x.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from fractions import Fraction

from . import elim
from .algebra import (
    Derivation,
    GradedContext,
    GradedElement,
    Generator,
    enumerate_monomials,
)
from .errors import StructuralError
from .homology import CohomologyReport
from .poly import Poly

SOUNDNESS_NOTE = (
    "infeasible at a finite degree bound refutes the untruncated problem; "
    "feasible only certifies the window"
)


# ---------------------------------------------------------------------------
# the differential ideal K^* and the stalk quotient complex


def _form_context(variables) -> GradedContext:
    gens = [Generator(v, 0, 1, 0) for v in variables]
    gens += [Generator("d" + v, 1, 1, 1) for v in variables]
    return GradedContext(gens)


def _exterior(ctx: GradedContext, variables) -> Derivation:
    images = {
        v: GradedElement.generator(ctx, "d" + v) for v in variables
    }
    return Derivation(ctx, images)


@dataclass(frozen=True)
class KIdealComplex:
    """Spanning data for K^k = I*Omega^k + dI ^ Omega^{k-1} below W.

    ``form_bases[k]`` lists the monomial labels of the ambient k-forms,
    ``spans[k]`` the coordinates of the computed spanning set of K^k in
    that basis (one sparse column per spanning form).  By convention
    K^0 is the ideal itself.
    """

    variables: tuple
    gens: tuple
    weight: int
    form_bases: tuple  # per k: tuple of labels
    spans: tuple  # per k: dict {(row, col): Fraction}, plus column count
    span_cols: tuple

    def k_dimension(self, k: int) -> int:
        return elim.rank_sparse(
            self.spans[k], len(self.form_bases[k]), self.span_cols[k]
        )


def k_ideal_complex(gens, weight) -> KIdealComplex:
    """Spanning sets of the differential ideal of a finite ideal.

    The spanning forms are the weight-cut products of each generator
    with the ambient form basis, together with its exterior derivative
    wedged with the next basis down.
    """
    gens = tuple(gens)
    if not gens or any(not g for g in gens):
        raise StructuralError("ideal generators must be nonzero")
    variables = tuple(gens[0].context)
    for g in gens:
        if tuple(g.context) != variables:
            raise StructuralError("mixed variable contexts")
    ctx = _form_context(variables)
    d = _exterior(ctx, variables)
    n = len(variables)
    lifted = [GradedElement.from_poly(ctx, g) for g in gens]
    exteriors = [d(e) for e in lifted]

    bases = []
    indexes = []
    for k in range(n + 1):
        mons = enumerate_monomials(ctx, max_weight=weight, hodge=k)
        bases.append(tuple(ctx.monomial_str(m) for m in mons))
        indexes.append({m: i for i, m in enumerate(mons)})

    spans = []
    cols = []
    for k in range(n + 1):
        entries = {}
        col = 0
        for gen_elem, gen_ext in zip(lifted, exteriors):
            for m in indexes[k]:
                prod = (gen_elem * GradedElement.monomial(ctx, m)).weight_filter(
                    weight
                )
                col = _append_column(entries, prod, indexes[k], col)
            if k >= 1:
                for m in indexes[k - 1]:
                    prod = (
                        gen_ext * GradedElement.monomial(ctx, m)
                    ).weight_filter(weight)
                    col = _append_column(entries, prod, indexes[k], col)
        spans.append(entries)
        cols.append(col)
    return KIdealComplex(
        variables=variables,
        gens=gens,
        weight=weight,
        form_bases=tuple(bases),
        spans=tuple(spans),
        span_cols=tuple(cols),
    )


def _append_column(entries, elem, index, col):
    wrote = False
    for exps, coeff in elem.terms.items():
        entries[(index[exps], col)] = coeff
        wrote = True
    return col + 1 if wrote else col


def differential_ideal_check(kc: KIdealComplex) -> bool:
    """Does d map each computed K^k span into the K^{k+1} span?"""
    ctx = _form_context(kc.variables)
    d = _exterior(ctx, kc.variables)
    n = len(kc.variables)
    label_index = [
        {label: i for i, label in enumerate(kc.form_bases[k])}
        for k in range(n + 1)
    ]
    from .homology import _exps_from_label  # shared label parsing

    for k in range(n):
        base_rank = elim.rank_sparse(
            kc.spans[k + 1], len(kc.form_bases[k + 1]), kc.span_cols[k + 1]
        )
        aug = dict(kc.spans[k + 1])
        col = kc.span_cols[k + 1]
        by_col = {}
        for (r, c), v in kc.spans[k].items():
            by_col.setdefault(c, []).append((r, v))
        for c, entries in by_col.items():
            elem = GradedElement.zero(ctx)
            for r, v in entries:
                exps = _exps_from_label(ctx, kc.form_bases[k][r])
                elem = elem + GradedElement.monomial(ctx, exps, v)
            image = d(elem).weight_filter(kc.weight)
            for exps, coeff in image.terms.items():
                aug[(label_index[k + 1][ctx.monomial_str(exps)], col)] = coeff
            col += 1
        if (
            elim.rank_sparse(aug, len(kc.form_bases[k + 1]), col)
            != base_rank
        ):
            return False
    return True


def _stalk_dims(gens, weight):
    """{k: dim H^k} of the quotient complex Omega^*/K^* below weight."""
    kc = k_ideal_complex(gens, weight)
    variables = kc.variables
    ctx = _form_context(variables)
    d = _exterior(ctx, variables)
    n = len(variables)
    mons = []
    indexes = []
    for k in range(n + 1):
        ms = enumerate_monomials(ctx, max_weight=weight, hodge=k)
        mons.append(ms)
        indexes.append({m: i for i, m in enumerate(ms)})

    k_rank = [kc.k_dimension(k) for k in range(n + 1)]
    induced_rank = []
    for k in range(n):
        # rank of the induced differential on the quotient: adjoin the
        # images of the ambient basis to the K^{k+1} span and subtract
        aug = dict(kc.spans[k + 1])
        col = kc.span_cols[k + 1]
        for m in mons[k]:
            image = d(GradedElement.monomial(ctx, m)).weight_filter(weight)
            wrote = False
            for exps, coeff in image.terms.items():
                aug[(indexes[k + 1][exps], col)] = coeff
                wrote = True
            if wrote:
                col += 1
        total = elim.rank_sparse(aug, len(mons[k + 1]), col)
        induced_rank.append(total - k_rank[k + 1])
    dims = {}
    for k in range(n + 1):
        quotient_dim = len(mons[k]) - k_rank[k]
        r_out = induced_rank[k] if k < n else 0
        r_in = induced_rank[k - 1] if k >= 1 else 0
        dims[k] = quotient_dim - r_out - r_in
    return dims


def classical_stalk_cohomology(gens, weight) -> CohomologyReport:
    """Cohomology of the germ's de Rham quotient, with stability flags.

    Flags compare the dimensions at ``weight`` and ``weight + 1``.
    """
    here = _stalk_dims(gens, weight)
    above = _stalk_dims(gens, weight + 1)
    degrees = sorted(set(here) | set(above))
    return CohomologyReport(
        dims=tuple(sorted(here.items())),
        stable=tuple(
            (k, here.get(k, 0) == above.get(k, 0)) for k in degrees
        ),
    )


# ---------------------------------------------------------------------------
# the divergence system


def _unknown_letter(i: int) -> str:
    letters = string.ascii_uppercase
    return letters[i % 26] * (i // 26 + 1)


def _label(i: int, exps) -> str:
    return _unknown_letter(i) + "".join(str(e) for e in exps)


@dataclass(frozen=True)
class DivergenceSystem:
    """Exact linear system for f*g = sum_i d(f*h_i)/dx_i up to degree D.

    Unknowns are the Taylor coefficients of the h_i up to degree
    ``D - min_degree(f) + 1``; there is one row per monomial of degree
    at most D that occurs on either side.  Raw rows at bound D only
    involve unknowns within the bound, so the D-system is a subsystem
    of the (D+1)-system over a shared label set.

    Rows are reported after one cleanup: whenever a homogeneous row
    pins a single coefficient to zero, that coefficient is dropped from
    the other rows and the pinning row itself is kept.  Every reported
    row is therefore an exact consequence of the coefficient equations
    (a raw row plus rational multiples of pinning rows), so
    certificates stated against the reported rows refute the raw
    system too.
    """

    f: Poly
    g: Poly
    degree_bound: int
    unknown_labels: tuple  # (label, variable index, exponent tuple)
    row_monomials: tuple  # exponent tuples, sorted
    rows: tuple  # per row: tuple of (unknown index, Fraction)
    rhs: tuple  # per row: Fraction

    @property
    def unknown_count(self) -> int:
        return len(self.unknown_labels)

    def row_text(self, r: int) -> str:
        parts = []
        for j, c in self.rows[r]:
            label = self.unknown_labels[j][0]
            if c == 1:
                parts.append(f"+{label}")
            elif c == -1:
                parts.append(f"-{label}")
            else:
                parts.append(f"{'+' if c > 0 else ''}{c}*{label}")
        lhs = " ".join(parts).lstrip("+") or "0"
        return f"{lhs} = {self.rhs[r]}"


def divergence_system(f: Poly, g: Poly, degree_bound: int) -> DivergenceSystem:
    if not f:
        raise StructuralError("f must be nonzero")
    if f.min_degree() < 1:
        raise StructuralError(
            "f has a unit part; the divergence equation is trivially "
            "solvable and the test says nothing"
        )
    variables = tuple(f.context)
    n = len(variables)
    h_bound = degree_bound - f.min_degree() + 1
    unknowns = []
    for i in range(n):
        for exps in _monomials_upto(n, h_bound):
            unknowns.append((_label(i, exps), i, exps))
    columns = {}  # unknown index -> {monomial exps: coeff}
    for j, (_, i, exps) in enumerate(unknowns):
        basis = Poly(variables, {exps: Fraction(1)})
        term = (f * basis).partial(i)
        columns[j] = {
            m: c for m, c in term.terms.items() if sum(m) <= degree_bound
        }
    target = {
        m: c for m, c in (f * g).terms.items() if sum(m) <= degree_bound
    }
    row_keys = set(target)
    for col in columns.values():
        row_keys.update(col)
    ordered = sorted(row_keys, key=lambda m: (sum(m), m))
    raw = {}
    for m in ordered:
        row = {}
        for j in range(len(unknowns)):
            c = columns[j].get(m)
            if c:
                row[j] = c
        raw[m] = row

    # propagate zero-forced coefficients, batch per pass so the pinning
    # row is always one that was a singleton at the same stage
    forced = {}  # unknown index -> pinning monomial
    while True:
        fresh = []
        for m in ordered:
            if target.get(m):
                continue
            support = [j for j in raw[m] if j not in forced]
            if len(support) == 1 and support[0] not in dict(fresh):
                fresh.append((support[0], m))
        fresh = [(j, m) for j, m in fresh if j not in forced]
        if not fresh:
            break
        forced.update(fresh)
    pinning = {m: j for j, m in forced.items()}

    monomials = []
    rows = []
    rhs = []
    for m in ordered:
        entries = {j: c for j, c in raw[m].items() if j not in forced}
        if m in pinning:
            j = pinning[m]
            entries[j] = raw[m][j]
        value = target.get(m, Fraction(0))
        if not entries and not value:
            continue
        monomials.append(m)
        rows.append(tuple(sorted(entries.items())))
        rhs.append(value)
    return DivergenceSystem(
        f=f,
        g=g,
        degree_bound=degree_bound,
        unknown_labels=tuple(unknowns),
        row_monomials=tuple(monomials),
        rows=tuple(rows),
        rhs=tuple(rhs),
    )


def _monomials_upto(n, bound):
    """Exponent tuples of total degree <= bound, degree-then-lex order."""
    out = []

    def walk(prefix, left):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            walk(prefix + [e], left - e)

    walk([], max(bound, -1) if bound >= 0 else -1)
    if bound < 0:
        return []
    return sorted(out, key=lambda m: (sum(m), m))


@dataclass(frozen=True)
class FeasibilityVerdict:
    status: str  # "feasible" | "infeasible" | "resource-limit"
    witness: tuple = ()  # Poly per variable when feasible
    certificate: tuple = ()  # Fraction per row when infeasible
    unknowns: int = 0  # size of the coefficient system
    system: DivergenceSystem = None
    note: str = SOUNDNESS_NOTE

    def __bool__(self):
        return self.status == "feasible"


DEFAULT_UNKNOWN_CAP = 20_000


def _unknown_total(f: Poly, degree_bound: int) -> int:
    n = len(tuple(f.context))
    h_bound = degree_bound - f.min_degree() + 1
    if h_bound < 0:
        return 0
    return n * math.comb(h_bound + n, n)


def divergence_feasible(
    f: Poly, g: Poly = None, degree_bound: int = 8, unknown_cap: int = DEFAULT_UNKNOWN_CAP
) -> FeasibilityVerdict:
    """Decide the truncated divergence system, with checkable output.

    Feasible verdicts carry the h_i as polynomials and are re-verified
    by substitution before returning: the residual f*g - sum d(f*h_i)
    must have no terms of degree <= D.  Infeasible verdicts carry exact
    row multipliers lam with lam.A = 0 and lam.b = 1.  The unknown cap
    is assessed from the predicted system size, before anything is
    built.
    """
    if g is None:
        g = Poly.const(tuple(f.context), 1)
    predicted = _unknown_total(f, degree_bound)
    if predicted > unknown_cap:
        return FeasibilityVerdict(status="resource-limit", unknowns=predicted)
    system = divergence_system(f, g, degree_bound)
    dense = [
        [Fraction(0)] * system.unknown_count for _ in system.rows
    ]
    for r, row in enumerate(system.rows):
        for j, c in row:
            dense[r][j] = c
    tag, payload = elim.solve_rational(dense, list(system.rhs))
    if tag == "infeasible":
        return FeasibilityVerdict(
            status="infeasible",
            certificate=tuple(payload),
            unknowns=system.unknown_count,
            system=system,
        )
    variables = tuple(f.context)
    per_var = {}
    for value, (_, i, exps) in zip(payload, system.unknown_labels):
        if value:
            per_var.setdefault(i, {})[exps] = value
    witness = tuple(
        Poly(variables, per_var.get(i, {})) for i in range(len(variables))
    )
    residual = f * g
    for i, h in enumerate(witness):
        residual = residual - (f * h).partial(i)
    bad = [m for m in residual.terms if sum(m) <= degree_bound]
    if bad:
        raise StructuralError(
            f"witness verification failed at {bad[0]}"
        )  # pragma: no cover
    return FeasibilityVerdict(
        status="feasible",
        witness=witness,
        unknowns=system.unknown_count,
        system=system,
    )


def euler_witness(f: Poly, weights) -> tuple:
    """The weighted-Euler solution for a weighted-homogeneous f.

    With weights w and weighted degree d0, ``h_i = w_i x_i / (d0 + sum
    w)`` solves the divergence equation on the nose; the identity is
    verified exactly and failure (f not homogeneous for these weights)
    raises.
    """
    variables = tuple(f.context)
    if len(weights) != len(variables):
        raise StructuralError("one weight per variable")
    degrees = {
        sum(w * e for w, e in zip(weights, m)) for m in f.terms
    }
    if len(degrees) != 1:
        raise StructuralError(
            "f is not weighted-homogeneous for the given weights"
        )
    (d0,) = degrees
    denom = d0 + sum(weights)
    witness = tuple(
        Poly.var(variables, v) * Fraction(w, denom)
        for v, w in zip(variables, weights)
    )
    residual = f
    for i, h in enumerate(witness):
        residual = residual - (f * h).partial(i)
    if residual:
        raise StructuralError("Euler identity failed")  # pragma: no cover
    return witness


# ---------------------------------------------------------------------------
# the obstinate family


def family_member(q: int, p: int, variables=("x", "y")) -> Poly:
    x = Poly.var(variables, variables[0])
    y = Poly.var(variables, variables[1])
    return x ** q + y ** p + y ** (p - 1) * x


@dataclass(frozen=True)
class FamilyScan:
    degree_bound: int
    entries: tuple  # ((q, p), status string)

    def format(self) -> str:
        lines = []
        for (q, p), status in self.entries:
            lines.append(f"q={q} p={p} verdict={status}")
        return "\n".join(lines)


def family_scan(q_max: int, p_max: int, degree_bound: int) -> FamilyScan:
    """Verdicts for x^q + y^p + y^{p-1}x over 4 <= q, q+1 <= p."""
    if degree_bound < p_max + 3:
        raise StructuralError(
            "degree bound too small to see the family's obstruction rows"
        )
    entries = []
    for q in range(4, q_max + 1):
        for p in range(q + 1, p_max + 1):
            verdict = divergence_feasible(
                family_member(q, p), degree_bound=degree_bound
            )
            entries.append(((q, p), verdict.status))
    return FamilyScan(degree_bound=degree_bound, entries=tuple(entries))
