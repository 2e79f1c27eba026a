"""Hodge-truncated derived de Rham complexes and their comparisons.

Starting from a Koszul-style presentation, the stage construction
adjoins one de Rham generator per variable and per odd generator:
``dx`` is odd (form degree 1, internal degree 0) and ``dxi`` is even
(form degree 1, internal degree -1), so powers of ``dxi`` are symmetric
— the characteristic-zero reason no divided powers appear.  The total
differential is the sum of the internal boundary, extended by
``del(dxi) = -d(f)``, and the de Rham differential ``x -> dx``,
``xi -> dxi``; the two anticommute, so the sum squares to zero.

The Hodge level ``K`` keeps form degrees up to and including ``K``
(columns 0..K); the weight bound ``W`` cuts the coefficient direction.
Heavy monomials and high forms span subcomplexes, so both cuts are
quotients and the result is a finite bicomplex.

Also here: the two-term cotangent complex and its wedge powers, the
column-versus-wedge comparison, polynomial homotopy invariance, the
fibre-sequence bookkeeping for a hypersurface, and the finite
totalization of the tensor-power conerve with its comparison against
the de Rham stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Derivation,
    GradedContext,
    GradedElement,
    Generator,
    enumerate_monomials,
)
from .dg import (
    DGMorphism,
    DGPresentation,
    OddGenerator,
    koszul_presentation,
    presentation_check,
)
from .errors import StructuralError
from .homology import (
    CohomologyReport,
    MatrixComplex,
    morphism_matrices,
    stability_report,
    weight_truncate,
)
from .poly import Poly


# ---------------------------------------------------------------------------
# stage construction


def _stage_context(pres: DGPresentation) -> GradedContext:
    gens = list(pres.context.gens)
    for name in pres.even:
        gens.append(Generator("d" + name, 1, 1, 1))
    for g in pres.odd:
        gens.append(Generator("d" + g.name, g.degree + 1, g.weight, 1))
    return GradedContext(gens)


def _stage_derivations(pres: DGPresentation, ctx: GradedContext):
    """(internal boundary, de Rham differential) on the stage context."""
    d_images = {}
    for name in pres.even:
        d_images[name] = GradedElement.generator(ctx, "d" + name)
    for g in pres.odd:
        d_images[g.name] = GradedElement.generator(ctx, "d" + g.name)
    d_dr = Derivation(ctx, d_images)
    del_images = {}
    for g in pres.odd:
        image = pres.images.get(g.name)
        if image is None or not image:
            continue
        lifted = image.cast_to(ctx)
        del_images[g.name] = lifted
        del_images["d" + g.name] = -d_dr(lifted)
    boundary = Derivation(ctx, del_images)
    return boundary, d_dr


@dataclass(frozen=True)
class DeRhamStage:
    """Truncated total complex of a presentation's de Rham theory."""

    presentation: DGPresentation
    hodge_level: int
    weight: int

    @property
    def context(self):
        return _stage_context(self.presentation)

    def truncation_data(self):
        ctx = _stage_context(self.presentation)
        boundary, d_dr = _stage_derivations(self.presentation, ctx)
        return ctx, boundary + d_dr, self.hodge_level, None

    def complex(self, weight=None) -> MatrixComplex:
        return weight_truncate(self, weight or self.weight)

    def report(self) -> CohomologyReport:
        return stability_report(self, self.weight)


def derham_stage(pres: DGPresentation, hodge_level: int, weight: int) -> DeRhamStage:
    if hodge_level < 1:
        raise StructuralError("Hodge level must be positive")
    if pres.relations:
        raise StructuralError(
            "de Rham stages need a free ambient; quotient relations would "
            "also impose relations among the one-forms, which this model "
            "does not represent"
        )
    check = presentation_check(pres)
    if not check:
        raise StructuralError(f"presentation rejected: {check.failures[0]}")
    return DeRhamStage(pres, hodge_level, weight)


def free_presentation(variables) -> DGPresentation:
    """The smooth case: even variables only, zero differential."""
    return DGPresentation(tuple(variables), (), {})


# ---------------------------------------------------------------------------
# cotangent complex and wedge powers


@dataclass(frozen=True)
class CotangentPresentation:
    """Two-term free-module complex ``B dxi -> B dx`` over the base.

    Internal degrees: the ``dx`` span sits in degree 0, each ``dxi``
    generator one step below; the differential sends ``dxi`` to the
    exterior derivative of the equation it bounds.
    """

    base: DGPresentation

    def module_generators(self):
        names = ["d" + n for n in self.base.even]
        names += ["d" + g.name for g in self.base.odd]
        return tuple(names)

    def truncation_data(self):
        ctx = _stage_context(self.base)
        boundary, _ = _stage_derivations(self.base, ctx)
        return ctx, boundary, None, None

    def complex(self, weight) -> MatrixComplex:
        """The one-form slice, graded by internal degree."""
        sliced = _hodge_slice(self, 1, weight)
        return _shift_degrees(sliced, -1)

    def report(self, weight) -> CohomologyReport:
        here = self.complex(weight).cohomology()
        above = self.complex(weight + 1).cohomology()
        degrees = sorted(set(here) | set(above))
        return CohomologyReport(
            dims=tuple(sorted(here.items())),
            stable=tuple((n, here.get(n, 0) == above.get(n, 0)) for n in degrees),
        )


def cotangent_complex(pres: DGPresentation) -> CotangentPresentation:
    check = presentation_check(pres)
    if not check:
        raise StructuralError(f"presentation rejected: {check.failures[0]}")
    if pres.relations:
        raise StructuralError("cotangent presentation needs a free ambient")
    return CotangentPresentation(pres)


def _hodge_slice(source, column, weight) -> MatrixComplex:
    """Assemble a single Hodge column with its internal differential."""
    ctx, boundary, _, _ = source.truncation_data()
    mons = enumerate_monomials(ctx, max_weight=weight, hodge=column)
    buckets = {}
    for m in mons:
        buckets.setdefault(ctx.degree_of(m), []).append(m)
    index = {n: {m: i for i, m in enumerate(ms)} for n, ms in buckets.items()}
    dims = {n: len(ms) for n, ms in buckets.items()}
    labels = {
        n: [ctx.monomial_str(m) for m in ms] for n, ms in buckets.items()
    }
    diffs = {}
    for n, ms in buckets.items():
        entries = {}
        target = index.get(n + 1, {})
        for col, m in enumerate(ms):
            image = boundary(GradedElement.monomial(ctx, m)).weight_filter(weight)
            for exps, coeff in image.terms.items():
                row = target.get(exps)
                if row is None:
                    raise StructuralError(
                        f"column differential left the column at degree {n}"
                    )
                entries[(row, col)] = coeff
        diffs[n] = entries
    return MatrixComplex(dims, labels, diffs)


def _shift_degrees(cx: MatrixComplex, shift: int) -> MatrixComplex:
    dims = {n + shift: d for n, d in cx.dims.items()}
    labels = {n + shift: ls for n, ls in cx.labels.items()}
    diffs = {n + shift: m for n, m in cx.diffs.items()}
    return MatrixComplex(dims, labels, diffs)


class _WedgeSource:
    """Reordered realization of a wedge power, for independent assembly.

    The context puts the module generators first and the base algebra
    after them, so monomial order, signs, and matrix layout all differ
    from the stage realization; agreement of cohomology tables is then
    an actual check rather than a tautology.
    """

    def __init__(self, base: DGPresentation):
        self.base = base
        gens = []
        for name in base.even:
            gens.append(Generator("d" + name, 1, 1, 1))
        for g in base.odd:
            gens.append(Generator("d" + g.name, g.degree + 1, g.weight, 1))
        gens += list(base.context.gens)
        self.context = GradedContext(gens)

    def truncation_data(self):
        ctx = self.context
        del_images = {}
        for g in self.base.odd:
            image = self.base.images.get(g.name)
            if image is None or not image:
                continue
            lifted = image.cast_to(ctx)
            del_images[g.name] = lifted
            exterior = GradedElement.zero(ctx)
            for exps, coeff in lifted.terms.items():
                term = GradedElement.monomial(ctx, exps, coeff)
                exterior = exterior + _exterior_derivative(term, ctx)
            del_images["d" + g.name] = -exterior
        return ctx, Derivation(ctx, del_images), None, None


def base_names(pres: DGPresentation):
    return tuple(pres.even) + tuple(g.name for g in pres.odd)


def _exterior_derivative(term: GradedElement, ctx: GradedContext):
    """d of a single base-algebra term, written with the d-generators."""
    out = GradedElement.zero(ctx)
    ((exps, coeff),) = term.terms.items()
    prefix_degree = 0
    for i, e in enumerate(exps):
        g = ctx.gens[i]
        if e and g.hodge == 0:
            sign = -1 if prefix_degree % 2 else 1
            mult = 1 if g.odd else e
            rest = list(exps)
            rest[i] -= 1
            dgen = GradedElement.generator(ctx, "d" + g.name)
            prefix = [0] * len(exps)
            prefix[:i] = exps[:i]
            tail = [0] * len(exps)
            tail[i:] = rest[i:]
            out = out + (
                GradedElement.monomial(ctx, prefix, coeff * sign * mult)
                * dgen
                * GradedElement.monomial(ctx, tail)
            )
        prefix_degree += e * g.degree
    return out


def wedge_power(cotangent: CotangentPresentation, k: int, weight: int) -> MatrixComplex:
    """k-th wedge of the cotangent complex, shifted down by k.

    Exterior on the odd ``dx`` generators, symmetric on the even
    ``dxi`` ones, with base-algebra coefficients; degrees land so that
    the result is directly comparable with the k-th Hodge column.
    """
    if k < 0:
        raise StructuralError("wedge exponent must be non-negative")
    source = _WedgeSource(cotangent.base)
    return _hodge_slice(source, k, weight)


class _StageColumns:
    """Stage context with only the internal boundary, for column slices."""

    def __init__(self, pres: DGPresentation):
        self.pres = pres

    def truncation_data(self):
        ctx = _stage_context(self.pres)
        boundary, _ = _stage_derivations(self.pres, ctx)
        return ctx, boundary, None, None


def hodge_graded(pres: DGPresentation, k: int, weight: int) -> MatrixComplex:
    """The Hodge-degree-k column of the stage, internal differential only."""
    if k < 0:
        raise StructuralError("column index must be non-negative")
    return _hodge_slice(_StageColumns(pres), k, weight)


# ---------------------------------------------------------------------------
# Cartier comparison


@dataclass(frozen=True)
class CartierReport:
    k: int
    graded_dims: tuple  # ((degree, dim), ...) for the Hodge column
    wedge_dims: tuple  # ((degree, dim), ...) for the wedge power
    verdicts: tuple  # ((degree, "equal"|"mismatch"|"inconclusive"), ...)

    @property
    def passed(self) -> bool:
        concl = [v for _, v in self.verdicts if v != "inconclusive"]
        return bool(concl) and all(v == "equal" for v in concl)

    @property
    def verdict(self) -> str:
        concl = [v for _, v in self.verdicts if v != "inconclusive"]
        if any(v == "mismatch" for v in concl):
            return "mismatch"
        if concl:
            return "equal"
        return "inconclusive"

    def verdict_line(self) -> str:
        return f"cartier k={self.k} verdict={self.verdict}"


def _dims_with_stability(build, weight):
    here = build(weight).cohomology()
    above = build(weight + 1).cohomology()
    degrees = sorted(set(here) | set(above))
    dims = {n: here.get(n, 0) for n in degrees}
    stable = {n: here.get(n, 0) == above.get(n, 0) for n in degrees}
    return dims, stable


def cartier_check(pres: DGPresentation, k: int, weight: int) -> CartierReport:
    """Compare the k-th Hodge column against the k-th wedge of 𝕃.

    Verdicts are per total degree: ``equal``/``mismatch`` where both
    realizations are weight-stable, ``inconclusive`` where either is
    not.
    """
    cot = cotangent_complex(pres)
    g_dims, g_stable = _dims_with_stability(
        lambda w: hodge_graded(pres, k, w), weight
    )
    w_dims, w_stable = _dims_with_stability(
        lambda w: wedge_power(cot, k, w), weight
    )
    degrees = sorted(set(g_dims) | set(w_dims))
    verdicts = []
    for n in degrees:
        if g_stable.get(n, True) and w_stable.get(n, True):
            ok = g_dims.get(n, 0) == w_dims.get(n, 0)
            verdicts.append((n, "equal" if ok else "mismatch"))
        else:
            verdicts.append((n, "inconclusive"))
    return CartierReport(
        k=k,
        graded_dims=tuple(sorted(g_dims.items())),
        wedge_dims=tuple(sorted(w_dims.items())),
        verdicts=tuple(verdicts),
    )


# ---------------------------------------------------------------------------
# polynomial homotopy invariance


@dataclass(frozen=True)
class InvarianceReport:
    ok: bool
    compared: tuple  # ((degree, dim_base, dim_extended), ...) joint-stable
    skipped: tuple  # degrees excluded as unstable

    def __bool__(self):
        return self.ok


def _fresh_name(taken):
    for base in ("u", "v", "w"):
        if base not in taken:
            return base
    i = 0
    while f"u{i}" in taken:
        i += 1
    return f"u{i}"


def extend_with_variable(pres: DGPresentation, name=None) -> DGPresentation:
    """Same presentation over one more free even variable."""
    taken = {g.name for g in pres.context.gens}
    taken |= {"d" + g.name for g in pres.context.gens}
    name = name or _fresh_name(taken)
    even = tuple(pres.even) + (name,)
    rebuilt = DGPresentation(even, pres.odd, {}, pres.relations)
    images = {
        key: img.cast_to(rebuilt.context) for key, img in pres.images.items()
    }
    return DGPresentation(even, pres.odd, images, pres.relations)


def a1_invariance_check(
    pres: DGPresentation, weight: int, hodge_level: int = 3
) -> InvarianceReport:
    """Stable-range dims unchanged under adjoining a free variable."""
    base = stability_report(derham_stage(pres, hodge_level, weight), weight)
    wide = stability_report(
        derham_stage(extend_with_variable(pres), hodge_level, weight), weight
    )
    degrees = sorted(
        {n for n, _ in base.dims} | {n for n, _ in wide.dims}
    )
    compared = []
    skipped = []
    for n in degrees:
        if base.is_stable(n) and wide.is_stable(n):
            compared.append((n, base.dim(n), wide.dim(n)))
        else:
            skipped.append(n)
    ok = all(a == b for _, a, b in compared) and bool(compared)
    return InvarianceReport(ok, tuple(compared), tuple(skipped))


# ---------------------------------------------------------------------------
# fibre-sequence bookkeeping


@dataclass(frozen=True)
class FibreReport:
    ambient: tuple  # ((degree, dim), ...) de Rham of the free algebra
    deep_part_dim: int  # dimension of the I^infinity subspace at W
    deep_power: int  # the power of f certified to leave the window
    stage: tuple  # ((degree, dim), ...) of the de Rham stage
    euler_ambient: int
    euler_stage: int

    @property
    def additivity(self) -> bool:
        # with the deep part certified zero, additivity is agreement of
        # the other two Euler characteristics
        return self.deep_part_dim == 0 and self.euler_ambient == self.euler_stage

    def format(self) -> str:
        lines = []
        for n, d in self.ambient:
            lines.append(f"ambient H^{{{n}}} dim={d}")
        lines.append(
            f"deep-intersection dim={self.deep_part_dim} "
            f"(f^{self.deep_power} clears the window)"
        )
        for n, d in self.stage:
            lines.append(f"stage H^{{{n}}} dim={d}")
        lines.append(
            f"euler ambient={self.euler_ambient} stage={self.euler_stage} "
            f"additivity={'true' if self.additivity else 'false'}"
        )
        return "\n".join(lines)


def completion_fibre_report(f: Poly, hodge_level: int, weight: int) -> FibreReport:
    """Three-complex bookkeeping for the hypersurface cut out by ``f``.

    The ambient complex is the de Rham complex of the free algebra; the
    deep part is the intersection of all powers of (f) with the weight
    window, which Krull's theorem makes zero — certified here by
    checking a single sufficiently high power clears the window; the
    stage is the derived de Rham complex of the quotient.  With the
    deep part zero, additivity of Euler characteristics reduces to the
    ambient and stage complexes agreeing.
    """
    if not f:
        raise StructuralError("hypersurface equation must be nonzero")
    variables = tuple(f.context)
    free = free_presentation(variables)
    ambient_cx = weight_truncate(
        DeRhamStage(free, hodge_level, weight), weight
    )
    ambient = ambient_cx.cohomology()

    md = f.min_degree()
    power = weight // md + 1
    high = f ** power
    if high.min_degree() <= weight:
        raise StructuralError("power bookkeeping error")  # pragma: no cover
    ctx = _stage_context(free)
    lifted = GradedElement.from_poly(ctx, high)
    deep_dim = 0
    for m in enumerate_monomials(ctx, max_weight=weight, max_hodge=hodge_level):
        hit = (lifted * GradedElement.monomial(ctx, m)).weight_filter(weight)
        if hit:
            deep_dim += 1

    stage = derham_stage(
        koszul_presentation(variables, [f], 1), hodge_level, weight
    )
    stage_cx = stage.complex()
    stage_h = stage_cx.cohomology()
    return FibreReport(
        ambient=tuple(sorted(ambient.items())),
        deep_part_dim=deep_dim,
        deep_power=power,
        stage=tuple(sorted(stage_h.items())),
        euler_ambient=sum((-d if n % 2 else d) for n, d in ambient.items()),
        euler_stage=sum((-d if n % 2 else d) for n, d in stage_h.items()),
    )


# ---------------------------------------------------------------------------
# tensor-power conerve vs the de Rham stage


def _copy_name(name, j):
    return f"{name}_{j}"


def _conerve_presentation(variables, f: Poly, p: int) -> DGPresentation:
    evens = []
    for j in range(p + 1):
        evens.extend(_copy_name(v, j) for v in variables)
    odd = []
    images = {}
    md = f.min_degree()
    for j in range(p + 1):
        copy_ctx = tuple(_copy_name(v, j) for v in variables)
        fj = f.cast(tuple(evens), dict(zip(f.context, copy_ctx)))
        name = f"xi{j}"
        odd.append(OddGenerator(name, -1, md))
        images[name] = fj
    return DGPresentation(tuple(evens), odd, images)


def _conerve_cofaces(variables, f, p):
    """The p+1 maps from level p-1 into level p (insert a fresh slot)."""
    prev = _conerve_presentation(variables, f, p - 1)
    here = _conerve_presentation(variables, f, p)
    out = []
    for i in range(p + 1):
        images = {}
        for k in range(p):
            new = k if k < i else k + 1
            for v in variables:
                images[_copy_name(v, k)] = GradedElement.generator(
                    here.context, _copy_name(v, new)
                )
            images[f"xi{k}"] = GradedElement.generator(here.context, f"xi{new}")
        out.append(DGMorphism(prev, here, images))
    return out


@dataclass(frozen=True)
class AmitsurComparison:
    trusted_degrees: tuple
    amitsur_dims: tuple  # ((degree, dim), ...) over the trusted range
    derham_dims: tuple
    derham_stable: tuple
    verdicts: tuple  # ((degree, "equal"|"mismatch"), ...)

    @property
    def passed(self) -> bool:
        return all(v == "equal" for _, v in self.verdicts)

    def format(self) -> str:
        lines = []
        table = dict(self.verdicts)
        a = dict(self.amitsur_dims)
        d = dict(self.derham_dims)
        for n in self.trusted_degrees:
            lines.append(
                f"n={n} amitsur={a.get(n, 0)} derham={d.get(n, 0)} "
                f"verdict={table[n]}"
            )
        return "\n".join(lines)


def conerve_totalization(variables, f: Poly, p_max: int, weight: int) -> MatrixComplex:
    """Total complex of the first p_max+1 tensor-power columns.

    Column p is the Koszul model of the (p+1)-fold tensor power of the
    quotient, on p+1 disjoint copies of the variables.  The cochain
    direction is the alternating sum of the slot-insertion maps; the
    internal direction carries the sign (-1)^p so the square vanishes.
    """
    columns = []
    for p in range(p_max + 1):
        pres = _conerve_presentation(variables, f, p)
        columns.append((pres, weight_truncate(pres, weight)))
    coface_mats = {}
    for p in range(1, p_max + 1):
        prev_cx = columns[p - 1][1]
        here_cx = columns[p][1]
        mats = []
        for phi in _conerve_cofaces(variables, f, p):
            mats.append(morphism_matrices(phi, prev_cx, here_cx, weight))
        coface_mats[p] = mats

    # global bases: degree n collects column p at internal degree n-p
    dims = {}
    labels = {}
    offsets = {}
    degrees = set()
    for p, (_, cx) in enumerate(columns):
        for q in cx.dims:
            degrees.add(p + q)
    for n in sorted(degrees):
        total = 0
        labs = []
        for p, (_, cx) in enumerate(columns):
            q = n - p
            if q in cx.dims:
                offsets[(n, p)] = total
                total += cx.dims[q]
                labs.extend(f"p{p}:{l}" for l in cx.labels[q])
        dims[n] = total
        labels[n] = labs
    diffs = {}
    for n in sorted(degrees):
        entries = {}
        for p, (_, cx) in enumerate(columns):
            q = n - p
            if q not in cx.dims:
                continue
            col0 = offsets[(n, p)]
            # internal part, sign (-1)^p, stays in column p
            internal = cx.diffs.get(q, {})
            if (n + 1, p) in offsets:
                row0 = offsets[(n + 1, p)]
                sign = -1 if p % 2 else 1
                for (r, c), v in internal.items():
                    entries[(row0 + r, col0 + c)] = sign * v
            # cochain part, alternating sum of cofaces, into column p+1
            if p + 1 <= p_max and (n + 1, p + 1) in offsets:
                row0 = offsets[(n + 1, p + 1)]
                acc = {}
                for j, mats in enumerate(coface_mats[p + 1]):
                    sign = -1 if j % 2 else 1
                    for (r, c), v in mats.get(q, {}).items():
                        key = (r, c)
                        acc[key] = acc.get(key, Fraction(0)) + sign * v
                for (r, c), v in acc.items():
                    if v:
                        entries[(row0 + r, col0 + c)] = v
        diffs[n] = entries
    return MatrixComplex(dims, labels, diffs)


def amitsur_vs_derham(
    f: Poly, p_max: int, hodge_level: int, weight: int
) -> AmitsurComparison:
    """Descent-completion dims against the de Rham stage, low degrees.

    The conerve totalization is cut at column p_max, so only degrees up
    to p_max - 2 are unaffected by the cut; those are compared against
    the stage of the one-generator Koszul presentation at the same
    weight.
    """
    if not f:
        raise StructuralError("need a nonzero equation")
    if p_max < 2:
        raise StructuralError("need at least three columns to trust degree 0")
    variables = tuple(f.context)
    tot = conerve_totalization(variables, f, p_max, weight)
    tot_h = tot.cohomology()
    stage = derham_stage(
        koszul_presentation(variables, [f], 1), hodge_level, weight
    )
    rep = stability_report(stage, weight)
    trusted = tuple(range(0, p_max - 1))
    verdicts = []
    for n in trusted:
        ok = tot_h.get(n, 0) == rep.dim(n)
        verdicts.append((n, "equal" if ok else "mismatch"))
    return AmitsurComparison(
        trusted_degrees=trusted,
        amitsur_dims=tuple((n, tot_h.get(n, 0)) for n in trusted),
        derham_dims=tuple((n, rep.dim(n)) for n in trusted),
        derham_stable=tuple((n, bool(rep.is_stable(n))) for n in trusted),
        verdicts=tuple(verdicts),
    )
