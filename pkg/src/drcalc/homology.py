"""Weight-truncated cochain complexes over the rationals.

Everything here is finite and exact.  A differential that never lowers
weight makes the monomials of weight above ``W`` span a subcomplex, so
the quotient spanned by the light monomials is again a complex; that
quotient is what ``weight_truncate`` materializes, one sparse rational
matrix per adjacent degree pair.  Cohomology is rank-nullity
bookkeeping on top of fraction-free elimination.

Truncation does not commute with cohomology in general.  The stability
flags reported by ``stability_report`` compare dimensions at ``W`` and
``W + 1``: evidence, not proof, that a dimension has settled.  Callers
that compare two constructions are expected to restrict attention to
degrees where both sides are stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import elim
from .algebra import GradedElement, enumerate_monomials
from .errors import StructuralError


def rank_ff(rows) -> int:
    """Exact rank of a dense rational matrix, fraction-free."""
    return elim.rank_dense(rows)


class MatrixComplex:
    """Bases (as label lists) per degree plus one matrix per step up.

    ``diffs[n]`` maps degree ``n`` to degree ``n + 1``; entries are
    sparse ``{(row, col): Fraction}`` with rows indexed by the target
    basis and columns by the source basis.
    """

    __slots__ = ("dims", "labels", "diffs")

    def __init__(self, dims, labels, diffs):
        self.dims = dict(dims)
        self.labels = {n: tuple(ls) for n, ls in labels.items()}
        self.diffs = {n: dict(m) for n, m in diffs.items()}
        for n, entries in self.diffs.items():
            rows = self.dims.get(n + 1, 0)
            cols = self.dims.get(n, 0)
            for (r, c) in entries:
                if not (0 <= r < rows and 0 <= c < cols):
                    raise StructuralError(
                        f"matrix entry ({r},{c}) outside {rows}x{cols} "
                        f"at degree {n}"
                    )

    def degrees(self):
        return sorted(self.dims)

    def rank(self, n) -> int:
        entries = self.diffs.get(n)
        if not entries:
            return 0
        return elim.rank_sparse(
            entries, self.dims.get(n + 1, 0), self.dims.get(n, 0)
        )

    def check_composition(self):
        """Raise unless consecutive differentials compose to zero."""
        for n, first in self.diffs.items():
            second = self.diffs.get(n + 1)
            if not second or not first:
                continue
            by_col = {}
            for (r, c), v in first.items():
                by_col.setdefault(c, []).append((r, v))
            for c, col in by_col.items():
                acc = {}
                for mid, v in col:
                    for (r, m), w in second.items():
                        if m == mid:
                            acc[r] = acc.get(r, Fraction(0)) + w * v
                if any(acc.values()):
                    raise StructuralError(
                        f"d o d != 0 out of degree {n}, column {c}"
                    )

    def cohomology(self):
        """{degree: dim H} via dim ker(d^n) - rank(d^{n-1})."""
        self.check_composition()
        ranks = {n: self.rank(n) for n in self.diffs}
        out = {}
        for n in self.degrees():
            dim = self.dims[n]
            out[n] = dim - ranks.get(n, 0) - ranks.get(n - 1, 0)
        return out

    def euler_characteristic(self) -> int:
        return sum((-d if n % 2 else d) for n, d in self.dims.items())


@dataclass(frozen=True)
class CohomologyReport:
    """Per-degree dimensions with optional stability flags."""

    dims: tuple  # ((degree, dim), ...) ascending
    stable: tuple  # ((degree, bool), ...) or () when not assessed

    def dim(self, degree) -> int:
        for n, d in self.dims:
            if n == degree:
                return d
        return 0

    def is_stable(self, degree):
        for n, flag in self.stable:
            if n == degree:
                return flag
        return None

    def format(self) -> str:
        if not self.stable:
            raise StructuralError(
                "report has no stability flags; use stability_report"
            )
        flags = dict(self.stable)
        lines = []
        for n, d in self.dims:
            flag = "true" if flags.get(n, False) else "false"
            lines.append(f"H^{{{n}}} dim={d} stable={flag}")
        return "\n".join(lines)


def weight_truncate(source, weight, max_hodge=None) -> MatrixComplex:
    """Finite quotient complex of everything of weight at most ``weight``.

    ``source`` is any object exposing ``truncation_data()`` — a Koszul
    or Amitsur presentation, a de Rham stage, or a stalk complex.  An
    explicit ``max_hodge`` further cuts to the first columns of the
    Hodge grading.
    """
    ctx, diff, own_hodge, nf = source.truncation_data()
    if max_hodge is None:
        max_hodge = own_hodge
    for i, image in diff.images.items():
        gen = ctx.gens[i]
        light = image.min_weight()
        if light is not None and light < gen.weight:
            raise StructuralError(
                f"differential lowers weight on generator {gen.name!r}: "
                f"image has weight {light} < {gen.weight}"
            )
    mons = enumerate_monomials(ctx, max_weight=weight, max_hodge=max_hodge)
    if nf is not None:
        mons = [m for m in mons if nf.is_standard(m)]
    buckets = {}
    for m in mons:
        buckets.setdefault(ctx.degree_of(m), []).append(m)
    index = {
        n: {m: i for i, m in enumerate(ms)} for n, ms in buckets.items()
    }
    dims = {n: len(ms) for n, ms in buckets.items()}
    labels = {n: [ctx.monomial_str(m) for m in ms] for n, ms in buckets.items()}
    diffs = {}
    for n, ms in buckets.items():
        entries = {}
        target = index.get(n + 1, {})
        for col, m in enumerate(ms):
            image = diff(GradedElement.monomial(ctx, m))
            if nf is not None:
                image = nf.reduce(image)
            image = image.weight_filter(weight)
            if max_hodge is not None:
                image = image.hodge_filter(max_hodge)
            for exps, coeff in image.terms.items():
                try:
                    row = target[exps]
                except KeyError:
                    raise StructuralError(
                        f"image term {ctx.monomial_str(exps)} missing from "
                        f"degree {n + 1} basis"
                    ) from None
                entries[(row, col)] = coeff
        diffs[n] = entries
    return MatrixComplex(dims, labels, diffs)


def cohomology_dims(complex_: MatrixComplex) -> CohomologyReport:
    dims = complex_.cohomology()
    return CohomologyReport(
        dims=tuple(sorted(dims.items())),
        stable=(),
    )


def stability_report(source, weight, max_hodge=None) -> CohomologyReport:
    """Cohomology at ``weight`` with per-degree (W vs W+1) flags."""
    here = weight_truncate(source, weight, max_hodge).cohomology()
    above = weight_truncate(source, weight + 1, max_hodge).cohomology()
    degrees = sorted(set(here) | set(above))
    dims = tuple((n, here.get(n, 0)) for n in sorted(here))
    stable = tuple(
        (n, here.get(n, 0) == above.get(n, 0)) for n in degrees
    )
    return CohomologyReport(dims=dims, stable=stable)


def _matrix_apply(entries, vec, nrows):
    out = [Fraction(0)] * nrows
    for (r, c), v in entries.items():
        if vec[c]:
            out[r] += v * vec[c]
    return out


def _dense_from_sparse(entries, nrows, ncols):
    rows = [[Fraction(0)] * ncols for _ in range(nrows)]
    for (r, c), v in entries.items():
        rows[r][c] = v
    return rows


def chain_map_check(morphism, weight) -> "ChainMapReport":
    """Verify a presentation morphism commutes with d at truncation W.

    Both sides are assembled as matrices; the check is
    ``Phi_{n+1} d_src^n == d_tgt^n Phi_n`` for every degree of the
    source.  Failure is a result, not an exception.
    """
    src = weight_truncate(morphism.source, weight)
    tgt = weight_truncate(morphism.target, weight)
    mats = morphism_matrices(morphism, src, tgt, weight)
    for n in src.degrees():
        d_src = src.diffs.get(n, {})
        d_tgt = tgt.diffs.get(n, {})
        phi_n = mats.get(n, {})
        phi_up = mats.get(n + 1, {})
        lhs = _compose(phi_up, d_src, tgt.dims.get(n + 1, 0))
        rhs = _compose(d_tgt, phi_n, tgt.dims.get(n + 1, 0))
        if lhs != rhs:
            return ChainMapReport(False, n)
    return ChainMapReport(True, None)


@dataclass(frozen=True)
class ChainMapReport:
    ok: bool
    first_failure_degree: object

    def __bool__(self):
        return self.ok


def _compose(second, first, nrows):
    """Sparse product second o first (entries dicts)."""
    by_col = {}
    for (r, c), v in first.items():
        by_col.setdefault(c, {})[r] = v
    sec_by_col = {}
    for (r, c), v in second.items():
        sec_by_col.setdefault(c, {})[r] = v
    out = {}
    for c, col in by_col.items():
        acc = {}
        for mid, v in col.items():
            for r, w in sec_by_col.get(mid, {}).items():
                acc[r] = acc.get(r, Fraction(0)) + w * v
        for r, v in acc.items():
            if v:
                out[(r, c)] = v
    return out


def morphism_matrices(morphism, src_cx, tgt_cx, weight):
    """Degree-indexed sparse matrices of a morphism between truncations.

    Requires label-consistent bases: the matrices are computed by
    pushing each source basis monomial through the generator images and
    expanding in the target basis (terms falling outside the truncation
    are projected away).
    """
    src_ctx = morphism.source.context
    tgt_ctx = morphism.target.context
    mats = {}
    for n in src_cx.degrees():
        target_index = {}
        if n in tgt_cx.dims:
            for i, label in enumerate(tgt_cx.labels[n]):
                target_index[label] = i
        entries = {}
        for col, label in enumerate(src_cx.labels[n]):
            exps = _exps_from_label(src_ctx, label)
            image = morphism.apply(GradedElement.monomial(src_ctx, exps))
            image = image.weight_filter(weight)
            for t_exps, coeff in image.terms.items():
                key = tgt_ctx.monomial_str(t_exps)
                row = target_index.get(key)
                if row is None:
                    continue
                entries[(row, col)] = coeff
        mats[n] = entries
    return mats


def _exps_from_label(ctx, label):
    exps = [0] * len(ctx)
    if label != "1":
        for factor in label.split("*"):
            if "^" in factor:
                name, e = factor.split("^")
                exps[ctx.index(name)] = int(e)
            else:
                exps[ctx.index(factor)] = 1
    return tuple(exps)


def induced_map_vanishes(src_cx, tgt_cx, mats, degree) -> bool:
    """Does the induced map on H^degree land in zero?

    True when the image of every cycle is a boundary: the rank of the
    target boundary matrix does not grow when the pushed-forward cycle
    basis is adjoined.
    """
    n = degree
    d_src = _dense_from_sparse(
        src_cx.diffs.get(n, {}), src_cx.dims.get(n + 1, 0), src_cx.dims.get(n, 0)
    )
    cycles = elim.nullspace(d_src, src_cx.dims.get(n, 0))
    if not cycles:
        return True
    nrows = tgt_cx.dims.get(n, 0)
    bnd = tgt_cx.diffs.get(n - 1, {})
    base_cols = tgt_cx.dims.get(n - 1, 0)
    aug = dict(bnd)
    phi = mats.get(n, {})
    for k, z in enumerate(cycles):
        vec = _matrix_apply(phi, z, nrows)
        for r, v in enumerate(vec):
            if v:
                aug[(r, base_cols + k)] = v
    rank_b = elim.rank_sparse(bnd, nrows, base_cols)
    rank_aug = elim.rank_sparse(aug, nrows, base_cols + len(cycles))
    return rank_aug == rank_b
