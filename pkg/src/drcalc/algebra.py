"""Free graded-commutative algebras with weight and Hodge bookkeeping.

A ``GradedContext`` fixes an ordered tuple of generators.  Each
generator carries a cohomological degree (its parity decides whether it
commutes or anticommutes), a positive integral weight used for
truncation, and a Hodge column.  Monomials are dense exponent tuples in
generator order; odd generators square to zero, even ones are free.

Sign conventions follow the usual Koszul rule: reordering two odd
factors costs a sign, everything else commutes on the nose.  Normal
form keeps factors in context order, so the sign of a product is the
parity of the permutation that restores that order.

Derivations are determined by generator images and extended by the
graded Leibniz rule ``D(ab) = D(a) b + (-1)^|a| a D(b)``.  The sum of
two derivations of the same degree is again one, which is how total
differentials are assembled downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import StructuralError
from .poly import Poly


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    weight: int = 1
    hodge: int = 0

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class GradedContext:
    """Ordered generator tuple; provides index lookup and grading sums."""

    __slots__ = ("gens", "_index")

    def __init__(self, gens):
        self.gens = tuple(gens)
        self._index = {}
        for i, g in enumerate(self.gens):
            if g.name in self._index:
                raise StructuralError(f"duplicate generator {g.name!r}")
            if g.weight < 1:
                raise StructuralError(
                    f"generator {g.name!r} has weight {g.weight}; weights "
                    "must be positive for truncations to be finite"
                )
            self._index[g.name] = i

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown generator {name!r}") from None

    def __len__(self):
        return len(self.gens)

    def __eq__(self, other):
        return isinstance(other, GradedContext) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def degree_of(self, exps) -> int:
        return sum(e * g.degree for e, g in zip(exps, self.gens))

    def weight_of(self, exps) -> int:
        return sum(e * g.weight for e, g in zip(exps, self.gens))

    def hodge_of(self, exps) -> int:
        return sum(e * g.hodge for e, g in zip(exps, self.gens))

    def ring_variables(self):
        """Names of the underlying polynomial variables (degree 0, column 0)."""
        return tuple(g.name for g in self.gens if g.degree == 0 and g.hodge == 0)

    def monomial_str(self, exps) -> str:
        parts = []
        for e, g in zip(exps, self.gens):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"


def _mul_exps(ctx: GradedContext, a, b):
    """Combine exponent tuples; returns (sign, exps) or None if zero."""
    sign = 1
    count_above = 0  # odd generators of `a` with index above the cursor
    n = len(a)
    out = [0] * n
    for i in range(n - 1, -1, -1):
        ai, bi = a[i], b[i]
        out[i] = ai + bi
        if ctx.gens[i].odd:
            if bi:
                if ai:
                    return None
                if count_above % 2:
                    sign = -sign
            if ai:
                count_above += 1
    return sign, tuple(out)


class GradedElement:
    """Finite rational combination of monomials over a ``GradedContext``."""

    __slots__ = ("context", "terms")

    def __init__(self, context: GradedContext, terms=None):
        self.context = context
        self.terms = terms or {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, context):
        return cls(context)

    @classmethod
    def const(cls, context, value):
        value = Fraction(value)
        if not value:
            return cls(context)
        return cls(context, {(0,) * len(context): value})

    @classmethod
    def generator(cls, context, name):
        exps = [0] * len(context)
        exps[context.index(name)] = 1
        return cls(context, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, context, exps, coeff=Fraction(1)):
        coeff = Fraction(coeff)
        if not coeff:
            return cls(context)
        return cls(context, {tuple(exps): coeff})

    @classmethod
    def from_poly(cls, context, poly: Poly):
        """Lift a polynomial along matching generator names."""
        positions = [context.index(name) for name in poly.context]
        terms = {}
        for pex, coeff in poly.terms.items():
            exps = [0] * len(context)
            for pos, e in zip(positions, pex):
                exps[pos] = e
            terms[tuple(exps)] = coeff
        return cls(context, terms)

    # -- ring structure -----------------------------------------------

    def _check(self, other):
        if self.context != other.context:
            raise StructuralError("mixed graded contexts")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, GradedElement)
            and self.context == other.context
            and self.terms == other.terms
        )

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for exps, c in other.terms.items():
            s = terms.get(exps, Fraction(0)) + c
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        return GradedElement(self.context, terms)

    def __neg__(self):
        return GradedElement(self.context, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        value = Fraction(value)
        if not value:
            return GradedElement(self.context)
        return GradedElement(
            self.context, {e: c * value for e, c in self.terms.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        ctx = self.context
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                hit = _mul_exps(ctx, ea, eb)
                if hit is None:
                    continue
                sign, exps = hit
                s = terms.get(exps, Fraction(0)) + sign * ca * cb
                if s:
                    terms[exps] = s
                else:
                    terms.pop(exps, None)
        return GradedElement(ctx, terms)

    __rmul__ = __mul__

    # -- grading ------------------------------------------------------

    def degrees(self):
        return sorted({self.context.degree_of(e) for e in self.terms})

    def homogeneous_part(self, degree):
        ctx = self.context
        return GradedElement(
            ctx,
            {e: c for e, c in self.terms.items() if ctx.degree_of(e) == degree},
        )

    def max_weight(self):
        ctx = self.context
        return max((ctx.weight_of(e) for e in self.terms), default=0)

    def min_weight(self):
        ctx = self.context
        return min((ctx.weight_of(e) for e in self.terms), default=None)

    def weight_filter(self, max_weight):
        """Drop monomials of weight above the cap."""
        ctx = self.context
        return GradedElement(
            ctx,
            {
                e: c
                for e, c in self.terms.items()
                if ctx.weight_of(e) <= max_weight
            },
        )

    def hodge_filter(self, max_hodge):
        ctx = self.context
        return GradedElement(
            ctx,
            {
                e: c
                for e, c in self.terms.items()
                if ctx.hodge_of(e) <= max_hodge
            },
        )

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    # -- even-part handling -------------------------------------------

    def even_poly_parts(self):
        """Split into {residual exponent tuple: polynomial coefficient}.

        The residual keeps every generator that is not a ring variable;
        the ring-variable exponents are gathered into ``Poly`` values
        over the variable names in context order.
        """
        ctx = self.context
        var_names = ctx.ring_variables()
        var_pos = [ctx.index(n) for n in var_names]
        var_set = set(var_pos)
        split = {}
        for exps, coeff in self.terms.items():
            residual = tuple(
                0 if i in var_set else e for i, e in enumerate(exps)
            )
            pex = tuple(exps[i] for i in var_pos)
            bucket = split.setdefault(residual, {})
            bucket[pex] = bucket.get(pex, Fraction(0)) + coeff
        return {
            res: Poly(var_names, bucket) for res, bucket in split.items()
        }

    def map_even_parts(self, fn):
        """Rebuild the element after applying ``fn`` to each Poly part."""
        ctx = self.context
        var_names = ctx.ring_variables()
        var_pos = {name: ctx.index(name) for name in var_names}
        out = GradedElement(ctx)
        for residual, poly in self.even_poly_parts().items():
            image = fn(poly)
            if not image:
                continue
            terms = {}
            for pex, coeff in image.terms.items():
                exps = list(residual)
                for name, e in zip(image.context, pex):
                    exps[var_pos[name]] = e
                terms[tuple(exps)] = coeff
            out = out + GradedElement(ctx, terms)
        return out

    def cast_to(self, new_context: "GradedContext", rename=None):
        """Move to another context, matching generators by name.

        ``rename`` optionally maps old names to new ones.  Every
        generator actually used must resolve; unused new generators get
        exponent zero.
        """
        rename = rename or {}
        old = self.context
        positions = []
        for g in old.gens:
            name = rename.get(g.name, g.name)
            positions.append(new_context.index(name))
        terms = {}
        for exps, coeff in self.terms.items():
            out = [0] * len(new_context)
            odd_targets = []
            for i, (pos, e) in enumerate(zip(positions, exps)):
                out[pos] += e
                if e and old.gens[i].odd:
                    odd_targets.append(pos)
            # re-sorting odd factors into the new order costs a sign per
            # inversion
            inversions = sum(
                1
                for i in range(len(odd_targets))
                for j in range(i + 1, len(odd_targets))
                if odd_targets[i] > odd_targets[j]
            )
            sign = -1 if inversions % 2 else 1
            terms[tuple(out)] = coeff * sign
        return GradedElement(new_context, terms)

    # -- display ------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            mono = self.context.monomial_str(exps)
            if mono == "1":
                body = str(coeff)
            elif coeff == 1:
                body = mono
            elif coeff == -1:
                body = f"-{mono}"
            else:
                body = f"{coeff}*{mono}"
            if not parts:
                parts.append(body)
            elif body.startswith("-"):
                parts.append(f"- {body[1:]}")
            else:
                parts.append(f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"<GradedElement {self}>"


class Derivation:
    """Degree ``+1`` derivation given by generator images.

    ``images`` maps generator names to elements; omitted generators map
    to zero.  Application follows the graded Leibniz rule, so the sign
    in front of the ``i``-th factor of a monomial is the parity of the
    degree of everything to its left.
    """

    __slots__ = ("context", "images")

    def __init__(self, context: GradedContext, images):
        self.context = context
        self.images = {}
        for name, elem in images.items():
            i = context.index(name)
            if elem.context != context:
                raise StructuralError("derivation image in wrong context")
            if elem:
                expect = context.gens[i].degree + 1
                for exps in elem.terms:
                    if context.degree_of(exps) != expect:
                        raise StructuralError(
                            f"image of {name!r} is not homogeneous of "
                            f"degree {expect}"
                        )
                self.images[i] = elem

    def __add__(self, other):
        if self.context != other.context:
            raise StructuralError("mixed graded contexts")
        merged = {}
        for src in (self, other):
            for i, elem in src.images.items():
                name = self.context.gens[i].name
                if name in merged:
                    merged[name] = merged[name] + elem
                else:
                    merged[name] = elem
        return Derivation(self.context, merged)

    def __call__(self, elem: GradedElement) -> GradedElement:
        ctx = self.context
        if elem.context != ctx:
            raise StructuralError("mixed graded contexts")
        out = GradedElement(ctx)
        for exps, coeff in elem.terms.items():
            out = out + self._apply_monomial(exps, coeff)
        return out

    def _apply_monomial(self, exps, coeff):
        ctx = self.context
        out = GradedElement(ctx)
        prefix_degree = 0
        for i, e in enumerate(exps):
            if e:
                image = self.images.get(i)
                if image is not None:
                    sign = -1 if prefix_degree % 2 else 1
                    mult = 1 if ctx.gens[i].odd else e
                    prefix = [0] * len(exps)
                    prefix[:i] = exps[:i]
                    rest = [0] * len(exps)
                    rest[i:] = exps[i:]
                    rest[i] -= 1
                    piece = (
                        GradedElement.monomial(ctx, prefix, coeff * sign * mult)
                        * image
                        * GradedElement.monomial(ctx, rest)
                    )
                    out = out + piece
                prefix_degree += e * ctx.gens[i].degree
        return out


def enumerate_monomials(
    context: GradedContext,
    degree=None,
    max_weight=None,
    max_hodge=None,
    hodge=None,
):
    """All exponent tuples meeting the given constraints, sorted.

    ``max_weight`` must be supplied: together with the positive
    generator weights it is what keeps the answer finite.
    """
    if max_weight is None:
        raise StructuralError("monomial enumeration needs a weight cap")
    gens = context.gens
    found = []
    exps = [0] * len(gens)

    def walk(i, budget):
        if i == len(gens):
            tup = tuple(exps)
            if degree is not None and context.degree_of(tup) != degree:
                return
            h = context.hodge_of(tup)
            if max_hodge is not None and h > max_hodge:
                return
            if hodge is not None and h != hodge:
                return
            found.append(tup)
            return
        g = gens[i]
        cap = budget // g.weight
        if g.odd:
            cap = min(cap, 1)
        for e in range(cap + 1):
            exps[i] = e
            walk(i + 1, budget - e * g.weight)
        exps[i] = 0

    walk(0, max_weight)
    return sorted(found)
