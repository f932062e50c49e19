"""Finite-dimensional *-algebras over Q(i), partial actions on them, partial
crossed products, partial group algebras and spectra of relation sets.

Elements of an algebra are coefficient tuples over the basis.  Structure
constants are stored sparsely: `products[i][j]` lists the nonzero (k, c)
with e_i e_j = sum c e_k.  The involution is conjugate linear, determined by
the images of the basis vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .actions import FinitePartialAction, bernoulli_partial, is_invariant, restrict_invariant, sort_points
from .errors import ConsistencyError, FormatError, PreconditionError, UnsupportedError
from .exact import (
    ONE,
    ZERO,
    ExactMatrix,
    GaussianRational,
    Subspace,
    frac_str,
    nullspace,
    parse_frac,
    solve,
    unit_vector,
    vadd,
    vcombine,
    vscale,
    vsub,
    vzero,
)
from .groups import FiniteGroup, LengthFunction


def _sparse(v) -> tuple:
    return tuple((k, c) for k, c in enumerate(v) if c)


class FinDimStarAlgebra:
    def __init__(self, dim: int, products, star, unit=None, labels: Sequence[str] | None = None):
        self.dim = dim
        self.products = [[tuple(products[i][j]) for j in range(dim)] for i in range(dim)]
        self.star_images = [tuple(s) for s in star]
        self.unit = tuple(unit) if unit is not None else None
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.star_images) != dim or len(self.labels) != dim:
            raise FormatError("star and labels must have one entry per basis vector")

    # element arithmetic
    def zero(self) -> tuple:
        return vzero(self.dim)

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.dim, i)

    def mul(self, u, v) -> tuple:
        acc = [ZERO] * self.dim
        vs = [(j, b) for j, b in enumerate(v) if b]
        if not vs:
            return tuple(acc)
        for i, a in enumerate(u):
            if not a:
                continue
            row = self.products[i]
            for j, b in vs:
                ab = a * b
                for k, c in row[j]:
                    acc[k] = acc[k] + ab * c
        return tuple(acc)

    def mul_many(self, *items) -> tuple:
        acc = items[0]
        for x in items[1:]:
            acc = self.mul(acc, x)
        return acc

    def star(self, u) -> tuple:
        acc = [ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            ac = a.conjugate()
            for k, c in self.star_images[i]:
                acc[k] = acc[k] + ac * c
        return tuple(acc)

    def add(self, u, v) -> tuple:
        return vadd(u, v)

    def sub(self, u, v) -> tuple:
        return vsub(u, v)

    def scale(self, c, u) -> tuple:
        return vscale(c, u)

    def one(self) -> tuple:
        if self.unit is None:
            raise PreconditionError("algebra has no unit")
        return self.unit

    # validation
    def validate(self):
        n = self.dim
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                eij = self.mul(e[i], e[j])
                for k in range(n):
                    if self.mul(eij, e[k]) != self.mul(e[i], self.mul(e[j], e[k])):
                        raise PreconditionError(
                            f"not associative at ({self.labels[i]}, {self.labels[j]}, {self.labels[k]})",
                            witness=[i, j, k],
                        )
        self.validate_star()
        if self.unit is not None:
            for i in range(n):
                if self.mul(self.unit, e[i]) != e[i] or self.mul(e[i], self.unit) != e[i]:
                    raise PreconditionError(f"unit fails on {self.labels[i]}")

    def validate_star(self):
        n = self.dim
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            if self.star(self.star(e[i])) != e[i]:
                raise PreconditionError(f"star is not involutive on {self.labels[i]}")
            for j in range(n):
                lhs = self.star(self.mul(e[i], e[j]))
                rhs = self.mul(self.star(e[j]), self.star(e[i]))
                if lhs != rhs:
                    raise PreconditionError(
                        f"(ab)* = b*a* fails at ({self.labels[i]}, {self.labels[j]})", witness=[i, j]
                    )

    def is_commutative(self) -> bool:
        return all(
            self.products[i][j] == self.products[j][i] for i in range(self.dim) for j in range(i + 1, self.dim)
        )

    def center_dim(self) -> int:
        # x central iff x e_j = e_j x for all j
        rows = []
        n = self.dim
        for j in range(n):
            ej = self.basis_vector(j)
            cols = [vsub(self.mul(self.basis_vector(i), ej), self.mul(ej, self.basis_vector(i))) for i in range(n)]
            for k in range(n):
                rows.append(tuple(cols[i][k] for i in range(n)))
        return len(nullspace(rows, n))

    def span_of_products(self, left: Subspace, right: Subspace) -> Subspace:
        out = Subspace(self.dim)
        for a in left.basis:
            for b in right.basis:
                out.add(self.mul(a, b))
        return out

    # serialization
    def to_json(self) -> dict:
        n = self.dim
        sc = []
        for i in range(n):
            row = []
            for j in range(n):
                vec = [ZERO] * n
                for k, c in self.products[i][j]:
                    vec[k] = c
                row.append([x.to_json() for x in vec])
            sc.append(row)
        star = []
        for i in range(n):
            vec = [ZERO] * n
            for k, c in self.star_images[i]:
                vec[k] = c
            star.append([x.to_json() for x in vec])
        return {
            "dim": n,
            "labels": list(self.labels),
            "sc": sc,
            "star": star,
            "unit": [x.to_json() for x in self.unit] if self.unit is not None else None,
        }

    @staticmethod
    def from_json(data) -> "FinDimStarAlgebra":
        if not isinstance(data, dict) or not {"dim", "sc", "star"} <= set(data):
            raise FormatError("algebra JSON needs dim, sc and star")
        n = data["dim"]
        if not isinstance(n, int) or n < 0:
            raise FormatError("dim must be a nonnegative integer")
        sc = data["sc"]
        if len(sc) != n or any(len(r) != n for r in sc):
            raise FormatError("sc must be dim x dim x dim")
        products = []
        for i in range(n):
            row = []
            for j in range(n):
                vec = sc[i][j]
                if len(vec) != n:
                    raise FormatError("sc must be dim x dim x dim")
                row.append(_sparse([GaussianRational.from_json(x) for x in vec]))
            products.append(row)
        star = []
        if len(data["star"]) != n:
            raise FormatError("star must have dim rows")
        for vec in data["star"]:
            if len(vec) != n:
                raise FormatError("star rows must have dim entries")
            star.append(_sparse([GaussianRational.from_json(x) for x in vec]))
        unit = data.get("unit")
        if unit is not None:
            if len(unit) != n:
                raise FormatError("unit must have dim entries")
            unit = tuple(GaussianRational.from_json(x) for x in unit)
        return FinDimStarAlgebra(n, products, star, unit, data.get("labels"))


def function_algebra(points: Sequence, labels: Sequence[str] | None = None) -> FinDimStarAlgebra:
    """C(X) for a finite X with the basis of point indicators."""
    n = len(points)
    products = [[((i, ONE),) if i == j else () for j in range(n)] for i in range(n)]
    star = [((i, ONE),) for i in range(n)]
    return FinDimStarAlgebra(n, products, star, tuple([ONE] * n), labels)


def matrix_algebra(n: int) -> FinDimStarAlgebra:
    """M_n with basis e_ij ordered row-major, e_ij e_kl = [j=k] e_il."""
    idx = lambda i, j: i * n + j  # noqa: E731
    products = []
    for i in range(n):
        for j in range(n):
            row = []
            for k in range(n):
                for l in range(n):
                    row.append(((idx(i, l), ONE),) if j == k else ())
            products.append(row)
    star = [((idx(j, i), ONE),) for i in range(n) for j in range(n)]
    unit = [ONE if i == j else ZERO for i in range(n) for j in range(n)]
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return FinDimStarAlgebra(n * n, products, star, unit, labels)


def matrix_span_closure(generators: Iterable[ExactMatrix], include_identity: bool = True,
                        close_under_adjoint: bool = False) -> list:
    """Basis (as matrices) of the span of all products of the generators."""
    gens = list(generators)
    if not gens and not include_identity:
        return []
    size = gens[0].rows if gens else None
    if close_under_adjoint:
        gens = gens + [g.adjoint() for g in gens]
    space = Subspace((size or 0) ** 2)
    basis = []
    frontier = []
    start = [ExactMatrix.identity(size)] if include_identity else list(gens)
    for m in start:
        if space.add(m.flat()):
            basis.append(m)
            frontier.append(m)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = m.matmul(g)
                if space.add(p.flat()):
                    basis.append(p)
                    nxt.append(p)
        frontier = nxt
    return basis


class MatrixSubalgebra:
    """A subalgebra of M_d given by a basis of matrices, viewed abstractly."""

    def __init__(self, basis: Sequence[ExactMatrix], labels=None):
        self.matrices = list(basis)
        self.size = self.matrices[0].rows if self.matrices else 0
        self.space = Subspace(self.size * self.size, [m.flat() for m in self.matrices])
        if self.space.dim != len(self.matrices):
            raise PreconditionError("matrix basis is not linearly independent")
        n = len(self.matrices)
        products = []
        for a in self.matrices:
            row = []
            for b in self.matrices:
                row.append(_sparse(self.coords(a.matmul(b))))
            products.append(row)
        star = [_sparse(self.coords(m.adjoint())) for m in self.matrices]
        unit = None
        ident = ExactMatrix.identity(self.size)
        if self.size and self.contains(ident):
            unit = self.coords(ident)
        self.algebra = FinDimStarAlgebra(n, products, star, unit, labels)

    def contains(self, m: ExactMatrix) -> bool:
        return solve([x.flat() for x in self.matrices], m.flat(), self.size * self.size) is not None

    def coords(self, m: ExactMatrix) -> tuple:
        c = solve([x.flat() for x in self.matrices], m.flat(), self.size * self.size)
        if c is None:
            raise PreconditionError("matrix lies outside the subalgebra (not closed under the operation)")
        return c

    def to_matrix(self, v) -> ExactMatrix:
        out = ExactMatrix.zero(self.size)
        for c, m in zip(v, self.matrices):
            if c:
                out = out + m.scale(c)
        return out


# ---------------------------------------------------------------------------
# ideals


def is_ideal(alg: FinDimStarAlgebra, ideal: Subspace) -> bool:
    for a in ideal.basis:
        for i in range(alg.dim):
            e = alg.basis_vector(i)
            if not ideal.contains(alg.mul(e, a)) or not ideal.contains(alg.mul(a, e)):
                return False
    return True


def is_self_adjoint_subspace(alg: FinDimStarAlgebra, sub: Subspace) -> bool:
    return all(sub.contains(alg.star(a)) for a in sub.basis)


def is_idempotent(alg: FinDimStarAlgebra, ideal: Subspace) -> bool:
    """span(D.D) = D.  The zero ideal counts as idempotent."""
    return alg.span_of_products(ideal, ideal) == ideal


def is_nondegenerate(alg: FinDimStarAlgebra, ideal: Subspace) -> bool:
    """No nonzero a in D with ab = ba = 0 for all b in D (vacuous for D = 0)."""
    basis = ideal.basis
    m = len(basis)
    if m == 0:
        return True
    rows = []
    for b in basis:
        left = [alg.mul(a, b) for a in basis]
        right = [alg.mul(b, a) for a in basis]
        for k in range(alg.dim):
            rows.append(tuple(left[i][k] for i in range(m)))
            rows.append(tuple(right[i][k] for i in range(m)))
    return not nullspace(rows, m)


def ideal_unit(alg: FinDimStarAlgebra, ideal: Subspace):
    """The unit of the algebra D if it has one, else None."""
    basis = ideal.basis
    m = len(basis)
    if m == 0:
        return vzero(alg.dim)
    # unknown x = sum c_i d_i with x d_j = d_j = d_j x for all j
    rows, rhs = [], []
    for d in basis:
        left = [alg.mul(a, d) for a in basis]
        right = [alg.mul(d, a) for a in basis]
        for k in range(alg.dim):
            rows.append(tuple(left[i][k] for i in range(m)))
            rhs.append(d[k])
            rows.append(tuple(right[i][k] for i in range(m)))
            rhs.append(d[k])
    columns = [tuple(r[i] for r in rows) for i in range(m)]
    c = solve(columns, tuple(rhs), len(rows))
    if c is None:
        return None
    return vcombine(c, basis, alg.dim)


# ---------------------------------------------------------------------------
# partial actions on algebras


class AlgPartialAction:
    """Partial action of a group on a finite-dimensional *-algebra.

    domains[g] is a Subspace; maps[g] lists theta_g of the basis vectors of
    D_(g^-1) in their stored order.
    """

    def __init__(self, group, algebra: FinDimStarAlgebra, domains: dict, maps: dict):
        self.group = group
        self.algebra = algebra
        self.domains = dict(domains)
        self.maps = {g: tuple(tuple(v) for v in imgs) for g, imgs in maps.items()}

    def elements(self):
        return self.group.elements()

    def support(self) -> list:
        return [g for g in self.group.elements() if self.domain(g).dim]

    def domain(self, g) -> Subspace:
        d = self.domains.get(g)
        if d is None:
            return Subspace(self.algebra.dim)
        return d

    def theta(self, g, v) -> tuple:
        g_ = self.group
        src = self.domain(g_.inverse(g))
        coords = src.coordinates(v)
        if coords is None:
            raise PreconditionError(f"element outside D_(g^-1) for g = {g_.label(g)}")
        imgs = self.maps.get(g, ())
        return vcombine(coords, imgs, self.algebra.dim)

    def theta_tilde(self, g, v) -> tuple:
        """theta_g(v 1_(g^-1)) for unital domains."""
        g_ = self.group
        one = ideal_unit(self.algebra, self.domain(g_.inverse(g)))
        if one is None:
            raise PreconditionError("domain is not unital")
        return self.theta(g, self.algebra.mul(v, one))

    def validate(self):
        """Raise PreconditionError describing the first violated requirement."""
        alg = self.algebra
        g_ = self.group
        n = alg.dim
        elems = list(g_.elements())
        for g in elems:
            d = self.domain(g)
            if not is_ideal(alg, d):
                raise PreconditionError(f"D_{g_.label(g)} is not a two-sided ideal")
            if not is_self_adjoint_subspace(alg, d):
                raise PreconditionError(f"D_{g_.label(g)} is not self-adjoint")
        if self.domain(g_.unit) != Subspace(n, [alg.basis_vector(i) for i in range(n)]):
            raise PreconditionError("D_1 must be the whole algebra")
        for v in self.domain(g_.unit).basis:
            if self.theta(g_.unit, v) != v:
                raise PreconditionError("theta_1 must be the identity")
        for g in elems:
            ginv = g_.inverse(g)
            src, dst = self.domain(ginv), self.domain(g)
            imgs = self.maps.get(g, ())
            if len(imgs) != src.dim:
                raise PreconditionError(f"theta_{g_.label(g)} needs one image per basis vector of its source")
            if Subspace(n, imgs) != dst:
                raise PreconditionError(f"theta_{g_.label(g)} is not onto D_{g_.label(g)}")
            for a in src.basis:
                if self.theta(ginv, self.theta(g, a)) != a:
                    raise PreconditionError(f"theta_(g^-1) is not the inverse of theta_g for g = {g_.label(g)}")
                if self.theta(g, alg.star(a)) != alg.star(self.theta(g, a)):
                    raise PreconditionError(f"theta_{g_.label(g)} does not preserve the involution")
                for b in src.basis:
                    if self.theta(g, alg.mul(a, b)) != alg.mul(self.theta(g, a), self.theta(g, b)):
                        raise PreconditionError(f"theta_{g_.label(g)} is not multiplicative")
        for g in elems:
            ginv = g_.inverse(g)
            for h in elems:
                gh = g_.mul(g, h)
                inside = g_.contains(gh)
                dgh = self.domain(gh) if inside else Subspace(n)
                meet = self.domain(ginv).intersection(self.domain(h))
                image = Subspace(n, [self.theta(g, v) for v in meet.basis])
                if image.dim and not inside:
                    raise UnsupportedError("composition leaves the support window")
                if image != self.domain(g).intersection(dgh):
                    raise PreconditionError(
                        f"theta_g(D_(g^-1) cap D_h) = D_g cap D_gh fails at g = {g_.label(g)}, h = {g_.label(h)}"
                    )
                if not inside:
                    continue
                hinv, ghinv = g_.inverse(h), g_.inverse(gh)
                if not (g_.contains(hinv) and g_.contains(ghinv)):
                    continue
                common = self.domain(hinv).intersection(self.domain(ghinv))
                for v in common.basis:
                    if self.theta(g, self.theta(h, v)) != self.theta(gh, v):
                        raise PreconditionError(
                            f"theta_g theta_h = theta_gh fails at g = {g_.label(g)}, h = {g_.label(h)}"
                        )

    def is_invariant_ideal(self, ideal: Subspace) -> bool:
        g_ = self.group
        for g in g_.elements():
            meet = ideal.intersection(self.domain(g_.inverse(g)))
            for v in meet.basis:
                if not ideal.contains(self.theta(g, v)):
                    return False
        return True


def function_algebra_action(act: FinitePartialAction) -> AlgPartialAction:
    """The partial action on C(X) induced by a partial action on X."""
    points = list(act.carrier)
    index = {x: i for i, x in enumerate(points)}
    n = len(points)
    alg = function_algebra(points, [act.label(x) for x in points])
    domains, maps = {}, {}
    for g in act.group.elements():
        domains[g] = Subspace(n, [unit_vector(n, index[x]) for x in sort_points(act.domain(g))])
    for g in act.group.elements():
        ginv = act.group.inverse(g)
        if not act.group.contains(ginv):
            continue
        src = domains[ginv]
        imgs = []
        for v in src.basis:
            x = points[v.index(ONE)]
            imgs.append(unit_vector(n, index[act.theta(g, x)]))
        maps[g] = imgs
    return AlgPartialAction(act.group, alg, domains, maps)


# ---------------------------------------------------------------------------
# crossed products


@dataclass
class CrossedProduct:
    action: AlgPartialAction
    algebra: FinDimStarAlgebra
    blocks: dict            # g -> list of basis indices of D_g delta_g
    basis_info: list        # index -> (g, vector in the coefficient algebra)
    associativity_route: str
    checks: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def element(self, g, a) -> tuple:
        """The vector of a delta_g for a in D_g."""
        act = self.action
        d = act.domain(g)
        coords = d.coordinates(a)
        if coords is None:
            raise PreconditionError(f"coefficient outside D_{act.group.label(g)}")
        out = [ZERO] * self.dim
        for idx, c in zip(self.blocks.get(g, []), coords):
            out[idx] = c
        return tuple(out)

    def component(self, g, x) -> tuple:
        """Coefficient a_g of x = sum a_g delta_g, as a vector of the coefficient algebra."""
        act = self.action
        coeffs = [x[idx] for idx in self.blocks.get(g, [])]
        return act.domain(g).from_coordinates(coeffs) if coeffs else vzero(act.algebra.dim)

    def grading_subspace(self, g) -> Subspace:
        return Subspace(self.dim, [unit_vector(self.dim, i) for i in self.blocks.get(g, [])])


def _cp_label(act: AlgPartialAction, g, v) -> str:
    alg = act.algebra
    nz = [(k, c) for k, c in enumerate(v) if c]
    if len(nz) == 1 and nz[0][1] == ONE:
        coeff = alg.labels[nz[0][0]]
    else:
        coeff = "+".join(f"{c!r}*{alg.labels[k]}" for k, c in nz)
    return f"{coeff}@{act.group.label(g)}"


def crossed_product(act: AlgPartialAction, validate: bool = True) -> CrossedProduct:
    """A x| G with (a d_g)(b d_h) = theta_g(theta_(g^-1)(a) b) d_gh."""
    g_ = act.group
    alg = act.algebra
    if validate:
        act.validate()
    support = act.support()
    blocks, info = {}, []
    for g in support:
        blocks[g] = []
        for v in act.domain(g).basis:
            blocks[g].append(len(info))
            info.append((g, v))
    n = len(info)

    def coords_in(g, v):
        if not g_.contains(g):
            if any(v):
                raise UnsupportedError(
                    "a product has nonzero coefficient outside the support window"
                )
            return None
        c = act.domain(g).coordinates(v)
        if c is None:
            raise ConsistencyError("product left the expected domain")
        return c

    products = []
    for i, (g, a) in enumerate(info):
        ginv = g_.inverse(g)
        pre = act.theta(ginv, a)
        row = []
        for j, (h, b) in enumerate(info):
            gh = g_.mul(g, h)
            val = act.theta(g, alg.mul(pre, b))
            c = coords_in(gh, val)
            if c is None or not any(c):
                row.append(())
                continue
            row.append(tuple((blocks[gh][k], x) for k, x in enumerate(c) if x))
        products.append(row)
    star = []
    for g, a in info:
        ginv = g_.inverse(g)
        val = act.theta(ginv, alg.star(a))
        c = coords_in(ginv, val)
        star.append(tuple((blocks[ginv][k], x) for k, x in enumerate(c or ()) if x))
    unit = None
    if alg.unit is not None and g_.unit in blocks:
        unit = [ZERO] * n
        for k, x in enumerate(act.domain(g_.unit).coordinates(alg.unit)):
            unit[blocks[g_.unit][k]] = x
        unit = tuple(unit)
    labels = [_cp_label(act, g, v) for g, v in info]
    cp_alg = FinDimStarAlgebra(n, products, star, unit, labels)

    theorem_applies = all(
        is_nondegenerate(alg, act.domain(g)) or is_idempotent(alg, act.domain(g)) for g in g_.elements()
    )
    route = "every ideal non-degenerate or idempotent" if theorem_applies else "direct exhaustive check"
    cp = CrossedProduct(act, cp_alg, blocks, info, route)
    if validate:
        witness = associativity_criterion_witness(act)
        try:
            cp_alg.validate()
        except PreconditionError as exc:
            if witness is None:
                raise ConsistencyError("associativity criterion holds but the product is not associative") from exc
            raise PreconditionError(f"crossed product is not associative: {exc}", witness=witness) from exc
        if witness is not None:
            raise ConsistencyError("associativity criterion fails but the product is associative")
        _check_grading(cp)
        cp.checks["associative"] = True
        cp.checks["grading"] = True
    return cp


def associativity_criterion_witness(act: AlgPartialAction):
    """First basis witness of a theta_h(theta_(h^-1)(b) c) != theta_h(theta_(h^-1)(ab) c), or None."""
    alg = act.algebra
    g_ = act.group
    es = [alg.basis_vector(i) for i in range(alg.dim)]
    for h in act.support():
        hinv = g_.inverse(h)
        for b in act.domain(h).basis:
            tb = act.theta(hinv, b)
            for a in es:
                tab = act.theta(hinv, alg.mul(a, b))
                for c in es:
                    lhs = alg.mul(a, act.theta(h, alg.mul(tb, c)))
                    rhs = act.theta(h, alg.mul(tab, c))
                    if lhs != rhs:
                        return {"h": g_.label(h), "a": es.index(a), "c": es.index(c)}
    return None


def _check_grading(cp: CrossedProduct):
    g_ = cp.action.group
    alg = cp.algebra
    subs = {g: cp.grading_subspace(g) for g in cp.blocks}
    total = sum(s.dim for s in subs.values())
    if total != alg.dim:
        raise ConsistencyError("grading subspaces are not independent")
    for g, bg in subs.items():
        ginv = g_.inverse(g)
        for x in bg.basis:
            sx = alg.star(x)
            if any(sx) and (ginv not in subs or not subs[ginv].contains(sx)):
                raise ConsistencyError("B_g* is not inside B_(g^-1)")
        for h, bh in subs.items():
            gh = g_.mul(g, h)
            for x in bg.basis:
                for y in bh.basis:
                    p = alg.mul(x, y)
                    if any(p) and (gh not in subs or not subs[gh].contains(p)):
                        raise ConsistencyError("B_g B_h is not inside B_gh")


def check_crossed_product_formulas(cp: CrossedProduct) -> dict:
    """Verify the standard product/adjoint formulas on basis elements.

    Returns a map formula-name -> number of instances checked; raises
    ConsistencyError on the first failure.
    """
    act = cp.action
    g_ = act.group
    A = act.algebra
    C = cp.algebra
    one = g_.unit
    es = [A.basis_vector(i) for i in range(A.dim)]
    support = act.support()
    counts = {}

    def expect(name, lhs, rhs):
        if lhs != rhs:
            raise ConsistencyError(f"crossed product formula {name} fails")
        counts[name] = counts.get(name, 0) + 1

    def el(g, a):
        return cp.element(g, a)

    units = {g: ideal_unit(A, act.domain(g)) for g in g_.elements()}
    for h in support:
        for b in act.domain(h).basis:
            for a in es:
                expect("left multiplication by the unit fiber", C.mul(el(one, a), el(h, b)), el(h, A.mul(a, b)))
    for g in support:
        ginv = g_.inverse(g)
        for h in support:
            gh = g_.mul(g, h)
            for a in act.domain(g).basis:
                for b in act.domain(ginv).intersection(act.domain(h)).basis:
                    val = A.mul(a, act.theta(g, b))
                    rhs = el(gh, val) if g_.contains(gh) else vzero(C.dim)
                    expect("product with a coefficient in D_(g^-1) cap D_h", C.mul(el(g, a), el(h, b)), rhs)
            for a in act.domain(ginv).basis:
                for b in act.domain(h).basis:
                    val = act.theta(g, A.mul(a, b))
                    rhs = el(gh, val) if any(val) else vzero(C.dim)
                    expect("product with a translated coefficient", C.mul(el(g, act.theta(g, a)), el(h, b)), rhs)
            for a in act.domain(g).basis:
                for b in act.domain(h).basis:
                    ginvh = g_.mul(ginv, h)
                    val = act.theta(ginv, A.mul(A.star(a), b))
                    rhs = el(ginvh, val) if any(val) else vzero(C.dim)
                    expect("adjoint times element", C.mul(C.star(el(g, a)), el(h, b)), rhs)
                    if units[ginv] is not None:
                        val = A.mul(a, act.theta(g, A.mul(units[ginv], b)))
                        rhs = el(gh, val) if any(val) else vzero(C.dim)
                        expect("product through the extended automorphism", C.mul(el(g, a), el(h, b)), rhs)
        for a in act.domain(g).basis:
            for b in act.domain(g).basis:
                expect("element times adjoint in one fiber", C.mul(el(g, a), C.star(el(g, b))), el(one, A.mul(a, A.star(b))))
        for u in act.domain(g).basis:
            for v in act.domain(ginv).basis:
                for a in es:
                    lhs = C.mul_many(el(g, u), el(one, a), el(ginv, v))
                    expect("conjugation sandwich", lhs, el(one, A.mul(u, act.theta(g, A.mul(a, v)))))
        if units[g] is not None and units[ginv] is not None:
            for a in act.domain(g).basis:
                expect("left unit of D_g", C.mul(el(one, units[g]), el(g, a)), el(g, a))
                expect("right unit of D_(g^-1)", C.mul(el(g, a), el(one, units[ginv])), el(g, a))
            for a in act.domain(ginv).basis:
                lhs = C.mul_many(el(g, units[g]), el(one, a), el(ginv, units[ginv]))
                expect("implementing theta_g by conjugation", lhs, el(one, act.theta(g, a)))
    return counts


# ---------------------------------------------------------------------------
# quotients by invariant ideals


def quotient_action(act: AlgPartialAction, ideal: Subspace) -> tuple:
    """Partial action induced on A/J for an invariant self-adjoint ideal J.

    Returns (quotient action, projection function A -> A/J).
    """
    alg = act.algebra
    g_ = act.group
    if not is_ideal(alg, ideal) or not is_self_adjoint_subspace(alg, ideal):
        raise PreconditionError("J must be a self-adjoint two-sided ideal")
    if not act.is_invariant_ideal(ideal):
        raise PreconditionError("J is not invariant")
    pivots = set(ideal.pivots)
    keep = [k for k in range(alg.dim) if k not in pivots]
    m = len(keep)

    def proj(v):
        r = ideal.residual(v)
        return tuple(r[k] for k in keep)

    def lift(q):
        out = [ZERO] * alg.dim
        for k, c in zip(keep, q):
            out[k] = c
        return tuple(out)

    qs = [unit_vector(m, i) for i in range(m)]
    products = [[_sparse(proj(alg.mul(lift(a), lift(b)))) for b in qs] for a in qs]
    star = [_sparse(proj(alg.star(lift(a)))) for a in qs]
    unit = proj(alg.unit) if alg.unit is not None else None
    labels = [alg.labels[k] for k in keep]
    qalg = FinDimStarAlgebra(m, products, star, unit, labels)
    domains, maps = {}, {}
    for g in g_.elements():
        domains[g] = Subspace(m, [proj(v) for v in act.domain(g).basis])
    for g in g_.elements():
        ginv = g_.inverse(g)
        if not g_.contains(ginv):
            continue
        src_basis = act.domain(ginv).basis
        projected = [proj(v) for v in src_basis]
        imgs = []
        for q in domains[ginv].basis:
            c = solve(projected, q, m)
            pre = vcombine(c, src_basis, alg.dim)
            imgs.append(proj(act.theta(g, pre)))
        maps[g] = imgs
    qact = AlgPartialAction(g_, qalg, domains, maps)
    qact.validate()
    return qact, proj


# ---------------------------------------------------------------------------
# partial group algebras


@dataclass
class APar:
    group: FiniteGroup
    points: tuple               # the subsets omega containing the unit
    action: AlgPartialAction    # induced by the partial Bernoulli action
    eps: dict                   # g -> indicator of {omega : g in omega}

    @property
    def algebra(self) -> FinDimStarAlgebra:
        return self.action.algebra


def a_par(group: FiniteGroup) -> APar:
    bern = bernoulli_partial(group)
    act = function_algebra_action(bern)
    pts = bern.carrier
    eps = {g: tuple(ONE if g in w else ZERO for w in pts) for g in group.elements()}
    out = APar(group, pts, act, eps)
    alg = act.algebra
    for g in group.elements():
        for h in group.elements():
            lhs = act.theta_tilde(g, eps[h])
            rhs = alg.mul(eps[group.mul(g, h)], eps[g])
            if lhs != rhs:
                raise ConsistencyError("theta~_g(eps_h) = eps_gh eps_g fails")
    if eps[group.unit] != alg.unit:
        raise ConsistencyError("eps_1 is not the unit")
    return out


@dataclass
class KPar:
    group: FiniteGroup
    apar: APar
    cp: CrossedProduct
    generators: dict            # g -> vector of eps_g delta_g

    @property
    def algebra(self) -> FinDimStarAlgebra:
        return self.cp.algebra

    @property
    def dim(self) -> int:
        return self.cp.dim


def k_par(group: FiniteGroup) -> KPar:
    ap = a_par(group)
    cp = crossed_product(ap.action)
    gens = {g: cp.element(g, ap.eps[g]) for g in group.elements()}
    kp = KPar(group, ap, cp, gens)
    verdict = validate_algebra_prep(cp.algebra, group, gens)
    if not verdict["ok"]:
        raise ConsistencyError(f"canonical generators are not a partial representation: {verdict}")
    return kp


def validate_algebra_prep(alg: FinDimStarAlgebra, group, values: dict, check_star: bool = True) -> dict:
    """Partial representation axioms for g -> values[g] inside an algebra."""
    one = alg.one()
    u = values
    if u[group.unit] != one:
        return {"ok": False, "axiom": "u_1 = 1"}
    for g in group.elements():
        gi = group.inverse(g)
        if check_star and alg.star(u[g]) != u[gi]:
            return {"ok": False, "axiom": "u_(g^-1) = u_g*", "g": group.label(g)}
        for h in group.elements():
            hi = group.inverse(h)
            gh = group.mul(g, h)
            if alg.mul_many(u[g], u[h], u[hi]) != alg.mul(u[gh], u[hi]):
                return {"ok": False, "axiom": "u_g u_h u_(h^-1) = u_gh u_(h^-1)", "g": group.label(g), "h": group.label(h)}
            if alg.mul_many(u[gi], u[g], u[h]) != alg.mul(u[gi], u[gh]):
                return {"ok": False, "axiom": "u_(g^-1) u_g u_h = u_(g^-1) u_gh", "g": group.label(g), "h": group.label(h)}
    return {"ok": True}


def k_par_dimension_formula(order: int) -> int:
    return 2 ** (order - 1) + (order - 1) * 2 ** (order - 2) if order > 1 else 1


def kpar_homomorphism(kp: KPar, matrices: dict) -> list:
    """Images of the K_par basis under [g] -> matrices[g].

    The basis vector delta_omega delta_g is the product of eps-monomials
    and [g]; eps_h maps to u_h u_(h^-1).  Multiplicativity on all basis
    pairs is verified, so a returned list certifies the universal property
    for this partial representation.
    """
    G = kp.group
    size = matrices[G.unit].rows
    ident = ExactMatrix.identity(size)
    proj = {h: matrices[h].matmul(matrices[G.inverse(h)]) for h in G.elements()}
    images = []
    for g, a in kp.cp.basis_info:
        acc = ExactMatrix.zero(size)
        for k, c in enumerate(a):
            if not c:
                continue
            omega = kp.apar.points[k]
            m = ident
            for h in G.elements():
                m = m.matmul(proj[h] if h in omega else ident - proj[h])
            acc = acc + m.scale(c)
        images.append(acc.matmul(matrices[g]))
    alg = kp.algebra
    for i in range(alg.dim):
        for j in range(alg.dim):
            expected = ExactMatrix.zero(size)
            for k, c in alg.products[i][j]:
                expected = expected + images[k].scale(c)
            if images[i].matmul(images[j]) != expected:
                raise PreconditionError("the assignment does not extend multiplicatively", witness=[i, j])
    return images


def birget_rhodes_partial_rep(group: FiniteGroup) -> tuple:
    """Left regular representation of the Birget-Rhodes expansion of G.

    Basis: pairs (A, g) with {1, g} inside A inside G.  The generator h acts by
    (A, g) -> ({1, h} u hA, hg).  Returns (basis, {h: matrix}).
    """
    G = group
    others = [x for x in G.elements() if x != G.unit]
    basis = []
    for mask in range(1 << len(others)):
        A = frozenset([G.unit] + [others[i] for i in range(len(others)) if mask >> i & 1])
        for g in sorted(A):
            basis.append((A, g))
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    mats = {}
    for h in G.elements():
        items = {}
        for j, (A, g) in enumerate(basis):
            B = frozenset({G.unit, h}) | G.left_translate(h, A)
            items[(index[(B, G.mul(h, g))], j)] = 1
        mats[h] = ExactMatrix.from_sparse(n, n, items)
    return basis, mats


def validate_algebraic_prep_matrices(group, mats: dict) -> bool:
    """Partial representation identities without the adjoint axiom."""
    G = group
    if mats[G.unit] != ExactMatrix.identity(mats[G.unit].rows):
        return False
    for g in G.elements():
        gi = G.inverse(g)
        for h in G.elements():
            hi = G.inverse(h)
            gh = G.mul(g, h)
            if mats[g].matmul(mats[h]).matmul(mats[hi]) != mats[gh].matmul(mats[hi]):
                return False
            if mats[gi].matmul(mats[g]).matmul(mats[h]) != mats[gi].matmul(mats[gh]):
                return False
    return True


def kpar_dimension_by_span_closure(group: FiniteGroup) -> int:
    """Dimension of the algebra generated by a concrete partial representation.

    Uses the Birget-Rhodes regular representation, checked to satisfy the
    partial representation identities; its span closure is a quotient of
    K_par(G), so this is an independent lower bound that is attained.
    """
    _, mats = birget_rhodes_partial_rep(group)
    if not validate_algebraic_prep_matrices(group, mats):
        raise ConsistencyError("regular representation is not a partial representation")
    return len(matrix_span_closure(mats.values(), include_identity=True))


# ---------------------------------------------------------------------------
# relations and spectra


@dataclass(frozen=True)
class Polynomial:
    """sum of coef * prod e_g over the listed variables (commuting)."""

    terms: tuple   # of (Fraction, tuple of group elements)

    def evaluate(self, value: Callable) -> Fraction:
        total = Fraction(0)
        for coef, vars_ in self.terms:
            t = coef
            for g in vars_:
                if not value(g):
                    t = 0
                    break
            total += t
        return total

    def to_json(self, group) -> dict:
        return {"terms": [{"coef": frac_str(c), "vars": [group.label(g) for g in v]} for c, v in self.terms]}


@dataclass
class RelationSet:
    group: object
    relations: tuple

    def to_json(self) -> list:
        return [p.to_json(self.group) for p in self.relations]

    @staticmethod
    def from_json(group, data) -> "RelationSet":
        if isinstance(data, dict) and "relations" in data:
            data = data["relations"]
        if not isinstance(data, list):
            raise FormatError("relations must be a list of polynomials")
        polys = []
        for p in data:
            if not isinstance(p, dict) or "terms" not in p:
                raise FormatError("each relation needs terms")
            terms = []
            for t in p["terms"]:
                if not isinstance(t, dict) or "coef" not in t:
                    raise FormatError("each term needs coef and vars")
                terms.append((parse_frac(t["coef"]), tuple(group.parse(v) for v in t.get("vars", []))))
            polys.append(Polynomial(tuple(terms)))
        return RelationSet(group, tuple(polys))


def isometry_relations(group, semigroup: Iterable) -> RelationSet:
    """e_(n^-1) - 1 = 0 for n in P."""
    rels = [Polynomial(((Fraction(1), (group.inverse(n),)), (Fraction(-1), ()))) for n in sorted(set(semigroup))]
    return RelationSet(group, tuple(rels))


def semi_saturation_relations(group, length: LengthFunction) -> RelationSet:
    """e_gh - e_gh e_g = 0 whenever l(gh) = l(g) + l(h)."""
    rels = []
    for g in group.elements():
        for h in group.elements():
            if length.is_additive_pair(g, h):
                gh = group.mul(g, h)
                rels.append(Polynomial(((Fraction(1), (gh,)), (Fraction(-1), (gh, g)))))
    return RelationSet(group, tuple(rels))


def vanishing_relations(group) -> RelationSet:
    """e_g = 0 for every g != 1."""
    return RelationSet(group, tuple(Polynomial(((Fraction(1), (g,)),)) for g in group.elements() if g != group.unit))


def spectrum(group: FiniteGroup, relations: RelationSet) -> list:
    """Omega_R: subsets omega containing 1 on which every relation vanishes at every g^-1 omega, g in omega."""
    bern = bernoulli_partial(group)
    out = []
    for omega in bern.carrier:
        good = True
        for g in sorted(omega):
            shifted = group.left_translate(group.inverse(g), omega)
            for p in relations.relations:
                if p.evaluate(lambda h: h in shifted) != 0:
                    good = False
                    break
            if not good:
                break
        if good:
            out.append(omega)
    if not is_invariant(bern, out):
        raise ConsistencyError("spectrum is not invariant under the partial Bernoulli action")
    return out


def is_hereditary(group, semigroup: Iterable, omega) -> bool:
    """g in omega implies g n^-1 in omega for n in P."""
    ps = list(semigroup)
    return all(group.mul(g, group.inverse(n)) in omega for g in omega for n in ps)


def is_convex(length: LengthFunction, omega) -> bool:
    return all(length.segment(g, h) <= omega for g in omega for h in omega)


def hereditary_subsets(group, semigroup) -> list:
    bern = bernoulli_partial(group)
    return [w for w in bern.carrier if is_hereditary(group, semigroup, w)]


def convex_subsets(group, length: LengthFunction) -> list:
    bern = bernoulli_partial(group)
    return [w for w in bern.carrier if is_convex(length, w)]


@dataclass
class RelativeCrossedProduct:
    group: FiniteGroup
    spectrum: list
    set_action: FinitePartialAction
    cp: CrossedProduct
    generators: dict


def cstar_par_rel(group: FiniteGroup, relations: RelationSet) -> RelativeCrossedProduct:
    """C(Omega_R) x| G with its canonical representation g -> 1_g delta_g."""
    omega_r = spectrum(group, relations)
    bern = bernoulli_partial(group)
    sub = restrict_invariant(bern, omega_r)
    act = function_algebra_action(sub)
    cp = crossed_product(act)
    pts = list(sub.carrier)
    gens = {}
    for g in group.elements():
        ind = tuple(ONE if g in w else ZERO for w in pts)
        gens[g] = cp.element(g, ind) if cp.blocks.get(g) else vzero(cp.dim)
    C = cp.algebra
    if cp.dim:
        verdict = validate_algebra_prep(C, group, gens)
        if not verdict["ok"]:
            raise ConsistencyError(f"canonical map is not a partial representation: {verdict}")
        eg = {g: C.mul(gens[g], C.star(gens[g])) for g in group.elements()}
        for p in relations.relations:
            acc = vzero(C.dim)
            for coef, vars_ in p.terms:
                t = C.one()
                for g in vars_:
                    t = C.mul(t, eg[g])
                acc = vadd(acc, vscale(coef, t))
            if any(acc):
                raise ConsistencyError("canonical representation does not satisfy the relations")
    return RelativeCrossedProduct(group, omega_r, sub, cp, gens)


def algebra_invariants(alg: FinDimStarAlgebra) -> dict:
    """Cheap isomorphism invariants: dimension, center dimension, commutativity."""
    return {
        "dim": alg.dim,
        "center_dim": alg.center_dim(),
        "commutative": alg.is_commutative(),
    }


def left_regular_matrix(alg: FinDimStarAlgebra, x) -> ExactMatrix:
    """Matrix of b -> x b in the basis of the algebra."""
    n = alg.dim
    cols = [alg.mul(x, alg.basis_vector(j)) for j in range(n)]
    return ExactMatrix(n, n, [cols[j][i] for i in range(n) for j in range(n)])
