"""Fell bundles over finite groups with finite-dimensional fibers.

A bundle is stored as a G-graded finite-dimensional *-algebra whose basis is
partitioned into fibers.  Sections are maps g -> vector of the ambient
algebra supported in the block of g; the coordinate space of the regular
representation is the direct sum of the fibers, which is the ambient
coordinate space itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .actions import (
    FinitePartialAction,
    bernoulli_partial,
    global_action,
    restrict_invariant,
    saturate,
)
from .algebras import (
    AlgPartialAction,
    FinDimStarAlgebra,
    MatrixSubalgebra,
    crossed_product,
    function_algebra_action,
    ideal_unit,
    left_regular_matrix,
)
from .errors import ConsistencyError, DimensionError, PreconditionError
from .exact import (
    ONE,
    ZERO,
    ExactMatrix,
    GaussianRational,
    Subspace,
    hermitian_signature,
    nullspace,
    solve,
    unit_vector,
    vadd,
    vsub,
    vzero,
)
from .groups import FiniteGroup, LengthFunction
from .reps import PartialRep, validate_prep


class FiniteFellBundle:
    def __init__(self, group: FiniteGroup, ambient: FinDimStarAlgebra, fibers: dict,
                 fiber_mul: Callable | None = None, name: str = "bundle"):
        self.group = group
        self.ambient = ambient
        self.fibers = {g: tuple(fibers.get(g, ())) for g in group.elements()}
        self.name = name
        self._fiber_mul = fiber_mul
        owner = {}
        for g, idx in self.fibers.items():
            for i in idx:
                if i in owner:
                    raise PreconditionError("fiber index lists overlap")
                owner[i] = g
        if sorted(owner) != list(range(ambient.dim)):
            raise PreconditionError("fibers must partition the ambient basis")
        self.owner = owner
        self.matrices = None   # optional concrete realization of the basis

    @property
    def dim(self) -> int:
        return self.ambient.dim

    def fiber_dim(self, g) -> int:
        return len(self.fibers[g])

    def fiber_space(self, g) -> Subspace:
        return Subspace(self.dim, [unit_vector(self.dim, i) for i in self.fibers[g]])

    def fiber_basis(self, g) -> list:
        return [unit_vector(self.dim, i) for i in self.fibers[g]]

    def in_fiber(self, g, v) -> bool:
        # outside a truncated window every fiber is zero
        allowed = set(self.fibers.get(g, ()))
        return all(not c or k in allowed for k, c in enumerate(v))

    def fiber_product(self, b, c) -> tuple:
        """b c for b in B_g, c in B_h, landing in B_gh."""
        if self._fiber_mul is not None:
            return self._fiber_mul(b, c)
        return self.ambient.mul(b, c)

    def star(self, b) -> tuple:
        return self.ambient.star(b)

    def validate(self):
        G = self.group
        A = self.ambient
        A.validate_star()
        for g in G.elements():
            for b in self.fiber_basis(g):
                if not self.in_fiber(G.inverse(g), A.star(b)):
                    raise PreconditionError(f"B_g* is not inside B_(g^-1) for g = {G.label(g)}")
                for h in G.elements():
                    gh = G.mul(g, h)
                    for c in self.fiber_basis(h):
                        p = self.fiber_product(b, c)
                        if not self.in_fiber(gh, p):
                            raise PreconditionError(
                                f"B_g B_h is not inside B_gh for g = {G.label(g)}, h = {G.label(h)}"
                            )
                        if p != A.mul(b, c):
                            raise ConsistencyError("fiber product disagrees with the ambient product")

    def to_json(self) -> dict:
        G = self.group
        return {
            "group": G.to_json(),
            "ambient": self.ambient.to_json(),
            "fibers": {G.label(g): list(self.fibers[g]) for g in G.elements()},
        }

    @staticmethod
    def from_json(data) -> "FiniteFellBundle":
        from .errors import FormatError
        from .groups import group_from_json

        if not isinstance(data, dict) or not {"group", "ambient", "fibers"} <= set(data):
            raise FormatError("bundle JSON needs group, ambient and fibers")
        G = group_from_json(data["group"])
        A = FinDimStarAlgebra.from_json(data["ambient"])
        fibers = {G.parse(k): v for k, v in data["fibers"].items()}
        b = FiniteFellBundle(G, A, fibers)
        b.validate()
        return b


# ---------------------------------------------------------------------------
# constructions


def semidirect_bundle(act: AlgPartialAction) -> FiniteFellBundle:
    """Fibers D_g delta_g inside the crossed product.

    When every D_g is unital the fiber product is evaluated through the
    formula a theta_g(1_(g^-1) b), independently of the crossed product's
    own structure constants.
    """
    cp = crossed_product(act)
    G = act.group
    A = act.algebra
    units = {g: ideal_unit(A, act.domain(g)) for g in G.elements()}

    # with unital ideals the product runs through the extended automorphisms
    def through_units(x, y):
        out = vzero(cp.dim)
        for g in cp.blocks:
            a = cp.component(g, x)
            if not any(a):
                continue
            for h in cp.blocks:
                b = cp.component(h, y)
                if not any(b):
                    continue
                val = A.mul(a, act.theta(g, A.mul(units[G.inverse(g)], b)))
                if any(val):
                    out = vadd(out, cp.element(G.mul(g, h), val))
        return out

    fiber_mul = through_units if all(u is not None for u in units.values()) else None
    bundle = FiniteFellBundle(G, cp.algebra, cp.blocks, fiber_mul, name="semidirect")
    bundle.crossed_product = cp
    bundle.validate()
    return bundle


def group_bundle(group: FiniteGroup) -> FiniteFellBundle:
    """One-dimensional fibers: the trivial action on the scalars."""
    act = global_action(group, ["pt"], lambda g, x: x, labeler=str)
    bundle = semidirect_bundle(function_algebra_action(act))
    bundle.name = "group"
    return bundle


def graded_span_closure(rep: PartialRep) -> dict:
    """B_g = span of the products u_h1 ... u_hn with h1 ... hn = g."""
    G = rep.group
    n = rep.size
    spaces = {g: Subspace(n * n) for g in G.elements()}
    bases = {g: [] for g in G.elements()}
    frontier = []
    for g in G.elements():
        m = rep.u(g)
        if spaces[g].add(m.flat()):
            bases[g].append(m)
            frontier.append((g, m))
    while frontier:
        nxt = []
        for g, m in frontier:
            for k in G.elements():
                gk = G.mul(g, k)
                p = m.matmul(rep.u(k))
                if spaces[gk].add(p.flat()):
                    bases[gk].append(p)
                    nxt.append((gk, p))
        frontier = nxt
    return bases


def bundle_from_prep(rep: PartialRep) -> FiniteFellBundle:
    """External bundle of the fibers spanned by products of the u_g.

    The fibers may overlap inside M_d, so the ambient algebra is their
    external direct sum with the products computed in M_d.
    """
    v = validate_prep(rep)
    if not v.ok:
        raise PreconditionError(f"not a partial representation: {v.axiom}", witness=v.witness)
    G = rep.group
    bases = graded_span_closure(rep)
    one = G.unit
    sub1 = MatrixSubalgebra(bases[one]) if bases[one] else None
    if sub1 is None or not sub1.algebra.is_commutative():
        raise ConsistencyError("unit fiber is not commutative")
    for g in G.elements():
        target = Subspace(rep.size ** 2, [m.flat() for m in bases[g]])
        left = Subspace(rep.size ** 2, [rep.u(g).matmul(b).flat() for b in bases[one]])
        right = Subspace(rep.size ** 2, [b.matmul(rep.u(g)).flat() for b in bases[one]])
        if left != target or right != target:
            raise ConsistencyError("u_g B_1 = B_g = B_1 u_g fails")
    info, fibers = [], {}
    for g in G.elements():
        fibers[g] = []
        for m in bases[g]:
            fibers[g].append(len(info))
            info.append((g, m))
    n = len(info)
    flat_bases = {g: [m.flat() for m in bases[g]] for g in G.elements()}

    def coords(g, m):
        c = solve(flat_bases[g], m.flat(), rep.size ** 2)
        if c is None:
            raise ConsistencyError("product left its fiber")
        return c

    products = []
    for g, a in info:
        row = []
        for h, b in info:
            gh = G.mul(g, h)
            c = coords(gh, a.matmul(b)) if bases[gh] else ()
            row.append(tuple((fibers[gh][k], x) for k, x in enumerate(c) if x))
        products.append(row)
    star = []
    for g, a in info:
        gi = G.inverse(g)
        c = coords(gi, a.adjoint())
        star.append(tuple((fibers[gi][k], x) for k, x in enumerate(c) if x))
    unit = [ZERO] * n
    for k, x in enumerate(coords(one, rep.unit)):
        unit[fibers[one][k]] = x
    labels = [f"b{i}@{G.label(g)}" for i, (g, _) in enumerate(info)]
    ambient = FinDimStarAlgebra(n, products, star, tuple(unit), labels)
    bundle = FiniteFellBundle(G, ambient, fibers, name="from-representation")
    bundle.matrices = [m for _, m in info]
    bundle.validate()
    return bundle


def random_bernoulli_restricted_action(group: FiniteGroup, rng: random.Random) -> FinitePartialAction:
    """Restriction of the partial Bernoulli action to the invariant set
    generated by a random nonempty family of subsets containing 1."""
    bern = bernoulli_partial(group)
    pts = list(bern.carrier)
    k = rng.randint(1, max(1, len(pts) // 2))
    seeds = rng.sample(pts, k)
    return restrict_invariant(bern, saturate(bern, seeds))


# ---------------------------------------------------------------------------
# sections and convolution


def _check_section(bundle: FiniteFellBundle, y: dict):
    for g, v in y.items():
        if len(v) != bundle.dim:
            raise DimensionError("section value has the wrong length")
        if not bundle.in_fiber(g, v):
            raise PreconditionError(f"section value at {bundle.group.label(g)} is not in its fiber")


def j_section(bundle: FiniteFellBundle, g, b) -> dict:
    out = {h: vzero(bundle.dim) for h in bundle.group.elements()}
    out[g] = tuple(b)
    _check_section(bundle, out)
    return out


def section_from_vector(bundle: FiniteFellBundle, x) -> dict:
    out = {}
    for g, idx in bundle.fibers.items():
        allowed = set(idx)
        out[g] = tuple(c if k in allowed else ZERO for k, c in enumerate(x))
    return out


def section_to_vector(bundle: FiniteFellBundle, y: dict) -> tuple:
    acc = vzero(bundle.dim)
    for v in y.values():
        acc = vadd(acc, v)
    return acc


def convolve(bundle: FiniteFellBundle, y: dict, z: dict) -> dict:
    """(y * z)_g = sum_h y_h z_(h^-1 g)."""
    _check_section(bundle, y)
    _check_section(bundle, z)
    G = bundle.group
    zero = vzero(bundle.dim)
    out = {}
    for g in G.elements():
        acc = zero
        for h in G.elements():
            a = y.get(h, zero)
            b = z.get(G.mul(G.inverse(h), g), zero)
            if any(a) and any(b):
                acc = vadd(acc, bundle.fiber_product(a, b))
        out[g] = acc
    return out


def section_star(bundle: FiniteFellBundle, y: dict) -> dict:
    """(y*)_g = (y_(g^-1))*."""
    _check_section(bundle, y)
    G = bundle.group
    zero = vzero(bundle.dim)
    return {g: bundle.star(y.get(G.inverse(g), zero)) for g in G.elements()}


def convolution_algebra(bundle: FiniteFellBundle) -> FinDimStarAlgebra:
    """Structure constants of C_c(B) computed by convolving basis sections."""
    n = bundle.dim
    basis = []
    for g in bundle.group.elements():
        for i in bundle.fibers[g]:
            basis.append((i, j_section(bundle, g, unit_vector(n, i))))
    basis.sort()
    products = []
    for _, y in basis:
        row = []
        for _, z in basis:
            v = section_to_vector(bundle, convolve(bundle, y, z))
            row.append(tuple((k, c) for k, c in enumerate(v) if c))
        products.append(row)
    star = []
    for _, y in basis:
        v = section_to_vector(bundle, section_star(bundle, y))
        star.append(tuple((k, c) for k, c in enumerate(v) if c))
    return FinDimStarAlgebra(n, products, star, bundle.ambient.unit, bundle.ambient.labels)


def random_section(bundle: FiniteFellBundle, rng: random.Random, spread: int = 3) -> dict:
    def coef():
        return GaussianRational(rng.randint(-spread, spread), rng.randint(-spread, spread))

    out = {}
    for g, idx in bundle.fibers.items():
        v = [ZERO] * bundle.dim
        for i in idx:
            v[i] = coef()
        out[g] = tuple(v)
    return out


# ---------------------------------------------------------------------------
# regular representation and Fourier coefficients


class RegularRepresentation:
    """lambda_g(b) acting on the direct sum of the fibers, j_h(c) -> j_gh(bc)."""

    def __init__(self, bundle: FiniteFellBundle):
        self.bundle = bundle
        n = bundle.dim
        self._basis_mats = []
        for i in range(n):
            b = unit_vector(n, i)
            cols = [bundle.fiber_product(b, unit_vector(n, j)) for j in range(n)]
            self._basis_mats.append(ExactMatrix(n, n, [cols[j][r] for r in range(n) for j in range(n)]))
        self._flat = [m.flat() for m in self._basis_mats]
        self._sparse = [tuple((k, a) for k, a in enumerate(f) if a) for f in self._flat]
        self._kernel = nullspace([tuple(f[k] for f in self._flat) for k in range(n * n)], n)
        # augmented rows (lambda(e_i) | e_i) reduce an operator to its preimage
        self._solver = Subspace(n * n + n, [f + unit_vector(n, i) for i, f in enumerate(self._flat)])

    def lam(self, g, b) -> ExactMatrix:
        if not self.bundle.in_fiber(g, b):
            raise PreconditionError("lambda_g needs an element of B_g")
        return self.of_vector(b)

    def of_vector(self, x) -> ExactMatrix:
        n = self.bundle.dim
        acc = [ZERO] * (n * n)
        for c, items in zip(x, self._sparse):
            if c:
                for k, a in items:
                    acc[k] = acc[k] + c * a
        return ExactMatrix(n, n, acc)

    def of_section(self, y: dict) -> ExactMatrix:
        return self.of_vector(section_to_vector(self.bundle, y))

    def pairing(self, y, z) -> tuple:
        """<y, z> = sum_g (y_g)* z_g, an element of B_1."""
        B = self.bundle
        acc = vzero(B.dim)
        for g in B.group.elements():
            a = tuple(c if B.owner.get(k) == g else ZERO for k, c in enumerate(y))
            b = tuple(c if B.owner.get(k) == g else ZERO for k, c in enumerate(z))
            if any(a) and any(b):
                acc = vadd(acc, B.fiber_product(B.star(a), b))
        return acc

    def validate(self):
        B = self.bundle
        G = B.group
        n = B.dim
        es = [unit_vector(n, i) for i in range(n)]
        for g in G.elements():
            for b in B.fiber_basis(g):
                lb = self.lam(g, b)
                for h in G.elements():
                    for c in B.fiber_basis(h):
                        if lb.matmul(self.lam(h, c)) != self.lam(G.mul(g, h), B.fiber_product(b, c)):
                            raise ConsistencyError("lambda_g(b) lambda_h(c) = lambda_gh(bc) fails")
                lbs = self.lam(G.inverse(g), B.star(b))
                for y in es:
                    for z in es:
                        if self.pairing(lb.apply(y), z) != self.pairing(y, lbs.apply(z)):
                            raise ConsistencyError("adjoint of lambda_g(b) is not lambda_(g^-1)(b*)")
        return True

    def preimage(self, z: ExactMatrix) -> tuple:
        """The y with lambda(y) = z; z must lie in the span of the lambda's."""
        n = self.bundle.dim
        if z.shape != (n, n):
            raise DimensionError("operator has the wrong size")
        if self._kernel:
            raise PreconditionError("regular representation is not injective; Fourier coefficients are ambiguous")
        probe = self._solver.residual(z.flat() + vzero(n))
        if any(probe[:n * n]):
            raise PreconditionError("operator is not in the range of the regular representation")
        y = tuple(-a for a in probe[n * n:])
        unit = self.bundle.ambient.unit
        if unit is not None and self.bundle.in_fiber(self.bundle.group.unit, unit):
            # applying z to j_1(1) must give the same section
            if z.apply(unit) != y:
                raise ConsistencyError("two routes to the Fourier coefficients disagree")
        return y


def fourier(reg: RegularRepresentation, z: ExactMatrix, g) -> tuple:
    """E_g(z) as a vector of B_g."""
    y = reg.preimage(z)
    return section_from_vector(reg.bundle, y)[g]


def fourier_all(reg: RegularRepresentation, z: ExactMatrix) -> dict:
    y = reg.preimage(z)
    return section_from_vector(reg.bundle, y)


def check_matrix_coefficients(reg: RegularRepresentation, z: ExactMatrix):
    """<j_g(b), z j_h(c)> = b* E_(g h^-1)(z) c on all basis elements."""
    B = reg.bundle
    G = B.group
    E = fourier_all(reg, z)
    for g in G.elements():
        for b in B.fiber_basis(g):
            for h in G.elements():
                ghi = G.mul(g, G.inverse(h))
                for c in B.fiber_basis(h):
                    lhs = reg.pairing(b, z.apply(c))
                    rhs = B.fiber_product(B.fiber_product(B.star(b), E[ghi]), c)
                    if lhs != rhs:
                        raise ConsistencyError("matrix coefficient identity fails")
    return True


@dataclass
class ParsevalResult:
    holds: bool
    lhs: tuple
    rhs: tuple


def parseval(reg: RegularRepresentation, y: dict) -> ParsevalResult:
    """E_1(z* z) against sum_g E_g(z)* E_g(z) for z = lambda(y).

    The left side is computed from the operator product, the right side
    from the Fourier coefficients of z itself."""
    B = reg.bundle
    G = B.group
    z = reg.of_section(y)
    zs = reg.of_section(section_star(B, y))
    lhs = fourier(reg, zs.matmul(z), G.unit)
    coeffs = fourier_all(reg, z)
    rhs = vzero(B.dim)
    for g in G.elements():
        e = coeffs[g]
        if any(e):
            rhs = vadd(rhs, B.ambient.mul(B.star(e), e))
    return ParsevalResult(lhs == rhs, lhs, rhs)


def bessel_complement(reg: RegularRepresentation, y: dict, subset) -> bool:
    """E_1(z*z) - sum_(g in K) E_g* E_g equals the sum over the complement of K."""
    B = reg.bundle
    G = B.group
    z = reg.of_section(y)
    zs = reg.of_section(section_star(B, y))
    total = fourier(reg, zs.matmul(z), G.unit)
    coeffs = fourier_all(reg, z)
    inside = vzero(B.dim)
    outside = vzero(B.dim)
    for g in G.elements():
        sq = B.fiber_product(B.star(coeffs[g]), coeffs[g])
        if g in subset:
            inside = vadd(inside, sq)
        else:
            outside = vadd(outside, sq)
    return vsub(total, inside) == outside


# ---------------------------------------------------------------------------
# gradings, conditional expectations, saturation


@dataclass
class GradingVerdict:
    ok: bool
    reason: str | None = None
    witness: dict | None = None
    faithful: bool | None = None
    faithfulness_route: str | None = None
    checks: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"ok": self.ok, "checks": list(self.checks)}
        if self.reason is not None:
            out["reason"] = self.reason
        if self.witness is not None:
            out["witness"] = self.witness
        if self.faithful is not None:
            out["faithful"] = self.faithful
        if self.faithfulness_route is not None:
            out["faithfulness_route"] = self.faithfulness_route
        return out


def _is_star_regular(alg: FinDimStarAlgebra) -> bool:
    """Left multiplication by x* is the conjugate transpose of left
    multiplication by x, for every basis vector x."""
    for i in range(alg.dim):
        e = alg.basis_vector(i)
        if left_regular_matrix(alg, alg.star(e)) != left_regular_matrix(alg, e).adjoint():
            return False
    return True


def topological_grading_check(alg: FinDimStarAlgebra, group, subspaces: dict, F: ExactMatrix) -> GradingVerdict:
    """Check that subspaces form a grading with F a conditional expectation onto B_1.

    F acts on coordinate vectors.  Faithfulness of F is decided when the
    trace of the left regular representation is a faithful positive
    functional: then F is faithful iff x -> tr(L(F(x* x))) is a positive
    definite Hermitian form, which exact elimination decides.
    """
    n = alg.dim
    G = group
    one = G.unit
    checks = []
    if F.shape != (n, n):
        raise DimensionError("F must be dim x dim")
    b1 = subspaces.get(one, Subspace(n))
    for g, s in subspaces.items():
        for v in s.basis:
            img = F.apply(v)
            if g == one and img != v:
                raise PreconditionError("F is not the identity on B_1")
            if g != one and any(img):
                raise PreconditionError(f"F does not vanish on B_{G.label(g)}")
    total = Subspace(n)
    for s in subspaces.values():
        total = total.sum(s)
    if sum(s.dim for s in subspaces.values()) != total.dim:
        overlap = None
        seen = Subspace(n)
        for g, s in subspaces.items():
            meet = seen.intersection(s)
            if meet.dim:
                overlap = G.label(g)
                break
            seen = seen.sum(s)
        return GradingVerdict(False, "the subspaces are not independent", {"g": overlap})
    checks.append("independent")
    if total.dim != n:
        return GradingVerdict(False, "the subspaces do not span the algebra")
    for g, s in subspaces.items():
        for h, t in subspaces.items():
            gh = G.mul(g, h)
            target = subspaces.get(gh, Subspace(n))
            for x in s.basis:
                for y in t.basis:
                    if not target.contains(alg.mul(x, y)):
                        return GradingVerdict(False, "B_g B_h is not inside B_gh",
                                              {"g": G.label(g), "h": G.label(h)})
        gi = G.inverse(g)
        for x in s.basis:
            if not subspaces.get(gi, Subspace(n)).contains(alg.star(x)):
                return GradingVerdict(False, "B_g* is not inside B_(g^-1)", {"g": G.label(g)})
    checks.append("graded")
    es = [alg.basis_vector(i) for i in range(n)]
    if F.matmul(F) != F:
        return GradingVerdict(False, "F is not idempotent")
    for x in es:
        if not b1.contains(F.apply(x)):
            return GradingVerdict(False, "F does not map into B_1")
        if F.apply(alg.star(x)) != alg.star(F.apply(x)):
            return GradingVerdict(False, "F does not commute with the involution")
        for a in b1.basis:
            if F.apply(alg.mul(a, x)) != alg.mul(a, F.apply(x)):
                return GradingVerdict(False, "F is not a left B_1-module map")
            if F.apply(alg.mul(x, a)) != alg.mul(F.apply(x), a):
                return GradingVerdict(False, "F is not a right B_1-module map")
    checks.append("conditional expectation")
    if not _is_star_regular(alg):
        return GradingVerdict(True, checks=checks, faithfulness_route="unchecked: no faithful trace available")
    traces = [sum((left_regular_matrix(alg, e)[i, i] for i in range(n)), ZERO) for e in es]
    form = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        si = alg.star(es[i])
        for j in range(n):
            fx = F.apply(alg.mul(si, es[j]))
            form[i][j] = sum((c * t for c, t in zip(fx, traces)), ZERO)
    psd, rank = hermitian_signature(ExactMatrix.from_rows(form))
    faithful = bool(psd and rank == n)
    checks.append("faithfulness decided")
    return GradingVerdict(True, checks=checks, faithful=faithful,
                          faithfulness_route="positive definiteness of the trace of F(x* x)")


def canonical_expectation(bundle: FiniteFellBundle) -> ExactMatrix:
    """Coordinate projection onto the unit fiber."""
    n = bundle.dim
    keep = set(bundle.fibers[bundle.group.unit])
    return ExactMatrix.diagonal([ONE if i in keep else ZERO for i in range(n)])


def bundle_grading_check(bundle: FiniteFellBundle) -> GradingVerdict:
    subs = {g: bundle.fiber_space(g) for g in bundle.group.elements()}
    verdict = topological_grading_check(bundle.ambient, bundle.group, subs, canonical_expectation(bundle))
    if verdict.faithful is not None:
        reg = RegularRepresentation(bundle)
        if verdict.faithful != (not reg._kernel):
            raise ConsistencyError("faithful expectation but the regular representation is not injective")
    return verdict


def _span_products(bundle: FiniteFellBundle, g, h) -> Subspace:
    out = Subspace(bundle.dim)
    for b in bundle.fiber_basis(g):
        for c in bundle.fiber_basis(h):
            out.add(bundle.fiber_product(b, c))
    return out


def saturation_predicates(bundle: FiniteFellBundle, length: LengthFunction | None = None) -> dict:
    G = bundle.group
    saturated = all(
        _span_products(bundle, g, h) == bundle.fiber_space(G.mul(g, h))
        for g in G.elements() for h in G.elements()
    )
    via_inverse = all(
        _span_products(bundle, g, G.inverse(g)) == bundle.fiber_space(G.unit) for g in G.elements()
    )
    if saturated != via_inverse:
        raise ConsistencyError("the two saturation tests disagree")
    out = {"saturated": saturated}
    if length is not None:
        out["semi_saturated"] = all(
            _span_products(bundle, g, h) == bundle.fiber_space(G.mul(g, h))
            for g in G.elements() for h in G.elements() if length.is_additive_pair(g, h)
        )
    return out


def positivity_check(bundle: FiniteFellBundle) -> dict:
    """b* b >= 0 for all b in every fiber, decided when B_1 has a basis of
    orthogonal projections (a function algebra): for each point the form
    b -> (b* b)(point) must be positive semidefinite."""
    B1 = bundle.fiber_basis(bundle.group.unit)
    alg = bundle.ambient
    for p in B1:
        if alg.star(p) != p or alg.mul(p, p) != p:
            return {"checked": False}
        for q in B1:
            if q != p and any(alg.mul(p, q)):
                return {"checked": False}
    idx = bundle.fibers[bundle.group.unit]
    for g in bundle.group.elements():
        basis = bundle.fiber_basis(g)
        m = len(basis)
        for point in idx:
            form = [[alg.mul(alg.star(basis[i]), basis[j])[point] for j in range(m)] for i in range(m)]
            if m and not hermitian_signature(ExactMatrix.from_rows(form))[0]:
                return {"checked": True, "positive": False, "g": bundle.group.label(g)}
    return {"checked": True, "positive": True}
