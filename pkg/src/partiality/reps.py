"""Partial representations of groups by exact matrices.

A finite-group representation stores every value; a free-group one stores
generator images and evaluates a reduced word as the product along its
letters, which is the semi-saturated extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .actions import FinitePartialAction
from .algebras import (
    AlgPartialAction,
    CrossedProduct,
    MatrixSubalgebra,
    matrix_span_closure,
)
from .errors import ConsistencyError, DimensionError, FormatError, PreconditionError
from .exact import ExactMatrix, Subspace
from .groups import FiniteGroup, FreeWord, group_from_json, reduced_words
from .pisos import is_partial_isometry, is_projection, is_tame, piso_leq


class PartialRep:
    """g -> u_g over a finite group; `unit` is u_1's target (identity unless compressed)."""

    def __init__(self, group: FiniteGroup, values: dict, unit: ExactMatrix | None = None,
                 degenerate: bool = False):
        self.group = group
        self.values = dict(values)
        missing = [group.label(g) for g in group.elements() if g not in self.values]
        if missing:
            raise FormatError(f"missing values for {missing}")
        shapes = {m.shape for m in self.values.values()}
        if len(shapes) != 1:
            raise DimensionError("all values must have one shape")
        self.size = self.values[group.unit].rows
        if self.values[group.unit].cols != self.size:
            raise DimensionError("values must be square")
        self.unit = unit if unit is not None else ExactMatrix.identity(self.size)
        self.degenerate = degenerate

    def elements(self):
        return list(self.group.elements())

    def u(self, g) -> ExactMatrix:
        return self.values[g]

    def e(self, g) -> ExactMatrix:
        return self.values[g].matmul(self.values[self.group.inverse(g)])

    def mul(self, g, h):
        return self.group.mul(g, h)

    def inv(self, g):
        return self.group.inverse(g)

    def name(self, g) -> str:
        return self.group.label(g)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "values": {self.group.label(g): self.values[g].to_json() for g in self.group.elements()},
        }


class FreePartialRep:
    """Partial representation of a free group given by generator images."""

    def __init__(self, generators: dict, word_bound: int = 3):
        if not generators:
            raise FormatError("at least one generator is needed")
        self.generators = dict(generators)
        self.alphabet = tuple(sorted(self.generators))
        shapes = {m.shape for m in self.generators.values()}
        if len(shapes) != 1:
            raise DimensionError("generator images must share one shape")
        self.size = next(iter(shapes))[0]
        self.unit = ExactMatrix.identity(self.size)
        self.word_bound = word_bound
        self.degenerate = False
        self._cache = {}

    def elements(self):
        return reduced_words(self.alphabet, self.word_bound)

    def u(self, w: FreeWord) -> ExactMatrix:
        m = self._cache.get(w)
        if m is None:
            m = self.unit
            for name, sign in w.letters:
                g = self.generators[name]
                m = m.matmul(g if sign == 1 else g.adjoint())
            self._cache[w] = m
        return m

    def e(self, w: FreeWord) -> ExactMatrix:
        return self.u(w).matmul(self.u(w.inverse()))

    def mul(self, g, h):
        return g * h

    def inv(self, g):
        return g.inverse()

    def name(self, g) -> str:
        return str(g)

    @property
    def group(self):
        return None

    def word(self, text: str) -> FreeWord:
        from .groups import parse_word
        return parse_word(self.alphabet, text)

    def to_json(self) -> dict:
        return {"free": True, "generators": {k: v.to_json() for k, v in self.generators.items()}}


def prep_from_json(data, word_bound: int = 3):
    if not isinstance(data, dict):
        raise FormatError("partial representation JSON must be an object")
    if data.get("free"):
        gens = data.get("generators")
        if not isinstance(gens, dict):
            raise FormatError("free partial representation needs generators")
        return FreePartialRep({k: ExactMatrix.from_json(v) for k, v in gens.items()}, word_bound)
    if "group" not in data or "values" not in data:
        raise FormatError("partial representation JSON needs group and values")
    group = group_from_json(data["group"])
    vals = {group.parse(k): ExactMatrix.from_json(v) for k, v in data["values"].items()}
    return PartialRep(group, vals)


@dataclass
class PrepVerdict:
    ok: bool
    axiom: str | None = None
    witness: dict | None = None
    bound: int | None = None
    derived: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"ok": self.ok, "derived_properties_checked": list(self.derived)}
        if self.bound is not None:
            out["word_bound"] = self.bound
        if not self.ok:
            out["axiom"] = self.axiom
            out["witness"] = self.witness
        return out


DERIVED_PROPERTIES = (
    "values are partial isometries",
    "u_g e_h = e_gh u_g",
    "e_g e_h = e_h e_g",
    "u_g u_h = e_g u_gh",
    "left-invertible u_h gives u_g u_h = u_gh",
    "u_gh = u_g u_h iff e_gh = e_gh e_g",
    "axioms iff u_g u_h is dominated by u_gh",
    "range is tame up to the bound",
)


def _axiom_failure(r, pairs):
    for g, h in pairs:
        ug, uh = r.u(g), r.u(h)
        gi, hi = r.inv(g), r.inv(h)
        gh = r.mul(g, h)
        if ug.matmul(uh).matmul(r.u(hi)) != r.u(gh).matmul(r.u(hi)):
            return "u_g u_h u_(h^-1) = u_gh u_(h^-1)", {"g": r.name(g), "h": r.name(h)}
        if r.u(gi).matmul(ug).matmul(uh) != r.u(gi).matmul(r.u(gh)):
            return "u_(g^-1) u_g u_h = u_(g^-1) u_gh", {"g": r.name(g), "h": r.name(h)}
    return None


def _pairs(r):
    elems = r.elements()
    return [(g, h) for g in elems for h in elems]


def _identity_of(r):
    if isinstance(r, FreePartialRep):
        return FreeWord.identity(r.alphabet)
    return r.group.unit


def validate_prep(r, word_bound: int | None = None) -> PrepVerdict:
    """Check the partial representation axioms and, when they hold, the
    consequences that every partial representation must satisfy.

    For a free group every pair of reduced words of length at most the
    bound is examined.
    """
    bound = word_bound if word_bound is not None else getattr(r, "word_bound", None)
    if isinstance(r, FreePartialRep) and word_bound is not None:
        r.word_bound = word_bound
    pairs = _pairs(r)
    one = _identity_of(r)
    elems = r.elements()
    reported_bound = bound if isinstance(r, FreePartialRep) else None
    if r.u(one) != r.unit:
        return PrepVerdict(False, "u_1 = 1", {"g": r.name(one)}, reported_bound)
    for g in elems:
        if r.u(r.inv(g)) != r.u(g).adjoint():
            return PrepVerdict(False, "u_(g^-1) = u_g*", {"g": r.name(g)}, reported_bound)
    failure = _axiom_failure(r, pairs)
    by_inequality = _order_characterization(r, pairs)
    if (failure is None) != by_inequality:
        raise ConsistencyError("the axioms and the order characterization disagree")
    if failure is not None:
        return PrepVerdict(False, failure[0], failure[1], reported_bound)
    _check_consequences(r, pairs)
    if not isinstance(r, FreePartialRep):
        distinct = sorted(set(r.values.values()), key=ExactMatrix.sort_key)
        if not r.degenerate and not is_tame(distinct, 3).tame_up_to_bound:
            raise ConsistencyError("range of a partial representation is not tame")
    return PrepVerdict(True, bound=reported_bound, derived=list(DERIVED_PROPERTIES))


def _order_characterization(r, pairs) -> bool:
    """u_g u_h is dominated by u_gh for all pairs (given u_1 = 1 and adjoints)."""
    for g, h in pairs:
        p = r.u(g).matmul(r.u(h))
        if not is_partial_isometry(p):
            return False
        if not is_partial_isometry(r.u(r.mul(g, h))):
            return False
        if not piso_leq(p, r.u(r.mul(g, h))):
            return False
    return True


def _check_consequences(r, pairs):
    def fail(name, g, h=None):
        w = {"g": r.name(g)}
        if h is not None:
            w["h"] = r.name(h)
        raise ConsistencyError(f"validated partial representation violates {name}: {w}")

    for g in r.elements():
        ug = r.u(g)
        if ug.matmul(r.u(r.inv(g))).matmul(ug) != ug:
            fail("u_g u_(g^-1) u_g = u_g", g)
    for g, h in pairs:
        gh = r.mul(g, h)
        ug, uh = r.u(g), r.u(h)
        eg, eh, egh = r.e(g), r.e(h), r.e(gh)
        if ug.matmul(eh) != egh.matmul(ug):
            fail("u_g e_h = e_gh u_g", g, h)
        if eg.matmul(eh) != eh.matmul(eg):
            fail("e_g e_h = e_h e_g", g, h)
        prod = ug.matmul(uh)
        if prod != eg.matmul(r.u(gh)):
            fail("u_g u_h = e_g u_gh", g, h)
        if uh.adjoint().matmul(uh) == r.unit and prod != r.u(gh):
            fail("left-invertible u_h gives u_g u_h = u_gh", g, h)
        if (r.u(gh) == prod) != (egh == egh.matmul(eg)):
            fail("u_gh = u_g u_h iff e_gh = e_gh e_g", g, h)


def prep_from_tame(gens: Sequence[ExactMatrix], alphabet: Sequence[str] | None = None,
                   bound: int = 6, word_bound: int = 3) -> FreePartialRep:
    """Semi-saturated partial representation of the free group on a tame set."""
    gens = list(gens)
    if alphabet is None:
        alphabet = [chr(ord("a") + i) for i in range(len(gens))]
    alphabet = list(alphabet)
    if len(alphabet) != len(gens):
        raise FormatError("one letter per generator is needed")
    verdict = is_tame(gens, bound)
    if not verdict.tame_up_to_bound:
        raise PreconditionError("generators are not tame", witness=verdict.to_json())
    rep = FreePartialRep(dict(zip(alphabet, gens)), word_bound)
    v = validate_prep(rep, word_bound)
    if not v.ok:
        raise PreconditionError(
            f"tameness up to {bound} does not suffice for the axioms up to {word_bound}", witness=v.to_json()
        )
    for g in rep.elements():
        for h in rep.elements():
            if len(g * h) == len(g) + len(h) and rep.u(g).matmul(rep.u(h)) != rep.u(g * h):
                raise ConsistencyError("constructed representation is not semi-saturated")
    return rep


def compress(v: PartialRep, p: ExactMatrix) -> PartialRep:
    """g -> p v_g p, a partial representation on the corner cut down by p."""
    if not is_projection(p):
        raise PreconditionError("p is not a projection")
    G = v.group
    for g in G.elements():
        vg = v.u(g)
        if vg.adjoint().matmul(vg) != v.unit or vg.matmul(vg.adjoint()) != v.unit:
            raise PreconditionError("v is not a unitary representation", witness={"g": G.label(g)})
        q = vg.matmul(p).matmul(v.u(G.inverse(g)))
        if not q.commutes_with(p):
            raise PreconditionError("v_g p v_(g^-1) does not commute with p", witness={"g": G.label(g)})
    values = {g: p.matmul(v.u(g)).matmul(p) for g in G.elements()}
    rep = PartialRep(G, values, unit=p, degenerate=p.is_zero())
    verdict = validate_prep(rep)
    if not verdict.ok:
        raise ConsistencyError(f"compression is not a partial representation: {verdict.axiom}")
    return rep


@dataclass
class InducedSystem:
    rep: PartialRep
    subalgebra: MatrixSubalgebra
    action: AlgPartialAction

    def spectral_action(self) -> FinitePartialAction:
        """The partial action on minimal projections of the commutative algebra,
        each labelled by the set {g : e_g fixes it}."""
        r = self.rep
        G = r.group
        elems = list(G.elements())
        minimal = {}
        for mask in range(1 << len(elems)):
            omega = frozenset(g for i, g in enumerate(elems) if mask >> i & 1)
            m = r.unit
            for g in elems:
                m = m.matmul(r.e(g) if g in omega else r.unit - r.e(g))
            if not m.is_zero():
                minimal[omega] = m
        by_matrix = {m: w for w, m in minimal.items()}
        domains = {g: frozenset(w for w in minimal if g in w) for g in elems}
        maps = {}
        for g in elems:
            gi = G.inverse(g)
            maps[g] = {}
            for w in domains[gi]:
                img = r.u(g).matmul(minimal[w]).matmul(r.u(gi))
                if img not in by_matrix:
                    raise ConsistencyError("conjugate of a minimal projection is not minimal")
                maps[g][w] = by_matrix[img]
        return FinitePartialAction(G, list(minimal), domains, maps)


def induced_system(r: PartialRep) -> InducedSystem:
    """A = algebra generated by the e_g, D_g = A e_g, theta_g(a) = u_g a u_(g^-1)."""
    v = validate_prep(r)
    if not v.ok:
        raise PreconditionError(f"not a partial representation: {v.axiom}", witness=v.witness)
    G = r.group
    if r.unit.is_zero():
        basis = []
    else:
        basis = matrix_span_closure([r.e(g) for g in G.elements()], include_identity=False)
    sub = MatrixSubalgebra(basis) if basis else None
    if sub is None:
        raise PreconditionError("the induced algebra is zero (degenerate representation)")
    alg = sub.algebra
    n = alg.dim
    domains = {}
    for g in G.elements():
        domains[g] = Subspace(n, [sub.coords(m.matmul(r.e(g))) for m in sub.matrices])
    maps = {}
    for g in G.elements():
        gi = G.inverse(g)
        maps[g] = [
            sub.coords(r.u(g).matmul(sub.to_matrix(a)).matmul(r.u(gi))) for a in domains[gi].basis
        ]
    act = AlgPartialAction(G, alg, domains, maps)
    act.validate()
    if not alg.is_commutative():
        raise ConsistencyError("algebra generated by the e_g is not commutative")
    return InducedSystem(r, sub, act)


# ---------------------------------------------------------------------------
# covariant representations


@dataclass
class CovariantVerdict:
    ok: bool
    reason: str | None = None
    witness: dict | None = None
    pi_injective: bool | None = None
    integrated_injective: bool | None = None
    graded_target: bool | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        for key in ("reason", "witness", "pi_injective", "integrated_injective", "graded_target"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


def _combine(mats: Sequence[ExactMatrix], coeffs, size: int) -> ExactMatrix:
    acc = ExactMatrix.zero(size)
    for c, m in zip(coeffs, mats):
        if c:
            acc = acc + m.scale(c)
    return acc


def _matrix_rank(mats: Sequence[ExactMatrix], size: int) -> int:
    return Subspace(size * size, [m.flat() for m in mats]).dim


def covariant_validate(pi: Sequence[ExactMatrix], u: PartialRep, action: AlgPartialAction) -> CovariantVerdict:
    alg = action.algebra
    G = action.group
    pi = list(pi)
    if len(pi) != alg.dim:
        raise DimensionError("pi needs one matrix per basis vector of the algebra")
    size = u.size
    if any(m.shape != (size, size) for m in pi):
        raise DimensionError("pi and u must act on the same space")
    for i in range(alg.dim):
        ei = alg.basis_vector(i)
        if _combine(pi, alg.star(ei), size) != pi[i].adjoint():
            return CovariantVerdict(False, "pi(a*) = pi(a)*", {"basis": alg.labels[i]})
        for j in range(alg.dim):
            prod = _combine(pi, alg.mul(ei, alg.basis_vector(j)), size)
            if prod != pi[i].matmul(pi[j]):
                return CovariantVerdict(False, "pi(ab) = pi(a) pi(b)", {"basis": [alg.labels[i], alg.labels[j]]})
    v = validate_prep(u)
    if not v.ok:
        return CovariantVerdict(False, f"u is not a partial representation: {v.axiom}", v.witness)
    for g in G.elements():
        gi = G.inverse(g)
        for a in action.domain(gi).basis:
            lhs = u.u(g).matmul(_combine(pi, a, size)).matmul(u.u(gi))
            rhs = _combine(pi, action.theta(g, a), size)
            if lhs != rhs:
                return CovariantVerdict(False, "u_g pi(a) u_(g^-1) = pi(theta_g(a))", {"g": G.label(g)})
    return CovariantVerdict(True)


def integrated_form(pi: Sequence[ExactMatrix], u: PartialRep, cp: CrossedProduct) -> tuple:
    """Images of the crossed-product basis under a delta_g -> pi(a) u_g.

    Multiplicativity and adjoints are checked on all basis pairs.  Returns
    (images, CovariantVerdict with the injectivity comparison)."""
    size = u.size
    images = [_combine(pi, a, size).matmul(u.u(g)) for g, a in cp.basis_info]
    C = cp.algebra
    for i in range(C.dim):
        if _combine(images, C.star(C.basis_vector(i)), size) != images[i].adjoint():
            raise ConsistencyError("integrated form does not preserve adjoints")
        for j in range(C.dim):
            expected = _combine(images, C.mul(C.basis_vector(i), C.basis_vector(j)), size)
            if images[i].matmul(images[j]) != expected:
                raise ConsistencyError("integrated form is not multiplicative")
    A = cp.action.algebra
    pi_inj = _matrix_rank(list(pi), size) == A.dim
    int_inj = _matrix_rank(images, size) == C.dim
    # the target is graded when the images of the fibers are independent
    per_fiber = 0
    for g, idx in cp.blocks.items():
        per_fiber += _matrix_rank([images[k] for k in idx], size)
    graded = per_fiber == _matrix_rank(images, size)
    if graded and pi_inj != int_inj:
        raise ConsistencyError("graded target but injectivity of pi and of the integrated form differ")
    if int_inj and not pi_inj:
        raise ConsistencyError("integrated form injective while pi is not")
    return images, CovariantVerdict(True, pi_injective=pi_inj, integrated_injective=int_inj, graded_target=graded)
