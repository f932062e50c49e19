"""Partial isometries on exact matrices: order, compatibility, joins, tameness.

Every predicate that has two textbook characterizations computes both and
raises `ConsistencyError` if they ever disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ConsistencyError, DimensionError, PreconditionError
from .exact import ExactMatrix


def _square(m: ExactMatrix, what: str = "matrix"):
    if not m.is_square():
        raise DimensionError(f"{what} must be square, got {m.rows}x{m.cols}")


def _same_shape(s: ExactMatrix, t: ExactMatrix):
    if s.shape != t.shape:
        raise DimensionError(f"shape mismatch {s.shape} vs {t.shape}")


def is_projection(m: ExactMatrix) -> bool:
    _square(m)
    return m == m.adjoint() and m.matmul(m) == m


def is_partial_isometry(s: ExactMatrix) -> bool:
    _square(s)
    direct = s.matmul(s.adjoint()).matmul(s) == s
    via_source = is_projection(s.adjoint().matmul(s))
    if direct != via_source:
        raise ConsistencyError("s s* s = s disagrees with s* s being a projection")
    return direct


def initial_projection(s: ExactMatrix) -> ExactMatrix:
    return s.adjoint().matmul(s)


def final_projection(s: ExactMatrix) -> ExactMatrix:
    return s.matmul(s.adjoint())


def require_partial_isometry(s: ExactMatrix, name: str = "s"):
    if not is_partial_isometry(s):
        raise PreconditionError(f"{name} is not a partial isometry", witness=s.to_json())


def projection_join(p: ExactMatrix, q: ExactMatrix) -> ExactMatrix:
    """p + q - pq for commuting projections."""
    if not p.commutes_with(q):
        raise PreconditionError("projections do not commute")
    return p + q - p.matmul(q)


def piso_leq(s: ExactMatrix, t: ExactMatrix) -> bool:
    """s is dominated by t, i.e. t s* s = s."""
    _same_shape(s, t)
    require_partial_isometry(s, "s")
    require_partial_isometry(t, "t")
    sa = s.adjoint()
    first = t.matmul(sa).matmul(s) == s
    second = t.matmul(sa) == s.matmul(sa)
    third = sa.matmul(t) == sa.matmul(s)
    if not first == second == third:
        raise ConsistencyError("the characterizations of the order on partial isometries disagree")
    return first


def compatible(s: ExactMatrix, t: ExactMatrix) -> bool:
    """s t* t = t s* s and t t* s = s s* t."""
    _same_shape(s, t)
    require_partial_isometry(s, "s")
    require_partial_isometry(t, "t")
    ss, tt = initial_projection(s), initial_projection(t)
    fs, ft = final_projection(s), final_projection(t)
    ok = s.matmul(tt) == t.matmul(ss) and ft.matmul(s) == fs.matmul(t)
    if ok:
        st = s.matmul(t.adjoint())
        s_t = s.adjoint().matmul(t)
        consequences = (
            fs.commutes_with(ft)
            and ss.commutes_with(tt)
            and is_projection(st)
            and is_projection(s_t)
            and st == t.matmul(s.adjoint()) == fs.matmul(ft)
            and s_t == t.adjoint().matmul(s) == ss.matmul(tt)
            and t.matmul(ss) == ft.matmul(s)
        )
        if not consequences:
            raise ConsistencyError("compatible pair violates the consequences of compatibility")
    return ok


def piso_join(s: ExactMatrix, t: ExactMatrix) -> ExactMatrix:
    """Least partial isometry dominating two compatible ones: s + t - s t* t."""
    if not compatible(s, t):
        raise PreconditionError("partial isometries are not compatible")
    u = s + t - s.matmul(initial_projection(t))
    if u != s + t - t.matmul(initial_projection(s)):
        raise ConsistencyError("the two expressions for the join differ")
    if not is_partial_isometry(u):
        raise ConsistencyError("join is not a partial isometry")
    if not (piso_leq(s, u) and piso_leq(t, u)):
        raise ConsistencyError("join does not dominate its arguments")
    if initial_projection(u) != projection_join(initial_projection(s), initial_projection(t)):
        raise ConsistencyError("initial projection of the join is not the join of initial projections")
    if final_projection(u) != projection_join(final_projection(s), final_projection(t)):
        raise ConsistencyError("final projection of the join is not the join of final projections")
    return u


def join_all(items: Sequence[ExactMatrix]) -> ExactMatrix:
    """Join of a finite, pairwise compatible, nonempty family."""
    items = list(items)
    if not items:
        raise PreconditionError("join of an empty family needs an ambient size")
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if not compatible(items[i], items[j]):
                raise PreconditionError(f"members {i} and {j} are not compatible", witness=[i, j])
    acc = items[0]
    for x in items[1:]:
        acc = piso_join(acc, x)
    return acc


def product_is_partial_isometry(s: ExactMatrix, t: ExactMatrix) -> bool:
    """Decides whether s t is a partial isometry via commuting of s*s and tt*."""
    require_partial_isometry(s, "s")
    require_partial_isometry(t, "t")
    by_commutation = initial_projection(s).commutes_with(final_projection(t))
    if by_commutation != is_partial_isometry(s.matmul(t)):
        raise ConsistencyError("product test disagrees with the commutation criterion")
    return by_commutation


# ---------------------------------------------------------------------------
# generated star-semigroups and tameness


def _letter_str(index: int, starred: bool) -> str:
    return f"s{index}*" if starred else f"s{index}"


def _closure_with_words(gens: Sequence[ExactMatrix], max_word_len: int) -> dict:
    """Map every product of at most max_word_len letters to a shortest word."""
    if max_word_len < 1:
        raise PreconditionError("max_word_len must be at least 1")
    letters = []
    for i, s in enumerate(gens):
        letters.append(((i, False), s))
        letters.append(((i, True), s.adjoint()))
    if gens:
        shape = gens[0].shape
        for s in gens:
            if s.shape != shape or not s.is_square():
                raise DimensionError("generators must be square and of one shape")
    seen: dict = {}
    frontier = []
    for word, m in letters:
        if m not in seen:
            seen[m] = (word,)
            frontier.append(m)
    for _ in range(max_word_len - 1):
        nxt = []
        for m in frontier:
            base = seen[m]
            for word, g in letters:
                p = m.matmul(g)
                if p not in seen:
                    seen[p] = base + (word,)
                    nxt.append(p)
        if not nxt:
            break
        frontier = nxt
    return seen


def generate_star_semigroup(gens: Iterable[ExactMatrix], max_word_len: int) -> list:
    """All products of at most max_word_len factors from gens and their adjoints.

    Returned in canonical order (lexicographic on flattened entries).
    """
    gens = sorted(set(gens), key=ExactMatrix.sort_key)
    seen = _closure_with_words(gens, max_word_len) if gens else {}
    return sorted(seen, key=ExactMatrix.sort_key)


@dataclass
class TameVerdict:
    tame_up_to_bound: bool
    bound: int
    size: int
    witness_word: tuple | None = None
    witness_matrix: ExactMatrix | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "tame_up_to_bound": self.tame_up_to_bound,
            "bound": self.bound,
            "semigroup_size": self.size,
        }
        if self.witness_word is not None:
            out["witness_word"] = [_letter_str(*w) for w in self.witness_word]
            out["witness_matrix"] = self.witness_matrix.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def is_tame(gens: Sequence[ExactMatrix], max_word_len: int) -> TameVerdict:
    """Bounded tameness check for a list of partial isometries.

    Every product of length at most max_word_len must be a partial
    isometry.  On success the idempotents found must commute pairwise; if
    two do not, their product is a longer word that is not a partial
    isometry and is reported as the witness.
    """
    gens = list(gens)
    for i, s in enumerate(gens):
        require_partial_isometry(s, f"generator {i}")
    if not gens:
        return TameVerdict(True, max_word_len, 0)
    seen = _closure_with_words(gens, max_word_len)
    ordered = sorted(seen, key=lambda m: (len(seen[m]), m.sort_key()))
    for m in ordered:
        if not is_partial_isometry(m):
            return TameVerdict(False, max_word_len, len(seen), seen[m], m)
    idempotents = [m for m in ordered if m.matmul(m) == m]
    for e in idempotents:
        if e != e.adjoint():
            raise ConsistencyError("idempotent partial isometry that is not self-adjoint")
    for a in range(len(idempotents)):
        for b in range(a + 1, len(idempotents)):
            p, q = idempotents[a], idempotents[b]
            if not p.commutes_with(q):
                prod = p.matmul(q)
                if is_partial_isometry(prod):
                    raise ConsistencyError("non-commuting projections with partial isometry product")
                return TameVerdict(
                    False,
                    max_word_len,
                    len(seen),
                    seen[p] + seen[q],
                    prod,
                    ["witness found among products of two idempotents"],
                )
    return TameVerdict(True, max_word_len, len(seen))
