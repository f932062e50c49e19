"""Quasi-lattice ordered pairs (G, P), the semigroup of pairs v_m v_n*, and
combinatorial models of their spectra.

Three concrete pairs are supported:

* FreeQL: a free group with the free monoid of positive words (prefix order);
* GridQL(k): Z^k with N^k (coordinatewise order);
* ScarparoQL: the free group on {a, b} with P' = b P_2 u {1}.

The order is m <= n iff m^-1 n lies in P.
"""

from __future__ import annotations

import bisect
import itertools
import random
import re
from dataclasses import dataclass

from .errors import FormatError, PreconditionError, UnsupportedError
from .groups import FreeWord, parse_word, positive_words, reduced_words


class FreeQL:
    kind = "free"

    def __init__(self, alphabet=("a", "b")):
        self.alphabet = tuple(alphabet)
        self.one = FreeWord.identity(self.alphabet)

    name = property(lambda self: "FreeQL{" + ",".join(self.alphabet) + "}")

    def parse(self, text) -> FreeWord:
        if isinstance(text, FreeWord):
            return text
        return parse_word(self.alphabet, str(text))

    def label(self, x: FreeWord) -> str:
        if x.is_identity():
            return "1"
        if x.is_positive() and all(len(n) == 1 for n in self.alphabet):
            return "".join(x.names())
        return str(x)

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return x.inverse()

    def in_p(self, x) -> bool:
        return x.is_positive()

    def length(self, x) -> int:
        return len(x)

    def leq(self, x, y) -> bool:
        return self.in_p(self.mul(self.inv(x), y))

    def p_elements(self, depth: int) -> list:
        return positive_words(self.alphabet, depth)

    def group_elements(self, depth: int) -> list:
        return reduced_words(self.alphabet, depth)

    def join_raw(self, m, n):
        if m.is_prefix_of(n):
            return n
        if n.is_prefix_of(m):
            return m
        return None

    def sigma_tau(self, g):
        split = g.positive_negative_split()
        if split is None:
            return None
        mu, nu = split
        return FreeWord.positive(self.alphabet, mu), FreeWord.positive(self.alphabet, nu)


class GridQL:
    kind = "grid"

    def __init__(self, k: int = 1):
        if k < 1:
            raise FormatError("grid rank must be positive")
        self.k = k
        self.one = (0,) * k

    name = property(lambda self: f"GridQL({self.k})")

    def parse(self, text):
        if isinstance(text, tuple):
            vals = text
        elif isinstance(text, int) and not isinstance(text, bool):
            vals = (text,)
        else:
            s = str(text).strip()
            if s.startswith("(") and s.endswith(")"):
                s = s[1:-1]
            try:
                vals = tuple(int(p) for p in s.split(",") if p.strip())
            except ValueError as exc:
                raise FormatError(f"not a lattice point: {text!r}") from exc
        if len(vals) != self.k:
            raise FormatError(f"expected {self.k} coordinates, got {text!r}")
        return tuple(vals)

    def label(self, x) -> str:
        if self.k == 1:
            return str(x[0])
        return "(" + ",".join(str(v) for v in x) + ")"

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def in_p(self, x) -> bool:
        return all(a >= 0 for a in x)

    def length(self, x) -> int:
        return sum(abs(a) for a in x)

    def leq(self, x, y) -> bool:
        return all(a <= b for a, b in zip(x, y))

    def p_elements(self, depth: int) -> list:
        out = [p for p in itertools.product(range(depth + 1), repeat=self.k) if sum(p) <= depth]
        return sorted(out, key=lambda p: (sum(p), p))

    def group_elements(self, depth: int) -> list:
        out = [p for p in itertools.product(range(-depth, depth + 1), repeat=self.k)
               if sum(abs(a) for a in p) <= depth]
        return sorted(out, key=lambda p: (sum(abs(a) for a in p), p))

    def join_raw(self, m, n):
        return tuple(max(a, b) for a, b in zip(m, n))

    def sigma_tau(self, g):
        sigma = tuple(max(a, 0) for a in g)
        return sigma, tuple(s - a for s, a in zip(sigma, g))


class ScarparoQL:
    """P' = b P_2 u {1} inside the free group on {a, b}."""

    kind = "scarparo"

    def __init__(self):
        self.alphabet = ("a", "b")
        self.one = FreeWord.identity(self.alphabet)
        self.sigma_depth = 6

    name = "ScarparoQL"

    def parse(self, text) -> FreeWord:
        w = text if isinstance(text, FreeWord) else parse_word(self.alphabet, str(text))
        return w

    def label(self, x) -> str:
        if x.is_identity():
            return "1"
        if x.is_positive():
            return "".join(x.names())
        return str(x)

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return x.inverse()

    def in_p(self, x) -> bool:
        return x.is_identity() or (x.is_positive() and x.letters[0][0] == "b")

    def length(self, x) -> int:
        return len(x)

    def leq(self, x, y) -> bool:
        return self.in_p(self.mul(self.inv(x), y))

    def p_elements(self, depth: int) -> list:
        return [w for w in positive_words(self.alphabet, depth) if self.in_p(w)]

    def group_elements(self, depth: int) -> list:
        return reduced_words(self.alphabet, depth)

    @staticmethod
    def blocks(x) -> tuple:
        """Factorization of an element of P' into generators b a^n (as exponents n)."""
        out = []
        for name, _ in x.letters:
            if name == "b":
                out.append(0)
            else:
                out[-1] += 1
        return tuple(out)

    def join_raw(self, m, n):
        bm, bn = self.blocks(m), self.blocks(n)
        if bn[:len(bm)] == bm:
            return n
        if bm[:len(bn)] == bn:
            return m
        return None

    def sigma_tau(self, g):
        """Least upper bound of {g} among elements of length <= sigma_depth."""
        bounds = [c for c in self.p_elements(self.sigma_depth) if self.leq(g, c)]
        least = [c for c in bounds if all(self.leq(c, d) for d in bounds)]
        if not least:
            return None
        sigma = least[0]
        return sigma, self.mul(self.inv(g), sigma)


def structure_from_name(name: str):
    name = name.strip()
    m = re.match(r"^GridQL\((\d+)\)$", name)
    if m:
        return GridQL(int(m.group(1)))
    if name in ("ZN", "(Z,N)"):
        return GridQL(1)
    m = re.match(r"^FreeQL(?:\{([^}]*)\})?$", name)
    if m:
        letters = [x.strip() for x in (m.group(1) or "a,b").split(",") if x.strip()]
        return FreeQL(letters)
    if name in ("F2P2", "(F2,P2)"):
        return FreeQL(("a", "b"))
    if name in ("ScarparoQL", "Scarparo"):
        return ScarparoQL()
    raise FormatError(f"unknown quasi-lattice {name!r}")


def join(ql, m, n, depth: int | None = None):
    """m v n, verified to be a least upper bound among candidates of bounded length."""
    for x in (m, n):
        if not ql.in_p(x):
            raise PreconditionError(f"{ql.label(x)} is not in P")
    j = ql.join_raw(m, n)
    if depth is None:
        depth = max(ql.length(m), ql.length(n)) + 2
    candidates = ql.p_elements(depth)
    bounds = [c for c in candidates if ql.leq(m, c) and ql.leq(n, c)]
    if j is not None:
        if not (ql.leq(m, j) and ql.leq(n, j)):
            raise UnsupportedError("computed join is not an upper bound")
        if any(not ql.leq(j, c) for c in bounds):
            raise UnsupportedError("computed join is not below every bounded upper bound")
    else:
        least = [c for c in bounds if all(ql.leq(c, d) for d in bounds)]
        if least:
            raise UnsupportedError("a least upper bound exists among bounded candidates")
    return j


def sigma_tau(ql, g):
    st = ql.sigma_tau(g)
    if st is None:
        return None
    s, t = st
    if not (ql.in_p(s) and ql.in_p(t)) or ql.mul(s, ql.inv(t)) != g:
        raise UnsupportedError("decomposition g = sigma tau^-1 failed")
    return s, t


# ---------------------------------------------------------------------------
# the semigroup {v_m v_n*} u {0}


@dataclass(frozen=True)
class WHPair:
    m: object
    n: object


def wh_label(ql, x) -> str:
    if x is None:
        return "0"
    return f"v[{ql.label(x.m)}]v[{ql.label(x.n)}]*"


def wh_star(x):
    return None if x is None else WHPair(x.n, x.m)


def wh_mult(ql, x, y):
    """(m, n)(p, q) = (m x', q y') with n v p = n x' = p y', or 0 without a join."""
    if x is None or y is None:
        return None
    j = ql.join_raw(x.n, y.m)
    if j is None:
        return None
    xs = ql.mul(ql.inv(x.n), j)
    ys = ql.mul(ql.inv(y.m), j)
    return WHPair(ql.mul(x.m, xs), ql.mul(y.n, ys))


def wh_apply(ql, x, w):
    """Symbolic action on the basis vector e_w of l2(P): e_(n r) -> e_(m r)."""
    if x is None:
        return None
    r = ql.mul(ql.inv(x.n), w)
    if not ql.in_p(r):
        return None
    return ql.mul(x.m, r)


def prep_extend(ql, g):
    """g -> v_sigma(g) v_tau(g)* when g lies in P P^-1, else 0."""
    st = sigma_tau(ql, g)
    if st is None:
        return None
    return WHPair(*st)


def inverse_semigroup_check(ql, depth: int, samples: int = 500, seed: int = 0) -> dict:
    """x x* x = x, idempotents commute, and sampled associativity."""
    ps = ql.p_elements(depth)
    pairs = [WHPair(m, n) for m in ps for n in ps]
    for x in pairs:
        if wh_mult(ql, wh_mult(ql, x, wh_star(x)), x) != x:
            return {"ok": False, "law": "x x* x = x", "x": wh_label(ql, x)}
    idem = [WHPair(m, m) for m in ps]
    for e in idem:
        if wh_mult(ql, e, e) != e:
            return {"ok": False, "law": "(m,m) is idempotent", "x": wh_label(ql, e)}
        for f in idem:
            if wh_mult(ql, e, f) != wh_mult(ql, f, e):
                return {"ok": False, "law": "idempotents commute", "x": wh_label(ql, e), "y": wh_label(ql, f)}
    rng = random.Random(seed)
    for _ in range(samples):
        x, y, z = rng.choice(pairs), rng.choice(pairs), rng.choice(pairs)
        if wh_mult(ql, wh_mult(ql, x, y), z) != wh_mult(ql, x, wh_mult(ql, y, z)):
            return {"ok": False, "law": "associativity", "x": wh_label(ql, x)}
    return {"ok": True, "pairs": len(pairs)}


def ncc_check(ql, depth: int) -> bool:
    """(m,m)(n,n) = (m v n, m v n) or 0 on P elements up to depth."""
    ps = ql.p_elements(depth)
    for m in ps:
        for n in ps:
            j = ql.join_raw(m, n)
            expected = None if j is None else WHPair(j, j)
            if wh_mult(ql, WHPair(m, m), WHPair(n, n)) != expected:
                return False
    return True


def compatibility_check(ql, depth: int) -> bool:
    """Pairs representing the same group element m n^-1 = p q^-1 are compatible."""
    ps = ql.p_elements(depth)
    groups = {}
    for m in ps:
        for n in ps:
            groups.setdefault(ql.mul(m, ql.inv(n)), []).append(WHPair(m, n))
    for members in groups.values():
        for s in members:
            for t in members:
                st = wh_mult(ql, s, wh_mult(ql, wh_star(t), t))
                ts = wh_mult(ql, t, wh_mult(ql, wh_star(s), s))
                if st != ts:
                    return False
                tts = wh_mult(ql, wh_mult(ql, t, wh_star(t)), s)
                sst = wh_mult(ql, wh_mult(ql, s, wh_star(s)), t)
                if tts != sst:
                    return False
    return True


def prep_axioms_check(ql, depth: int) -> dict:
    """Partial representation axioms for g -> prep_extend(g), evaluated with wh_mult."""
    elems = ql.group_elements(depth)
    u = {g: prep_extend(ql, g) for g in elems}

    def ext(g):
        if g not in u:
            u[g] = prep_extend(ql, g)
        return u[g]

    if ext(ql.one) != WHPair(ql.one, ql.one):
        return {"ok": False, "axiom": "u_1 = 1"}
    for g in elems:
        gi = ql.inv(g)
        if ext(gi) != wh_star(ext(g)):
            return {"ok": False, "axiom": "u_(g^-1) = u_g*", "g": ql.label(g)}
        for h in elems:
            hi = ql.inv(h)
            gh = ql.mul(g, h)
            lhs = wh_mult(ql, wh_mult(ql, ext(g), ext(h)), ext(hi))
            if lhs != wh_mult(ql, ext(gh), ext(hi)):
                return {"ok": False, "axiom": "u_g u_h u_(h^-1) = u_gh u_(h^-1)", "g": ql.label(g), "h": ql.label(h)}
            lhs = wh_mult(ql, wh_mult(ql, ext(gi), ext(g)), ext(h))
            if lhs != wh_mult(ql, ext(gi), ext(gh)):
                return {"ok": False, "axiom": "u_(g^-1) u_g u_h = u_(g^-1) u_gh", "g": ql.label(g), "h": ql.label(h)}
    return {"ok": True, "elements": len(elems)}


def ore_well_defined_check(ql: GridQL, depth: int) -> bool:
    """v_m* v_n = v_p* v_q whenever m^-1 n = p^-1 q (grids only)."""
    if not isinstance(ql, GridQL):
        raise UnsupportedError("the Ore extension is implemented for grids only")
    ps = ql.p_elements(depth)
    seen = {}
    for m in ps:
        for n in ps:
            val = wh_mult(ql, WHPair(ql.one, m), WHPair(n, ql.one))
            key = ql.mul(ql.inv(m), n)
            if key in seen and seen[key] != val:
                return False
            seen[key] = val
    return True


# ---------------------------------------------------------------------------
# truncated shift oracle


class TruncatedShiftOracle:
    """Partial injections on the basis {e_w : |w| <= L} of a truncated l2(P).

    Words are encoded independently of the symbolic code: strings for free
    monoids on single-letter alphabets, integer tuples for grids.
    """

    def __init__(self, ql, window: int = 10):
        self.ql = ql
        self.window = window
        if isinstance(ql, FreeQL):
            if any(len(a) != 1 for a in ql.alphabet):
                raise UnsupportedError("oracle needs single-letter names")
            self.basis = ["".join(p) for k in range(window + 1) for p in itertools.product(sorted(ql.alphabet), repeat=k)]
            self.size = len
        elif isinstance(ql, GridQL):
            self.basis = [p for p in itertools.product(range(window + 1), repeat=ql.k) if sum(p) <= window]
            self.size = sum
        else:
            raise UnsupportedError("no shift oracle for this structure")
        self._cache = {}

    def key(self, x):
        if isinstance(self.ql, FreeQL):
            if not x.is_positive():
                raise PreconditionError("not a positive word")
            return "".join(x.names())
        return tuple(x)

    def _concat(self, m, w):
        if isinstance(m, str):
            return m + w
        return tuple(a + b for a, b in zip(m, w))

    def _strip(self, n, w):
        if isinstance(n, str):
            return w[len(n):] if w.startswith(n) else None
        r = tuple(b - a for a, b in zip(n, w))
        return r if all(c >= 0 for c in r) else None

    def shift(self, m) -> dict:
        L = self.window
        out = {}
        for w in self.basis:
            v = self._concat(m, w)
            if self.size(v) <= L:
                out[w] = v
        return out

    def shift_adjoint(self, n) -> dict:
        out = {}
        for w in self.basis:
            r = self._strip(n, w)
            if r is not None:
                out[w] = r
        return out

    @staticmethod
    def compose(f: dict, g: dict) -> dict:
        """f after g."""
        return {w: f[v] for w, v in g.items() if v in f}

    def pair_map(self, m, n) -> dict:
        key = (m, n)
        if key not in self._cache:
            self._cache[key] = self.compose(self.shift(m), self.shift_adjoint(n))
        return self._cache[key]

    def pair_map_by_size(self, m, n) -> list:
        """Items of pair_map(m, n) sorted by the size of the column word."""
        key = ("sorted", m, n)
        if key not in self._cache:
            items = sorted(self.pair_map(m, n).items(), key=lambda kv: self.size(kv[0]))
            self._cache[key] = (items, [self.size(w) for w, _ in items])
        return self._cache[key]


def wh_oracle_check(ql, max_len: int = 3, window: int = 10) -> dict:
    """Compare every symbolic product (m,n)(p,q), |m|,|n|,|p|,|q| <= max_len,
    with the product of truncated shift matrices on the columns where the
    truncation cannot interfere (|w| <= window - |m| - |p|)."""
    oracle = TruncatedShiftOracle(ql, window)
    ps = ql.p_elements(max_len)
    keys = {x: oracle.key(x) for x in ps}
    size = oracle.size
    compared = 0
    for m in ps:
        for n in ps:
            a = oracle.pair_map(keys[m], keys[n])
            for p in ps:
                bound = window - size(keys[m]) - size(keys[p])
                if bound < 0:
                    continue
                for q in ps:
                    b = oracle.pair_map_by_size(keys[p], keys[q])
                    sym = wh_mult(ql, WHPair(m, n), WHPair(p, q))
                    sym_keys = None if sym is None else (oracle.key(sym.m), oracle.key(sym.n))
                    # columns outside dom(b) are killed by both sides: the
                    # symbolic product only sees columns with prefix q.
                    if sym_keys is not None and oracle._strip(keys[q], sym_keys[1]) is None:
                        return {"ok": False, "x": wh_label(ql, WHPair(m, n)), "y": wh_label(ql, WHPair(p, q)),
                                "column": None}
                    items, sizes = b
                    for w, mid in items[:bisect.bisect_right(sizes, bound)]:
                        got = a.get(mid)
                        if sym_keys is None:
                            want = None
                        else:
                            r = oracle._strip(sym_keys[1], w)
                            want = oracle._concat(sym_keys[0], r) if r is not None else None
                        if got != want:
                            return {
                                "ok": False,
                                "x": wh_label(ql, WHPair(m, n)),
                                "y": wh_label(ql, WHPair(p, q)),
                                "column": w,
                            }
                        compared += 1
    return {"ok": True, "columns_compared": compared, "window": window, "max_len": max_len}


# ---------------------------------------------------------------------------
# hereditary directed sets, faithfulness, Scarparo's example


def principal(ql, m, depth: int) -> frozenset:
    """mP^-1 intersected with P, truncated to length <= depth."""
    return frozenset(x for x in ql.p_elements(depth) if ql.leq(x, m))


def _principal_candidates(ql, depth: int) -> list:
    if isinstance(ql, GridQL):
        return [p for p in itertools.product(range(depth + 1), repeat=ql.k)]
    return ql.p_elements(depth)


def hereditary_directed(ql, depth: int, max_elements: int = 4096) -> list:
    """Distinct truncations to length <= depth of nonempty hereditary directed subsets of P.

    Every such truncation is the truncation of a principal set mP^-1 with m
    of bounded size, so the principal sets of the candidates enumerate them.
    """
    if len(ql.p_elements(depth)) > max_elements:
        raise UnsupportedError("depth too large for enumeration")
    out = {principal(ql, m, depth) for m in _principal_candidates(ql, depth)}
    return sorted(out, key=lambda s: (len(s), sorted(ql.label(x) for x in s)))


def hereditary_directed_bruteforce(ql, depth: int) -> list:
    """Subsets of P_(<= depth) that are nonempty, hereditary and directed within themselves.

    Agrees with the truncations when truncation preserves directedness
    (free monoids, the rank-one grid)."""
    elems = ql.p_elements(depth)
    if len(elems) > 16:
        raise UnsupportedError("too many subsets for brute force")
    out = []
    for mask in range(1, 1 << len(elems)):
        s = [elems[i] for i in range(len(elems)) if mask >> i & 1]
        ss = set(s)
        if any(y not in ss for x in s for y in elems if ql.leq(y, x)):
            continue
        if all(any(ql.leq(x, z) and ql.leq(y, z) for z in s) for x in s for y in s):
            out.append(frozenset(s))
    return sorted(out, key=lambda s: (len(s), sorted(ql.label(x) for x in s)))


def convergence_check(ql, sequence, depth: int) -> bool:
    """Truncations of the principal sets of an increasing sequence stabilize."""
    truncs = [principal(ql, m, depth) for m in sequence]
    for a, b in zip(truncs, truncs[1:]):
        if not a <= b:
            return False
    return truncs[-1] == truncs[-2] if len(truncs) > 1 else True


def faithfulness_projection(ql, ps, probe_depth: int) -> dict:
    """Basis vectors of the truncated l2(P) kept by the product of the
    projections 1 - v_p v_p*, i.e. the words having no p as a lower bound."""
    ps = list(ps)
    for p in ps:
        if p == ql.one:
            raise PreconditionError("every p must differ from the unit")
        if not ql.in_p(p):
            raise PreconditionError(f"{ql.label(p)} is not in P")
    survivors = [w for w in ql.p_elements(probe_depth) if not any(ql.leq(p, w) for p in ps)]
    if ql.one not in survivors:
        raise UnsupportedError("the unit vector was killed")
    return {"witnesses": [ql.label(w) for w in survivors], "nonzero_witness": ql.label(ql.one)}


def scarparo_check(length_bound: int = 6) -> dict:
    if length_bound < 4:
        raise PreconditionError("length bound must be at least 4")
    ql = ScarparoQL()
    elems = ql.p_elements(length_bound)
    n = len(elems)
    order = [[ql.leq(x, y) for y in elems] for x in elems]
    g = ql.parse("b a^-1 b^-1")
    bounds = [i for i, c in enumerate(elems) if ql.leq(g, c)]
    minimal = [i for i in bounds if not any(order[j][i] and j != i for j in bounds)]
    least = [i for i in bounds if all(order[i][j] for j in bounds)]
    b, ba = ql.parse("b"), ql.parse("b a")
    ql_fails = b in [elems[i] for i in bounds] and ba in [elems[i] for i in bounds] and not least
    pair_mismatches = []
    for i in range(n):
        for j in range(n):
            common = [k for k in range(n) if order[i][k] and order[j][k]]
            brute = [k for k in common if all(order[k][l] for l in common)]
            brute_join = elems[brute[0]] if brute else None
            predicted = ql.join_raw(elems[i], elems[j])
            if brute_join != predicted:
                pair_mismatches.append([ql.label(elems[i]), ql.label(elems[j])])
    return {
        "length_bound": length_bound,
        "elements": n,
        "upper_bounds_include_b_and_ba": ql_fails or (b in [elems[i] for i in bounds] and ba in [elems[i] for i in bounds]),
        "least_upper_bound_found": bool(least),
        "minimal_upper_bounds": [ql.label(elems[i]) for i in minimal],
        "quasi_lattice_fails": ql_fails,
        "pairs_checked": n * n,
        "pair_join_mismatches": pair_mismatches,
        "weak_quasi_lattice_consistent": not pair_mismatches,
    }
