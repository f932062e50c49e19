"""Directed graphs, their path spaces, and the prefix-replacement partial
action of the free group on the edges.

Conventions: an edge e goes from d(e) to r(e); a path a1 a2 ... an needs
d(a_i) = r(a_(i+1)), so r(path) = r(a1) and d(path) = d(an).  A vertex v
is a sink when no edge has d = v and a source when no edge has r = v.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import FormatError, PreconditionError, UnsupportedError
from .exact import ExactMatrix
from .groups import FreeWord, parse_word, reduced_words


@dataclass(frozen=True)
class Edge:
    name: str
    r: str
    d: str


class DirectedGraph:
    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        if len(set(self.vertices)) != len(self.vertices):
            raise FormatError("duplicate vertex names")
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise FormatError("duplicate edge names")
        vs = set(self.vertices)
        for e in self.edges:
            if e.r not in vs or e.d not in vs:
                raise FormatError(f"edge {e.name} uses an unknown vertex")
            if not e.name or e.name.startswith("v:") or e.name == "EMPTY":
                raise FormatError(f"bad edge name {e.name!r}")
        self._edge = {e.name: e for e in self.edges}
        self.alphabet = tuple(names)
        self.into = {v: tuple(e.name for e in self.edges if e.r == v) for v in self.vertices}
        self.out_of = {v: tuple(e.name for e in self.edges if e.d == v) for v in self.vertices}

    def r(self, name: str) -> str:
        return self._edge[name].r

    def d(self, name: str) -> str:
        return self._edge[name].d

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"name": e.name, "r": e.r, "d": e.d} for e in self.edges],
        }

    @staticmethod
    def from_json(data) -> "DirectedGraph":
        try:
            verts = [str(v) for v in data["vertices"]]
            edges = [Edge(str(e["name"]), str(e["r"]), str(e["d"])) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed graph: {exc}") from exc
        return DirectedGraph(verts, edges)

    def word(self, text) -> FreeWord:
        if isinstance(text, FreeWord):
            return text
        return parse_word(self.alphabet, str(text))


def single_loop() -> DirectedGraph:
    return DirectedGraph(["v"], [Edge("a", "v", "v")])


def bouquet(k: int = 2) -> DirectedGraph:
    names = "abcdefgh"[:k]
    return DirectedGraph(["v"], [Edge(n, "v", "v") for n in names])


def classify_vertices(g: DirectedGraph) -> dict:
    sinks = [v for v in g.vertices if not g.out_of[v]]
    sources = [v for v in g.vertices if not g.into[v]]
    regular = [v for v in g.vertices if g.into[v]]
    return {"sinks": sinks, "sources": sources, "regular": regular}


def require_no_sinks(g: DirectedGraph) -> None:
    sinks = classify_vertices(g)["sinks"]
    if sinks:
        raise UnsupportedError(f"graph has sinks: {sinks}")


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class FinPath:
    """A finite path; `start` is its range vertex r(path)."""

    start: str
    edges: tuple = ()

    def __len__(self):
        return len(self.edges)

    def is_vertex(self) -> bool:
        return not self.edges

    def label(self) -> str:
        return "v:" + self.start if not self.edges else " ".join(self.edges)

    def to_json(self):
        return "v:" + self.start if not self.edges else list(self.edges)


@dataclass(frozen=True)
class EvPeriodicPath:
    """The infinite path prefix cycle cycle cycle ..."""

    prefix: tuple
    cycle: tuple

    def edge_at(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def head(self, k: int) -> tuple:
        return tuple(self.edge_at(i) for i in range(k))

    def drop(self, k: int) -> "EvPeriodicPath":
        if k <= len(self.prefix):
            return EvPeriodicPath(self.prefix[k:], self.cycle)
        s = (k - len(self.prefix)) % len(self.cycle)
        return EvPeriodicPath((), self.cycle[s:] + self.cycle[:s])

    def label(self) -> str:
        pre = " ".join(self.prefix)
        return (pre + " " if pre else "") + "(" + " ".join(self.cycle) + ")^inf"

    def to_json(self):
        return {"prefix": list(self.prefix), "cycle": list(self.cycle)}


def path_r(g: DirectedGraph, p) -> str:
    if isinstance(p, FinPath):
        return p.start
    return g.r(p.edge_at(0))


def path_d(g: DirectedGraph, p: FinPath) -> str:
    return p.start if not p.edges else g.d(p.edges[-1])


def is_path(g: DirectedGraph, edges) -> bool:
    return all(g.d(a) == g.r(b) for a, b in zip(edges, edges[1:]))


def make_path(g: DirectedGraph, edges, start: str | None = None) -> FinPath:
    edges = tuple(edges)
    for e in edges:
        if e not in g.alphabet:
            raise FormatError(f"unknown edge {e!r}")
    if not edges:
        if start is None or start not in g.vertices:
            raise FormatError("a length-zero path needs a vertex")
        return FinPath(start)
    if not is_path(g, edges):
        raise PreconditionError(f"edges {' '.join(edges)} do not form a path")
    if start is not None and start != g.r(edges[0]):
        raise PreconditionError("start vertex does not match the range of the path")
    return FinPath(g.r(edges[0]), edges)


def canonical_periodic(g: DirectedGraph, prefix, cycle) -> EvPeriodicPath:
    prefix, cycle = tuple(prefix), tuple(cycle)
    if not cycle:
        raise FormatError("empty cycle")
    if not is_path(g, cycle + cycle[:1]):
        raise PreconditionError("cycle is not a closed path")
    if prefix and not is_path(g, prefix + cycle[:1]):
        raise PreconditionError("prefix does not connect to the cycle")
    n = len(cycle)
    for k in range(1, n + 1):
        if n % k == 0 and cycle[:k] * (n // k) == cycle:
            cycle = cycle[:k]
            break
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    return EvPeriodicPath(prefix, cycle)


def parse_path(g: DirectedGraph, text):
    """Parse "v:NAME", "EMPTY", a list of edge names, or "PREFIX;CYCLE" for PREFIX CYCLE^inf."""
    if isinstance(text, (FinPath, EvPeriodicPath)):
        return text
    if isinstance(text, dict):
        return canonical_periodic(g, text.get("prefix", []), text["cycle"])
    if isinstance(text, list):
        return make_path(g, text)
    s = str(text).strip()
    if s == "EMPTY":
        return None
    if s.startswith("v:"):
        return make_path(g, (), s[2:])
    if ";" in s:
        pre, cyc = s.split(";", 1)
        return canonical_periodic(g, _edge_names(g, pre), _edge_names(g, cyc))
    return make_path(g, _edge_names(g, s))


def _edge_names(g: DirectedGraph, text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    w = parse_word(g.alphabet, text)
    if not w.is_positive():
        raise FormatError(f"{text!r} is not a positive edge sequence")
    return w.names()


def paths_of_length(g: DirectedGraph, n: int) -> list:
    if n == 0:
        return [FinPath(v) for v in g.vertices]
    layer = [(e,) for e in g.alphabet]
    for _ in range(n - 1):
        layer = [p + (e,) for p in layer for e in g.into[g.d(p[-1])]]
    return [FinPath(g.r(p[0]), p) for p in sorted(layer)]


def paths_up_to(g: DirectedGraph, n: int) -> list:
    return [p for k in range(n + 1) for p in paths_of_length(g, k)]


def paths_with_d(g: DirectedGraph, v: str, max_len: int) -> list:
    """Finite paths nu with d(nu) = v and |nu| <= max_len (including v itself)."""
    out = [FinPath(v)]
    layer = [(e,) for e in g.out_of[v]]
    while layer and len(layer[0]) <= max_len:
        out.extend(FinPath(g.r(p[0]), p) for p in layer)
        layer = [(e,) + p for p in layer for e in g.out_of[g.r(p[0])]]
    return out


def is_prefix(g: DirectedGraph, q: FinPath, p) -> bool:
    """Whether the finite path q is a prefix of p (finite or eventually periodic)."""
    if q.is_vertex():
        return path_r(g, p) == q.start
    if isinstance(p, FinPath):
        return p.edges[:len(q)] == q.edges
    return p.head(len(q)) == q.edges


# ---------------------------------------------------------------------------
# standard forms and the partial action


@dataclass(frozen=True)
class StdForm:
    mu: FinPath
    nu: FinPath


def standard_form(g: DirectedGraph, w) -> StdForm | None:
    w = g.word(w)
    if w.is_identity():
        raise PreconditionError("the unit word has no standard form")
    split = w.positive_negative_split()
    if split is None:
        return None
    mu, nu = split
    if not (is_path(g, mu) and is_path(g, nu)):
        return None
    if mu and nu:
        if g.d(mu[-1]) != g.d(nu[-1]):
            return None
        return StdForm(FinPath(g.r(mu[0]), mu), FinPath(g.r(nu[0]), nu))
    if mu:
        return StdForm(FinPath(g.r(mu[0]), mu), FinPath(g.d(mu[-1])))
    return StdForm(FinPath(g.d(nu[-1])), FinPath(g.r(nu[0]), nu))


def _prepend(g: DirectedGraph, mu: FinPath, rest):
    if isinstance(rest, FinPath):
        return FinPath(mu.start, mu.edges + rest.edges)
    return canonical_periodic(g, mu.edges + rest.prefix, rest.cycle)


def _drop(g: DirectedGraph, p, k: int):
    if isinstance(p, FinPath):
        if k == len(p):
            return FinPath(path_d(g, p))
        return FinPath(g.r(p.edges[k]), p.edges[k:])
    return p.drop(k)


def tau_apply(g: DirectedGraph, w, p):
    """nu xi -> mu xi for w = mu nu^-1 in standard form; None outside the domain."""
    w = g.word(w)
    if w.is_identity():
        return p
    sf = standard_form(g, w)
    if sf is None or p is None or not is_prefix(g, sf.nu, p):
        return None
    return _prepend(g, sf.mu, _drop(g, p, len(sf.nu)))


def fixed_points(g: DirectedGraph, w):
    w = g.word(w)
    if w.is_identity():
        raise PreconditionError("the unit word fixes everything")
    sf = standard_form(g, w)
    if sf is None or len(sf.mu) == len(sf.nu):
        return None
    if len(sf.mu) < len(sf.nu):
        return fixed_points(g, w.inverse())
    if sf.mu.edges[:len(sf.nu)] != sf.nu.edges or not is_prefix(g, sf.nu, sf.mu):
        return None
    gamma = sf.mu.edges[len(sf.nu):]
    point = canonical_periodic(g, sf.nu.edges, gamma)
    if tau_apply(g, w, point) != point:
        raise UnsupportedError("candidate fixed point is not fixed")
    return point


def fixed_points_bruteforce(g: DirectedGraph, w, max_len: int) -> list:
    """All eventually periodic paths with |prefix|, |cycle| <= max_len fixed by w."""
    found = set()
    for cyc in closed_paths(g, max_len):
        for k in range(max_len + 1):
            for pre in paths_of_length(g, k):
                if k and path_d(g, pre) != g.r(cyc.edges[0]):
                    continue
                if not k and pre.start != g.r(cyc.edges[0]):
                    continue
                p = canonical_periodic(g, pre.edges, cyc.edges)
                if tau_apply(g, w, p) == p:
                    found.add(p)
    return sorted(found, key=lambda p: (len(p.prefix), p.prefix, p.cycle))


# ---------------------------------------------------------------------------
# configurations omega_alpha


def omega_of_path(g: DirectedGraph, p, bound: int) -> frozenset:
    """{mu nu^-1 : mu a prefix of p, d(mu) = d(nu)} within the ball of radius bound."""
    if p is None:
        return frozenset([FreeWord.identity(g.alphabet)])
    out = set()
    if isinstance(p, FinPath):
        prefixes = [FinPath(p.start, p.edges[:k]) if k else FinPath(p.start) for k in range(min(len(p), bound) + 1)]
    else:
        prefixes = [FinPath(path_r(g, p), p.head(k)) for k in range(bound + 1)]
    for mu in prefixes:
        mw = FreeWord.positive(g.alphabet, mu.edges)
        for nu in paths_with_d(g, path_d(g, mu), bound - len(mu)):
            x = mw * FreeWord.positive(g.alphabet, nu.edges).inverse()
            if len(x) <= bound:
                out.add(x)
    return frozenset(out)


def omega_membership(g: DirectedGraph, p, x: FreeWord) -> bool:
    """Membership test through the standard form of x."""
    if x.is_identity():
        return True
    sf = standard_form(g, x)
    return sf is not None and p is not None and is_prefix(g, sf.mu, p)


def omega_bruteforce(g: DirectedGraph, p, bound: int) -> frozenset:
    return frozenset(x for x in reduced_words(g.alphabet, bound) if omega_membership(g, p, x))


def is_convex_in_ball(omega: frozenset) -> bool:
    """Every prefix of a reduced member lies in the set."""
    for x in omega:
        for k in range(len(x)):
            if FreeWord(x.alphabet, x.letters[:k]) not in omega:
                return False
    return True


def _letters(g: DirectedGraph) -> list:
    return [FreeWord(g.alphabet, ((e, 1),)) for e in g.alphabet] + [
        FreeWord(g.alphabet, ((e, -1),)) for e in g.alphabet
    ]


def local_configuration(g: DirectedGraph, omega, x: FreeWord) -> frozenset:
    return frozenset(h for h in _letters(g) if x * h in omega)


def local_type(g: DirectedGraph, loc: frozenset) -> str | None:
    """'a', 'b' or 'c' according to the three admissible shapes, None otherwise."""
    if not loc:
        return "c"
    edges = [h.letters[0][0] for h in loc if h.letters[0][1] == 1]
    invs = {h.letters[0][0] for h in loc if h.letters[0][1] == -1}
    if len(edges) == 1:
        want = {b for b in g.alphabet if g.d(b) == g.r(edges[0])}
        return "a" if invs == want else None
    if edges:
        return None
    for v in g.vertices:
        if invs == {b for b in g.alphabet if g.d(b) == v}:
            return "b"
    return None


def check_local_types(g: DirectedGraph, omega, bound: int) -> dict:
    counts = {"a": 0, "b": 0, "c": 0}
    for x in omega:
        if len(x) < bound:
            t = local_type(g, local_configuration(g, omega, x))
            if t is None:
                return {"ok": False, "at": str(x)}
            counts[t] += 1
    return {"ok": True, "types": counts}


def local_closure_check(g: DirectedGraph, omega, bound: int) -> bool:
    """If nu_m^-1 is in the local configuration at x then x nu^-1 is in omega (within the ball)."""
    for x in omega:
        if len(x) >= bound:
            continue
        loc = local_configuration(g, omega, x)
        for h in loc:
            name, sign = h.letters[0]
            if sign != -1:
                continue
            for nu in paths_with_d(g, g.d(name), bound):
                if not nu.edges or nu.edges[-1] != name:
                    continue
                y = x * FreeWord.positive(g.alphabet, nu.edges).inverse()
                if len(y) <= bound and y not in omega:
                    return False
    return True


def locally_consistent_balls(g: DirectedGraph, radius: int) -> list:
    """All subsets of the ball of the given radius built from 1 by choosing an
    admissible local type at every member of smaller length."""
    one = FreeWord.identity(g.alphabet)
    options = []
    for a in g.alphabet:
        options.append(frozenset([FreeWord(g.alphabet, ((a, 1),))] + [
            FreeWord(g.alphabet, ((b, -1),)) for b in g.alphabet if g.d(b) == g.r(a)]))
    for v in g.vertices:
        s = frozenset(FreeWord(g.alphabet, ((b, -1),)) for b in g.alphabet if g.d(b) == v)
        if s not in options:
            options.append(s)
    options.append(frozenset())

    results = set()

    def extend(members: frozenset, frontier: list):
        if not frontier:
            results.add(members)
            return
        x, rest = frontier[0], frontier[1:]
        back = FreeWord(g.alphabet, ((x.letters[-1][0], -x.letters[-1][1]),)) if x.letters else None
        for loc in options:
            if back is not None and back not in loc:
                continue
            new = [x * h for h in loc]
            if any(len(y) < len(x) and y not in members for y in new):
                continue
            # a neighbor of smaller length must be the parent
            grown = [y for y in new if len(y) > len(x)]
            if any(y in members for y in grown):
                continue
            nxt = rest + [y for y in grown if len(y) < radius]
            extend(members | frozenset(grown), nxt)

    extend(frozenset([one]), [one] if radius > 0 else [])
    return sorted(results, key=lambda s: (len(s), sorted(str(x) for x in s)))


def configuration_bijection_check(g: DirectedGraph, path_len: int = 3, radius: int = 2) -> dict:
    """omega is injective on finite paths of length <= path_len (ball radius path_len + 1),
    and every locally consistent ball of the given radius is the truncation of some
    omega_alpha or of {1}."""
    big = path_len + 1
    seen = {}
    for p in paths_up_to(g, path_len):
        om = omega_of_path(g, p, big)
        if om in seen:
            return {"ok": False, "collision": [seen[om].label(), p.label()]}
        seen[om] = p
    truncs = {frozenset(x for x in omega_of_path(g, p, radius) if len(x) <= radius)
              for p in paths_up_to(g, radius + 1)}
    truncs.add(frozenset([FreeWord.identity(g.alphabet)]))
    balls = locally_consistent_balls(g, radius)
    missing = [sorted(str(x) for x in b) for b in balls if b not in truncs]
    return {"ok": not missing, "paths": len(seen), "balls": len(balls), "unmatched": missing[:3]}


# ---------------------------------------------------------------------------
# cycles, entries, recurrence, transitivity


def closed_paths(g: DirectedGraph, max_len: int) -> list:
    return [p for k in range(1, max_len + 1) for p in paths_of_length(g, k) if path_d(g, p) == p.start]


def _reach(g: DirectedGraph, v: str) -> set:
    """Vertices w with a path delta such that d(delta) = v and r(delta) = w."""
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for e in g.out_of[x]:
            y = g.r(e)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def cycle_vertices(g: DirectedGraph) -> list:
    out = []
    for v in g.vertices:
        if any(v in _reach(g, g.r(e)) for e in g.out_of[v]):
            out.append(v)
    return out


def _no_entry_cycle(g: DirectedGraph):
    single = {v: g.into[v][0] for v in g.vertices if len(g.into[v]) == 1}
    for v in g.vertices:
        walk, x = [], v
        visited = {}
        while x in single and x not in visited:
            visited[x] = len(walk)
            e = single[x]
            walk.append(e)
            x = g.d(e)
        if x in visited:
            cyc = tuple(walk[visited[x]:])
            return FinPath(g.r(cyc[0]), cyc)
    return None


def first_return_count(g: DirectedGraph, v: str, cap: int = 2) -> int:
    """Number of closed paths at v not passing through v in between, capped at `cap`."""
    n = len(g.vertices)
    counts = {}
    for e in g.out_of[v]:
        counts[g.r(e)] = counts.get(g.r(e), 0) + 1
    total = 0
    for _ in range(2 * n):
        total = min(cap, total + counts.get(v, 0))
        if total >= cap:
            return cap
        nxt = {}
        for x, c in counts.items():
            if x == v:
                continue
            for e in g.out_of[x]:
                y = g.r(e)
                nxt[y] = min(cap, nxt.get(y, 0) + c)
        counts = nxt
        if not counts:
            break
    return total


def _first_return_path(g: DirectedGraph, v: str) -> FinPath:
    """A shortest closed path at v, edges listed from the range end."""
    # paths are built by prepending edges e with d(e) = current range
    frontier = [(e,) for e in g.out_of[v]]
    seen = set()
    while frontier:
        nxt = []
        for p in frontier:
            x = g.r(p[0])
            if x == v:
                return FinPath(v, p)
            if x in seen:
                continue
            seen.add(x)
            nxt.extend((e,) + p for e in g.out_of[x])
        frontier = nxt
    raise UnsupportedError(f"{v} is not on a cycle")


def cycle_analysis(g: DirectedGraph) -> dict:
    require_no_sinks(g)
    no_entry = _no_entry_cycle(g)
    transitory = None
    for v in cycle_vertices(g):
        if first_return_count(g, v) < 2:
            transitory = _first_return_path(g, v)
            break
    return {
        "every_cycle_has_entry": no_entry is None,
        "every_cycle_recurrent": transitory is None,
        "witnesses": {
            "cycle_without_entry": None if no_entry is None else no_entry.to_json(),
            "transitory_cycle": None if transitory is None else transitory.to_json(),
        },
    }


def has_entry(g: DirectedGraph, cycle: FinPath) -> bool:
    return any(len(g.into[g.r(e)]) > 1 for e in cycle.edges)


def cycle_analysis_bruteforce(g: DirectedGraph) -> dict:
    """Definitions tested literally on closed paths of length <= |E0| and
    return paths beta of length <= 2|E0|."""
    n = len(g.vertices)
    cycles = closed_paths(g, n)
    entries = all(
        any(b != gi and g.r(b) == g.r(gi) for gi in c.edges for b in g.alphabet)
        for c in cycles
    )
    loops = {}
    for beta in closed_paths(g, 2 * n):
        loops.setdefault(beta.start, []).append(beta)
    recurrent = True
    for c in cycles:
        base = canonical_periodic(g, (), c.edges)
        if not any(canonical_periodic(g, c.edges + beta.edges, c.edges) != base for beta in loops.get(c.start, [])):
            recurrent = False
            break
    return {"every_cycle_has_entry": entries, "every_cycle_recurrent": recurrent}


def weakly_transitive(g: DirectedGraph) -> bool:
    require_no_sinks(g)
    everything = set(g.vertices)
    sources = classify_vertices(g)["sources"]
    return all(_reach(g, v) == everything for v in list(sources) + cycle_vertices(g))


def weakly_transitive_bruteforce(g: DirectedGraph) -> bool:
    """Check the definition on maximal paths: finite paths ending at sources and
    eventually periodic infinite paths with |prefix|, |cycle| <= |E0|."""
    n = len(g.vertices)
    ranges = {}
    for p in paths_up_to(g, n):
        ranges.setdefault(path_d(g, p), set()).add(p.start)
    sources = set(classify_vertices(g)["sources"])
    along = []
    for p in paths_up_to(g, n):
        if path_d(g, p) in sources:
            along.append({p.start} | {g.d(e) for e in p.edges})
    for c in closed_paths(g, n):
        for k in range(n + 1):
            for pre in paths_of_length(g, k):
                if path_d(g, pre) == c.start:
                    along.append({pre.start} | {g.d(e) for e in pre.edges + c.edges})
    for verts in along:
        reached = set().union(*(ranges[x] for x in verts))
        if reached != set(g.vertices):
            return False
    return True


def is_isolated_in_boundary(g: DirectedGraph, p, depth: int | None = None) -> bool:
    """Isolation of a maximal path, decided from the neighborhood basis of
    cylinder sets over its prefixes: some prefix has exactly one maximal
    extension visible within `depth` further edges."""
    n = len(g.vertices)
    depth = depth if depth is not None else 2 * n + 1
    sources = set(classify_vertices(g)["sources"])
    if isinstance(p, FinPath):
        if path_d(g, p) not in sources:
            raise PreconditionError("finite path is not maximal")
        plen = len(p)
    else:
        plen = len(p.prefix) + len(p.cycle)
    for k in range(plen + 1):
        mu = FinPath(path_r(g, p), p.edges[:k] if isinstance(p, FinPath) else p.head(k))
        branches = [mu.edges]
        ok = True
        for _ in range(depth):
            nxt = []
            for b in branches:
                end = g.d(b[-1]) if b else mu.start
                ext = g.into[end]
                if not ext:
                    nxt.append(b)
                else:
                    nxt.extend(b + (e,) for e in ext)
            branches = nxt
            if len(branches) > 1:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# verdicts


THEOREMS = {
    "full_top_free": "graph-action-topologically-free-on-full-path-space",
    "boundary_top_free": "graph-boundary-top-free-iff-every-cycle-has-entry",
    "minimal": "graph-boundary-minimal-iff-weakly-transitive",
    "simple": "graph-algebra-simple-if-weakly-transitive-with-entries",
    "ideals": "graph-ideals-classified-by-open-invariant-sets-if-recurrent",
}


def verdicts(g: DirectedGraph, path_bound: int = 4) -> dict:
    require_no_sinks(g)
    ca = cycle_analysis(g)
    wt = weakly_transitive(g)
    cls = classify_vertices(g)
    finite_max = [p for p in paths_up_to(g, path_bound) if path_d(g, p) in set(cls["sources"])]
    simple = ca["every_cycle_has_entry"] and wt
    return {
        "topologically_free_full_path_space": True,
        "topologically_free_boundary": ca["every_cycle_has_entry"],
        "minimal": wt,
        "weakly_transitive": wt,
        "every_cycle_has_entry": ca["every_cycle_has_entry"],
        "every_cycle_recurrent": ca["every_cycle_recurrent"],
        "simplicity_criterion_applies": simple,
        "simple": True if simple else None,
        "ideal_classification_applies": ca["every_cycle_recurrent"],
        "witnesses": ca["witnesses"],
        "boundary_membership": {
            "finite_maximal_paths_up_to_bound": len(finite_max),
            "path_bound": path_bound,
            "sources": cls["sources"],
            "infinite_receivers": "impossible in a finite graph",
        },
        "hypotheses": {
            "no_sinks": True,
            "simple": "weakly transitive and every cycle has an entry",
            "ideals": "every cycle recurrent",
        },
        "theorems": dict(THEOREMS),
    }


def enumerate_sink_free_graphs(max_vertices: int = 4, max_edges: int = 6):
    """One representative per isomorphism class, as DirectedGraph objects."""
    out = []
    for n in range(1, max_vertices + 1):
        pairs = [(r, d) for r in range(n) for d in range(n)]
        perms = list(itertools.permutations(range(n)))
        seen = set()
        for m in range(n, max_edges + 1):
            for combo in itertools.combinations_with_replacement(pairs, m):
                if len({d for _, d in combo}) < n:
                    continue
                key = min(tuple(sorted((p[r], p[d]) for r, d in combo)) for p in perms)
                if key in seen:
                    continue
                seen.add(key)
                verts = [f"v{i}" for i in range(n)]
                edges = [Edge(f"e{i}", verts[r], verts[d]) for i, (r, d) in enumerate(key)]
                out.append(DirectedGraph(verts, edges))
    return out


# ---------------------------------------------------------------------------
# the semigroup {s_alpha s_beta*} u {0}


@dataclass(frozen=True)
class GraphSGElement:
    alpha: FinPath
    beta: FinPath

    def label(self) -> str:
        return f"s[{self.alpha.label()}]s[{self.beta.label()}]*"


def sg_element(g: DirectedGraph, alpha: FinPath, beta: FinPath) -> GraphSGElement:
    if path_d(g, alpha) != path_d(g, beta):
        raise PreconditionError("d(alpha) must equal d(beta)")
    return GraphSGElement(alpha, beta)


def _concat(g: DirectedGraph, p: FinPath, q: FinPath) -> FinPath | None:
    if path_d(g, p) != q.start:
        return None
    return FinPath(p.start, p.edges + q.edges)


def graph_semigroup_mult(g: DirectedGraph, x, y):
    if x is None or y is None:
        return None
    b, m = x.beta, y.alpha
    if is_prefix(g, b, m):
        xi = _drop(g, m, len(b))
        a = _concat(g, x.alpha, xi)
        return None if a is None else GraphSGElement(a, y.beta)
    if is_prefix(g, m, b):
        xi = _drop(g, b, len(m))
        nu = _concat(g, y.beta, xi)
        return None if nu is None else GraphSGElement(x.alpha, nu)
    return None


class ToeplitzPathOracle:
    """s_e and p_v as partial injections on finite paths of length <= window."""

    def __init__(self, g: DirectedGraph, window: int):
        self.g = g
        self.window = window
        self.basis = [(p.start, p.edges) for p in paths_up_to(g, window)]

    def s(self, e: str) -> dict:
        g = self.g
        out = {}
        for start, edges in self.basis:
            if g.d(e) == start and len(edges) < self.window:
                out[(start, edges)] = (g.r(e), (e,) + edges)
        return out

    def s_star(self, e: str) -> dict:
        return {v: k for k, v in self.s(e).items()}

    def p(self, v: str) -> dict:
        return {b: b for b in self.basis if b[0] == v}

    @staticmethod
    def compose(f: dict, h: dict) -> dict:
        return {w: f[x] for w, x in h.items() if x in f}

    def element(self, x) -> dict:
        if x is None:
            return {}
        m = self.p(x.alpha.start)
        for e in x.alpha.edges:
            m = self.compose(m, self.s(e))
        m = self.compose(m, self.p(path_d(self.g, x.alpha)))
        for e in reversed(x.beta.edges):
            m = self.compose(m, self.s_star(e))
        return self.compose(m, self.p(x.beta.start))


def graph_semigroup_oracle_check(g: DirectedGraph, max_len: int = 2, window: int = 7) -> dict:
    oracle = ToeplitzPathOracle(g, window)
    paths = paths_up_to(g, max_len)
    elems = [GraphSGElement(a, b) for a in paths for b in paths if path_d(g, a) == path_d(g, b)]
    mats = {x: oracle.element(x) for x in elems}
    safe = window - 2 * max_len
    for x in elems:
        for y in elems:
            z = graph_semigroup_mult(g, x, y)
            lhs = oracle.compose(mats[x], mats[y])
            rhs = oracle.element(z)
            for col in oracle.basis:
                if len(col[1]) > safe:
                    continue
                if lhs.get(col) != rhs.get(col):
                    return {"ok": False, "x": x.label(), "y": y.label()}
    idem = [GraphSGElement(a, a) for a in paths]
    for e in idem:
        for f in idem:
            if graph_semigroup_mult(g, e, f) != graph_semigroup_mult(g, f, e):
                return {"ok": False, "law": "idempotents commute"}
    return {"ok": True, "elements": len(elems)}


# ---------------------------------------------------------------------------
# relations for concrete families of matrices


def _leq_proj(p: ExactMatrix, q: ExactMatrix) -> bool:
    return q @ p @ q == p


def toeplitz_relations_check(g: DirectedGraph, ps: dict, ss: dict, include_ck: bool = False) -> dict:
    if set(ps) != set(g.vertices) or set(ss) != set(g.alphabet):
        raise FormatError("family must give one matrix per vertex and per edge")
    shapes = {m.shape for m in list(ps.values()) + list(ss.values())}
    if len(shapes) != 1 or not all(r == c for r, c in shapes):
        raise FormatError("matrices must be square and of equal size")
    n = shapes.pop()[0]
    failures = []
    for v, p in ps.items():
        if p @ p != p or p.adjoint() != p:
            failures.append(f"p[{v}] is not a projection")
    for v, w in itertools.combinations(g.vertices, 2):
        if not (ps[v] @ ps[w]).is_zero():
            failures.append(f"p[{v}] p[{w}] != 0")
    orth = True
    for a in g.alphabet:
        for b in g.alphabet:
            want = ps[g.d(a)] if a == b else ExactMatrix.zero(n)
            if ss[a].adjoint() @ ss[b] != want:
                orth = False
                failures.append(f"s[{a}]* s[{b}] relation")
    less = True
    for a in g.alphabet:
        if not _leq_proj(ss[a] @ ss[a].adjoint(), ps[g.r(a)]):
            less = False
            failures.append(f"s[{a}] s[{a}]* <= p[{g.r(a)}]")
    ck = None
    if include_ck:
        ck = True
        for v in g.vertices:
            if not g.into[v]:
                continue
            total = ExactMatrix.zero(n)
            for a in g.into[v]:
                total = total + ss[a] @ ss[a].adjoint()
            if total != ps[v]:
                ck = False
                failures.append(f"sum relation at {v}")
    derived = None
    if orth and less:
        derived = _derived_relations(g, ss)
        if not derived:
            failures.append("derived relations")
    nonzero = all(not p.is_zero() for p in ps.values())
    ok = not failures
    return {
        "ok": ok,
        "orthogonality": orth,
        "range_domination": less,
        "sum_relation": ck,
        "derived_relations": derived,
        "uniqueness_hypothesis_all_vertex_projections_nonzero": nonzero,
        "failures": failures,
    }


def _derived_relations(g: DirectedGraph, ss: dict) -> bool:
    final = {a: ss[a] @ ss[a].adjoint() for a in g.alphabet}
    initial = {a: ss[a].adjoint() @ ss[a] for a in g.alphabet}
    for a in g.alphabet:
        for b in g.alphabet:
            if g.d(a) == g.d(b) and initial[a] != initial[b]:
                return False
            if g.d(a) != g.d(b) and not (initial[a] @ initial[b]).is_zero():
                return False
            if g.r(a) == g.d(b) and not _leq_proj(final[a], initial[b]):
                return False
            if a != b and not (final[a] @ final[b]).is_zero():
                return False
    return True


def family_from_json(g: DirectedGraph, data) -> tuple:
    try:
        ps = {v: ExactMatrix.from_json(m) for v, m in data["P"].items()}
        ss = {e: ExactMatrix.from_json(m) for e, m in data["S"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed matrix family: {exc}") from exc
    return ps, ss
