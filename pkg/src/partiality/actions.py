"""Partial actions of groups on finite sets.

A partial action is stored as a group, a carrier, the domains D_g and the
maps theta_g: D_{g^-1} -> D_g.  Points are arbitrary hashable labels; the
partial Bernoulli action uses frozensets of group elements as points and
globalizations use pairs (g, x).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import FormatError, PreconditionError, UnsupportedError
from .groups import FiniteGroup, FreeWord, TruncatedIntegers, group_from_json


# ---------------------------------------------------------------------------
# canonical ordering and labels for points


def point_key(p):
    if isinstance(p, frozenset):
        if all(isinstance(x, int) for x in p):
            return (0, sum(1 << x for x in p if x >= 0), tuple(sorted(p)))
        return (0, -1, tuple(sorted(point_key(x) for x in p)))
    if isinstance(p, tuple):
        return (1, tuple(point_key(x) for x in p))
    if isinstance(p, bool):
        return (3, str(p))
    if isinstance(p, int):
        return (2, p)
    return (3, str(p))


def sort_points(points: Iterable) -> tuple:
    return tuple(sorted(points, key=point_key))


def subset_label(group, omega) -> str:
    return "{" + ",".join(group.label(g) for g in sorted(omega)) + "}"


@dataclass
class Verdict:
    ok: bool
    axiom: str | None = None
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"ok": self.ok}
        if not self.ok:
            out["axiom"] = self.axiom
            out["witness"] = self.witness
        return out


class FinitePartialAction:
    def __init__(self, group, carrier: Iterable, domains: dict, maps: dict,
                 labeler: Callable | None = None):
        self.group = group
        self.carrier = sort_points(carrier)
        self._carrier_set = frozenset(self.carrier)
        self.domains = {g: frozenset(d) for g, d in domains.items()}
        self.maps = {g: dict(m) for g, m in maps.items()}
        self._labeler = labeler
        self._check_structure()

    def elements(self):
        return self.group.elements()

    def domain(self, g) -> frozenset:
        return self.domains.get(g, frozenset())

    def theta(self, g, x):
        """theta_g(x), or None when x is outside D_{g^-1}."""
        m = self.maps.get(g)
        if m is None:
            return None
        return m.get(x)

    def label(self, x) -> str:
        if self._labeler is not None:
            return self._labeler(x)
        return default_point_label(self.group, x)

    def _check_structure(self):
        g = self.group
        for k, d in self.domains.items():
            if not g.contains(k):
                raise FormatError(f"domain declared for element {k!r} outside the group or window")
            if not d <= self._carrier_set:
                raise FormatError(f"domain of {g.label(k)} is not a subset of the carrier")
        for k, m in self.maps.items():
            if not g.contains(k):
                raise FormatError(f"map declared for element {k!r} outside the group or window")
        for k in g.elements():
            m = self.maps.get(k, {})
            src = self.domain(g.inverse(k)) if g.contains(g.inverse(k)) else frozenset()
            if set(m) != set(src):
                raise FormatError(
                    f"theta_{g.label(k)} must be defined exactly on D_({g.label(k)})^-1"
                )
            image = list(m.values())
            if len(set(image)) != len(image):
                raise FormatError(f"theta_{g.label(k)} is not injective")
            if set(image) != set(self.domain(k)):
                raise FormatError(f"theta_{g.label(k)} does not map onto D_{g.label(k)}")

    def to_json(self) -> dict:
        g = self.group
        return {
            "group": g.to_json(),
            "carrier": [self.label(x) for x in self.carrier],
            "domains": {
                g.label(k): [self.label(x) for x in sort_points(self.domain(k))]
                for k in g.elements()
            },
            "maps": {
                g.label(k): {
                    self.label(x): self.label(self.maps[k][x])
                    for x in sort_points(self.maps.get(k, {}))
                }
                for k in g.elements()
            },
        }

    @staticmethod
    def from_json(data) -> "FinitePartialAction":
        if not isinstance(data, dict):
            raise FormatError("partial action JSON must be an object")
        for key in ("group", "carrier", "domains", "maps"):
            if key not in data:
                raise FormatError(f"partial action JSON is missing {key!r}")
        group = group_from_json(data["group"])
        carrier = data["carrier"]
        if not isinstance(carrier, list) or not all(isinstance(x, str) for x in carrier):
            raise FormatError("carrier must be a list of point names")
        if len(set(carrier)) != len(carrier):
            raise FormatError("carrier has repeated points")
        domains = {}
        for k, pts in data["domains"].items():
            if not isinstance(pts, list):
                raise FormatError("domains must map elements to point lists")
            domains[group.parse(k)] = frozenset(pts)
        maps = {}
        for k, m in data["maps"].items():
            if not isinstance(m, dict):
                raise FormatError("maps must be objects point -> point")
            maps[group.parse(k)] = dict(m)
        if group.unit not in domains:
            domains[group.unit] = frozenset(carrier)
        if group.unit not in maps:
            maps[group.unit] = {x: x for x in carrier}
        if group.is_finite:
            for k in group.elements():
                domains.setdefault(k, frozenset())
                maps.setdefault(k, {})
        return FinitePartialAction(group, carrier, domains, maps, labeler=str)

    def is_global(self) -> bool:
        return all(self.domain(g) == self._carrier_set for g in self.group.elements())


def default_point_label(group, x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, frozenset):
        return subset_label(group, x)
    if isinstance(x, tuple) and len(x) == 2:
        g, y = x
        inner = default_point_label(group, y)
        return f"[{group.label(g)},{inner}]"
    return str(x)


# ---------------------------------------------------------------------------
# validation


def _window_product(group, g, h):
    gh = group.mul(g, h)
    return gh, group.contains(gh)


def validate_action(a: FinitePartialAction) -> Verdict:
    g_ = a.group
    elems = list(g_.elements())
    unit = g_.unit
    carrier = a._carrier_set
    if a.domain(unit) != carrier:
        return Verdict(False, "D_1 equals the carrier", {"missing": [a.label(x) for x in sort_points(carrier - a.domain(unit))]})
    for x in a.carrier:
        if a.theta(unit, x) != x:
            return Verdict(False, "theta_1 is the identity", {"point": a.label(x)})
    for g in elems:
        ginv = g_.inverse(g)
        if not g_.contains(ginv):
            if a.domain(g):
                raise UnsupportedError("window is not symmetric")
            continue
        for x in a.domain(ginv):
            y = a.theta(g, x)
            if a.theta(ginv, y) != x:
                return Verdict(False, "theta_(g^-1) is the inverse of theta_g",
                               {"g": g_.label(g), "point": a.label(x)})
    for g in elems:
        ginv = g_.inverse(g)
        dg_inv = a.domain(ginv)
        for h in elems:
            gh, inside = _window_product(g_, g, h)
            dgh = a.domain(gh) if inside else frozenset()
            lhs = frozenset(a.theta(g, x) for x in dg_inv & a.domain(h))
            if lhs and not inside:
                raise UnsupportedError(
                    f"composition of {g_.label(g)} and {g_.label(h)} leaves the support window"
                )
            if not lhs <= dgh:
                bad = sort_points(lhs - dgh)[0]
                return Verdict(False, "theta_g(D_(g^-1) cap D_h) is contained in D_gh",
                               {"g": g_.label(g), "h": g_.label(h), "point": a.label(bad)})
            rhs = a.domain(g) & dgh
            if lhs != rhs:
                bad = sort_points(lhs ^ rhs)[0]
                return Verdict(False, "theta_g(D_(g^-1) cap D_h) = D_g cap D_gh",
                               {"g": g_.label(g), "h": g_.label(h), "point": a.label(bad)})
            if not inside:
                continue
            hinv = g_.inverse(h)
            ghinv = g_.inverse(gh)
            if not (g_.contains(hinv) and g_.contains(ghinv)):
                continue
            for x in a.domain(hinv) & a.domain(ghinv):
                y = a.theta(h, x)
                z = a.theta(g, y)
                if z is None or z != a.theta(gh, x):
                    return Verdict(False, "theta_g(theta_h(x)) = theta_gh(x) on D_(h^-1) cap D_((gh)^-1)",
                                   {"g": g_.label(g), "h": g_.label(h), "point": a.label(x)})
    return Verdict(True)


def require_valid(a: FinitePartialAction):
    v = validate_action(a)
    if not v.ok:
        raise PreconditionError(f"not a partial action: {v.axiom}", witness=v.witness)


# ---------------------------------------------------------------------------
# constructions


def global_action(group: FiniteGroup, carrier: Iterable, act: Callable, labeler=None) -> FinitePartialAction:
    """Wrap a global action (g, x) -> g.x as a FinitePartialAction."""
    carrier = sort_points(carrier)
    cset = frozenset(carrier)
    domains, maps = {}, {}
    for g in group.elements():
        domains[g] = cset
        maps[g] = {x: act(g, x) for x in carrier}
    return FinitePartialAction(group, carrier, domains, maps, labeler=labeler)


def restrict_global(glob: FinitePartialAction, subset: Iterable) -> FinitePartialAction:
    """Restriction of a global action to a subset X: D_g = g(X) cap X."""
    if not glob.group.is_finite:
        raise UnsupportedError("restriction needs a finite group")
    if not glob.is_global():
        raise PreconditionError("restriction requires a global action")
    xs = frozenset(subset)
    if not xs <= glob._carrier_set:
        raise PreconditionError("subset is not contained in the carrier")
    g_ = glob.group
    domains, maps = {}, {}
    for g in g_.elements():
        image = frozenset(glob.theta(g, x) for x in xs)
        domains[g] = image & xs
    for g in g_.elements():
        src = domains[g_.inverse(g)]
        maps[g] = {x: glob.theta(g, x) for x in src}
    return FinitePartialAction(g_, xs, domains, maps, labeler=glob._labeler)


def _union_find_classes(items, pairs):
    parent = {x: x for x in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=point_key)] = min(ra, rb, key=point_key)
    classes: dict = {}
    for x in items:
        classes.setdefault(find(x), []).append(x)
    return {x: min(classes[find(x)], key=point_key) for x in items}


@dataclass
class Globalization:
    action: FinitePartialAction
    embedding: dict
    classes: dict

    def to_json(self) -> dict:
        a = self.action
        return {
            "global": a.to_json(),
            "embedding": {str(x): a.label(y) for x, y in sorted(self.embedding.items(), key=lambda t: point_key(t[0]))},
            "classes": {
                a.label(rep): sorted(a.label(p) for p in members)
                for rep, members in sorted(self.classes.items(), key=lambda t: point_key(t[0]))
            },
        }


def globalize(a: FinitePartialAction) -> Globalization:
    """Enveloping action on (G x X)/~, (g,x) ~ (h,y) iff x in D_(g^-1 h) and theta_(h^-1 g)(x) = y.

    The equivalence is closed with union-find, so transitivity is never
    assumed; points of the result are the minimal representatives (g, x).
    """
    g_ = a.group
    if not g_.is_finite:
        raise UnsupportedError("globalization is only constructed for finite groups")
    require_valid(a)
    pairs_all = [(g, x) for g in g_.elements() for x in a.carrier]
    related = []
    for g, x in pairs_all:
        ginv = g_.inverse(g)
        for h in g_.elements():
            k = g_.mul(ginv, h)
            if x in a.domain(k):
                y = a.theta(g_.mul(g_.inverse(h), g), x)
                related.append(((g, x), (h, y)))
    rep = _union_find_classes(pairs_all, related)
    carrier = sort_points(set(rep.values()))
    classes: dict = {}
    for p, r in rep.items():
        classes.setdefault(r, []).append(p)

    def act(g, point):
        h, x = point
        return rep[(g_.mul(g, h), x)]

    glob = global_action(g_, carrier, act, labeler=lambda p: f"[{g_.label(p[0])},{a.label(p[1])}]")
    # translation must be well defined on classes
    for r, members in classes.items():
        for g in g_.elements():
            images = {rep[(g_.mul(g, h), x)] for h, x in members}
            if len(images) != 1:
                raise PreconditionError("translation is not well defined on classes")
    embedding = {x: rep[(g_.unit, x)] for x in a.carrier}
    return Globalization(glob, embedding, {r: sort_points(m) for r, m in classes.items()})


def globalize_by_orbit_functions(a: FinitePartialAction) -> Globalization:
    """Independent globalization: points are partial functions G -> X.

    The point x becomes phi_x = {(h, theta_(h^-1)(x)) : x in D_h}, and G
    acts by left translation of the argument, (k.phi)(h) = phi(k^-1 h).
    """
    g_ = a.group
    if not g_.is_finite:
        raise UnsupportedError("globalization is only constructed for finite groups")
    require_valid(a)

    def phi(x):
        return frozenset((h, a.theta(g_.inverse(h), x)) for h in g_.elements() if x in a.domain(h))

    def translate(k, f):
        return frozenset((g_.mul(k, h), y) for h, y in f)

    points = set()
    for x in a.carrier:
        f = phi(x)
        for k in g_.elements():
            points.add(translate(k, f))
    carrier = sort_points(points)

    def labeler(f):
        return "{" + ",".join(f"({g_.label(h)},{a.label(y)})" for h, y in sorted(f, key=point_key)) + "}"

    glob = global_action(g_, carrier, translate, labeler=labeler)
    embedding = {x: phi(x) for x in a.carrier}
    return Globalization(glob, embedding, {})


def is_invariant(a: FinitePartialAction, ys: Iterable) -> bool:
    ys = frozenset(ys)
    if not ys <= a._carrier_set:
        raise PreconditionError("subset is not contained in the carrier")
    g_ = a.group
    for g in g_.elements():
        ginv = g_.inverse(g)
        for x in ys & a.domain(ginv):
            if a.theta(g, x) not in ys:
                return False
    return True


def restrict_invariant(a: FinitePartialAction, ys: Iterable) -> FinitePartialAction:
    ys = frozenset(ys)
    if not is_invariant(a, ys):
        raise PreconditionError("subset is not invariant")
    g_ = a.group
    domains = {g: a.domain(g) & ys for g in g_.elements()}
    maps = {g: {x: a.theta(g, x) for x in domains[g_.inverse(g)]} for g in g_.elements()}
    return FinitePartialAction(g_, ys, domains, maps, labeler=a._labeler)


def saturate(a: FinitePartialAction, ys: Iterable) -> frozenset:
    """Smallest invariant subset containing ys."""
    out = set(ys)
    frontier = list(out)
    g_ = a.group
    while frontier:
        nxt = []
        for x in frontier:
            for g in g_.elements():
                y = a.theta(g, x)
                if y is not None and y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


def equivalent(a: FinitePartialAction, b: FinitePartialAction, fixed: dict | None = None,
               max_size: int = 64) -> dict | None:
    """Equivariant bijection phi with phi(D_g^a) = D_g^b, or None.

    `fixed` pins part of phi in advance.  Backtracking search with
    propagation along the partial maps.
    """
    if a.group != b.group:
        raise PreconditionError("actions of different groups")
    if len(a.carrier) != len(b.carrier):
        return None
    if len(a.carrier) > max_size:
        raise UnsupportedError(f"carrier larger than the search bound {max_size}")
    g_ = a.group
    elems = list(g_.elements())
    for g in elems:
        if len(a.domain(g)) != len(b.domain(g)):
            return None
    member_a = {x: frozenset(g for g in elems if x in a.domain(g)) for x in a.carrier}
    member_b = {y: frozenset(g for g in elems if y in b.domain(g)) for y in b.carrier}

    def propagate(phi, used, x, y):
        stack = [(x, y)]
        added = []
        while stack:
            x, y = stack.pop()
            if x in phi:
                if phi[x] != y:
                    return False, added
                continue
            if y in used or member_a[x] != member_b[y]:
                return False, added
            phi[x] = y
            used.add(y)
            added.append(x)
            for g in elems:
                xa = a.theta(g, x)
                if xa is not None:
                    yb = b.theta(g, y)
                    if yb is None:
                        return False, added
                    stack.append((xa, yb))
        return True, added

    def undo(phi, used, added):
        for x in added:
            used.discard(phi.pop(x))

    phi: dict = {}
    used: set = set()
    for x, y in (fixed or {}).items():
        ok, _ = propagate(phi, used, x, y)
        if not ok:
            return None
    order = list(a.carrier)

    def search(i):
        while i < len(order) and order[i] in phi:
            i += 1
        if i == len(order):
            return True
        x = order[i]
        for y in b.carrier:
            if y in used:
                continue
            ok, added = propagate(phi, used, x, y)
            if ok and search(i + 1):
                return True
            undo(phi, used, added)
        return False

    if search(0):
        return dict(phi)
    return None


def bernoulli_partial(group: FiniteGroup, max_order: int = 16) -> FinitePartialAction:
    """Partial Bernoulli action on the subsets of G containing the unit."""
    if not group.is_finite:
        raise UnsupportedError("the partial Bernoulli action needs a finite group")
    if group.order > max_order:
        raise UnsupportedError(f"2^{group.order - 1} subsets is beyond the enumeration bound")
    others = [g for g in group.elements() if g != group.unit]
    carrier = []
    for mask in range(1 << len(others)):
        carrier.append(frozenset([group.unit] + [others[i] for i in range(len(others)) if mask >> i & 1]))
    domains, maps = {}, {}
    for g in group.elements():
        domains[g] = frozenset(w for w in carrier if g in w)
    for g in group.elements():
        maps[g] = {w: group.left_translate(g, w) for w in domains[group.inverse(g)]}
    return FinitePartialAction(group, carrier, domains, maps)


def truncated_shift_action(n: int, window: int | None = None) -> FinitePartialAction:
    """Integers acting on {0, ..., n-1} by partial translation k: i -> i + k."""
    group = TruncatedIntegers(n if window is None else window)
    carrier = list(range(n))
    domains, maps = {}, {}
    for k in group.elements():
        domains[k] = frozenset(i for i in carrier if 0 <= i - k < n)
        maps[k] = {i: i + k for i in carrier if 0 <= i + k < n}
    return FinitePartialAction(group, carrier, domains, maps, labeler=str)


class FreeGroupPartialAction:
    """Lazy partial action of a free group generated by partial bijections.

    theta_(x1...xn) = theta_x1 o ... o theta_xn along the reduced word, with
    the generator inverses acting by inverse maps.
    """

    def __init__(self, symmetries: dict):
        self.symmetries = {}
        self.inverses = {}
        for name, m in symmetries.items():
            m = dict(m)
            if len(set(m.values())) != len(m):
                raise PreconditionError(f"symmetry {name!r} is not injective")
            self.symmetries[name] = m
            self.inverses[name] = {v: k for k, v in m.items()}
        self.alphabet = tuple(sorted(self.symmetries))
        pts = set()
        for m in self.symmetries.values():
            pts |= set(m) | set(m.values())
        self.points = sort_points(pts)

    def apply(self, word: FreeWord, x):
        for name, sign in reversed(word.letters):
            table = self.symmetries[name] if sign == 1 else self.inverses[name]
            if x not in table:
                return None
            x = table[x]
        return x

    def domain(self, word: FreeWord, points: Iterable | None = None) -> frozenset:
        """Points where theta_(word^-1) is defined, i.e. the source of theta_word."""
        pts = self.points if points is None else points
        return frozenset(x for x in pts if self.apply(word, x) is not None)


def free_action_from_symmetries(symmetries: dict) -> FreeGroupPartialAction:
    return FreeGroupPartialAction(symmetries)


def action_graph(a: FinitePartialAction) -> frozenset:
    g_ = a.group
    triples = set()
    for g in g_.elements():
        for x in a.domain(g_.inverse(g)) if g_.contains(g_.inverse(g)) else ():
            triples.add((a.theta(g, x), g, x))
    return frozenset(triples)


def fixed_points(a: FinitePartialAction, g) -> frozenset:
    g_ = a.group
    return frozenset(x for x in a.domain(g_.inverse(g)) if a.theta(g, x) == x)


def is_free(a: FinitePartialAction) -> bool:
    """On a finite discrete carrier topological freeness is plain freeness."""
    return all(not fixed_points(a, g) for g in a.group.elements() if g != a.group.unit)


# ---------------------------------------------------------------------------
# enumeration


def partial_injections(points) -> list:
    """All injective partial maps of a finite set into itself, as dicts."""
    points = list(points)
    out = []
    for k in range(len(points) + 1):
        for src in itertools.combinations(points, k):
            for dst in itertools.permutations(points, k):
                out.append(dict(zip(src, dst)))
    return out


def enumerate_partial_actions(group: FiniteGroup, carrier) -> list:
    """Every partial action of a finite group on the given carrier."""
    carrier = list(carrier)
    g_ = group
    reps = []
    seen = set()
    for g in g_.elements():
        if g == g_.unit or g in seen:
            continue
        seen.add(g)
        seen.add(g_.inverse(g))
        reps.append(g)
    choices = []
    injections = partial_injections(carrier)
    for g in reps:
        if g_.inverse(g) == g:
            choices.append([m for m in injections if all(m.get(y) == x for x, y in m.items())])
        else:
            choices.append(injections)
    out = []
    ident = {x: x for x in carrier}
    for combo in itertools.product(*choices):
        maps = {g_.unit: ident}
        for g, m in zip(reps, combo):
            maps[g] = m
            maps[g_.inverse(g)] = {y: x for x, y in m.items()}
        domains = {g: frozenset(maps[g].values()) for g in g_.elements()}
        try:
            act = FinitePartialAction(g_, carrier, domains, maps)
        except FormatError:
            continue
        if validate_action(act).ok:
            out.append(act)
    return out
