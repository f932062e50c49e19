"""Finite groups as Cayley tables, the integers with a support window, free
groups as reduced words, and length functions.

Group elements of a `FiniteGroup` are the indices 0..order-1; labels are
only used for input and output.  Cyclic groups are written additively, so
the unit of Z_n(k) is labelled "0".
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FormatError, PreconditionError, UnsupportedError


class FiniteGroup:
    def __init__(self, mult: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 name: str | None = None, generators: Sequence[int] | None = None,
                 validate: bool = True):
        self.order = len(mult)
        self.mult = tuple(tuple(row) for row in mult)
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.order))
        if len(self.labels) != self.order or len(set(self.labels)) != self.order:
            raise FormatError("group labels must be distinct and one per element")
        if any(len(row) != self.order for row in self.mult):
            raise FormatError("multiplication table must be square")
        if any(not (0 <= x < self.order) for row in self.mult for x in row):
            raise FormatError("multiplication table entries out of range")
        self.name = name
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.unit = self._find_unit()
        self.inv = tuple(self._find_inverse(g) for g in range(self.order))
        if validate:
            self.validate()
        self.generators = tuple(generators) if generators is not None else tuple(
            g for g in range(self.order) if g != self.unit
        )

    is_finite = True

    def _find_unit(self) -> int:
        for e in range(self.order):
            if all(self.mult[e][g] == g and self.mult[g][e] == g for g in range(self.order)):
                return e
        raise FormatError("table has no two-sided unit")

    def _find_inverse(self, g: int) -> int:
        for h in range(self.order):
            if self.mult[g][h] == self.unit and self.mult[h][g] == self.unit:
                return h
        raise FormatError(f"element {self.labels[g]} has no inverse")

    def validate(self):
        m = self.mult
        for a in range(self.order):
            for b in range(self.order):
                ab = m[a][b]
                for c in range(self.order):
                    if m[ab][c] != m[a][m[b][c]]:
                        raise FormatError(
                            f"table is not associative at ({self.labels[a]}, {self.labels[b]}, {self.labels[c]})"
                        )

    def elements(self) -> range:
        return range(self.order)

    def mul(self, g: int, h: int) -> int:
        return self.mult[g][h]

    def inverse(self, g: int) -> int:
        return self.inv[g]

    def prod(self, items: Iterable[int]) -> int:
        acc = self.unit
        for x in items:
            acc = self.mult[acc][x]
        return acc

    def label(self, g: int) -> str:
        return self.labels[g]

    def parse(self, text) -> int:
        if isinstance(text, int) and not isinstance(text, bool):
            if 0 <= text < self.order:
                return text
        key = str(text)
        if key not in self._index:
            raise FormatError(f"unknown group element {text!r}")
        return self._index[key]

    def contains(self, g) -> bool:
        return isinstance(g, int) and 0 <= g < self.order

    def is_abelian(self) -> bool:
        return all(self.mult[a][b] == self.mult[b][a] for a in range(self.order) for b in range(self.order))

    def left_translate(self, g: int, subset: Iterable[int]) -> frozenset:
        return frozenset(self.mult[g][x] for x in subset)

    def to_json(self):
        if self.name is not None:
            return self.name
        return {"labels": list(self.labels), "mult": [list(r) for r in self.mult]}

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.mult == other.mult and self.labels == other.labels

    def __hash__(self):
        return hash((self.mult, self.labels))

    def __repr__(self):
        return f"FiniteGroup({self.name or self.order})"


class TruncatedIntegers:
    """The additive integers, used with data supported in [-window, window].

    Group operations are exact on all integers; `elements()` lists only the
    window, and callers raise when a nonzero value would have to live
    outside it.
    """

    is_finite = False

    def __init__(self, window: int):
        if window < 0:
            raise FormatError("window must be nonnegative")
        self.window = window
        self.unit = 0
        self.name = f"Z_trunc({window})"
        self.generators = (1,)

    def elements(self) -> range:
        return range(-self.window, self.window + 1)

    def mul(self, g: int, h: int) -> int:
        return g + h

    def inverse(self, g: int) -> int:
        return -g

    def prod(self, items: Iterable[int]) -> int:
        return sum(items)

    def label(self, g: int) -> str:
        return str(g)

    def parse(self, text) -> int:
        try:
            return int(text)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"not an integer: {text!r}") from exc

    def contains(self, g) -> bool:
        return isinstance(g, int) and -self.window <= g <= self.window

    @property
    def order(self):
        raise UnsupportedError("the integers are infinite")

    def to_json(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, TruncatedIntegers) and other.window == self.window

    def __hash__(self):
        return hash(("Z_trunc", self.window))

    def __repr__(self):
        return self.name


def cyclic_group(k: int) -> FiniteGroup:
    if k < 1:
        raise FormatError("cyclic group order must be positive")
    mult = [[(a + b) % k for b in range(k)] for a in range(k)]
    return FiniteGroup(mult, [str(i) for i in range(k)], name=f"Z_n({k})",
                       generators=[1 % k] if k > 1 else [])


def klein_group() -> FiniteGroup:
    labels = ["e", "a", "b", "ab"]
    vec = [(0, 0), (1, 0), (0, 1), (1, 1)]
    idx = {v: i for i, v in enumerate(vec)}
    mult = [[idx[((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)] for y in vec] for x in vec]
    return FiniteGroup(mult, labels, name="Z2xZ2", generators=[1, 2])


def symmetric_group_3() -> FiniteGroup:
    # permutations of {0,1,2}; r = (0 1 2), s = (0 1); composition (pq)(x) = p(q(x))
    r = (1, 2, 0)
    s = (1, 0, 2)
    e = (0, 1, 2)

    def comp(p, q):
        return tuple(p[q[x]] for x in range(3))

    r2 = comp(r, r)
    perms = [e, r, r2, s, comp(r, s), comp(r2, s)]
    labels = ["e", "r", "r2", "s", "rs", "r2s"]
    idx = {p: i for i, p in enumerate(perms)}
    mult = [[idx[comp(p, q)] for q in perms] for p in perms]
    return FiniteGroup(mult, labels, name="S3", generators=[1, 3])


_NAME_RE = re.compile(r"^\s*(Z_n|Z_trunc)\s*\(\s*(\d+)\s*\)\s*$")


def builtin_group(name: str):
    """Z_n(k), Zk, Z2xZ2, S3 or Z_trunc(n)."""
    if not isinstance(name, str):
        raise FormatError(f"group name must be a string, got {name!r}")
    m = _NAME_RE.match(name)
    if m:
        kind, k = m.group(1), int(m.group(2))
        return cyclic_group(k) if kind == "Z_n" else TruncatedIntegers(k)
    short = name.strip()
    if short in ("Z2xZ2", "Klein", "V4"):
        return klein_group()
    if short == "S3":
        return symmetric_group_3()
    m = re.match(r"^Z(\d+)$", short)
    if m:
        return cyclic_group(int(m.group(1)))
    raise FormatError(f"unknown group {name!r}")


def group_from_json(data):
    if isinstance(data, str):
        return builtin_group(data)
    if isinstance(data, dict) and "mult" in data:
        try:
            return FiniteGroup(data["mult"], data.get("labels"))
        except (TypeError, ValueError) as exc:
            raise FormatError(f"bad group table: {exc}") from exc
    raise FormatError("group must be a builtin name or a Cayley table")


def subgroups(group: FiniteGroup) -> list:
    """All subgroups, as sorted tuples, found by closing subsets of size <= 2."""
    found = set()
    elems = list(group.elements())
    for gens in itertools.chain([()], itertools.combinations(elems, 1), itertools.combinations(elems, 2)):
        found.add(tuple(sorted(generated_subgroup(group, gens))))
    return sorted(found, key=lambda s: (len(s), s))


def generated_subgroup(group: FiniteGroup, gens: Iterable[int]) -> frozenset:
    out = {group.unit}
    frontier = list(out)
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(x, g)
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(out)


# ---------------------------------------------------------------------------
# length functions


class LengthFunction:
    """A map l: G -> Q>=0 with l(1) = 0 and l(gh) <= l(g) + l(h)."""

    def __init__(self, group, values: dict):
        self.group = group
        self.values = {g: Fraction(v) for g, v in values.items()}

    def __call__(self, g) -> Fraction:
        if g in self.values:
            return self.values[g]
        if isinstance(self.group, TruncatedIntegers):
            return Fraction(abs(g))
        raise KeyError(g)

    def validate(self):
        g = self.group
        if self(g.unit) != 0:
            raise PreconditionError("length of the unit must vanish")
        for a in g.elements():
            if self(a) < 0:
                raise PreconditionError("lengths must be nonnegative")
            for b in g.elements():
                if self(g.mul(a, b)) > self(a) + self(b):
                    raise PreconditionError(
                        f"subadditivity fails at ({g.label(a)}, {g.label(b)})", witness=[a, b]
                    )

    def is_additive_pair(self, g, h) -> bool:
        return self(self.group.mul(g, h)) == self(g) + self(h)

    def distance(self, g, h) -> Fraction:
        return self(self.group.mul(self.group.inverse(g), h))

    def segment(self, g, h) -> frozenset:
        d = self.distance(g, h)
        return frozenset(
            x for x in self.group.elements() if self.distance(g, x) + self.distance(x, h) == d
        )

    def to_json(self) -> dict:
        from .exact import frac_str
        return {self.group.label(g): frac_str(v) for g, v in sorted(self.values.items())}


def word_length(group: FiniteGroup, generators: Iterable[int] | None = None) -> LengthFunction:
    """Word length with respect to a symmetric closure of the generators."""
    if isinstance(group, TruncatedIntegers):
        return LengthFunction(group, {k: abs(k) for k in group.elements()})
    gens = list(group.generators if generators is None else generators)
    steps = set(gens) | {group.inverse(g) for g in gens}
    dist = {group.unit: 0}
    queue = deque([group.unit])
    while queue:
        x = queue.popleft()
        for s in sorted(steps):
            y = group.mul(x, s)
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if len(dist) != group.order:
        raise PreconditionError("generators do not generate the group")
    return LengthFunction(group, dist)


# ---------------------------------------------------------------------------
# free groups


class FreeWord:
    """Reduced word in the free group on `alphabet`.

    letters is a tuple of (name, +1 | -1).  Reduction happens at
    construction, so equal group elements have equal representations.
    """

    __slots__ = ("alphabet", "letters", "_hash")

    def __init__(self, alphabet: Sequence[str], letters: Iterable = ()):
        self.alphabet = tuple(alphabet)
        names = set(self.alphabet)
        stack: list = []
        for item in letters:
            try:
                name, sign = item
            except (TypeError, ValueError) as exc:
                raise FormatError(f"bad letter {item!r}") from exc
            if name not in names:
                raise FormatError(f"letter {name!r} not in alphabet")
            if sign not in (1, -1):
                raise FormatError(f"letter exponent must be +1 or -1, got {sign!r}")
            if stack and stack[-1][0] == name and stack[-1][1] == -sign:
                stack.pop()
            else:
                stack.append((name, sign))
        self.letters = tuple(stack)
        self._hash = None

    @staticmethod
    def identity(alphabet) -> "FreeWord":
        return FreeWord(alphabet, ())

    @staticmethod
    def generator(alphabet, name: str) -> "FreeWord":
        return FreeWord(alphabet, [(name, 1)])

    @staticmethod
    def positive(alphabet, names: Iterable[str]) -> "FreeWord":
        return FreeWord(alphabet, [(n, 1) for n in names])

    def __len__(self):
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def is_positive(self) -> bool:
        return all(s == 1 for _, s in self.letters)

    def names(self) -> tuple:
        return tuple(n for n, _ in self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return fg_multiply(self, other)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.alphabet, [(n, -s) for n, s in reversed(self.letters)])

    def power(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        out = FreeWord.identity(self.alphabet)
        for _ in range(abs(k)):
            out = out * base
        return out

    def positive_negative_split(self):
        """(mu, nu) with self = mu nu^-1, mu and nu positive, or None."""
        letters = self.letters
        k = 0
        while k < len(letters) and letters[k][1] == 1:
            k += 1
        if any(s == 1 for _, s in letters[k:]):
            return None
        mu = tuple(n for n, _ in letters[:k])
        nu = tuple(n for n, _ in reversed(letters[k:]))
        return mu, nu

    def is_prefix_of(self, other: "FreeWord") -> bool:
        return other.letters[:len(self.letters)] == self.letters

    def __eq__(self, other):
        if not isinstance(other, FreeWord):
            return NotImplemented
        return self.letters == other.letters and self.alphabet == other.alphabet

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def sort_key(self):
        return (len(self.letters), tuple((n, -s) for n, s in self.letters))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def to_json(self) -> dict:
        return {"alphabet": list(self.alphabet), "letters": [[n, s] for n, s in self.letters]}

    @staticmethod
    def from_json(data) -> "FreeWord":
        if not isinstance(data, dict) or "alphabet" not in data or "letters" not in data:
            raise FormatError("word JSON needs alphabet and letters")
        alphabet = data["alphabet"]
        if not isinstance(alphabet, list) or not all(isinstance(a, str) for a in alphabet):
            raise FormatError("alphabet must be a list of names")
        letters = []
        for item in data["letters"]:
            if not isinstance(item, list) or len(item) != 2:
                raise FormatError(f"bad letter {item!r}")
            letters.append((item[0], int(item[1])))
        return FreeWord(alphabet, letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(n if s == 1 else f"{n}^-1" for n, s in self.letters)

    def __repr__(self):
        return f"FreeWord({str(self)!r})"


def fg_multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    if u.alphabet != v.alphabet:
        raise FormatError("words over different alphabets")
    return FreeWord(u.alphabet, u.letters + v.letters)


def cancellation_count(u: FreeWord, v: FreeWord) -> int:
    """Number of letter pairs cancelled when forming uv."""
    p = 0
    a, b = u.letters, v.letters
    while p < len(a) and p < len(b) and a[-1 - p][0] == b[p][0] and a[-1 - p][1] == -b[p][1]:
        p += 1
    return p


def parse_word(alphabet: Sequence[str], text: str) -> FreeWord:
    """Parse "a b^-1 c", "ab^-1c" (greedy on alphabet names) or "1"."""
    text = text.strip()
    if text in ("", "1"):
        return FreeWord.identity(alphabet)
    names = sorted(alphabet, key=len, reverse=True)
    letters = []
    pos = 0
    while pos < len(text):
        if text[pos] in " .*·":
            pos += 1
            continue
        for name in names:
            if text.startswith(name, pos):
                pos += len(name)
                break
        else:
            raise FormatError(f"cannot parse word {text!r} at position {pos}")
        exp = 1
        m = re.match(r"\^\(?(-?\d+)\)?", text[pos:])
        if m:
            exp = int(m.group(1))
            pos += m.end()
        sign = 1 if exp >= 0 else -1
        letters.extend([(name, sign)] * abs(exp))
    return FreeWord(alphabet, letters)


def reduced_words(alphabet: Sequence[str], max_len: int) -> list:
    """All reduced words of length <= max_len, shortest first, canonical order."""
    alphabet = tuple(alphabet)
    letters = [(n, 1) for n in sorted(alphabet)] + [(n, -1) for n in sorted(alphabet)]
    out = [FreeWord(alphabet, ())]
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1][0] == x[0] and w[-1][1] == -x[1]:
                    continue
                nxt.append(w + (x,))
        out.extend(FreeWord(alphabet, w) for w in nxt)
        layer = nxt
    return out


def positive_words(alphabet: Sequence[str], max_len: int) -> list:
    alphabet = tuple(alphabet)
    out = []
    for k in range(max_len + 1):
        for combo in itertools.product(sorted(alphabet), repeat=k):
            out.append(FreeWord.positive(alphabet, combo))
    return out
