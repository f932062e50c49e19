"""Acceptance criteria, one test per criterion.

Each check prints a single PASS/FAIL line with its runtime and enforces the
time limit.  Run directly with `python3 tests/test_acceptance.py` for the
summary without pytest.
"""

from __future__ import annotations

import itertools
import random
import sys
import time

from partiality.actions import (
    bernoulli_partial,
    enumerate_partial_actions,
    equivalent,
    globalize,
    globalize_by_orbit_functions,
    partial_injections,
    restrict_global,
    truncated_shift_action,
    validate_action,
)
from partiality.algebras import (
    RelationSet,
    convex_subsets,
    crossed_product,
    function_algebra_action,
    hereditary_subsets,
    isometry_relations,
    k_par,
    kpar_dimension_by_span_closure,
    semi_saturation_relations,
    spectrum,
)
from partiality.exact import ExactMatrix, GaussianRational
from partiality.fell import (
    RegularRepresentation,
    fourier,
    group_bundle,
    parseval,
    random_bernoulli_restricted_action,
    random_section,
    semidirect_bundle,
)
from partiality.graphs import (
    bouquet,
    cycle_analysis,
    cycle_analysis_bruteforce,
    enumerate_sink_free_graphs,
    single_loop,
    verdicts,
    weakly_transitive,
    weakly_transitive_bruteforce,
)
from partiality.groups import builtin_group, cyclic_group, klein_group, word_length
from partiality.pisos import (
    compatible,
    final_projection,
    initial_projection,
    is_partial_isometry,
    is_projection,
    piso_join,
    piso_leq,
    product_is_partial_isometry,
)
from partiality.quasilattice import (
    inverse_semigroup_check,
    scarparo_check,
    structure_from_name,
    wh_oracle_check,
)


# ---------------------------------------------------------------------------
# 1. dimensions of partial group algebras

def check_kpar_dimensions():
    expected = {"Z2": 3, "Z_n(3)": 8, "Z2xZ2": 20}
    detail = {}
    for name, dim in expected.items():
        start = time.perf_counter()
        G = builtin_group(name)
        bern = bernoulli_partial(G)
        domain_count = sum(len(bern.domain(g)) for g in G.elements())
        crossed = k_par(G).dim
        closure = kpar_dimension_by_span_closure(G)
        elapsed = time.perf_counter() - start
        assert domain_count == crossed == closure == dim, (name, domain_count, crossed, closure)
        assert elapsed < 5, f"{name} took {elapsed:.2f}s"
        detail[name] = dim
    return detail


# ---------------------------------------------------------------------------
# 2. matrices as a crossed product by the shift

def check_matrix_crossed_product():
    n = 3
    cp = crossed_product(function_algebra_action(truncated_shift_action(n)))
    alg = cp.algebra
    assert cp.dim == n * n
    basis = [alg.basis_vector(i) for i in range(cp.dim)]
    for x, y, z in itertools.product(basis, repeat=3):
        assert alg.mul(alg.mul(x, y), z) == alg.mul(x, alg.mul(y, z))

    # (delta_i) delta_k  <->  e_(i, i-k)
    def as_matrix(vec):
        acc = ExactMatrix.zero(n)
        for idx, c in enumerate(vec):
            if c:
                k, coeff = cp.basis_info[idx]
                (i,) = [p for p, a in enumerate(coeff) if a]
                acc = acc + ExactMatrix.unit(n, i, i - k).scale(c)
        return acc

    images = [as_matrix(b) for b in basis]
    assert len({m.sort_key() for m in images}) == n * n
    for a, ma in zip(basis, images):
        for b, mb in zip(basis, images):
            assert as_matrix(alg.mul(a, b)) == ma @ mb
        assert as_matrix(alg.star(a)) == ma.adjoint()
    assert as_matrix(alg.one()) == ExactMatrix.identity(n)
    return {"dim": cp.dim, "route": cp.associativity_route}


# ---------------------------------------------------------------------------
# 3. globalization

def _count_by_definition(G, carrier):
    """Partial actions counted straight from the axioms over all partial injections."""
    inj = partial_injections(carrier)
    others = [g for g in G.elements() if g != G.unit]
    total = 0
    for choice in itertools.product(inj, repeat=len(others)):
        theta = dict(zip(others, choice))
        theta[G.unit] = {x: x for x in carrier}
        ok = True
        for g in G.elements():
            inv = {v: k for k, v in theta[g].items()}
            if theta[G.inverse(g)] != inv:
                ok = False
                break
            for h in G.elements():
                gh = theta[G.mul(g, h)]
                for x, y in theta[h].items():
                    if y in theta[g] and gh.get(x) != theta[g][y]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        total += ok
    return total


def check_globalization():
    checked = 0
    for k in (2, 3):
        G = cyclic_group(k)
        for size in range(4):
            carrier = list(range(size))
            actions = enumerate_partial_actions(G, carrier)
            assert len(actions) == _count_by_definition(G, carrier), (k, size)
            for a in actions:
                assert validate_action(a).ok
                first = globalize(a)
                second = globalize_by_orbit_functions(a)
                for glob in (first, second):
                    y = glob.action
                    image = set(glob.embedding.values())
                    assert len(image) == len(a.carrier)
                    covered = {y.theta(g, p) for g in G.elements() for p in image}
                    assert covered == set(y.carrier)
                    back = restrict_global(y, image)
                    assert equivalent(a, back, fixed=glob.embedding) is not None
                fixed = {first.embedding[x]: second.embedding[x] for x in a.carrier}
                assert equivalent(first.action, second.action, fixed=fixed) is not None
                checked += 1
    return {"actions": checked}


# ---------------------------------------------------------------------------
# 4. Parseval identity and Fourier coefficients

def _fourier_and_parseval(bundle, rng, sections):
    reg = RegularRepresentation(bundle)
    G = bundle.group
    for h in G.elements():
        for b in bundle.fiber_basis(h):
            z = reg.lam(h, b)
            for g in G.elements():
                expected = b if g == h else tuple(0 for _ in b)
                assert fourier(reg, z, g) == tuple(GaussianRational.coerce(c) for c in expected)
    for _ in range(sections):
        assert parseval(reg, random_section(bundle, rng)).holds


def check_parseval_fourier():
    rng = random.Random(20240601)
    bundles = [group_bundle(cyclic_group(2)), group_bundle(cyclic_group(3))]
    for _ in range(10):
        G = rng.choice([cyclic_group(2), cyclic_group(3), klein_group()])
        bundles.append(semidirect_bundle(function_algebra_action(random_bernoulli_restricted_action(G, rng))))
    for b in bundles:
        _fourier_and_parseval(b, rng, 100)
    return {"bundles": len(bundles), "sections_each": 100}


# ---------------------------------------------------------------------------
# 5. graph decisions against brute force

def check_graph_verdicts():
    graphs = 0
    for g in enumerate_sink_free_graphs(4, 6):
        derived = cycle_analysis(g)
        brute = cycle_analysis_bruteforce(g)
        for key in ("every_cycle_has_entry", "every_cycle_recurrent"):
            assert derived[key] == brute[key], (g.to_json(), key)
        assert weakly_transitive(g) == weakly_transitive_bruteforce(g), g.to_json()
        graphs += 1
    loop = verdicts(single_loop())
    assert loop["topologically_free_boundary"] is False
    assert loop["every_cycle_has_entry"] is False
    two = verdicts(bouquet(2))
    assert two["simple"] is True
    return {"graphs": graphs}


# ---------------------------------------------------------------------------
# 6. Wiener-Hopf products against shift matrices

def check_wiener_hopf():
    detail = {}
    for name in ("ZN", "FreeQL{a,b}"):
        ql = structure_from_name(name)
        oracle = wh_oracle_check(ql, max_len=3, window=10)
        assert oracle["ok"], oracle
        laws = inverse_semigroup_check(ql, 3)
        assert laws["ok"], laws
        detail[name] = oracle["columns_compared"]
    return detail


# ---------------------------------------------------------------------------
# 7. a weak quasi-lattice that is not a quasi-lattice

def check_scarparo():
    out = scarparo_check(6)
    assert out["upper_bounds_include_b_and_ba"]
    assert not out["least_upper_bound_found"]
    assert out["quasi_lattice_fails"]
    assert out["pair_join_mismatches"] == []
    assert out["weak_quasi_lattice_consistent"]
    assert out["pairs_checked"] > 0
    return {"minimal_upper_bounds": out["minimal_upper_bounds"][:3]}


# ---------------------------------------------------------------------------
# 8. spectra of relations

def check_spectra():
    detail = {}
    for name in ("Z2", "Z_n(3)", "Z_n(4)", "Z2xZ2"):
        G = builtin_group(name)
        elems = list(G.elements())
        empty = spectrum(G, RelationSet(G, ()))
        assert len(empty) == 2 ** (G.order - 1)
        for r in range(len(elems) + 1):
            for S in itertools.combinations(elems, r):
                got = set(spectrum(G, isometry_relations(G, S)))
                assert got == set(hereditary_subsets(G, S)), (name, S)
        length = word_length(G)
        semi = set(spectrum(G, semi_saturation_relations(G, length)))
        assert semi == set(convex_subsets(G, length)), name
        detail[name] = len(semi)
    return detail


# ---------------------------------------------------------------------------
# 9. partial isometry calculus

PHASES = (GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0, -1))
ENTRIES = (GaussianRational(0),) + PHASES


def _monomial(n, pairs):
    """pairs: {column: (row, phase)}."""
    m = {}
    for j, (i, c) in pairs.items():
        m[(i, j)] = c
    return ExactMatrix.from_sparse(n, n, m)


def _random_piso(n, rng):
    k = rng.randint(0, n)
    cols = rng.sample(range(n), k)
    rows = rng.sample(range(n), k)
    return _monomial(n, {j: (i, rng.choice(PHASES)) for j, i in zip(cols, rows)})


def _support(s):
    """The monomial data {column: (row, phase)} of a monomial matrix."""
    n = s.shape[0]
    return {j: (i, s[i, j]) for i in range(n) for j in range(n) if s[i, j]}


def _leq_oracle(s, t):
    st = _support(t)
    return all(st.get(j) == v for j, v in _support(s).items())


def _compatible_oracle(s, t):
    a, b = _support(s), _support(t)
    for j in a.keys() & b.keys():
        if a[j] != b[j]:
            return False
    rows_a = {i: (j, c) for j, (i, c) in a.items()}
    rows_b = {i: (j, c) for j, (i, c) in b.items()}
    return all(rows_a[i] == rows_b[i] for i in rows_a.keys() & rows_b.keys())


def _piso_family(rng):
    family = []
    for n in range(1, 5):
        family += [ExactMatrix.unit(n, i, j) for i in range(n) for j in range(n)]
    for n in range(1, 4):
        for m in partial_injections(range(n)):
            family.append(_monomial(n, {j: (i, GaussianRational(1)) for j, i in m.items()}))
    exhaustive = len(family)
    for _ in range(500):
        family.append(_random_piso(rng.randint(1, 4), rng))
    return family, exhaustive


def _restrict(s, rng):
    sup = _support(s)
    keep = [j for j in sup if rng.random() < 0.5]
    return _monomial(s.shape[0], {j: sup[j] for j in keep})


def check_piso_calculus():
    rng = random.Random(7)
    family, exhaustive = _piso_family(rng)

    # characterization through projections, also on non-isometric matrices
    for _ in range(500):
        n = rng.randint(1, 4)
        m = ExactMatrix(n, n, [rng.choice(ENTRIES) for _ in range(n * n)])
        a = is_projection(initial_projection(m))
        b = is_projection(final_projection(m))
        c = m @ m.adjoint() @ m == m
        assert a == b == c == is_partial_isometry(m)
    for s in family:
        assert is_partial_isometry(s)

    by_size = {}
    for s in family:
        by_size.setdefault(s.shape[0], []).append(s)
    pairs = []
    for s in family:
        same = by_size[s.shape[0]]
        pairs += [(s, rng.choice(same)) for _ in range(4)]
        smaller = _restrict(s, rng)
        pairs += [(smaller, s), (s, smaller)]
        pairs.append((smaller, _restrict(s, rng)))
    for n in range(1, 4):
        units = [ExactMatrix.unit(n, i, j) for i in range(n) for j in range(n)]
        pairs += list(itertools.product(units, repeat=2))

    leq_true = compat_true = 0
    for s, t in pairs:
        # products: commutation criterion and the direct identity
        assert product_is_partial_isometry(s, t) == is_partial_isometry(s @ t)
        assert initial_projection(s).commutes_with(final_projection(t)) == is_partial_isometry(s @ t)
        # order: definition, the range route, and the monomial oracle
        leq = piso_leq(s, t)
        assert leq == (final_projection(s) @ t == s) == _leq_oracle(s, t)
        leq_true += leq
        comp = compatible(s, t)
        assert comp == _compatible_oracle(s, t)
        if comp:
            compat_true += 1
            u = piso_join(s, t)
            merged = dict(_support(s))
            merged.update(_support(t))
            assert u == _monomial(s.shape[0], merged)
            assert initial_projection(u) == initial_projection(s) + initial_projection(t) - (
                initial_projection(s) @ initial_projection(t))
    assert leq_true > 0 and compat_true > 0

    # compatibility passes to joins
    triples = 0
    for s in family:
        same = by_size[s.shape[0]]
        for _ in range(6):
            t, r = _restrict(s, rng), rng.choice(same)
            parts = (s, t)
            if compatible(*parts) and compatible(r, s) and compatible(r, t):
                assert compatible(r, piso_join(s, t))
                triples += 1
    assert triples > 0
    return {"matrices": len(family), "exhaustive": exhaustive, "pairs": len(pairs), "triples": triples}


CRITERIA = [
    (1, "partial group algebra dimensions", 15.0, check_kpar_dimensions),
    (2, "3x3 matrices as a crossed product by the shift", 1.0, check_matrix_crossed_product),
    (3, "globalization round trip and uniqueness", 60.0, check_globalization),
    (4, "Parseval identity and Fourier coefficients", 10.0, check_parseval_fourier),
    (5, "graph verdicts agree with brute force", 300.0, check_graph_verdicts),
    (6, "Wiener-Hopf products against shift matrices", 30.0, check_wiener_hopf),
    (7, "weak quasi-lattice that is not a quasi-lattice", 10.0, check_scarparo),
    (8, "spectra of relations", 10.0, check_spectra),
    (9, "partial isometry calculus", 30.0, check_piso_calculus),
]


def run_criterion(number):
    _, title, limit, fn = CRITERIA[number - 1]
    start = time.perf_counter()
    error = None
    detail = None
    try:
        detail = fn()
    except AssertionError as exc:
        error = exc
    elapsed = time.perf_counter() - start
    if error is None and elapsed >= limit:
        error = AssertionError(f"took {elapsed:.2f}s, limit {limit:.0f}s")
    status = "PASS" if error is None else "FAIL"
    note = detail if error is None else repr(error)[:200]
    line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s, limit {limit:.0f}s) {note}"
    return error, line


def _check(number, capsys):
    error, line = run_criterion(number)
    with capsys.disabled():
        print("\n" + line)
    if error is not None:
        raise error


def test_criterion_1(capsys):
    _check(1, capsys)


def test_criterion_2(capsys):
    _check(2, capsys)


def test_criterion_3(capsys):
    _check(3, capsys)


def test_criterion_4(capsys):
    _check(4, capsys)


def test_criterion_5(capsys):
    _check(5, capsys)


def test_criterion_6(capsys):
    _check(6, capsys)


def test_criterion_7(capsys):
    _check(7, capsys)


def test_criterion_8(capsys):
    _check(8, capsys)


def test_criterion_9(capsys):
    _check(9, capsys)


if __name__ == "__main__":
    failed = 0
    for number, *_ in CRITERIA:
        error, line = run_criterion(number)
        print(line)
        failed += error is not None
    sys.exit(1 if failed else 0)
