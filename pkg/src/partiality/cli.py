"""Command-line front end: one subcommand per analysis, JSON in and out.

Exit codes: 0 for a completed analysis (negative verdicts included),
1 for violated preconditions or internal consistency failures, 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys

from . import __version__
from . import actions as A
from . import algebras as AL
from . import fell as F
from . import graphs as GR
from . import pisos as PI
from . import quasilattice as QL
from . import reps as R
from .errors import FormatError, PartialityError
from .exact import ExactMatrix, gr
from .groups import builtin_group, word_length


def _vec(v) -> list:
    return [gr(x).to_json() for x in v]


def _parse_vec(data, n: int) -> tuple:
    if not isinstance(data, list) or len(data) != n:
        raise FormatError(f"expected a vector of length {n}")
    from .exact import GaussianRational

    return tuple(GaussianRational.from_json(x) for x in data)


class Context:
    def __init__(self, args):
        self.args = args
        self.raw = None
        self.bounds = {}
        self.theorems = []

    def read(self):
        path = self.args.input
        if path == "-":
            self.raw = sys.stdin.buffer.read()
        else:
            try:
                with open(path, "rb") as fh:
                    self.raw = fh.read()
            except OSError as exc:
                raise FormatError(f"cannot read {path}: {exc}") from exc
        try:
            return json.loads(self.raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise FormatError(f"malformed JSON: {exc}") from exc

    def input_hash(self) -> str:
        if self.raw is not None:
            return hashlib.sha256(self.raw).hexdigest()
        params = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "out")}
        return hashlib.sha256(json.dumps(params, sort_keys=True, default=str).encode()).hexdigest()


# ---------------------------------------------------------------------------
# partial actions and algebras


def cmd_action_validate(ctx):
    a = A.FinitePartialAction.from_json(ctx.read())
    ctx.theorems = ["partial-action-axioms"]
    v = A.validate_action(a)
    return {"valid": v.ok, **v.to_json(), "free": A.is_free(a) if v.ok else None}


def cmd_globalize(ctx):
    a = A.FinitePartialAction.from_json(ctx.read())
    A.require_valid(a)
    ctx.theorems = ["globalization-exists-and-is-unique"]
    glob = A.globalize(a)
    other = A.globalize_by_orbit_functions(a)
    back = A.restrict_global(glob.action, glob.embedding.values())
    restriction_ok = A.equivalent(a, back, fixed={x: glob.embedding[x] for x in a.carrier}) is not None
    fixed = {glob.embedding[x]: other.embedding[x] for x in a.carrier}
    unique = A.equivalent(glob.action, other.action, fixed=fixed, max_size=256) is not None
    out = glob.to_json()
    out.update({"size": len(glob.action.carrier), "restriction_recovers_action": restriction_ok,
                "constructions_equivalent": unique})
    return out


def cmd_bernoulli(ctx):
    G = builtin_group(ctx.args.group)
    ctx.theorems = ["partial-bernoulli-action"]
    b = A.bernoulli_partial(G)
    A.require_valid(b)
    return {
        "group": G.to_json(),
        "points": len(b.carrier),
        "domain_sizes": {G.label(g): len(b.domain(g)) for g in G.elements()},
        "action": b.to_json(),
    }


def _cp_report(cp) -> dict:
    return {
        "dim": cp.dim,
        "associativity_route": cp.associativity_route,
        "formulas": AL.check_crossed_product_formulas(cp),
        "invariants": AL.algebra_invariants(cp.algebra),
        "basis": list(cp.algebra.labels) if cp.algebra.labels else None,
    }


def cmd_crossed_product(ctx):
    a = A.FinitePartialAction.from_json(ctx.read())
    A.require_valid(a)
    ctx.theorems = ["crossed-product-associative", "crossed-product-graded"]
    return _cp_report(AL.crossed_product(AL.function_algebra_action(a)))


def cmd_apar(ctx):
    G = builtin_group(ctx.args.group)
    ctx.theorems = ["partial-group-algebra-commutative-part"]
    ap = AL.a_par(G)
    return {
        "dim": ap.algebra.dim,
        "points": [A.subset_label(G, w) for w in ap.points],
        "expected_dim": 2 ** (G.order - 1),
    }


def cmd_kpar(ctx):
    G = builtin_group(ctx.args.group)
    ctx.theorems = ["partial-group-algebra-as-crossed-product", "partial-group-algebra-universal-property"]
    kp = AL.k_par(G)
    return {
        "dim": kp.dim,
        "dimension_formula": AL.k_par_dimension_formula(G.order),
        "span_closure_dim": AL.kpar_dimension_by_span_closure(G),
        "invariants": AL.algebra_invariants(kp.algebra),
    }


def _relations(ctx, G):
    choice = ctx.args.relations
    if choice == "none":
        return AL.RelationSet(G, ())
    if choice == "vanishing":
        return AL.vanishing_relations(G)
    if choice == "semi-saturation":
        return AL.semi_saturation_relations(G, word_length(G))
    if choice == "isometry":
        from .groups import generated_subgroup

        return AL.isometry_relations(G, generated_subgroup(G, G.generators))
    ctx.args.input = choice
    return AL.RelationSet.from_json(G, ctx.read())


def cmd_spectrum(ctx):
    G = builtin_group(ctx.args.group)
    rels = _relations(ctx, G)
    ctx.theorems = ["relative-spectrum-invariant"]
    omega = AL.spectrum(G, rels)
    out = {"size": len(omega), "points": [A.subset_label(G, w) for w in omega], "relations": rels.to_json()}
    if ctx.args.relations == "semi-saturation":
        conv = AL.convex_subsets(G, word_length(G))
        out["equals_convex_subsets"] = set(conv) == set(omega)
        ctx.theorems.append("semi-saturated-spectrum-is-convex-subsets")
    return out


def cmd_cstar_rel(ctx):
    G = builtin_group(ctx.args.group)
    rels = _relations(ctx, G)
    ctx.theorems = ["relative-partial-group-algebra-as-crossed-product"]
    rc = AL.cstar_par_rel(G, rels)
    return {"spectrum_size": len(rc.spectrum), **_cp_report(rc.cp)}


# ---------------------------------------------------------------------------
# Fell bundles


def _bundle(ctx):
    choice = ctx.args.bundle
    if choice.startswith("group:"):
        return F.group_bundle(builtin_group(choice[6:]))
    if choice.startswith("bernoulli:"):
        G = builtin_group(choice[10:])
        return F.semidirect_bundle(AL.function_algebra_action(A.bernoulli_partial(G)))
    ctx.args.input = choice
    return F.FiniteFellBundle.from_json(ctx.read())


def _bundle_summary(b) -> dict:
    G = b.group
    return {"dim": b.dim, "fiber_dims": {G.label(g): b.fiber_dim(g) for g in G.elements()}}


def _section_json(b, y) -> dict:
    G = b.group
    return {G.label(g): _vec(v) for g, v in sorted(y.items()) if any(v)}


def _read_section(b, data) -> dict:
    if not isinstance(data, dict):
        raise FormatError("a section maps group labels to vectors")
    return {b.group.parse(k): _parse_vec(v, b.dim) for k, v in data.items()}


def cmd_fell_convolve(ctx):
    b = _bundle(ctx)
    ctx.theorems = ["cross-sectional-convolution"]
    if ctx.args.sections:
        ctx.args.input = ctx.args.sections
        data = ctx.read()
        y, z = _read_section(b, data.get("y")), _read_section(b, data.get("z"))
    else:
        rng = random.Random(ctx.args.seed)
        y, z = F.random_section(b, rng), F.random_section(b, rng)
        ctx.bounds["seed"] = ctx.args.seed
    return {**_bundle_summary(b), "y": _section_json(b, y), "z": _section_json(b, z),
            "product": _section_json(b, F.convolve(b, y, z))}


def cmd_fell_regrep(ctx):
    b = _bundle(ctx)
    ctx.theorems = ["regular-representation-of-fell-bundle"]
    reg = F.RegularRepresentation(b)
    reg.validate()
    return {**_bundle_summary(b), "injective": not reg._kernel, "kernel_dim": len(reg._kernel)}


def cmd_fell_fourier(ctx):
    b = _bundle(ctx)
    ctx.theorems = ["fourier-coefficients-of-regular-operators"]
    reg = F.RegularRepresentation(b)
    G = b.group
    ok = True
    for h in G.elements():
        for x in b.fiber_basis(h):
            z = reg.lam(h, x)
            for g in G.elements():
                want = x if g == h else tuple(0 for _ in x)
                if F.fourier(reg, z, g) != tuple(gr(c) for c in want):
                    ok = False
    rng = random.Random(ctx.args.seed)
    ctx.bounds["seed"] = ctx.args.seed
    y = F.random_section(b, rng)
    F.check_matrix_coefficients(reg, reg.of_section(y))
    return {**_bundle_summary(b), "coefficients_of_fiber_operators": ok, "matrix_coefficients": True}


def cmd_fell_parseval(ctx):
    b = _bundle(ctx)
    ctx.theorems = ["parseval-identity-for-fourier-coefficients"]
    reg = F.RegularRepresentation(b)
    rng = random.Random(ctx.args.seed)
    n = ctx.args.count
    ctx.bounds.update({"seed": ctx.args.seed, "sections": n})
    failures = 0
    for _ in range(n):
        if not F.parseval(reg, F.random_section(b, rng)).holds:
            failures += 1
    return {**_bundle_summary(b), "sections": n, "failures": failures, "holds": failures == 0}


def cmd_fell_grading(ctx):
    b = _bundle(ctx)
    ctx.theorems = ["topological-grading-via-faithful-expectation", "saturated-bundle"]
    v = F.bundle_grading_check(b)
    return {**_bundle_summary(b), "grading": v.to_json(), "saturation": F.saturation_predicates(b),
            "positivity": F.positivity_check(b)}


# ---------------------------------------------------------------------------
# partial isometries and partial representations


def _matrix(data) -> ExactMatrix:
    return ExactMatrix.from_json(data)


def _matrices(data, key: str) -> list:
    if isinstance(data, dict):
        data = data.get(key)
    if not isinstance(data, list):
        raise FormatError(f"expected a list of matrices under {key!r}")
    return [_matrix(m) for m in data]


def cmd_piso_check(ctx):
    data = ctx.read()
    m = _matrix(data.get("matrix", data) if isinstance(data, dict) else data)
    ctx.theorems = ["partial-isometry-via-projections"]
    out = {"partial_isometry": PI.is_partial_isometry(m), "projection": PI.is_projection(m)}
    if out["partial_isometry"]:
        out["initial_projection"] = PI.initial_projection(m).to_json()
        out["final_projection"] = PI.final_projection(m).to_json()
    return out


def cmd_piso_order(ctx):
    data = ctx.read()
    if not isinstance(data, dict) or "s" not in data or "t" not in data:
        raise FormatError("expected {'s': matrix, 't': matrix}")
    s, t = _matrix(data["s"]), _matrix(data["t"])
    PI.require_partial_isometry(s, "s")
    PI.require_partial_isometry(t, "t")
    ctx.theorems = ["partial-isometry-order-characterizations", "compatible-partial-isometries"]
    return {"s_leq_t": PI.piso_leq(s, t), "t_leq_s": PI.piso_leq(t, s), "compatible": PI.compatible(s, t),
            "product_is_partial_isometry": PI.product_is_partial_isometry(s, t)}


def cmd_piso_join(ctx):
    items = _matrices(ctx.read(), "items")
    ctx.theorems = ["join-of-compatible-partial-isometries"]
    j = PI.join_all(items)
    return {"join": j.to_json(), "join_is_partial_isometry": PI.is_partial_isometry(j)}


def cmd_piso_tame(ctx):
    gens = _matrices(ctx.read(), "generators")
    ctx.bounds["word_length"] = ctx.args.bound
    ctx.theorems = ["tame-sets-of-partial-isometries"]
    return PI.is_tame(gens, ctx.args.bound).to_json()


def cmd_prep_validate(ctx):
    rep = R.prep_from_json(ctx.read(), word_bound=ctx.args.bound)
    ctx.bounds["word_length"] = ctx.args.bound
    ctx.theorems = ["partial-representation-axioms", "partial-representation-order-characterization"]
    return R.validate_prep(rep, ctx.args.bound).to_json()


def cmd_prep_from_tame(ctx):
    data = ctx.read()
    gens = data.get("generators") if isinstance(data, dict) else data
    if isinstance(gens, dict):
        alphabet = sorted(gens)
        mats = [_matrix(gens[k]) for k in alphabet]
    else:
        mats, alphabet = _matrices(gens, "generators"), None
    ctx.bounds.update({"tameness_word_length": ctx.args.bound, "axiom_word_length": ctx.args.depth})
    ctx.theorems = ["tame-set-gives-semi-saturated-partial-representation"]
    rep = R.prep_from_tame(mats, alphabet, bound=ctx.args.bound, word_bound=ctx.args.depth)
    return {
        "generators": list(rep.generators),
        "values": {str(g) if not g.is_identity() else "1": rep.u(g).to_json() for g in rep.elements()},
        "semi_saturated": True,
    }


def cmd_prep_compress(ctx):
    data = ctx.read()
    if not isinstance(data, dict) or "rep" not in data or "p" not in data:
        raise FormatError("expected {'rep': ..., 'p': matrix}")
    v = R.prep_from_json(data["rep"])
    ctx.theorems = ["compression-of-unitary-representation"]
    rep = R.compress(v, _matrix(data["p"]))
    return {**rep.to_json(), "degenerate": rep.degenerate}


def cmd_prep_induced(ctx):
    rep = R.prep_from_json(ctx.read())
    ctx.theorems = ["partial-representation-induces-partial-action"]
    ind = R.induced_system(rep)
    G = rep.group
    spectral = ind.spectral_action()
    return {
        "dim": ind.action.algebra.dim,
        "domain_dims": {G.label(g): ind.action.domain(g).dim for g in G.elements()},
        "spectral_action": spectral.to_json(),
    }


# ---------------------------------------------------------------------------
# quasi-lattices


def _ql(ctx):
    return QL.structure_from_name(ctx.args.structure)


def _wh(ql, x):
    return QL.wh_label(ql, x)


def cmd_ql_join(ctx):
    ql = _ql(ctx)
    m, n = ql.parse(ctx.args.elements[0]), ql.parse(ctx.args.elements[1])
    ctx.bounds["candidate_length"] = ctx.args.depth
    ctx.theorems = ["least-upper-bound-in-positive-cone"]
    j = QL.join(ql, m, n, ctx.args.depth)
    return {"join": None if j is None else ql.label(j)}


def cmd_ql_sigma_tau(ctx):
    ql = _ql(ctx)
    g = ql.parse(ctx.args.elements[0])
    ctx.theorems = ["most-efficient-decomposition"]
    st = QL.sigma_tau(ql, g)
    return {"defined": st is not None,
            "sigma": None if st is None else ql.label(st[0]),
            "tau": None if st is None else ql.label(st[1])}


def cmd_ql_wh_mult(ctx):
    ql = _ql(ctx)
    e = [ql.parse(x) for x in ctx.args.elements]
    if len(e) != 4:
        raise FormatError("expected four elements m n p q")
    ctx.theorems = ["wiener-hopf-product-rule"]
    z = QL.wh_mult(ql, QL.WHPair(e[0], e[1]), QL.WHPair(e[2], e[3]))
    return {"product": _wh(ql, z)}


def cmd_ql_prep_extend(ctx):
    ql = _ql(ctx)
    g = ql.parse(ctx.args.elements[0])
    ctx.bounds["axiom_length"] = ctx.args.depth
    ctx.theorems = ["unique-extension-to-partial-representation", "nica-covariance"]
    axioms = QL.prep_axioms_check(ql, ctx.args.depth)
    if not axioms["ok"]:
        raise PartialityError(f"extension violates {axioms['axiom']}")
    return {"value": _wh(ql, QL.prep_extend(ql, g)), "axioms_checked": axioms,
            "nica_covariance": QL.ncc_check(ql, ctx.args.depth)}


def cmd_ql_omega(ctx):
    ql = _ql(ctx)
    d = ctx.args.depth
    ctx.bounds["depth"] = d
    ctx.theorems = ["spectrum-as-hereditary-directed-subsets"]
    sets = QL.hereditary_directed(ql, d)
    return {"count": len(sets), "truncations": [sorted(ql.label(x) for x in s) for s in sets]}


def cmd_ql_faithful(ctx):
    ql = _ql(ctx)
    ps = [ql.parse(x) for x in ctx.args.elements]
    ctx.bounds["probe_depth"] = ctx.args.depth
    ctx.theorems = ["wiener-hopf-faithfulness-projection"]
    return QL.faithfulness_projection(ql, ps, ctx.args.depth)


def cmd_ql_scarparo(ctx):
    ctx.bounds["length"] = ctx.args.bound
    ctx.theorems = ["weak-quasi-lattice-without-quasi-lattice"]
    return QL.scarparo_check(ctx.args.bound)


# ---------------------------------------------------------------------------
# graphs


def _graph(ctx):
    data = ctx.read()
    if isinstance(data, dict) and "graph" in data:
        return GR.DirectedGraph.from_json(data["graph"]), data
    return GR.DirectedGraph.from_json(data), data


def _path_json(p):
    if p is None:
        return None
    return p.to_json()


def cmd_graph_classify(ctx):
    g, _ = _graph(ctx)
    ctx.theorems = ["vertex-classification"]
    return GR.classify_vertices(g)


def cmd_graph_analyze(ctx):
    g, _ = _graph(ctx)
    ctx.bounds["path_length"] = ctx.args.bound
    out = GR.verdicts(g, ctx.args.bound)
    ctx.theorems = sorted(out.pop("theorems").values())
    return out


def cmd_graph_tau(ctx):
    g, _ = _graph(ctx)
    ctx.theorems = ["prefix-replacement-partial-action"]
    p = GR.parse_path(g, ctx.args.path)
    w = g.word(ctx.args.word)
    sf = GR.standard_form(g, w) if not w.is_identity() else None
    return {"standard_form": None if sf is None else {"mu": sf.mu.to_json(), "nu": sf.nu.to_json()},
            "image": _path_json(GR.tau_apply(g, w, p))}


def cmd_graph_fixed_points(ctx):
    g, _ = _graph(ctx)
    ctx.theorems = ["at-most-one-fixed-path"]
    return {"fixed_point": _path_json(GR.fixed_points(g, ctx.args.word))}


def cmd_graph_omega(ctx):
    g, _ = _graph(ctx)
    p = GR.parse_path(g, ctx.args.path)
    L = ctx.args.bound
    ctx.bounds["word_length"] = L
    ctx.theorems = ["configurations-from-paths", "local-configuration-types"]
    om = GR.omega_of_path(g, p, L)
    return {
        "members": sorted(str(x) for x in om),
        "size": len(om),
        "convex": GR.is_convex_in_ball(om),
        "matches_membership_test": om == GR.omega_bruteforce(g, p, L),
        "local_types": GR.check_local_types(g, om, L),
    }


def _sg(g, text):
    if text == "0":
        return None
    if "|" not in text:
        raise FormatError("semigroup elements are written 'alpha|beta'")
    a, b = text.split("|", 1)
    return GR.sg_element(g, _fin(g, a), _fin(g, b))


def _fin(g, text):
    p = GR.parse_path(g, text.strip())
    if not isinstance(p, GR.FinPath):
        raise FormatError("finite path expected")
    return p


def cmd_graph_semigroup(ctx):
    g, _ = _graph(ctx)
    ctx.theorems = ["graph-inverse-semigroup-product"]
    z = GR.graph_semigroup_mult(g, _sg(g, ctx.args.x), _sg(g, ctx.args.y))
    return {"product": "0" if z is None else {"alpha": z.alpha.to_json(), "beta": z.beta.to_json()}}


def cmd_graph_relations_check(ctx):
    g, data = _graph(ctx)
    ps, ss = GR.family_from_json(g, data)
    ctx.theorems = ["toeplitz-graph-relations", "cuntz-krieger-sum-relation"]
    return GR.toeplitz_relations_check(g, ps, ss, bool(data.get("ck", False)))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partiality", description="Finite models of partial dynamical systems.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *, input_=False, group=False, bound=None, depth=None, elements=None):
        sp = sub.add_parser(name)
        if input_:
            sp.add_argument("input", help="JSON file, or - for stdin")
        if group:
            sp.add_argument("--group", required=True, help="Z<n>, Z2xZ2, S3")
        if bound is not None:
            sp.add_argument("--bound", type=int, default=bound)
        if depth is not None:
            sp.add_argument("--depth", type=int, default=depth)
        if elements is not None:
            sp.add_argument("elements", nargs=elements)
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.set_defaults(func=func)
        return sp

    add("action-validate", cmd_action_validate, input_=True)
    add("globalize", cmd_globalize, input_=True)
    add("bernoulli", cmd_bernoulli, group=True)
    add("crossed-product", cmd_crossed_product, input_=True)
    add("apar", cmd_apar, group=True)
    add("kpar", cmd_kpar, group=True)
    for name, func in (("spectrum", cmd_spectrum), ("cstar-rel", cmd_cstar_rel)):
        sp = add(name, func, group=True)
        sp.add_argument("--relations", default="none",
                        help="none, vanishing, isometry, semi-saturation, or a JSON file")

    for name, func in (("fell-convolve", cmd_fell_convolve), ("fell-regrep", cmd_fell_regrep),
                       ("fell-fourier", cmd_fell_fourier), ("fell-parseval", cmd_fell_parseval),
                       ("fell-grading", cmd_fell_grading)):
        sp = add(name, func)
        sp.add_argument("bundle", help="group:<G>, bernoulli:<G>, or a bundle JSON file")
        sp.add_argument("--seed", type=int, default=0)
        if name == "fell-convolve":
            sp.add_argument("--sections", help="JSON file with sections y and z")
        if name == "fell-parseval":
            sp.add_argument("--count", type=int, default=100)

    add("piso-check", cmd_piso_check, input_=True)
    add("piso-order", cmd_piso_order, input_=True)
    add("piso-join", cmd_piso_join, input_=True)
    add("piso-tame", cmd_piso_tame, input_=True, bound=4)
    add("prep-validate", cmd_prep_validate, input_=True, bound=3)
    add("prep-from-tame", cmd_prep_from_tame, input_=True, bound=6, depth=3)
    add("prep-compress", cmd_prep_compress, input_=True)
    add("prep-induced", cmd_prep_induced, input_=True)

    def add_ql(name, func, elements, **kw):
        sp = add(name, func, elements=elements, **kw)
        sp.add_argument("--structure", default="FreeQL{a,b}",
                        help="FreeQL{a,b}, GridQL(k), ZN, ScarparoQL")
        return sp

    add_ql("ql-join", cmd_ql_join, 2, depth=None).add_argument("--depth", type=int, default=None)
    add_ql("ql-sigma-tau", cmd_ql_sigma_tau, 1)
    add_ql("ql-wh-mult", cmd_ql_wh_mult, 4)
    add_ql("ql-prep-extend", cmd_ql_prep_extend, 1, depth=2)
    add_ql("ql-omega", cmd_ql_omega, None, depth=2)
    add_ql("ql-faithful", cmd_ql_faithful, "+", depth=2)
    add("ql-scarparo", cmd_ql_scarparo, bound=6)

    add("graph-classify", cmd_graph_classify, input_=True)
    add("graph-analyze", cmd_graph_analyze, input_=True, bound=4)
    sp = add("graph-tau", cmd_graph_tau, input_=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--path", required=True, help="v:NAME, edge names, or PREFIX;CYCLE")
    sp = add("graph-fixed-points", cmd_graph_fixed_points, input_=True)
    sp.add_argument("--word", required=True)
    sp = add("graph-omega", cmd_graph_omega, input_=True, bound=2)
    sp.add_argument("--path", required=True)
    sp = add("graph-semigroup", cmd_graph_semigroup, input_=True)
    sp.add_argument("--x", required=True, help="alpha|beta or 0")
    sp.add_argument("--y", required=True)
    add("graph-relations-check", cmd_graph_relations_check, input_=True)
    return p


def run(argv=None) -> tuple:
    """Return (exit code, report dict, output path or None)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    ctx = Context(args)
    for key in ("bound", "depth"):
        if getattr(args, key, None) is not None:
            ctx.bounds[key] = getattr(args, key)
    try:
        result = args.func(ctx)
    except FormatError as exc:
        return 2, {"error": "format", "message": str(exc)}, None
    except PartialityError as exc:
        out = {"error": type(exc).__name__, "message": str(exc)}
        witness = getattr(exc, "witness", None)
        if witness is not None:
            out["witness"] = witness
        return 1, out, None
    report = {
        "tool": "partiality",
        "version": __version__,
        "command": args.command,
        "input_sha256": ctx.input_hash(),
        "bounds": ctx.bounds,
        "theorems": ctx.theorems,
        "result": result,
    }
    return 0, report, args.out


def main(argv=None) -> int:
    try:
        code, report, out_path = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if code != 0:
        sys.stderr.write(text)
    elif out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
