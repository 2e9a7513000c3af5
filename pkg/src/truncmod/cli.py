"""JSON command-line front end.

One job document in (stdin or a file), one result document out (stdout).
The document carries a ring description, a payload, and options; the
subcommand on the command line picks the operation.  Polynomials travel as
strings in the canonical grammar, so any result can be fed back in.

Exit codes: 0 when the computation completed (a false verdict is still 0),
2 for schema or parse problems, 3 for computation errors.  Errors are
reported as a JSON document with an "error" object.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .arith import ArithError, Poly, grevlex, lex
from .doublepoint import (
    ChartChange,
    LocalDoubleRing,
    PointIdeal,
    TauClass,
    ext_complex_check,
    extension_module,
    is_balanced_extension,
    recover_ideal,
    verify_maximal_ideal_resolution,
)
from .doublepoint import (
    affine_difference,
    change_chart,
    ideals_equal,
    lambda_coord,
    make_chart,
    tau,
)
from .dualtor import dual, torsion
from .fpmod import (
    Grading,
    PresMod,
    extension_R_by_Ri,
    ext1_module,
    first_canonical_filtration,
    free_module,
    generic_type,
    is_balanced,
    quasi_free_type,
    refine_filtrations,
    second_canonical_filtration,
    truncated_free,
)
from .groebner import SpanGB, kernel_through, vec_from_polys, vec_to_polys
from .hilbert import (
    hilbert_polynomial,
    presmod_dimension_by_enumeration,
    rank_degree_reduced,
    reduced_hilbert_polynomial,
)
from .multiring import (
    AutMap,
    TruncRing,
    compose,
    is_zero_divisor,
    verify_cocycle,
    zero_divisor_witness,
)
from .regseq import ideal_presentation, is_regular_sequence, shadow_membership

COMMANDS = (
    "gb", "nf", "syz", "ring.zerodivisor", "aut.compose", "aut.cocycle",
    "module.filtration", "module.balanced", "module.quasifree",
    "module.generictype", "module.torsion", "module.dual", "module.ext1",
    "module.extend", "module.refine", "regseq.check", "regseq.shadow",
    "ideal.tau", "ideal.eq", "ideal.lambda", "ideal.chart",
    "ideal.resolution", "ideal.extcheck", "ideal.extend", "ideal.recover",
    "hilbert.poly", "hilbert.pred",
)


class SchemaError(Exception):
    """Bad job document: missing fields, wrong shapes, unparsable strings."""


# -- document plumbing ------------------------------------------------------


def _require(doc: dict, key: str, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{where}: missing field {key!r}")
    return doc[key]


def _parse_poly(ring, text, where: str) -> Poly:
    if not isinstance(text, str):
        raise SchemaError(f"{where}: expected a polynomial string, got {text!r}")
    try:
        return ring.parse(text)
    except ArithError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _parse_frac(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"{where}: expected an integer or 'p/q' string")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _ser_frac(q: Fraction):
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _ser_col(col) -> list[str]:
    return [str(p) for p in col]


def _ser_presmod(P: PresMod) -> dict:
    return {
        "generators": P.ngens,
        "relations": [_ser_col(c) for c in P.relations],
        "degrees": list(P.grading.gen_degrees) if P.grading else None,
        "t_weight": P.grading.t_weight if P.grading else None,
    }


def _build_ring(job: dict, options: dict) -> TruncRing:
    ring_doc = _require(job, "ring", "job")
    variables = _require(ring_doc, "variables", "ring")
    if (not isinstance(variables, list) or not variables
            or not all(isinstance(v, str) for v in variables)):
        raise SchemaError("ring.variables must be a nonempty list of names")
    n = ring_doc.get("n", 1)
    if not isinstance(n, int) or n < 1:
        raise SchemaError("ring.n must be a positive integer")
    order = lex() if options.get("order") == "lex" else grevlex()
    try:
        return TruncRing(tuple(variables), n, order)
    except ArithError as exc:
        raise SchemaError(f"ring: {exc}") from exc


def _double_ring(job: dict, options: dict) -> LocalDoubleRing:
    ring_doc = job.get("ring")
    if ring_doc is not None:
        if ring_doc.get("variables") not in (None, ["x", "y"]):
            raise SchemaError("point-ideal commands fix the ring Q[x,y][t]/(t^2)")
        if ring_doc.get("n") not in (None, 2):
            raise SchemaError("point-ideal commands require n = 2")
    return LocalDoubleRing(jet_order=options.get("jet_order") or 6)


def _parse_span(tr: TruncRing, payload: dict) -> tuple[int, list]:
    """Rank and vectors of a span: either 'generators' (rank 1 strings) or
    'vectors' (lists of strings, one entry per component)."""
    if "generators" in payload:
        gens = payload["generators"]
        if not isinstance(gens, list):
            raise SchemaError("payload.generators must be a list")
        vecs = [vec_from_polys((_parse_poly(tr, g, "generators"),)) for g in gens]
        return 1, vecs
    vectors = _require(payload, "vectors", "payload")
    if not isinstance(vectors, list) or not vectors:
        raise SchemaError("payload.vectors must be a nonempty list")
    rank = payload.get("rank", len(vectors[0]))
    vecs = []
    for row in vectors:
        if not isinstance(row, list) or len(row) != rank:
            raise SchemaError(f"every vector must have {rank} components")
        vecs.append(vec_from_polys(tuple(
            _parse_poly(tr, p, "vectors") for p in row)))
    return rank, vecs


def _parse_presmod(tr: TruncRing, payload: dict, where: str = "payload") -> PresMod:
    """A module from one of the accepted shapes: an ideal (syzygy
    presentation built here), an explicit presentation, a free module, or a
    truncated free module."""
    if "ideal" in payload:
        gens = payload["ideal"]
        if not isinstance(gens, list) or not gens:
            raise SchemaError(f"{where}.ideal must be a nonempty list")
        seq = [tr.elem(_parse_poly(tr, g, f"{where}.ideal")) for g in gens]
        return ideal_presentation(seq)
    if "presentation" in payload:
        pres = payload["presentation"]
        ngens = _require(pres, "generators", f"{where}.presentation")
        if not isinstance(ngens, int) or ngens < 0:
            raise SchemaError(f"{where}.presentation.generators must be >= 0")
        rel_rows = pres.get("relations", [])
        rels = []
        for row in rel_rows:
            if not isinstance(row, list) or len(row) != ngens:
                raise SchemaError(
                    f"{where}: every relation needs {ngens} entries")
            rels.append(tuple(_parse_poly(tr, p, f"{where}.relations")
                              for p in row))
        grading = None
        if pres.get("degrees") is not None:
            degrees = pres["degrees"]
            if not isinstance(degrees, list) or len(degrees) != ngens:
                raise SchemaError(f"{where}.degrees must list {ngens} integers")
            grading = Grading(tuple(int(d) for d in degrees),
                              int(pres.get("t_weight", 1)))
        try:
            return PresMod(tr, ngens, rels, grading)
        except ArithError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    if "free" in payload:
        shape = payload["free"]
        rank = _require(shape, "rank", f"{where}.free")
        degrees = shape.get("degrees")
        return free_module(tr, int(rank),
                           tuple(int(d) for d in degrees) if degrees else None,
                           int(shape.get("t_weight", 1)))
    if "truncated_free" in payload:
        shape = payload["truncated_free"]
        level = _require(shape, "level", f"{where}.truncated_free")
        return truncated_free(tr, int(level), int(shape.get("degree", 0)),
                              int(shape.get("t_weight", 1)))
    raise SchemaError(
        f"{where}: expected one of 'ideal', 'presentation', 'free', "
        "'truncated_free'")


def _parse_aut(tr: TruncRing, doc: dict, where: str) -> AutMap:
    if "deriv" in doc:
        d_coeffs = {v: _parse_poly(tr.base, p, f"{where}.deriv")
                    for v, p in _require(doc, "deriv", where).items()}
        alpha = _parse_poly(tr.base, doc.get("alpha", "1"), f"{where}.alpha")
        try:
            return AutMap.from_deriv(tr, d_coeffs, alpha)
        except ArithError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    images = {v: _parse_poly(tr, p, f"{where}.images")
              for v, p in _require(doc, "images", where).items()}
    t_image = _parse_poly(tr, _require(doc, "t_image", where), f"{where}.t_image")
    try:
        return AutMap(tr, images, t_image)
    except ArithError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _ser_aut(a: AutMap) -> dict:
    out = {
        "images": {v: str(p) for v, p in sorted(a.var_images.items())},
        "t_image": str(a.t_image),
    }
    if a.ring.n == 2:
        out["deriv"] = {v: str(a.deriv_coeff(v)) for v in a.ring.base.variables}
        out["alpha"] = str(a.alpha())
    return out


def _parse_tau(ring: LocalDoubleRing, data, where: str):
    if isinstance(data, str):
        return _parse_poly(ring.trunc, data, where)
    if isinstance(data, list) and len(data) == 2:
        if all(isinstance(v, str) for v in data):
            return (_parse_poly(ring.base, data[0], where),
                    _parse_poly(ring.base, data[1], where))
        return TauClass(_parse_frac(data[0], where), _parse_frac(data[1], where))
    raise SchemaError(f"{where}: expected a class element string or a pair")


def _parse_chart(ring: LocalDoubleRing, doc: dict) -> ChartChange:
    fields = {}
    for name, default in (("alpha", "1"), ("beta", "0"), ("gamma", "0"),
                          ("delta", "1"), ("u", "0"), ("v", "0")):
        fields[name] = _parse_poly(ring.base, doc.get(name, default),
                                   f"chart.{name}")
    return make_chart(ring, **fields)


def _point_ideal(ring: LocalDoubleRing, doc: dict, where: str) -> PointIdeal:
    a = _parse_poly(ring.base, _require(doc, "a", where), f"{where}.a")
    b = _parse_poly(ring.base, _require(doc, "b", where), f"{where}.b")
    return PointIdeal(ring, a, b)


# -- command handlers -------------------------------------------------------


def _cmd_gb(job, payload, options):
    tr = _build_ring(job, options)
    rank, vecs = _parse_span(tr, payload)
    span = SpanGB(tr.S, rank, vecs + tr.t_power_relations(rank))
    basis = [_ser_col(vec_to_polys(tr.S, rank, v)) for v in span.gb]
    return {"basis": basis, "rank": rank}


def _cmd_nf(job, payload, options):
    tr = _build_ring(job, options)
    rank, vecs = _parse_span(tr, payload)
    elem = payload.get("element")
    if isinstance(elem, str):
        elem = [elem]
    if not isinstance(elem, list) or len(elem) != rank:
        raise SchemaError(f"payload.element must have {rank} components")
    vec = vec_from_polys(tuple(_parse_poly(tr, p, "element") for p in elem))
    span = SpanGB(tr.S, rank, vecs + tr.t_power_relations(rank))
    nf = span.normal_form(vec)
    return {"normal_form": _ser_col(vec_to_polys(tr.S, rank, nf)),
            "member": not nf}


def _cmd_syz(job, payload, options):
    tr = _build_ring(job, options)
    rank, vecs = _parse_span(tr, payload)
    syz = kernel_through(tr.S, len(vecs), vecs, tr.t_power_relations(rank))
    return {"syzygies": [_ser_col(vec_to_polys(tr.S, len(vecs), v))
                         for v in syz]}


def _cmd_zerodivisor(job, payload, options):
    tr = _build_ring(job, options)
    u = tr.elem(_parse_poly(tr, _require(payload, "element", "payload"),
                            "element"))
    witness = zero_divisor_witness(u)
    return {"zerodivisor": is_zero_divisor(u),
            "witness": str(witness.poly) if witness is not None else None}


def _cmd_aut_compose(job, payload, options):
    tr = _build_ring(job, options)
    first = _parse_aut(tr, _require(payload, "first", "payload"), "first")
    second = _parse_aut(tr, _require(payload, "second", "payload"), "second")
    return {"composite": _ser_aut(compose(first, second))}


def _cmd_aut_cocycle(job, payload, options):
    tr = _build_ring(job, options)
    ij = _parse_aut(tr, _require(payload, "ij", "payload"), "ij")
    jk = _parse_aut(tr, _require(payload, "jk", "payload"), "jk")
    ik = _parse_aut(tr, _require(payload, "ik", "payload"), "ik")
    return {"consistent": verify_cocycle(ij, jk, ik)}


def _cmd_filtration(job, payload, options):
    tr = _build_ring(job, options)
    M = _parse_presmod(tr, payload)

    def chain_doc(chain):
        layers = []
        for Q in chain.quotients():
            layers.append({
                "generators": Q.ngens,
                "relations": len(Q.relations),
                "t_annihilated": Q.is_t_annihilated(),
                "zero": Q.is_zero_module(),
            })
        return {"members": len(chain.members), "layers": layers}

    return {"first": chain_doc(first_canonical_filtration(M)),
            "second": chain_doc(second_canonical_filtration(M))}


def _cmd_balanced(job, payload, options):
    tr = _build_ring(job, options)
    M = _parse_presmod(tr, payload)
    rep = is_balanced(M)
    witness = None
    if rep.witness is not None:
        if "ideal" in payload:
            gens = [tr.parse(g) for g in payload["ideal"]]
            elem = tr.S.zero()
            for c, g in zip(rep.witness, gens):
                elem = elem + c * g
            witness = str(tr.truncate(elem))
        else:
            witness = _ser_col(rep.witness)
    return {"balanced": rep.balanced, "by_composite": rep.by_composite,
            "by_filtration": rep.by_filtration, "witness": witness,
            "witness_level": rep.witness_level, "note": rep.note}


def _cmd_quasifree(job, payload, options):
    tr = _build_ring(job, options)
    rep = quasi_free_type(_parse_presmod(tr, payload))
    return {"quasi_free": rep.type_vector is not None,
            "type": list(rep.type_vector) if rep.type_vector else None,
            "layer_ranks": rep.layer_ranks, "first_nonfree": rep.first_nonfree,
            "note": rep.note}


def _cmd_generictype(job, payload, options):
    tr = _build_ring(job, options)
    return {"type": list(generic_type(_parse_presmod(tr, payload)))}


def _cmd_torsion(job, payload, options):
    tr = _build_ring(job, options)
    rep = torsion(_parse_presmod(tr, payload))
    return {
        "torsion_free": rep.is_torsion_free,
        "generators": [_ser_col(g) for g in rep.submodule.gens],
        "witnesses": [{"element": _ser_col(g), "annihilator": str(s)}
                      for g, s in rep.witnesses],
    }


def _cmd_dual(job, payload, options):
    tr = _build_ring(job, options)
    return {"dual": _ser_presmod(dual(_parse_presmod(tr, payload)))}


def _cmd_ext1(job, payload, options):
    tr = _build_ring(job, options)
    M = _parse_presmod(tr, _require(payload, "source", "payload"), "source")
    N = _parse_presmod(tr, _require(payload, "target", "payload"), "target")
    E = ext1_module(M, N)
    out = {"ext1": _ser_presmod(E)}
    bound = options.get("degree_bound")
    if bound is not None and E.grading is not None:
        out["dimensions"] = [presmod_dimension_by_enumeration(E, d)
                             for d in range(bound + 1)]
    return out


def _cmd_extend(job, payload, options):
    tr = _build_ring(job, options)
    sigma = _parse_poly(tr, _require(payload, "sigma", "payload"), "sigma")
    level = _require(payload, "level", "payload")
    if not isinstance(level, int):
        raise SchemaError("payload.level must be an integer")
    res = extension_R_by_Ri(tr, sigma, level, verify=options.get("verify", False))
    return {"module": _ser_presmod(res.module),
            "generic_type": list(generic_type(res.module))}


def _cmd_refine(job, payload, options):
    tr = _build_ring(job, options)
    M = _parse_presmod(tr, payload)
    D = first_canonical_filtration(M)
    F = second_canonical_filtration(M)
    Dr, Fr, pairs = refine_filtrations(D, F)
    return {"first_refined_members": len(Dr.members),
            "second_refined_members": len(Fr.members),
            "matched_layers": [list(p[0]) for p in pairs]}


def _cmd_regseq_check(job, payload, options):
    tr = _build_ring(job, options)
    seq_doc = _require(payload, "sequence", "payload")
    if not isinstance(seq_doc, list) or not seq_doc:
        raise SchemaError("payload.sequence must be a nonempty list")
    seq = [tr.elem(_parse_poly(tr, s, "sequence")) for s in seq_doc]
    rep = is_regular_sequence(seq, jet_order=options.get("jet_order"))
    return {"regular": rep.regular,
            "witness_index": rep.witness_index,
            "witness": str(rep.witness) if rep.witness is not None else None,
            "reductions": [str(p) for p in rep.reductions]}


def _cmd_regseq_shadow(job, payload, options):
    tr = _build_ring(job, options)
    y = _parse_poly(tr.base, _require(payload, "element", "payload"), "element")
    seq_doc = _require(payload, "sequence", "payload")
    seq = [tr.elem(_parse_poly(tr, s, "sequence")) for s in seq_doc]
    member = shadow_membership(y, seq, jet_order=options.get("jet_order"))
    return {"member": member}


def _cmd_tau(job, payload, options):
    ring = _double_ring(job, options)
    J = _point_ideal(ring, payload, "payload")
    cls = tau(J)
    return {"tau": [_ser_frac(cls.c_x), _ser_frac(cls.c_y)]}


def _cmd_ideal_eq(job, payload, options):
    ring = _double_ring(job, options)
    J = _point_ideal(ring, _require(payload, "first", "payload"), "first")
    K = _point_ideal(ring, _require(payload, "second", "payload"), "second")
    return {"equal": ideals_equal(J, K)}


def _cmd_lambda(job, payload, options):
    ring = _double_ring(job, options)
    lam = lambda_coord(_point_ideal(ring, payload, "payload"))
    return {"lambda": [_ser_frac(c) for c in lam.coords], "chart": lam.chart}


def _cmd_chart(job, payload, options):
    ring = _double_ring(job, options)
    J = _point_ideal(ring, payload, "payload")
    ch = _parse_chart(ring, _require(payload, "chart", "payload"))
    if "difference_with" in payload:
        K = _point_ideal(ring, payload["difference_with"], "difference_with")
        diff = affine_difference(J, K, charts=(ch,))
        return {"difference": [_ser_frac(c) for c in diff]}
    lam = change_chart(J, ch)
    return {"lambda": [_ser_frac(c) for c in lam.coords], "chart": lam.chart}


def _cmd_resolution(job, payload, options):
    ring = _double_ring(job, options)
    bound = options.get("degree_bound") or 4
    overrides = {}
    for key, width in (("phi1", 2), ("phi2", 3)):
        if key in payload:
            cols = []
            for row in payload[key]:
                if not isinstance(row, list) or len(row) != width:
                    raise SchemaError(f"payload.{key} columns need {width} entries")
                cols.append(tuple(_parse_poly(ring.trunc, p, key) for p in row))
            overrides[key + "_cols"] = cols
    rep = verify_maximal_ideal_resolution(ring, bound, **overrides)
    return {"ok": rep.ok, "failures": rep.failures,
            "table": [list(r) for r in rep.dimension_table]}


def _cmd_extcheck(job, payload, options):
    ring = _double_ring(job, options)
    bound = options.get("degree_bound") or 4
    overrides = {}
    for key, width in (("psi1", 2), ("psi2", 3)):
        if key in payload:
            matrix = []
            for row in payload[key]:
                if not isinstance(row, list) or len(row) != width:
                    raise SchemaError(f"payload.{key} rows need {width} entries")
                matrix.append([_parse_poly(ring.base, p, key) for p in row])
            overrides[key] = matrix
    rep = ext_complex_check(ring, bound, **overrides)
    return {"ok": rep.ok, "failures": rep.failures,
            "table": [list(r) for r in rep.dimension_table]}


def _cmd_ideal_extend(job, payload, options):
    ring = _double_ring(job, options)
    tau_data = _parse_tau(ring, _require(payload, "tau", "payload"), "tau")
    rho = _parse_poly(ring.base, _require(payload, "rho", "payload"), "rho")
    res = extension_module(ring, tau_data, rho,
                           verify=options.get("verify", False))
    return {"module": _ser_presmod(res.module),
            "balanced": is_balanced_extension(ring, tau_data, rho)}


def _cmd_recover(job, payload, options):
    ring = _double_ring(job, options)
    tau_data = _parse_tau(ring, _require(payload, "tau", "payload"), "tau")
    J = recover_ideal(ring, tau_data)
    return {"a": str(J.a), "b": str(J.b),
            "generators": [str(J.gen_x), str(J.gen_y)]}


def _cmd_hilbert_poly(job, payload, options):
    tr = _build_ring(job, options)
    M = _parse_presmod(tr, payload)
    p = hilbert_polynomial(M)
    return {"coefficients": [_ser_frac(c) for c in p.coeffs],
            "degree": p.degree()}


def _cmd_hilbert_pred(job, payload, options):
    tr = _build_ring(job, options)
    M = _parse_presmod(tr, payload)
    p = reduced_hilbert_polynomial(M)
    rd = rank_degree_reduced(M)
    return {"coefficients": [_ser_frac(c) for c in p.coeffs],
            "degree": p.degree(),
            "support_dimension": rd.support_dimension,
            "rank_coefficient": _ser_frac(rd.rank_coefficient),
            "degree_coefficient": _ser_frac(rd.degree_coefficient)}


_HANDLERS = {
    "gb": _cmd_gb,
    "nf": _cmd_nf,
    "syz": _cmd_syz,
    "ring.zerodivisor": _cmd_zerodivisor,
    "aut.compose": _cmd_aut_compose,
    "aut.cocycle": _cmd_aut_cocycle,
    "module.filtration": _cmd_filtration,
    "module.balanced": _cmd_balanced,
    "module.quasifree": _cmd_quasifree,
    "module.generictype": _cmd_generictype,
    "module.torsion": _cmd_torsion,
    "module.dual": _cmd_dual,
    "module.ext1": _cmd_ext1,
    "module.extend": _cmd_extend,
    "module.refine": _cmd_refine,
    "regseq.check": _cmd_regseq_check,
    "regseq.shadow": _cmd_regseq_shadow,
    "ideal.tau": _cmd_tau,
    "ideal.eq": _cmd_ideal_eq,
    "ideal.lambda": _cmd_lambda,
    "ideal.chart": _cmd_chart,
    "ideal.resolution": _cmd_resolution,
    "ideal.extcheck": _cmd_extcheck,
    "ideal.extend": _cmd_ideal_extend,
    "ideal.recover": _cmd_recover,
    "hilbert.poly": _cmd_hilbert_poly,
    "hilbert.pred": _cmd_hilbert_pred,
}

assert set(_HANDLERS) == set(COMMANDS)


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="truncmod",
        description="Decision procedures for modules over Q[x..][t]/(t^n); "
                    "one JSON job in, one JSON result out.")
    parser.add_argument("command", choices=COMMANDS, metavar="command",
                        help="one of: " + ", ".join(COMMANDS))
    parser.add_argument("input", nargs="?", default="-",
                        help="job document path, '-' for stdin (default)")
    parser.add_argument("--jet-order", type=int, default=None,
                        help="truncation order for origin-local questions")
    parser.add_argument("--order", choices=("grevlex", "lex"), default=None,
                        help="monomial order for all rings")
    parser.add_argument("--degree-bound", type=int, default=None,
                        help="bound for degree-by-degree checks")
    parser.add_argument("--verify", action="store_true", default=None,
                        help="enable all internal cross-check assertions")
    args = parser.parse_args(argv)

    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        job = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        _emit({"error": {"kind": "schema", "message": f"cannot read job: {exc}"}})
        return 2

    started = time.perf_counter()
    try:
        if not isinstance(job, dict):
            raise SchemaError("job document must be a JSON object")
        declared = job.get("command")
        if declared is not None and declared != args.command:
            raise SchemaError(
                f"document says command {declared!r}, invoked as {args.command!r}")
        options = dict(job.get("options") or {})
        for key, value in (("jet_order", args.jet_order),
                           ("order", args.order),
                           ("degree_bound", args.degree_bound),
                           ("verify", args.verify)):
            if value is not None:
                options[key] = value
        if options.get("order") not in (None, "grevlex", "lex"):
            raise SchemaError("options.order must be 'grevlex' or 'lex'")
        payload = job.get("payload")
        if payload is None:
            raise SchemaError("job document needs a payload")
        result = _HANDLERS[args.command](job, payload, options)
    except SchemaError as exc:
        _emit({"error": {"kind": "schema", "message": str(exc)}})
        return 2
    except ArithError as exc:
        _emit({"error": {"kind": type(exc).__name__, "message": str(exc)}})
        return 3

    result["meta"] = {
        "command": args.command,
        "elapsed_ms": round((time.perf_counter() - started) * 1000.0, 3),
    }
    _emit(result)
    return 0


if __name__ == "__main__":
    sys.exit(main())
