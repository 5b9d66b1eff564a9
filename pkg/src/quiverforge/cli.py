"""Command-line entry point.

Exit codes: 0 success, 1 malformed input, 2 precondition failure,
3 numerical non-convergence.  Output is one JSON document.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import charvar, io, moment_flow, quiver, segre
from .path_algebra import count_paths_mod_ideal, factored_count
from .quiver import QuiverError
from .representation import StabilityData, satisfies_relations, thin_stability
from .tensor_rep import dual, restrict_along, tensor

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_NONCONVERGENCE = 0, 1, 2, 3


class NonConvergence(RuntimeError):
    def __init__(self, payload: dict):
        super().__init__(payload.get("status", "not converged"))
        self.payload = payload


def max_threads() -> int:
    raw = os.environ.get("QUIVERFORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _fracs(text: str) -> list[Fraction]:
    return [Fraction(x) for x in text.replace(",", " ").split()]


def _pair(text: str) -> tuple[int, int]:
    vals = _ints(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers, got {text!r}")
    return vals[0], vals[1]


def _flow_config(args) -> moment_flow.FlowConfig:
    kw = {"kappa": args.kappa, "seed": args.seed}
    if args.tol is not None:
        kw["tol"] = args.tol
    if args.max_iters is not None:
        kw["max_iters"] = args.max_iters
    if args.step is not None:
        kw["step"] = args.step
    return moment_flow.FlowConfig(**kw)


def _theta(args, rep):
    th = _fracs(args.theta) if args.theta is not None else [Fraction(0)] * rep.quiver.n_vertices
    if len(th) != rep.quiver.n_vertices:
        raise QuiverError("theta length does not match the quiver")
    return th


def _batch(func, items):
    items = list(items)
    workers = min(max_threads(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# -- subcommands ----------------------------------------------------------------------------

def cmd_euler(args):
    q = io.load_quiver(args.quiver)
    d = _ints(args.d)
    e = _ints(args.e) if args.e else d
    return {"euler_form": quiver.euler_form(q, d, e), "d": d, "e": e,
            "indivisible": quiver.is_indivisible(d)}


def cmd_paths(args):
    if args.tensor:
        q1, q2 = io.load_quiver(args.tensor[0]), io.load_quiver(args.tensor[1])
        tq = quiver.tensor_quiver(q1, q2)
        s, t = _pair(args.source), _pair(args.target)
        return {"mod_ideal": count_paths_mod_ideal(tq, s, t, args.max_len),
                "factored": factored_count(tq, s, t, args.max_len)}
    q = io.load_quiver(args.quiver)
    ps = quiver.enumerate_paths(q, int(args.source), int(args.target), args.max_len)
    return {"count": len(ps), "paths": [list(p.edges) for p in ps]}


def cmd_tensor_quiver(args):
    tq = quiver.tensor_quiver(io.load_quiver(args.first), io.load_quiver(args.second))
    return {"quiver": io.quiver_to_json(tq.quiver),
            "vertex_pairs": [list(p) for p in tq.vertex_pairs],
            "origins": [list(o) for o in tq.origins]}


def cmd_tensor_rep(args):
    t = tensor(io.load_representation(args.first), io.load_representation(args.second))
    out = io.representation_to_json(t.rep)
    out["relations"] = [io.relation_to_json(r) for r in t.relations()]
    return out


def cmd_dual(args):
    return io.representation_to_json(dual(io.load_representation(args.rep)))


def cmd_ops(args):
    rep = io.load_representation(args.rep) if args.rep else None
    q = rep.quiver if rep is not None else io.load_quiver(args.quiver)
    if args.op == "collapse-vertices":
        groups = [_ints(g) for g in args.groups.split(";") if g.strip()]
        corr = quiver.collapse_vertices(q, groups)
    elif args.op == "collapse-edges":
        corr = quiver.collapse_edges(q, _ints(args.edges))
    elif args.op in ("clone", "delete"):
        if (args.vertex is None) == (args.edge is None):
            raise QuiverError(f"{args.op} needs exactly one of --vertex or --edge")
        if args.op == "clone":
            corr = quiver.clone_vertex(q, args.vertex) if args.vertex is not None else quiver.clone_edge(q, args.edge)
        else:
            corr = quiver.delete_vertex(q, args.vertex) if args.vertex is not None else quiver.delete_edge(q, args.edge)
    else:  # pragma: no cover - argparse restricts choices
        raise QuiverError(f"unknown operation {args.op}")
    out = {"kind": corr.kind, "quiver": io.quiver_to_json(corr.target),
           "vertex_map": list(corr.vertex_map), "edge_map": list(corr.edge_map)}
    if rep is not None:
        out["representation"] = io.representation_to_json(restrict_along(rep, corr))
    return out


def cmd_check_relations(args):
    rep = io.load_representation(args.rep)
    rels = io.relations_from_json(io.load_json(args.relations), rep.quiver)
    ok, res = satisfies_relations(rep, rels, args.tol if args.tol is not None else 1e-10)
    return {"satisfied": ok, "residuals": res}


def cmd_check_stability(args):
    if not args.thin:
        raise QuiverError("only --thin stability checks are supported")
    rep = io.load_representation(args.rep)
    v = thin_stability(rep, StabilityData(tuple(_theta(args, rep))))
    return {"verdict": v.verdict, "witness": list(v.witness) if v.witness is not None else None,
            "slope": v.slope, "witness_slope": v.witness_slope}


def _flow_one(args, cfg, path):
    rep = io.load_representation(path)
    th = _theta(args, rep)
    if args.balance:
        th = list(StabilityData(tuple(th)).balanced(rep.dims))
    limit, report = moment_flow.kempf_ness_flow(rep, th, cfg)
    out = report.to_json()
    out["theta_prime"] = th
    if args.emit_limit:
        out["limit"] = io.representation_to_json(limit)
    return out


def cmd_flow(args):
    cfg = _flow_config(args)
    outs = _batch(lambda p: _flow_one(args, cfg, p), args.rep)
    result = outs[0] if len(outs) == 1 else outs
    if any(o["status"] in ("max_iters", "stalled") for o in outs):
        raise NonConvergence(result if isinstance(result, dict) else {"status": "not converged", "runs": result})
    return result


def _certify_one(args, cfg, path):
    rep = io.load_representation(path)
    cert = moment_flow.certify_polystable(rep, _theta(args, rep), cfg)
    out = {"verdict": cert.verdict, "relative_residual": cert.relative_residual,
           "theta_prime": list(cert.theta_prime), "kappa": cfg.kappa}
    out["report"] = cert.report.to_json()
    return out


def cmd_certify(args):
    cfg = _flow_config(args)
    outs = _batch(lambda p: _certify_one(args, cfg, p), args.rep)
    result = outs[0] if len(outs) == 1 else outs
    if any(o["verdict"] == "inconclusive" for o in outs):
        raise NonConvergence(result if isinstance(result, dict) else {"status": "inconclusive", "runs": result})
    return result


def cmd_verify_tensor(args):
    a, b = io.load_representation(args.rep_a), io.load_representation(args.rep_b)
    ta = _fracs(args.theta_a) if args.theta_a else [Fraction(0)] * a.quiver.n_vertices
    tb = _fracs(args.theta_b) if args.theta_b else [Fraction(0)] * b.quiver.n_vertices
    r = moment_flow.verify_tensor_polystability(a, ta, b, tb, args.tol if args.tol is not None else 1e-10,
                                                args.kappa)
    return r.to_json()


def cmd_tangent_dim(args):
    rep = io.load_representation(args.rep)
    th = _theta(args, rep)
    dim = moment_flow.moduli_tangent_dim(rep, th, args.kappa, args.tol if args.tol is not None else 1e-8)
    out = {"tangent_dim": dim, "kappa": args.kappa}
    if rep.quiver.n_vertices == 2 and all(e.tail == 0 and e.head == 1 for e in rep.quiver.edges):
        n = rep.quiver.n_edges
        out["expected_projective_space"] = 2 * (n - 1)
    return out


def cmd_segre_check(args):
    rep = io.load_representation(args.rep)
    return segre.in_segre_image(rep, args.tol if args.tol is not None else 1e-10).to_json()


def cmd_charvar(args):
    if args.charvar_cmd == "tau":
        sigma = _ints(args.sigma) if args.sigma else list(charvar.identity(args.n))
        sigma_p = _ints(args.sigma_prime) if args.sigma_prime else list(charvar.identity(args.m))
        return {"tau": list(charvar.tau(args.n, args.m, sigma, sigma_p))}
    if args.charvar_cmd == "phi":
        p = io.sympoly_from_json(io.load_json(args.poly))
        img = charvar.phi_substitute(p, args.n, args.m)
        return {"image": io.sympoly_to_json(img),
                "invariant_simultaneous": charvar.is_invariant(p, "simultaneous"),
                "image_invariant": charvar.is_invariant(img, "independent"),
                "image_is_zero": img.is_zero()}
    if args.charvar_cmd == "grid":
        raw = io.load_json(args.pairs)
        if not isinstance(raw, list):
            raise io.InputError("pairs file must hold a list of tuples")
        tuples = [[io.parse_complex(v, "entry") for v in t] for t in raw]
        ns = [args.n, args.m] if args.ns is None else _ints(args.ns)
        return charvar.grid_test_r(tuples, ns, args.tol if args.tol is not None else 1e-6).to_json()
    if args.charvar_cmd == "invariants":
        m = io.parse_matrix(io.load_json(args.matrix))
        return {"char_poly_invariants": charvar.char_poly_invariants(m)}
    raise QuiverError(f"unknown charvar command {args.charvar_cmd}")  # pragma: no cover


# -- parser ---------------------------------------------------------------------------------

def _common(p):
    p.add_argument("--tol", type=float, default=None, help="tolerance override")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step", type=float, default=None, help="initial flow step")
    p.add_argument("--kappa", type=int, choices=(-1, 1), default=moment_flow.KAPPA,
                   help="sign in [phi, phi*] = -kappa theta' Id residual convention")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quiverforge", description="Quiver representations toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("euler", help="Euler form <d, e>")
    p.add_argument("--quiver", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--e", default=None)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("paths", help="enumerate paths, or count tensor paths modulo commutation")
    p.add_argument("--quiver")
    p.add_argument("--tensor", nargs=2, metavar=("FIRST", "SECOND"))
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("tensor-quiver")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_tensor_quiver)

    p = sub.add_parser("tensor-rep")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_tensor_rep)

    p = sub.add_parser("dual")
    p.add_argument("rep")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("ops", help="collapse, clone or delete vertices and edges")
    p.add_argument("op", choices=("collapse-vertices", "collapse-edges", "clone", "delete"))
    p.add_argument("--quiver")
    p.add_argument("--rep")
    p.add_argument("--groups", default="", help='vertex groups, e.g. "0,1;2,3"')
    p.add_argument("--edges", default="")
    p.add_argument("--vertex", type=int)
    p.add_argument("--edge", type=int)
    p.set_defaults(func=cmd_ops)

    p = sub.add_parser("check-relations")
    p.add_argument("--rep", required=True)
    p.add_argument("--relations", required=True)
    p.set_defaults(func=cmd_check_relations)

    p = sub.add_parser("check-stability")
    p.add_argument("--rep", required=True)
    p.add_argument("--theta")
    p.add_argument("--thin", action="store_true")
    p.set_defaults(func=cmd_check_stability)

    for name, func in (("flow", cmd_flow), ("certify", cmd_certify)):
        p = sub.add_parser(name)
        p.add_argument("--rep", required=True, action="append", help="repeat for a batch")
        p.add_argument("--theta")
        if name == "flow":
            p.add_argument("--balance", action="store_true", help="balance theta against d first")
            p.add_argument("--emit-limit", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("verify-tensor-polystability")
    p.add_argument("--rep-a", required=True)
    p.add_argument("--theta-a")
    p.add_argument("--rep-b", required=True)
    p.add_argument("--theta-b")
    p.set_defaults(func=cmd_verify_tensor)

    p = sub.add_parser("tangent-dim")
    p.add_argument("--rep", required=True)
    p.add_argument("--theta")
    p.set_defaults(func=cmd_tangent_dim)

    p = sub.add_parser("segre-check")
    p.add_argument("--rep", required=True)
    p.set_defaults(func=cmd_segre_check)

    p = sub.add_parser("charvar")
    csub = p.add_subparsers(dest="charvar_cmd", required=True)
    c = csub.add_parser("tau")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--sigma")
    c.add_argument("--sigma-prime")
    c = csub.add_parser("phi")
    c.add_argument("--poly", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c = csub.add_parser("grid")
    c.add_argument("--pairs", required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--m", type=int)
    c.add_argument("--ns", help="factor sizes for r-fold tuples, e.g. \"2 2 2\"")
    c = csub.add_parser("invariants")
    c.add_argument("--matrix", required=True)
    for c in csub.choices.values():
        _common(c)
    p.set_defaults(func=cmd_charvar)

    for name, sp in sub.choices.items():
        if name != "charvar":
            _common(sp)
    return parser


def _emit(payload, out_path, kappa):
    if isinstance(payload, dict) and "kappa" not in payload:
        payload = {**payload, "kappa": kappa}
    text = io.dumps(payload) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    kappa = getattr(args, "kappa", moment_flow.KAPPA)
    out = getattr(args, "out", None)
    if getattr(args, "tol", None) is not None and not args.tol > 0:
        _emit({"error": "precondition", "detail": "--tol must be positive"}, out, kappa)
        return EXIT_PRECONDITION
    if not 0 <= args.seed < 2**64:
        _emit({"error": "precondition", "detail": "--seed must be a 64-bit unsigned integer"}, out, kappa)
        return EXIT_PRECONDITION
    try:
        payload = args.func(args)
    except io.InputError as exc:
        _emit({"error": "malformed_input", "detail": str(exc)}, out, kappa)
        return EXIT_INPUT
    except NonConvergence as exc:
        _emit(exc.payload, out, kappa)
        return EXIT_NONCONVERGENCE
    except moment_flow.NonFiniteError as exc:
        _emit({"error": "non_finite", "detail": str(exc)}, out, kappa)
        return EXIT_NONCONVERGENCE
    except (QuiverError, ValueError, ZeroDivisionError) as exc:
        _emit({"error": "precondition", "detail": str(exc)}, out, kappa)
        return EXIT_PRECONDITION
    _emit(payload, out, kappa)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
