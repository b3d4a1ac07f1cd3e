"""Command-line surface.

Subcommands: minimal-model, cuts, wavefront, caustic, zeta, residue,
equiaffine, farey, sigma-b, model, verify.  Output is deterministic JSON on
stdout (aligned key: value lines with --pretty); SVG/CSV side files on
request.  Exit codes: 0 success, 1 domain/specification errors, 2
numerical-regime errors (asymptotics out of reach at the requested depth).

Configuration precedence: command-line flags > TROPZETA_* environment
variables > ./tropzeta.toml (flat key = value lines).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import models
from .cutting import caustic as compute_caustic
from .cutting import enumerate_cuts, wave_front
from .equiaffine import length_graph, length_parametric, length_via_triangles
from .estimates import ResidueEstimate, SeriesEstimate
from .farey import (
    SmoothWeight,
    endpoint_model,
    farey_zeta,
    residue_main_term,
    sigma_b,
)
from .geometry import ConvexDomain, domain_from_dict
from .lattice import UnimodularQuadruple
from .minimal import minimal_model_of
from .svgout import caustic_svg, wavefront_svg
from .zeta import (
    NumericalRegimeError,
    polygon_residues,
    residue_two_thirds,
    zeta_via_identity,
    zeta_via_mellin,
)

CONFIG_KEYS = ("eps", "bound", "threads", "pretty")


def _fmt(value):
    """JSON-ready form: rationals as 'p/q', complex as [re, im], floats with
    17 significant digits."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else (
            f"{value.numerator}/{value.denominator}")
    if isinstance(value, complex):
        return [_fmt(value.real), _fmt(value.imag)]
    if isinstance(value, float):
        return float(f"{value:.17g}")
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    return value


def _emit(payload: dict, pretty: bool) -> None:
    payload = _fmt(payload)
    if pretty:
        for key in sorted(payload):
            print(f"{key:>24}: {json.dumps(payload[key], sort_keys=True)}")
    else:
        print(json.dumps(payload, sort_keys=True))


def _parse_s(text: str) -> complex:
    t = text.strip().replace(" ", "")
    if "/" in t and "i" not in t and "j" not in t:
        return complex(Fraction(t))
    t = t.replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise ValueError(f"cannot parse s value {text!r}") from exc


def _load_domain(path: str) -> ConvexDomain:
    with open(path) as fh:
        return domain_from_dict(json.load(fh))


def _load_weight(spec: str) -> SmoothWeight:
    if spec == "quadratic":
        return SmoothWeight.quadratic()
    with open(spec) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "poly" in data:
        return SmoothWeight.from_polynomial(data["poly"])
    if isinstance(data, list):
        return SmoothWeight.from_polynomial(data)
    raise ValueError("weight file must hold a coefficient list or {'poly': [...]}")


def _config_default(args, key: str, cast):
    val = getattr(args, key.replace("-", "_"), None)
    if val is not None:
        return val
    env = os.environ.get(f"TROPZETA_{key.upper().replace('-', '_')}")
    if env is not None:
        return cast(env)
    try:
        with open("tropzeta.toml") as fh:
            for line in fh:
                line = line.split("#")[0].strip()
                if "=" in line:
                    k, v = (part.strip() for part in line.split("=", 1))
                    if k == key:
                        return cast(v.strip("'\""))
    except OSError:
        pass
    return None


def _series_payload(est: SeriesEstimate) -> dict:
    value = est.value
    if isinstance(value, Fraction):
        out_value = value
    else:
        out_value = complex(value)
    return {
        "value": out_value,
        "cutoff": est.cutoff,
        "terms_used": est.terms_used,
        "tail_hint": est.tail_hint,
    }


def _residue_payload(est: ResidueEstimate) -> dict:
    return {
        "location": est.location,
        "value": est.value,
        "method": est.method,
        "fit_diagnostics": est.fit_diagnostics,
    }


# ---------------------------------------------------------------------------
# subcommand implementations


def _cmd_minimal_model(args) -> dict:
    dom = _load_domain(args.domain)
    mm = minimal_model_of(dom)
    return {
        "polygon": [[v[0], v[1]] for v in mm.polygon.vertices],
        "m": mm.m,
        "max_locus": [[p[0], p[1]] for p in mm.max_locus],
        "l": mm.l,
        "k": mm.k,
        "type_tag": mm.type_tag,
        "type_params": {k: v for k, v in mm.type_params.items()},
    }


def _cmd_cuts(args) -> dict:
    dom = _load_domain(args.domain)
    eps = args.eps if args.eps is not None else (0.0 if dom.is_polygon else 1e-4)
    tree = enumerate_cuts(dom, Fraction(eps) if dom.is_polygon and eps == 0 else eps)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("a,b,c,d,size,depth,chart\n")
            for node in tree.nodes:
                a, b, c, d = node.quad
                fh.write(f"{a},{b},{c},{d},{float(node.size):.17g},"
                         f"{node.depth},{node.chart_id}\n")
    sizes = [float(n.size) for n in tree.nodes]
    return {
        "count": len(sizes),
        "eps": float(eps),
        "largest": max(sizes) if sizes else None,
        "smallest": min(sizes) if sizes else None,
        "size_sum": sum(sizes),
        "charts": len(tree.charts),
        "csv": args.csv,
    }


def _cmd_wavefront(args) -> dict:
    dom = _load_domain(args.domain)
    wf = wave_front(dom, args.t)
    payload = {
        "t": wf.t,
        "degenerate": wf.is_degenerate,
        "vertices": [[float(v[0]), float(v[1])] for v in wf.vertices],
        "lattice_perimeter": float(wf.lattice_perimeter()),
        "area": float(wf.area()),
        "active_normals": [[n[0], n[1]] for n in wf.normals],
    }
    if args.svg:
        hat = minimal_model_of(dom).polygon
        dom_verts = dom.polygon.vertices if dom.is_polygon else None
        with open(args.svg, "w") as fh:
            fh.write(wavefront_svg(hat.vertices, wf.vertices, dom_verts))
        payload["svg"] = args.svg
    return payload


def _cmd_caustic(args) -> dict:
    dom = _load_domain(args.domain)
    eps = args.eps if args.eps is not None else 1e-3
    graph = compute_caustic(dom, eps)
    payload = {
        "edges": [
            {"start": list(e.start), "end": list(e.end), "weight": e.weight,
             "t_start": e.t_start, "t_end": e.t_end}
            for e in graph.edges
        ],
        "max_locus": [list(p) for p in graph.max_locus],
    }
    if args.svg:
        hat = minimal_model_of(dom).polygon
        with open(args.svg, "w") as fh:
            fh.write(caustic_svg(graph, hat.vertices))
        payload["svg"] = args.svg
    return payload


def _cmd_zeta(args) -> dict:
    dom = _load_domain(args.domain)
    s = _parse_s(args.s)
    eps = args.eps if args.eps is not None else (0.0 if dom.is_polygon else 1e-6)
    if args.route == "mellin":
        val = zeta_via_mellin(dom, s)
        return {"value": val, "route": "mellin", "s": s}
    s_exact = int(s.real) if s.imag == 0 and s.real == int(s.real) else s
    est = zeta_via_identity(dom, s_exact, eps)
    payload = _series_payload(est)
    payload.update(route="identity", s=s)
    return payload


def _cmd_residue(args) -> dict:
    dom = _load_domain(args.domain)
    at = args.at.strip()
    if at in ("1", "0"):
        if dom.tag == "domain_L":
            value = Fraction(0) if at == "1" else models.residue_zeta_L_zero()
            return {"location": float(at), "value": value, "method": "closed_form"}
        res1, res0 = polygon_residues(dom)
        value = res1 if at == "1" else res0
        return {"location": float(at), "value": value, "method": "exact_polygon"}
    if at in ("2/3", str(2 / 3)):
        eps_min = args.eps_min if args.eps_min is not None else 1e-6
        est = residue_two_thirds(dom, eps_min)
        return _residue_payload(est)
    raise ValueError("--at must be one of 1, 0, 2/3")


def _cmd_equiaffine(args) -> dict:
    dom = _load_domain(args.domain)
    method = args.method
    if dom.is_polygon:
        return {"value": 0.0, "method": method, "note": "flat boundary"}
    if method == "triangles":
        eps = args.eps if args.eps is not None else 1e-5
        return {"value": length_via_triangles(dom, eps), "method": method, "eps": eps}
    total = 0.0
    for chart in dom.charts:
        if chart.g is None:
            raise ValueError(f"chart {chart.name!r} has no graph data")
        if method == "graph":
            total += length_graph(chart.d2g, (0.0, float(chart.x_max)))
        else:  # parametric: the graph parametrization t -> (t, g(t))
            total += length_parametric(
                lambda t, c=chart: (1.0, c.dg(t)),
                lambda t, c=chart: (0.0, c.d2g(t)),
                (1e-12, float(chart.x_max)),
            )
    return {"value": total, "method": method}


def _cmd_farey(args) -> dict:
    weight = _load_weight(args.weight)
    s = _parse_s(args.s)
    bound = args.bound if args.bound is not None else 200
    zf = farey_zeta(weight, s, bound)
    ze = endpoint_model(weight, s, bound)
    return {
        "weight": weight.name,
        "s": s,
        "bound": bound,
        "farey_zeta": _series_payload(zf),
        "endpoint_model": _series_payload(ze),
        "residue_main_term": residue_main_term(weight),
    }


def _cmd_sigma_b(args) -> dict:
    weight = _load_weight(args.weight)
    s = _parse_s(args.s)
    value, main, dev = sigma_b(weight, s, args.b)
    return {"b": args.b, "s": s, "value": value, "main_term": main, "deviation": dev}


def _cmd_model(args) -> dict:
    which = args.which
    if which == "parabola":
        if args.defect:
            a, b, c, d = (int(x) for x in args.defect)
            return {"defect": models.parabola_defect(UnimodularQuadruple(a, b, c, d))}
        if args.support:
            a, b = (int(x) for x in args.support)
            return {"support": models.parabola_support(a, b)}
        raise ValueError("model parabola needs --support a b or --defect a b c d")
    if which == "L":
        payload = {
            "residue_at_two_thirds": models.residue_zeta_L_two_thirds(),
            "residue_at_zero": models.residue_zeta_L_zero(),
            "area": Fraction(10, 3),
        }
        if args.s:
            s = _parse_s(args.s)
            payload["value"] = models.zeta_L(s, cutoff=args.cutoff or 600)
            payload["s"] = s
        return payload
    if which == "d-alpha":
        alpha = args.alpha if args.alpha is not None else 0.5
        n_max = args.n_max if args.n_max is not None else 1000
        payload = {"alpha": alpha, "n_max": n_max,
                   "pole_location": alpha,
                   "offsets_tail": float(models.d_alpha_offsets(alpha, n_max)[-1])}
        if args.s:
            s = _parse_s(args.s)
            payload["boundary_series"] = models.d_alpha_expected_series(alpha, s, n_max)
            payload["s"] = s
        return payload
    if which == "constants":
        g = math.gamma(1 / 3.0)
        return {
            "gamma_one_third": float(f"{g:.15g}"),
            "residue_su3_two_thirds": float(f"{models.residue_su3_two_thirds():.15g}"),
            "residue_zeta_L_two_thirds": float(f"{models.residue_zeta_L_two_thirds():.15g}"),
            "equiaffine_residue_constant": float(f"{models.equiaffine_residue_constant():.15g}"),
            "boundary_residue_constant": float(f"{models.boundary_residue_constant():.15g}"),
        }
    raise ValueError(f"unknown model {which!r}")


def _cmd_verify(args) -> int:
    from .acceptance import run_suite

    results = run_suite(args.suite)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] criterion {r.number:2d} {r.name} "
              f"({r.runtime:.2f}s): {r.detail}")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are spec errors: exit 1
        print(json.dumps({"error": message}), file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tropzeta",
                     description="tropical zeta functions of convex domains")
    parser.add_argument("--pretty", action="store_true", default=None,
                        help="aligned human-readable output instead of JSON")
    parser.add_argument("--threads", type=int, default=None,
                        help="reserved; evaluation is deterministic single-threaded")
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    subparsers = parser.add_subparsers(dest="command", required=True,
                                       parser_class=_Parser)

    class _Sub:
        """Attach the shared --pretty/--threads flags to every subcommand."""

        def add_parser(self, name, **kw):
            return subparsers.add_parser(name, parents=[common], **kw)

    sub = _Sub()

    p = sub.add_parser("minimal-model", help="minimal model of a domain")
    p.add_argument("domain")

    p = sub.add_parser("cuts", help="materialize the corner-cut tree")
    p.add_argument("domain")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--csv", default=None)

    p = sub.add_parser("wavefront", help="wave front at time t")
    p.add_argument("domain")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--svg", default=None)

    p = sub.add_parser("caustic", help="tropical caustic graph")
    p.add_argument("domain")
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--svg", default=None)

    p = sub.add_parser("zeta", help="evaluate the zeta function")
    p.add_argument("domain")
    p.add_argument("--s", required=True, help='e.g. "3", "2.5", "3+0.5i"')
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--route", choices=("identity", "mellin"), default="identity")

    p = sub.add_parser("residue", help="residues at 1, 0, or 2/3")
    p.add_argument("domain")
    p.add_argument("--at", required=True, help="1, 0, or 2/3")
    p.add_argument("--eps-min", dest="eps_min", type=float, default=None)

    p = sub.add_parser("equiaffine", help="equiaffine boundary length")
    p.add_argument("domain")
    p.add_argument("--method", choices=("parametric", "graph", "triangles"),
                   default="graph")
    p.add_argument("--eps", type=float, default=None)

    p = sub.add_parser("farey", help="weighted Farey zeta function")
    p.add_argument("--weight", default="quadratic",
                   help='"quadratic" or a JSON file with polynomial coefficients')
    p.add_argument("--s", required=True)
    p.add_argument("--bound", type=int, default=None)

    p = sub.add_parser("sigma-b", help="reduced-residue kernel sum Sigma_b")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--weight", default="quadratic")

    p = sub.add_parser("model", help="closed-form model oracles")
    p.add_argument("which", choices=("parabola", "L", "d-alpha", "constants"))
    p.add_argument("--support", nargs=2, metavar=("A", "B"), default=None)
    p.add_argument("--defect", nargs=4, metavar=("A", "B", "C", "D"), default=None)
    p.add_argument("--s", default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=("quick", "full"), default="full")
    return parser


_COMMANDS = {
    "minimal-model": _cmd_minimal_model,
    "cuts": _cmd_cuts,
    "wavefront": _cmd_wavefront,
    "caustic": _cmd_caustic,
    "zeta": _cmd_zeta,
    "residue": _cmd_residue,
    "equiaffine": _cmd_equiaffine,
    "farey": _cmd_farey,
    "sigma-b": _cmd_sigma_b,
    "model": _cmd_model,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    pretty = _config_default(args, "pretty", lambda v: v not in ("0", "false", ""))
    pretty = bool(pretty)
    if args.command == "verify":
        return _cmd_verify(args)
    try:
        payload = _COMMANDS[args.command](args)
    except NumericalRegimeError as exc:
        _emit({"error": str(exc)}, pretty)
        return 2
    except (ValueError, OSError, KeyError) as exc:
        _emit({"error": str(exc)}, pretty)
        return 1
    _emit(payload, pretty)
    return 0


if __name__ == "__main__":
    sys.exit(main())
