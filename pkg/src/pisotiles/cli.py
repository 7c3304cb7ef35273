"""Command line interface.

Exit codes: 0 success, 2 invalid input, 3 resource cap exceeded,
4 precision exhausted after escalation.
"""
from __future__ import annotations

import argparse
import contextlib
import re
import sys
from fractions import Fraction

from .errors import (PrecisionError, ResourceCapError, UnsupportedDigitModel,
                     ValidationError)
from .numberfield import FieldElement
from .system import PisotSystem
from .substitution import Substitution
from . import analysis, numeration, render, tiles

MAX_ESCALATIONS = 4

_TERM_RE = re.compile(
    r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*(a(?:\^(\d+))?)?\s*")


def parse_element(text: str, system: PisotSystem) -> FieldElement:
    """Parse '(c0+c1a+c2a^2)/q' style exact elements, e.g. '(-2+1a)/1',
    '1/4', '3/2a+1'."""
    text = text.strip().replace(" ", "")
    den = Fraction(1)
    m = re.fullmatch(r"\((.*)\)/(\d+)", text)
    if m:
        text, den = m.group(1), Fraction(int(m.group(2)))
        if den == 0:
            raise ValidationError("zero denominator")
    coeffs = [Fraction(0)] * system.field.degree
    pos = 0
    seen = False
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValidationError(f"cannot parse element {text!r} at offset {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        power = 0
        if m.group(3):
            power = int(m.group(4)) if m.group(4) else 1
        if power >= len(coeffs):
            raise ValidationError(f"alpha power {power} exceeds field degree")
        coeffs[power] += sign * coef
        pos = m.end()
        seen = True
    if not seen:
        raise ValidationError(f"empty element {text!r}")
    return system.field.element([c / den for c in coeffs])


def _system_from_args(args) -> PisotSystem:
    sub = Substitution.parse(args.sub)
    return PisotSystem(sub, normalization=args.eigenvector_norm,
                       precision=args.precision)


def _with_escalation(args, fn):
    system = _system_from_args(args)
    for _ in range(MAX_ESCALATIONS):
        try:
            return fn(system)
        except PrecisionError:
            system = system.escalated()
    return fn(system)


def _out_stream(args):
    if args.out and args.out != "-":
        return open(args.out, "w")
    return contextlib.nullcontext(sys.stdout)


# ----------------------------------------------------------------- commands

def cmd_analyze(args) -> int:
    def run(system: PisotSystem):
        eig = system.eig
        report = {
            "substitution": {str(a): "".join(map(str, system.sub.image(a)))
                             for a in range(1, system.n + 1)},
            "incidence_matrix": system.matrix,
            "char_poly": list(system.char_poly),
            "pisot": True,
            "unit": system.verdict.is_unit,
            "primitive": True,
            "alpha": render.field_element_json(system.field.alpha()),
            "left_eigenvector": [render.field_element_json(v) for v in eig.left],
            "right_eigenvector": [render.field_element_json(u) for u in eig.right],
            "digit_set": [render.field_element_json(d)
                          for d in sorted(system.digit_values(), key=float)],
            "alpha_primes": system.space.primes,
            "local_factors": [
                {"p": ring.p, "degree": ring.alpha_degree,
                 "factors": [{"e": f.e, "f": f.f, "norm": ring.p ** f.f,
                              "multiplicity": f.multiplicity}
                             for f in ring.factors]}
                for ring in system.space.rings],
            "d_p": system.d_p_values(),
            "bound_M": system.bound_m(),
            "contraction_certificate": system.space.contraction_certificate(),
            "alpha_contraction": system.space.alpha_contraction(),
            "strong_coincidence": "strong coincidence not confirmed within the "
                                  "search bound" not in system.warnings,
            "warnings": system.warnings,
        }
        with _out_stream(args) as out:
            render.dump_json(report, out)
        return 0
    return _with_escalation(args, run)


def cmd_expand(args) -> int:
    def run(system: PisotSystem):
        x = parse_element(args.x, system)
        if args.letter:
            exp = numeration.expand(system, x, args.letter,
                                    max_steps=args.max_digits)
            scale, letter = 0, args.letter
        else:
            scale, letter, exp = numeration.expand_real(system, x)
        report = {
            "value": render.field_element_json(x),
            "letter": letter,
            "scale": scale,
            "kind": exp.kind,
            "preperiod": exp.preperiod,
            "period": exp.period,
            "digits": [render.field_element_json(d) for d in exp.digits],
            "digit_words": ["".join(map(str, w)) for w in exp.digit_words()],
        }
        with _out_stream(args) as out:
            render.dump_json(report, out)
        return 0
    return _with_escalation(args, run)


def cmd_integers(args) -> int:
    def run(system: PisotSystem):
        values = sorted(numeration.sigma_integer_level(
            system, args.letter, args.level), key=float)
        report = {
            "letter": args.letter,
            "level": args.level,
            "count": len(values),
            "values": [render.field_element_json(v) for v in values],
        }
        with _out_stream(args) as out:
            render.dump_json(report, out)
        return 0
    return _with_escalation(args, run)


def _emit_points(args, system, groups, title) -> int:
    fmt = args.format
    if fmt == "csv":
        with _out_stream(args) as out:
            render.write_points_csv(system, groups, out)
    elif fmt == "json":
        data = {str(a): [render.point_coordinates(system, z) for z in pts]
                for a, pts in groups.items()}
        with _out_stream(args) as out:
            render.dump_json({"headers": render.coordinate_headers(system),
                              "points": data}, out)
    elif fmt in ("png", "svg"):
        if not args.out:
            raise ValidationError(f"--out is required for {fmt} output")
        fig = render.scatter_figure(system, groups, title)
        render.save_figure(fig, args.out, fmt)
    else:
        raise ValidationError(f"unsupported format {fmt!r} here")
    return 0


def cmd_render_tile(args) -> int:
    def run(system: PisotSystem):
        if args.letter:
            letters = [args.letter]
        else:
            letters = list(range(1, system.n + 1))
        groups = {a: tiles.subtile_cloud(system, a, args.level, cap=args.cap)
                  for a in letters}
        return _emit_points(args, system, groups,
                            f"central tile, level {args.level}")
    return _with_escalation(args, run)


def cmd_render_tiling(args) -> int:
    def run(system: PisotSystem):
        enum = analysis.LatticeEnumerator(system)
        minvals = analysis.min_valuations_for_radius(system, args.window)
        faces = enum.faces_in_window(arch_bound=args.window,
                                     min_valuations=minvals, cap=args.cap)
        groups: dict[int, list] = {}
        for x, a in faces:
            shift = system.space.phi_prime(x)
            pts = tiles.subtile_cloud(system, a, args.level, cap=args.cap)
            groups.setdefault(a, []).extend(p + shift for p in pts)
        return _emit_points(args, system, groups,
                            f"tiling patch, window {args.window}")
    return _with_escalation(args, run)


def cmd_render_line(args) -> int:
    def run(system: PisotSystem):
        intervals = tiles.line_tiling(system, args.depth)
        data = [{"letter": t.letter,
                 "left": render.field_element_json(t.left),
                 "length": render.field_element_json(
                     system.delta_letter(t.letter))}
                for t in intervals]
        if args.format in ("png", "svg"):
            if not args.out:
                raise ValidationError("--out is required for image output")
            import matplotlib.pyplot as plt
            fig, ax = plt.subplots(figsize=(8, 1.6))
            for t in intervals:
                left = float(t.left)
                ln = float(system.delta_letter(t.letter))
                ax.barh(0, ln, left=left, height=0.6,
                        color=render._COLORS[(t.letter - 1) % len(render._COLORS)],
                        edgecolor="black", linewidth=0.4)
            ax.set_yticks([])
            ax.set_title(f"line tiling, depth {args.depth}")
            fig.tight_layout()
            render.save_figure(fig, args.out, args.format)
        else:
            with _out_stream(args) as out:
                render.dump_json({"depth": args.depth, "intervals": data}, out)
        return 0
    return _with_escalation(args, run)


def cmd_render_stepped(args) -> int:
    def run(system: PisotSystem):
        enum = analysis.LatticeEnumerator(system)
        minvals = [args.min_valuation] * len(system.space.rings)
        faces = enum.faces_in_window(arch_bound=args.window,
                                     min_valuations=minvals, cap=args.cap)
        data = [{"x": render.field_element_json(x), "letter": a}
                for x, a in faces]
        if args.format in ("png", "svg"):
            if not args.out:
                raise ValidationError("--out is required for image output")
            groups: dict[int, list] = {}
            for x, a in faces:
                groups.setdefault(a, []).append(system.space.phi_prime(x))
            fig = render.scatter_figure(system, groups,
                                        f"stepped surface window {args.window}")
            render.save_figure(fig, args.out, args.format)
        else:
            with _out_stream(args) as out:
                render.dump_json({"faces": data, "count": len(data)}, out)
        return 0
    return _with_escalation(args, run)


def cmd_domain_exchange(args) -> int:
    def run(system: PisotSystem):
        pairs = tiles.domain_exchange_cloud(system, args.level, cap=args.cap)
        if args.format in ("png", "svg"):
            if not args.out:
                raise ValidationError("--out is required for image output")
            groups = {a: [q for _, q in pts] for a, pts in pairs.items()}
            fig = render.scatter_figure(system, groups,
                                        f"domain exchange, level {args.level}")
            render.save_figure(fig, args.out, args.format)
        else:
            groups = {a: [q for _, q in pts] for a, pts in pairs.items()}
            return _emit_points(args, system, groups, "domain exchange")
        return 0
    return _with_escalation(args, run)


def cmd_graph_zero(args) -> int:
    def run(system: PisotSystem):
        g = analysis.zero_expansion_graph(system)
        if args.format == "dot":
            lines = ["digraph zero_expansion {"]
            for i, (x, a) in enumerate(g.nodes):
                label = f"({float(x):.4g},{a})"
                lines.append(f'  n{i} [label="{label}"];')
            for i, outs in g.edges.items():
                for j in outs:
                    lines.append(f"  n{i} -> n{j};")
            lines.append("}")
            with _out_stream(args) as out:
                out.write("\n".join(lines) + "\n")
        else:
            data = {
                "nodes": [{"x": render.field_element_json(x), "letter": a}
                          for x, a in g.nodes],
                "edges": {str(i): v for i, v in g.edges.items()},
                "surviving": [{"x": render.field_element_json(x), "letter": a}
                              for x, a in g.trimmed],
                "property_f": g.property_f,
            }
            with _out_stream(args) as out:
                render.dump_json(data, out)
        return 0
    return _with_escalation(args, run)


def cmd_check_f(args) -> int:
    def run(system: PisotSystem):
        verdict = analysis.check_property_f(system)
        with _out_stream(args) as out:
            render.dump_json({"property_f": verdict}, out)
        return 0
    return _with_escalation(args, run)


def cmd_covering(args) -> int:
    def run(system: PisotSystem):
        lo, hi = (float(v) for v in args.window_pair)
        rep = analysis.covering_degree_estimate(
            system, (lo, hi), samples=args.samples, level=args.level,
            seed=args.seed)
        data = {
            "samples": rep.samples,
            "histogram": {str(k): v for k, v in sorted(rep.histogram.items())},
            "modal_degree": rep.modal_degree,
            "modal_fraction": rep.modal_fraction,
            "ambiguous": rep.ambiguous,
            "min_degree": rep.min_degree,
        }
        with _out_stream(args) as out:
            render.dump_json(data, out)
        return 0
    return _with_escalation(args, run)


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="pisotiles",
        description="Tiles, numeration and tilings for non-unit Pisot "
                    "substitutions.")
    sp = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--sub", required=True,
                       help="substitution, e.g. '1->121;2->11' or '1->1^5 2;2->1^3'")
        p.add_argument("--eigenvector-norm", type=int, default=None,
                       help="1-based entry of the left eigenvector scaled to 1 "
                            "(default: last)")
        p.add_argument("--precision", type=int, default=64,
                       help="p-adic working precision exponent")
        p.add_argument("--format", default="json",
                       choices=["json", "csv", "png", "svg", "dot"])
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1,
                       help="accepted for interface stability; computation is "
                            "deterministic and single-threaded")
        p.add_argument("--cap", type=int, default=300_000,
                       help="safety cap for enumer{ated,able} point counts")

    p = sp.add_parser("analyze", help="certify the substitution and report "
                                      "all derived algebraic data")
    common(p); p.set_defaults(fn=cmd_analyze)

    p = sp.add_parser("expand", help="digit expansion of an exact value")
    common(p)
    p.add_argument("--x", required=True, help="exact value, e.g. '(-2+1a)/1'")
    p.add_argument("--letter", type=int, default=None)
    p.add_argument("--max-digits", type=int, default=2000)
    p.set_defaults(fn=cmd_expand)

    p = sp.add_parser("integers", help="level set of sigma-integers")
    common(p)
    p.add_argument("--letter", type=int, required=True)
    p.add_argument("--level", type=int, required=True)
    p.set_defaults(fn=cmd_integers)

    p = sp.add_parser("render-tile", help="subtile point clouds")
    common(p)
    p.add_argument("--letter", type=int, default=None)
    p.add_argument("--level", type=int, default=8)
    p.set_defaults(fn=cmd_render_tile)

    p = sp.add_parser("render-tiling", help="tiling patch over a window")
    common(p)
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--window", type=float, default=2.0)
    p.set_defaults(fn=cmd_render_tiling)

    p = sp.add_parser("render-line", help="induced tiling of the expanding line")
    common(p)
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(fn=cmd_render_line)

    p = sp.add_parser("render-stepped", help="stepped surface patch")
    common(p)
    p.add_argument("--window", type=float, default=3.5)
    p.add_argument("--min-valuation", type=int, default=0)
    p.set_defaults(fn=cmd_render_stepped)

    p = sp.add_parser("domain-exchange", help="domain exchange clouds")
    common(p)
    p.add_argument("--level", type=int, default=8)
    p.set_defaults(fn=cmd_domain_exchange)

    p = sp.add_parser("graph-zero", help="zero-expansion graph")
    common(p); p.set_defaults(fn=cmd_graph_zero)

    p = sp.add_parser("check-f", help="finiteness property verdict")
    common(p); p.set_defaults(fn=cmd_check_f)

    p = sp.add_parser("covering", help="sampled covering-degree estimate")
    common(p)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--level", type=int, default=10)
    p.add_argument("--window", dest="window_pair", default="-1.5,1.5",
                   type=lambda s: s.split(","),
                   help="lo,hi Archimedean window")
    p.set_defaults(fn=cmd_covering)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, UnsupportedDigitModel) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 3
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
