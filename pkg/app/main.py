import argparse
import logging
import sys
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ValidationError

from .config import settings
from .models.analysisResults import (
    CellReport,
    ElementResult,
    EqualityResult,
    GermSummary,
    HomologyGroup,
    HomologyReport,
    NormResult,
    ToolInfo,
    ValidationReport,
)
from .models.germFile import CoxeterSpec
from .services import geometry, homology, posets, words
from .services.builders import BuilderFactory
from .services.germ import Germ, check_germ
from .services.germ_store import dumps_germ, load_germ, read_germ_file, save_germ
from .utils import EXIT_DOMAIN_ERROR, EXIT_OK, UsageError, report_error

logging.basicConfig(level=settings.LOG_LEVEL, stream=sys.stderr)
logger = logging.getLogger(__name__)

Output = Tuple[BaseModel, List[str]]


class _Parser(argparse.ArgumentParser):
    """argparse reporting malformed command lines as UsageError (exit 2)"""

    def error(self, message: str):
        raise UsageError(message)


def _element_result(inputs: Sequence[str], g: words.GroupElement) -> ElementResult:
    return ElementResult(
        input=list(inputs),
        result=words.format_element(g),
        letters=g.prefix.names(),
        exp=g.exp,
    )


def _groups_lines(groups: Sequence[HomologyGroup], symbol: str) -> List[str]:
    return [f"{symbol}{g.dimension} = {g.render()}" for g in groups]


def _poset_lines(report) -> List[str]:
    header = f"{report.label}: {report.size} element(s)"
    return [header] + ["  " + line for line in _groups_lines(report.groups, "H~_")]


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def cmd_info(args) -> Output:
    info = ToolInfo(
        builders=BuilderFactory.list_builders(),
        families=list(settings.SUPPORTED_FAMILIES),
        node_budget=settings.GARSIDE_NODE_BUDGET,
        max_rank=settings.GARSIDE_MAX_RANK,
        max_dihedral_m=settings.GARSIDE_MAX_DIHEDRAL_M,
        worker_threads=settings.GARSIDE_WORKER_THREADS,
        max_processing_seconds=settings.GARSIDE_MAX_PROCESSING_SECONDS,
    )
    lines = [
        f"builders: {', '.join(info.builders)}",
        f"families: {', '.join(info.families)}",
        f"node budget: {info.node_budget}",
        f"max rank (A): {info.max_rank}",
        f"max m (I2): {info.max_dihedral_m}",
        f"worker threads: {info.worker_threads}",
    ]
    return info, lines


def cmd_validate(args) -> Output:
    germ, violations = check_germ(read_germ_file(args.germ))
    if germ is None:
        report = ValidationReport(valid=False, violations=violations)
        lines = [f"invalid: {len(violations)} violation(s)"]
        lines += [f"  {v.kind.value}: {v.message} {v.witness}" for v in violations]
        args.exit_code = EXIT_DOMAIN_ERROR
        return report, lines
    summary = GermSummary(**germ.summary())
    lines = [
        f"valid: {summary.name}",
        f"  simples: {summary.simples}, atoms: {len(summary.atoms)}, ||Δ|| = {summary.delta_norm}, m = {summary.sigma_order}",
    ]
    return ValidationReport(valid=True, summary=summary), lines


def cmd_build(args) -> Output:
    try:
        spec = CoxeterSpec(family=args.family, rank=args.rank)
    except ValidationError as e:
        raise UsageError(e.errors()[0]["msg"]) from None
    germ = BuilderFactory.create_builder(args.kind).build(spec)
    summary = GermSummary(**germ.summary())
    if args.output:
        save_germ(germ, args.output)
        return summary, [f"wrote {germ.name} ({germ.size} simples) to {args.output}"]
    return summary, [dumps_germ(germ).rstrip("\n")]


def cmd_nf(args) -> Output:
    u = words.parse_positive(args.germ, args.word)
    g = u.to_group()
    return _element_result([args.word], g), [words.format_element(g)]


def cmd_dnf(args) -> Output:
    g = words.parse_element(args.germ, args.element)
    return _element_result([args.element], g), [words.format_element(g)]


def cmd_mult(args) -> Output:
    g = words.parse_element(args.germ, args.left)
    h = words.parse_element(args.germ, args.right)
    product = words.mult(g, h)
    return _element_result([args.left, args.right], product), [words.format_element(product)]


def cmd_inv(args) -> Output:
    g = words.inverse(words.parse_element(args.germ, args.element))
    return _element_result([args.element], g), [words.format_element(g)]


def cmd_eq(args) -> Output:
    g = words.parse_element(args.germ, args.left)
    h = words.parse_element(args.germ, args.right)
    equal = words.equals(g, h)
    result = EqualityResult(left=words.format_element(g), right=words.format_element(h), equal=equal)
    return result, ["true" if equal else "false"]


def cmd_gcd(args) -> Output:
    u = words.parse_positive(args.germ, args.left)
    v = words.parse_positive(args.germ, args.right)
    g = words.left_gcd(u, v).to_group()
    return _element_result([args.left, args.right], g), [words.format_element(g)]


def cmd_norm(args) -> Output:
    u = words.parse_positive(args.germ, args.word)
    value = words.norm(u)
    result = NormResult(element=words.format_positive(u), norm=value, word_length=words.word_length(u.to_group()))
    return result, [str(value)]


def cmd_cells(args) -> Output:
    germ: Germ = args.germ
    counts = homology.cell_counts(germ)
    listing = None
    if args.list:
        listing = {
            c.dimension: [[germ.names[x] for x in cell.entries] for cell in homology.cells(germ, c.dimension)]
            for c in counts
        }
    report = CellReport(
        germ=germ.name,
        counts=counts,
        euler_characteristic=homology.euler_characteristic(germ),
        cells=listing,
    )
    lines = [f"C_{c.dimension}: {c.count}" for c in counts]
    lines.append(f"euler characteristic: {report.euler_characteristic}")
    if listing:
        for entries in listing.values():
            lines += [f"  [{'|'.join(cell)}]" if cell else "  []" for cell in entries]
    return report, lines


def cmd_homology(args) -> Output:
    groups = homology.homology(args.germ)
    report = HomologyReport(
        germ=args.germ.name,
        kind="homology",
        groups=groups,
        euler_characteristic=homology.homology_euler_characteristic(groups),
    )
    return report, _groups_lines(groups, "H_")


def cmd_cohomology(args) -> Output:
    groups = homology.cohomology(args.germ)
    return HomologyReport(germ=args.germ.name, kind="cohomology", groups=groups), _groups_lines(groups, "H^")


def cmd_abelianization(args) -> Output:
    group = homology.abelianization(args.germ)
    report = HomologyReport(germ=args.germ.name, kind="abelianization", groups=[group])
    return report, [f"G^ab = {group.render()}"]


def cmd_dimension(args) -> Output:
    report = homology.dimension_report(args.germ)
    lines = [
        f"||Δ|| = {report.delta_norm}",
        f"top cell dimension: {report.top_cell_dimension}",
        f"top nonzero cohomology: {report.top_nonzero_cohomology} (lower bound for cd)",
    ]
    return report, lines


def cmd_poset_homology(args) -> Output:
    germ: Germ = args.germ
    if args.mu:
        poset = posets.avoid_poset(germ, germ.id_of(args.mu))
    else:
        poset = posets.proper_poset(germ)
    groups = posets.reduced_poset_cohomology(poset) if args.cohomology else posets.reduced_poset_homology(poset)
    report = posets.poset_report(poset, groups)
    return report, _poset_lines(report)


def cmd_duality_check(args) -> Output:
    verdict = posets.duality_check(args.germ)
    if verdict.n is not None:
        head = f"duality group: {verdict.is_duality.value} (n = {verdict.n})"
    else:
        head = f"duality group: {verdict.is_duality.value}"
    lines = [head, f"reason: {verdict.reason}"]
    if verdict.offending:
        lines.append(f"offending poset: {verdict.offending}")
    return verdict, lines


def cmd_end_connectivity(args) -> Output:
    verdict = posets.end_connectivity_check(args.germ)
    lines = [f"end connectivity: {verdict.verdict.value}"]
    if verdict.conclusion:
        lines.append(f"G is {verdict.conclusion} (n = {verdict.n})")
    lines.append(f"reason: {verdict.reason}")
    return verdict, lines


def cmd_links(args) -> Output:
    vertex = geometry.parse_vertex(args.germ, args.vertex)
    report = posets.link_report(vertex.rep)
    lines = [
        f"vertex: {report.vertex}",
        f"RF = {report.right_front}, RF* = {report.right_front_complement}",
        "descending " + " ".join(_poset_lines(report.descending)),
        "ascending " + " ".join(_poset_lines(report.ascending)),
    ]
    return report, lines


def cmd_distance(args) -> Output:
    v = geometry.parse_vertex(args.germ, args.source)
    w = geometry.parse_vertex(args.germ, args.target)
    report = geometry.geodesic_report(v, w, with_profile=False)
    return report, [str(report.distance)]


def cmd_geodesic(args) -> Output:
    v = geometry.parse_vertex(args.germ, args.source)
    w = geometry.parse_vertex(args.germ, args.target)
    report = geometry.geodesic_report(v, w)
    lines = [
        f"distance: {report.distance}",
        f"labels: {' '.join(report.labels)}",
        f"path: {' -> '.join(report.path)}",
        f"profile: {' '.join(report.profile or [])}",
    ]
    return report, lines


def cmd_centers(args) -> Output:
    T = [geometry.parse_vertex(args.germ, text) for text in args.vertices]
    report = geometry.centers(T)
    return report, [f"radius: {report.radius}", f"centers: {', '.join(report.centers)}"]


def cmd_subgroups(args) -> Output:
    table = geometry.finite_subgroups(args.germ)
    lines = [
        f"type {r.type}: {r.generator} (μ = {r.mu}, j = {r.j}, t = {r.t}) order {r.order}"
        for r in table.records
    ]
    lines.append(f"torsion exponent: {table.torsion_exponent}")
    return table, lines


def cmd_tameness(args) -> Output:
    report = geometry.tameness_probe(args.germ, args.n)
    lines = [f"||Δ^{s.n}|| = {s.norm}" for s in report.samples]
    lines.append(f"c_{args.n} = {report.constant}")
    return report, lines


def cmd_translation_length(args) -> Output:
    g = words.parse_element(args.germ, args.element)
    constant = None
    if args.tameness_n:
        constant = Fraction(geometry.tameness_probe(args.germ, args.tameness_n).constant)
    estimate = geometry.translation_length(g, args.n, constant)
    lines = [f"τ ≤ {estimate.estimate} (n = {estimate.minimizing_n})"]
    if estimate.lower_bound is not None:
        lines.append(f"τ ≥ {estimate.lower_bound}")
    return estimate, lines


def cmd_orbit_radii(args) -> Output:
    g = words.parse_element(args.germ, args.element)
    result = geometry.orbit_radii(g, args.n)
    return result, [" ".join(str(r) for r in result.radii)]


def cmd_quotient_order(args) -> Output:
    g = words.parse_element(args.germ, args.element)
    result = geometry.quotient_order(g, args.limit)
    return result, [str(result.order) if result.order is not None else f"none within {result.limit}"]


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="garside", description="Garside germ toolkit")
    parser.add_argument("--json", action="store_true", help="Structured JSON output")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="Structured JSON output")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def verb(name: str, handler: Callable, help_text: str, germ: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        if germ:
            sub.add_argument("germ", help="Germ file (JSON or YAML)")
        sub.set_defaults(handler=handler, needs_germ=germ and name != "validate")
        return sub

    verb("info", cmd_info, "Builders and computation limits", germ=False)
    verb("validate", cmd_validate, "Check the germ axioms and report every violation")

    build = verb("build", cmd_build, "Build a classical or dual Artin germ", germ=False)
    build.add_argument("kind", help=f"One of {BuilderFactory.list_builders()}")
    build.add_argument("family", choices=list(settings.SUPPORTED_FAMILIES))
    build.add_argument("rank", type=int, help="n for A_n, m for I2(m)")
    build.add_argument("-o", "--output", help="Write the germ file here instead of standard output")

    verb("nf", cmd_nf, "Left greedy normal form of a positive word").add_argument("word")
    verb("dnf", cmd_dnf, "Deligne normal form of a group element").add_argument("element")
    for name, handler, help_text in (
        ("mult", cmd_mult, "Product of two group elements"),
        ("eq", cmd_eq, "Word problem: are two elements equal"),
        ("gcd", cmd_gcd, "Left gcd of two positive elements"),
    ):
        sub = verb(name, handler, help_text)
        sub.add_argument("left")
        sub.add_argument("right")
    verb("inv", cmd_inv, "Inverse of a group element").add_argument("element")
    verb("norm", cmd_norm, "Norm ||u|| of a positive element").add_argument("word")

    verb("cells", cmd_cells, "Cell counts of the bar-type complex").add_argument(
        "--list", action="store_true", help="List the cells"
    )
    verb("homology", cmd_homology, "Integral homology")
    verb("cohomology", cmd_cohomology, "Integral cohomology")
    verb("abelianization", cmd_abelianization, "H_1 from the relation matrix")
    verb("dimension", cmd_dimension, "||Δ||, top cell and top cohomology degree")

    poset = verb("poset-homology", cmd_poset_homology, "Reduced homology of a divisor poset")
    poset.add_argument("--mu", help="Use the avoid-poset of this simple instead of the proper poset")
    poset.add_argument("--cohomology", action="store_true", help="Reduced cohomology instead")
    verb("duality-check", cmd_duality_check, "Duality group verdict")
    verb("end-connectivity", cmd_end_connectivity, "Connectivity at infinity verdict")
    verb("links", cmd_links, "Descending and ascending links of a vertex").add_argument("vertex")

    for name, handler, help_text in (
        ("distance", cmd_distance, "Nonsymmetric distance d(v, w)"),
        ("geodesic", cmd_geodesic, "Geodesic labels, path and orientation profile"),
    ):
        sub = verb(name, handler, help_text)
        sub.add_argument("source")
        sub.add_argument("target")
    verb("centers", cmd_centers, "Circumscribed radius and centers").add_argument("vertices", nargs="+")
    verb("subgroups", cmd_subgroups, "Finite subgroups of G/⟨Δ^m⟩")

    tameness = verb("tameness", cmd_tameness, "Norms of Δ^n and the empirical constant")
    tameness.add_argument("-n", type=int, default=settings.GARSIDE_TAMENESS_DEFAULT_N)

    translation = verb("translation-length", cmd_translation_length, "Upper estimate of τ(g)")
    translation.add_argument("element")
    translation.add_argument("-n", type=int, default=settings.GARSIDE_TRANSLATION_DEFAULT_N)
    translation.add_argument("--tameness-n", type=int, help="Also print the lower bound from a tameness probe")

    radii = verb("orbit-radii", cmd_orbit_radii, "Circumscribed radii of an orbit")
    radii.add_argument("element")
    radii.add_argument("-n", type=int, default=4)

    order = verb("quotient-order", cmd_quotient_order, "Order of g in G/⟨Δ^m⟩")
    order.add_argument("element")
    order.add_argument("--limit", type=int, default=64)
    return parser


def _emit(result: BaseModel, lines: List[str], as_json: bool, stream) -> None:
    if as_json:
        stream.write(result.model_dump_json(indent=2) + "\n")
    else:
        for line in lines:
            stream.write(line + "\n")


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Parse argv, dispatch to one library operation and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        args.exit_code = EXIT_OK
        if args.needs_germ:
            args.germ = load_germ(args.germ)
        logger.debug(f"Running {args.command}")
        result, lines = args.handler(args)
        _emit(result, lines, args.json, stdout)
        return args.exit_code
    except Exception as e:
        return report_error(e, as_json=as_json, stream=stderr)


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
