"""Command line interface.

Every subcommand reads a problem file and prints a report, as text or as
JSON with ``--json``.  Exit codes: 0 on success (and for predicates that
hold), 1 for predicates that fail or computations yielding a negative
verdict, 2 for malformed input or violated preconditions.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .blowup import blowup_chart, transform_morphism
from .chart import RationalPoint, validate_pair_condition
from .classify import (
    is_log_rank_adapted_at,
    is_monomial_morphism_at,
    is_quasi_prepared,
    is_strongly_prepared_at,
    match_spm_template,
    singular_locus_ideal,
    top_fitting_ideal,
)
from .fitting import log_fitting_ideal
from .frontend import ProblemSyntaxError, Report, parse_problem
from .ideal import EmptyVarietyError
from .logdiff import NotAMorphismOfPairsError
from .principalize import (
    DepthLimitError,
    NonMonomialInputError,
    TerminationMeasureError,
    goward_principalize,
    monomial_ideal_from_presentation,
    monomialize_monomial_morphism,
)
from .rank import (
    geometric_rank,
    image_closure_dimension,
    log_rank_at_point,
    rank_at_point,
)


class InputError(Exception):
    """User-facing problem with the input; maps to exit code 2."""


def _load(args) -> tuple:
    try:
        with open(args.problem) as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(str(e))
    try:
        return parse_problem(text)
    except (ProblemSyntaxError, ValueError) as e:
        raise InputError(str(e))


def _point_from(args, problem) -> RationalPoint:
    if getattr(args, "at", None):
        try:
            coords = tuple(Fraction(c) for c in args.at.split(","))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad point {args.at!r}")
        if len(coords) != len(problem.morphism.source.variables):
            raise InputError("point length does not match the source chart")
        return RationalPoint(coords)
    if problem.point is None:
        raise InputError("a point is required (problem 'point' line or --at)")
    return problem.point


def _emit(report: Report, args) -> None:
    out = report.render_json() if args.json else report.render_text()
    sys.stdout.write(out)


def _ideal_strings(I) -> list[str]:
    return [str(g) for g in I.generators] or ["0"]


# ---------------------------------------------------------------------------
# Subcommands


def cmd_fitting(args) -> int:
    problem = _load(args)
    F = log_fitting_ideal(problem.morphism, args.k)
    basis = F.basis()
    report = Report("fitting")
    report.add("k", args.k)
    report.add("generators", _ideal_strings(F))
    report.add("groebner_basis", [str(g) for g in basis] or ["0"])
    _emit(report, args)
    return 0


def cmd_logrank(args) -> int:
    problem = _load(args)
    a = _point_from(args, problem)
    r = log_rank_at_point(problem.morphism, a)
    report = Report("logrank")
    report.add("point", [str(c) for c in a.coordinates])
    report.add("logrank", r)
    _emit(report, args)
    return 0


def cmd_rank(args) -> int:
    problem = _load(args)
    a = _point_from(args, problem)
    r = rank_at_point(problem.morphism, a)
    report = Report("rank")
    report.add("point", [str(c) for c in a.coordinates])
    report.add("rank", r)
    _emit(report, args)
    return 0


def cmd_grk(args) -> int:
    problem = _load(args)
    r = geometric_rank(problem.morphism)
    report = Report("grk")
    report.add("geometric_rank", r)
    _emit(report, args)
    return 0


def cmd_imagedim(args) -> int:
    problem = _load(args)
    try:
        d = image_closure_dimension(problem.morphism)
    except EmptyVarietyError:
        raise InputError("image closure is empty")
    report = Report("imagedim")
    report.add("image_dimension", d)
    _emit(report, args)
    return 0


def cmd_classify(args) -> int:
    problem = _load(args)
    phi = problem.morphism
    report = Report("classify")
    pair_ok, pair_diags = validate_pair_condition(phi)
    report.add("pair_condition", pair_ok)
    qp_ok, qp_diags = is_quasi_prepared(phi)
    report.add("quasi_prepared", qp_ok)
    diagnostics = pair_diags + qp_diags
    sp = None
    if qp_ok and len(phi.target.variables) == 2 and problem.point is not None:
        cert = is_strongly_prepared_at(phi, problem.point)
        sp = cert is not None
        report.add("strongly_prepared_at_point", sp)
        if cert is not None:
            report.add("principal_monomial", str(cert.generator_monomial.as_string(phi.source.variables)))
        syn = match_spm_template(phi, problem.point)
        report.add("normal_form_case", syn.case_tag if syn else None)
    if problem.point is not None:
        mono = is_monomial_morphism_at(phi, problem.point)
        report.add("monomial_at_point", mono is not None)
    if diagnostics:
        report.add("diagnostics", diagnostics)
    report.ok = qp_ok
    _emit(report, args)
    return 0 if qp_ok else 1


def cmd_quasiprepared(args) -> int:
    problem = _load(args)
    ok, diags = is_quasi_prepared(problem.morphism)
    report = Report("quasiprepared")
    report.add("quasi_prepared", ok)
    sing = singular_locus_ideal(problem.morphism)
    report.add("singular_locus", _ideal_strings(sing))
    if diags:
        report.add("diagnostics", diags)
    report.ok = ok
    _emit(report, args)
    return 0 if ok else 1


def cmd_lradapted(args) -> int:
    problem = _load(args)
    if problem.filtration is None:
        raise InputError("lradapted needs a filtration in the problem file")
    if problem.target_ideal is None:
        raise InputError("lradapted needs a targetideal in the problem file")
    a = _point_from(args, problem)
    ok, diags = is_log_rank_adapted_at(
        problem.morphism,
        a,
        problem.filtration,
        problem.target_ideal,
        seed=args.seed,
    )
    report = Report("lradapted")
    report.add("log_rank_adapted", ok)
    if diags:
        report.add("diagnostics", diags)
    report.ok = ok
    _emit(report, args)
    return 0 if ok else 1


def cmd_blowup(args) -> int:
    problem = _load(args)
    center = tuple(args.center.split(","))
    try:
        step = blowup_chart(problem.morphism.source, center)
    except ValueError as e:
        raise InputError(str(e))
    report = Report("blowup")
    report.add("center", list(center))
    for idx, bc in enumerate(step.children):
        phi_c = transform_morphism(problem.morphism, step, idx)
        report.add(f"chart_{bc.distinguished}_divisor", list(bc.chart.divisor_vars))
        for x in phi_c.target.variables:
            report.add(f"chart_{bc.distinguished}_map_{x}", str(phi_c.components[x]))
    _emit(report, args)
    return 0


def _tree_report(tree, name: str) -> Report:
    report = Report(name)
    report.add("blowup_steps", tree.step_count())
    report.add("depth", tree.depth())
    leaves = tree.leaves()
    report.add("leaf_count", len(leaves))
    for idx, leaf in enumerate(leaves):
        report.add(f"leaf_{idx}_divisor", list(leaf.chart.divisor_vars))
        if leaf.certificate is not None:
            cert = getattr(leaf.certificate, "principal", leaf.certificate)
            report.add(
                f"leaf_{idx}_principal_generator",
                cert.generator_monomial.as_string(leaf.chart.variables),
            )
    return report


def cmd_principalize(args) -> int:
    problem = _load(args)
    phi = problem.morphism
    F = top_fitting_ideal(phi)
    ideal = monomial_ideal_from_presentation(F, phi.source)
    tree = goward_principalize(ideal, phi.source, max_depth=args.max_depth)
    _emit(_tree_report(tree, "principalize"), args)
    return 0


def cmd_monomialize(args) -> int:
    problem = _load(args)
    tree = monomialize_monomial_morphism(
        problem.morphism, max_depth=args.max_depth, seed=args.seed
    )
    _emit(_tree_report(tree, "monomialize"), args)
    return 0


def cmd_verify_monomial(args) -> int:
    problem = _load(args)
    a = _point_from(args, problem)
    rows = is_monomial_morphism_at(problem.morphism, a)
    report = Report("verify-monomial")
    report.add("monomial", rows is not None)
    if rows is not None:
        report.add("exponent_matrix", [list(r) for r in rows])
    report.ok = rows is not None
    _emit(report, args)
    return 0 if rows is not None else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logmono",
        description="Log differential forms, log-Fitting ideals, and "
        "combinatorial principalization for morphisms of charted pairs.",
    )
    parser.add_argument("--json", action="store_true", help="emit JSON reports")
    parser.add_argument(
        "--max-depth", type=int, default=64, help="blowup tree depth cap"
    )
    parser.add_argument("--seed", type=int, default=0, help="sampling seed")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("problem", help="path to a problem file")
        return p

    p = add("fitting", cmd_fitting, help="log-Fitting ideal at a form degree")
    p.add_argument("--k", type=int, required=True, help="form degree")

    p = add("logrank", cmd_logrank, help="log-rank at a point")
    p.add_argument("--at", help="comma separated rational coordinates")

    p = add("rank", cmd_rank, help="Jacobian rank at a point")
    p.add_argument("--at", help="comma separated rational coordinates")

    add("grk", cmd_grk, help="geometric (generic Jacobian) rank")
    add("imagedim", cmd_imagedim, help="dimension of the image closure")
    add("classify", cmd_classify, help="full classification report")
    add("quasiprepared", cmd_quasiprepared, help="quasi-prepared predicate")

    p = add("lradapted", cmd_lradapted, help="log-rank-adapted verification")
    p.add_argument("--at", help="comma separated rational coordinates")

    p = add("blowup", cmd_blowup, help="blow up the source chart at a center")
    p.add_argument(
        "--center", required=True, help="comma separated center variables"
    )

    add(
        "principalize",
        cmd_principalize,
        help="principalize the top log-Fitting monomial ideal",
    )
    add(
        "monomialize",
        cmd_monomialize,
        help="monomialize a monomial morphism onto a surface",
    )

    p = add(
        "verify-monomial",
        cmd_verify_monomial,
        help="check the morphism is monomial of full exponent rank at a point",
    )
    p.add_argument("--at", help="comma separated rational coordinates")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (
        NonMonomialInputError,
        NotAMorphismOfPairsError,
        DepthLimitError,
        TerminationMeasureError,
        ValueError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
