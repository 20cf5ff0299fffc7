import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.arithmetic.exact_core import SignMaps, as_rational, is_good, psi, sign_maps
from src.arithmetic.weight_lab import (QuasiPrimeTriple, ResidueData, commuting_trace_angles, find_rst_bruteforce,
                                       find_rst_constructive, weight_certificate)
from src.data.ingestion import read_presentation, save_report, save_table
from src.data.schemas import (AbelianizationPayload, AlexanderPayload, ClassifyBasePayload, CommandResult,
                              FibredGroupPayload, GoodTriplePayload, NilKnotPayload, OrbifoldPresentationPayload,
                              Payload, RstSearchPayload, SignMapsPayload, Status, SurgeryCheckPayload, SweepPayload,
                              TorusSurgeryPayload, WeightCertificatePayload)
from src.groups.quotients import witness_kills_small_quotients
from src.groups.smith import abelianization, exponent_matrix, minors_criterion, smith_normal_form
from src.nil.fibred_groups import CASES, FibredGroupInstance, build_fibred_presentation, check_fibred_conditions
from src.nil.nil_knot import (CENTRAL_CANDIDATE, CENTRALITY_NOTE, automorphism_check, build_nil_knot_group,
                              centrality_check, commutes_with_generators, nil_knot_abelianization,
                              non_commuting_generators, weight_orbit_report)
from src.orbifolds.bases import (classify_base, format_base, normal_generator_witness, orbifold_presentation,
                                 parse_base, twist_spin_base_check)
from src.pipeline.sweeps import SWEEPS, run_sweep
from src.seifert.alexander import LaurentPoly, alexander_torus, is_cyclotomic_squarefree
from src.seifert.surgery import (connected_sum_surgery_data, euler_number, format_seifert, normalize_pairs,
                                 parse_seifert, surgery_conditions_check, torus_surgery_data)
from src.utils.exceptions import NoRstWitness, OrbiweightError, ParseError, PreconditionViolated
from src.utils.helpers import load_config, setup_logging

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, Dict[str, Any], bool], Tuple[Payload, List[str]]]


def _int_list(text: Optional[str]) -> Tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(v) for v in text.split(','))
    except ValueError:
        raise ParseError("expected comma-separated integers", text)


def good_triple_command(args, config, show_progress):
    triple = [as_rational(v) for v in (args.xi, args.eta, args.zeta)]
    psis = [psi(v) for v in triple]
    good = is_good(*triple)
    payload = GoodTriplePayload(triple=[str(v) for v in triple], psi=[str(v) for v in psis], good=good)
    lines = [f"psi = ({', '.join(map(str, psis))})",
             f"good (2 max psi < sum psi): {good}"]
    return payload, lines


def sign_maps_command(args, config, show_progress):
    maps = sign_maps(args.xi, args.eta, args.zeta)
    tables = maps.as_dict()
    payload = SignMapsPayload(triple=[str(as_rational(v)) for v in (args.xi, args.eta, args.zeta)],
                              phi=tables['phi'], theta=tables['theta'],
                              phi_bijective=SignMaps.is_bijection(maps.phi),
                              theta_bijective=SignMaps.is_bijection(maps.theta))
    lines = [f"phi(+1), phi(-1) = {tables['phi']['1']}, {tables['phi']['-1']}  "
             f"[(-1)^floor(xi + eta + e zeta)]",
             f"theta(+1), theta(-1) = {tables['theta']['1']}, {tables['theta']['-1']}  "
             f"[(-1)^floor(xi - eta + e zeta)]",
             f"phi != theta and at least one is a bijection: "
             f"{payload.phi_bijective or payload.theta_bijective}"]
    return payload, lines


def rst_search_command(args, config, show_progress):
    triple = QuasiPrimeTriple(args.a, args.b, args.c)
    res = ResidueData(args.d, args.e, args.f)
    if args.brute:
        witness = find_rst_bruteforce(triple, res)
    else:
        try:
            witness = find_rst_constructive(triple, res)
        except NoRstWitness as e:
            logger.info(str(e))
            witness = None
    angles = commuting_trace_angles(witness, triple, res).as_dict() if witness else None
    payload = RstSearchPayload(moduli=list(triple.moduli), residues=list(res.values),
                               method='bruteforce' if args.brute else 'constructive',
                               witness=list(witness.values) if witness else None,
                               route=witness.route if witness else None, angles=angles)
    if witness is None:
        lines = ["no (r, s, t) with r/a + s/b + t/c < 1 gives a good triple"]
    else:
        lines = [f"(r, s, t) = {witness.values} via {witness.route}",
                 f"(rd/2a, se/2b, tf/2c) is good; angle parities {angles['parities']}"]
    return payload, lines


def weight_cert_command(args, config, show_progress):
    triple = QuasiPrimeTriple(args.a, args.b, args.c)
    cert = weight_certificate(triple, (args.eu, args.ex, args.ey, args.ez))
    payload = WeightCertificatePayload(
        moduli=list(triple.moduli), word_exponents=list(cert.word_exponents),
        derived_residues=list(cert.derived_residues.values), verdict=cert.verdict.value, reason=cert.reason,
        witness=list(cert.witness.values) if cert.witness else None,
        route=cert.witness.route if cert.witness else None,
        angles=cert.angles.as_dict() if cert.angles else None, upper_bound=cert.upper_bound)
    lines = [f"verdict: {cert.verdict.value} ({cert.reason})",
             f"weight <= 2: {cert.upper_bound}"]
    if cert.witness:
        lines.append(f"commuting representation from (r, s, t) = {cert.witness.values}")
    return payload, lines


def classify_base_command(args, config, show_progress):
    base = parse_base(args.base)
    verdict = classify_base(base)
    witness = normal_generator_witness(base) if verdict.admissible else None
    kills = None
    if witness:
        max_order = config.get('quotients', {}).get('max_order', 60)
        kills = witness_kills_small_quotients(orbifold_presentation(base).presentation, witness.word, max_order)
    twist_ok, twist_detail = twist_spin_base_check(base, args.twist) if args.twist is not None else (None, None)
    payload = ClassifyBasePayload(
        base=format_base(base), admissible=verdict.admissible, case_tag=verdict.case_tag.value,
        reasons=list(verdict.reasons), open_status=verdict.open_status,
        witness=witness.text if witness else None,
        witness_justification=witness.justification if witness else None, witness_kills_small_quotients=kills,
        twist=args.twist, twist_spin_base=twist_ok, twist_spin_detail=twist_detail)
    lines = [f"{format_base(base)}: {'admissible' if verdict.admissible else 'rejected'} ({verdict.case_tag.value})"]
    lines += [f"  {reason}" for reason in verdict.reasons]
    if verdict.open_status:
        lines.append(f"  open: {verdict.open_status}")
    if witness:
        lines.append(f"  normal generator {witness.text}: {witness.justification}")
        lines.append(f"  no nontrivial quotient of order <= {max_order} survives killing it: {kills}")
    if twist_detail:
        lines.append(f"  twist spin base: {twist_ok} ({twist_detail})")
    return payload, lines


def orbifold_pres_command(args, config, show_progress):
    base = parse_base(args.base)
    result = orbifold_presentation(base)
    p = result.presentation
    payload = OrbifoldPresentationPayload(base=format_base(base), generators=list(p.generator_names),
                                          relators=p.format_relators(), orientation=dict(result.orientation))
    lines = [p.to_text().rstrip()]
    lines += [f"# {name}: orientation {kind}" for name, kind in result.orientation]
    return payload, lines


def abelianize_command(args, config, show_progress):
    p = read_presentation(args.source)
    m = exponent_matrix(p)
    report = abelianization(p)
    payload = AbelianizationPayload(
        generators=list(p.generator_names), relators=p.format_relators(), exponent_matrix=m.to_lists(),
        smith_diagonal=list(smith_normal_form(m).diagonal), rank=report.rank, torsion=list(report.torsion),
        abelianization=report.describe(), is_infinite_cyclic=report.is_infinite_cyclic,
        minors_criterion=minors_criterion(m))
    lines = [f"abelianization: {report.describe()}",
             f"infinite cyclic (Smith normal form): {report.is_infinite_cyclic}",
             f"g x g minors vanish, (g-1) x (g-1) minors coprime: {payload.minors_criterion}"]
    return payload, lines


def torus_surgery_command(args, config, show_progress):
    data = connected_sum_surgery_data(args.p, args.q) if args.sum else torus_surgery_data(args.p, args.q)
    payload = TorusSurgeryPayload(p=args.p, q=args.q, connected_sum=args.sum, base=format_base(data.base),
                                  pairs=[list(pair) for pair in data.pairs], euler=str(euler_number(data)),
                                  seifert=format_seifert(data), normalized=format_seifert(normalize_pairs(data)))
    lines = [f"Seifert data: {payload.seifert}",
             f"normalized: {payload.normalized}",
             f"euler number -sum beta/alpha = {payload.euler}"]
    return payload, lines


def surgery_check_command(args, config, show_progress):
    data = parse_seifert(args.seifert)
    alexander = LaurentPoly.parse(args.alexander) if args.alexander else None
    report = surgery_conditions_check(data, alexander)
    payload = SurgeryCheckPayload(
        seifert=format_seifert(data), euler=str(euler_number(data)),
        conditions={k: {'outcome': c.outcome, 'detail': c.detail} for k, c in report.conditions.items()},
        overall=report.overall, notes=list(report.notes))
    lines = [f"condition {k}: {c.outcome} ({c.detail})" for k, c in report.conditions.items()]
    lines.append(f"all checked conditions pass: {report.overall}")
    lines += [f"note: {n}" for n in report.notes]
    return payload, lines


def alexander_command(args, config, show_progress):
    poly = alexander_torus(args.p, args.q)
    report = is_cyclotomic_squarefree(poly)
    payload = AlexanderPayload(p=args.p, q=args.q, polynomial=poly.format(), degree=poly.span,
                               at_one=poly.at_one(), squarefree=report.squarefree,
                               cyclotomic_factors=list(report.cyclotomic_factors)
                               if report.cyclotomic_factors is not None else None)
    lines = [f"Delta(t) = {poly.format()}",
             f"degree {poly.span}, Delta(1) = {poly.at_one()}",
             f"squarefree: {report.squarefree}; cyclotomic factors: {report.cyclotomic_factors}"]
    return payload, lines


def fibred_group_command(args, config, show_progress):
    inst = FibredGroupInstance(args.case, _int_list(args.orders), _int_list(args.e), _int_list(args.f),
                               args.k, args.l, _int_list(args.corners), _int_list(args.g), _int_list(args.h))
    p = build_fibred_presentation(inst)
    report = check_fibred_conditions(inst)
    payload = FibredGroupPayload(
        case=inst.case_tag, generators=list(p.generator_names), relators=p.format_relators(),
        abelianization=report.abelianization.describe(), predicted=report.predicted, oracle=report.oracle,
        agree=report.agree, minors=list(report.minors), printed_minors=list(report.printed_minors),
        printed_predicted=report.printed_predicted, torsion_flags=list(report.torsion_flags),
        readings=dict(report.readings))
    lines = [p.to_text().rstrip(),
             f"abelianization: {payload.abelianization}",
             f"closed-form condition: {report.predicted}; Smith normal form: {report.oracle}; agree: {report.agree}"]
    if report.minors:
        lines.append(f"maximal minors {report.minors}; as printed {report.printed_minors}")
    if report.torsion_flags:
        lines.append(f"cone points sharing a factor with their exponents: {report.torsion_flags}")
    for name, value in report.readings.items():
        lines.append(f"reading '{name}': {value}")
    return payload, lines


def nil_knot_command(args, config, show_progress):
    group = build_nil_knot_group(args.e)
    ab = nil_knot_abelianization(args.e)
    orbit = weight_orbit_report(args.e)
    central = centrality_check(args.e)
    failures = non_commuting_generators(args.e)
    notes = [] if central else [CENTRALITY_NOTE]
    payload = NilKnotPayload(
        e=args.e, presentation=group.presentation.format_relators(), abelianization=ab.describe(),
        theta=[list(row) for row in orbit.theta_matrix], smith_of_theta_minus_I=list(orbit.smith_diagonal),
        centrality=central, non_commuting=failures,
        first_power_commutes=commutes_with_generators(args.e, "t^3 x"),
        automorphisms=automorphism_check(args.e), notes=notes)
    lines = [group.presentation.to_text().rstrip(),
             f"abelianization: {ab.describe()}",
             f"Theta on (u, v): {payload.theta}; Smith diagonal of Theta - I: {payload.smith_of_theta_minus_I}",
             f"weight orbits <-> Coker(Theta - I) = {orbit.cokernel.describe()}",
             f"{CENTRAL_CANDIDATE} central: {central}"]
    if failures:
        lines.append(f"  fails to commute with: {', '.join(failures)}")
    lines += [f"note: {n}" for n in notes]
    return payload, lines


def sweep_command(args, config, show_progress):
    result = run_sweep(args.name, config, args.seed, show_progress)
    outputs: List[str] = []
    if args.output:
        outputs = save_table(result.table, args.output, f"{result.name}_sweep")
        outputs.append(save_report({'sweep': result.name, 'failures': result.failures, **result.summary},
                                   args.output, f"{result.name}_summary"))
    seed = args.seed if args.seed is not None else config.get('sweeps', {}).get('seed', 0)
    payload = SweepPayload(sweep=result.name, seed=seed, cases=len(result.table), failures=result.failures,
                           summary=result.summary, outputs=outputs)
    lines = [f"sweep {result.name}: {len(result.table)} rows, {result.failures} failures",
             f"summary: {result.summary}"]
    return payload, lines


COMMANDS: Dict[str, Handler] = {
    'good-triple': good_triple_command,
    'sign-maps': sign_maps_command,
    'rst-search': rst_search_command,
    'weight-cert': weight_cert_command,
    'classify-base': classify_base_command,
    'orbifold-pres': orbifold_pres_command,
    'abelianize': abelianize_command,
    'torus-surgery': torus_surgery_command,
    'surgery-check': surgery_check_command,
    'alexander': alexander_command,
    'fibred-group': fibred_group_command,
    'nil-knot': nil_knot_command,
    'sweep': sweep_command,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact checks on the weight of knot-like groups.")
    parser.add_argument("--json", action="store_true", help="Print the result envelope as JSON")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized sweeps")
    parser.add_argument("--config", default=None, help="Path to the configuration file")
    parser.add_argument("--log-level", default=None, help="Override the configured log level")
    sub = parser.add_subparsers(dest="command")

    for name in ('good-triple', 'sign-maps'):
        p = sub.add_parser(name, help="Rational triple, e.g. 1/3 2/5 3/7")
        for arg in ('xi', 'eta', 'zeta'):
            p.add_argument(arg)

    p = sub.add_parser('rst-search', help="Search (r, s, t) for quasi-primes a, b, c and residues d, e, f")
    for arg in 'abcdef':
        p.add_argument(f"--{arg}", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="Exhaustive search instead of the construction")

    p = sub.add_parser('weight-cert', help="Weight certificate from the exponent sums of a word")
    for arg in 'abc':
        p.add_argument(f"--{arg}", type=int, required=True)
    for arg in ('eu', 'ex', 'ey', 'ez'):
        p.add_argument(f"--{arg}", type=int, required=True)

    p = sub.add_parser('classify-base', help="Classify a base orbifold such as S2(2,3,6) or D(3;3)")
    p.add_argument("base")
    p.add_argument("--twist", type=int, default=None, help="Also check the base against a twist spin")

    p = sub.add_parser('orbifold-pres', help="Orbifold group presentation of a base")
    p.add_argument("base")

    p = sub.add_parser('abelianize', help="Abelianize a presentation file ('-' for stdin)")
    p.add_argument("source")

    for name in ('torus-surgery', 'alexander'):
        p = sub.add_parser(name, help="Torus knot parameters p > q >= 2, coprime")
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--q", type=int, required=True)
        if name == 'torus-surgery':
            p.add_argument("--sum", action="store_true", help="Use k_{p,q} # -k_{p,q}")

    p = sub.add_parser('surgery-check', help="Check Seifert data such as 'S2(2,3,6) ; (3,2) (2,3) (6,-13)'")
    p.add_argument("seifert")
    p.add_argument("--alexander", default=None, help="Alexander polynomial in t")

    p = sub.add_parser('fibred-group', help="Fibred group family; lists are comma separated, "
                                            "use --e=-1,2 for leading minus signs")
    p.add_argument("--case", choices=CASES, required=True)
    p.add_argument("--orders", default="")
    p.add_argument("--e", default="")
    p.add_argument("--f", default="")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--corners", default="")
    p.add_argument("--g", default="")
    p.add_argument("--h", default="")

    p = sub.add_parser('nil-knot', help="Nil-lattice 2-knot group for even e")
    p.add_argument("--e", type=int, required=True)

    p = sub.add_parser('sweep', help=f"Run a batch sweep: {', '.join(SWEEPS)}")
    p.add_argument("name", choices=SWEEPS)
    p.add_argument("--output", default=None, help="Directory for CSV/JSON tables")
    return parser


def run(argv: Optional[List[str]] = None) -> Tuple[CommandResult, int]:
    """Parse argv, run one command, print its result and return it with the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:
            return CommandResult(command='help', status=Status.OK), 0
        return CommandResult(command='', status=Status.ERROR, diagnostics=["usage error"]), 1
    if args.command is None:
        parser.print_usage()
        return CommandResult(command='', status=Status.ERROR, diagnostics=["no command given"]), 1

    config = load_config(args.config)
    setup_logging(config, args.log_level)
    show_progress = not args.json and sys.stderr.isatty()

    lines: List[str] = []
    try:
        payload, lines = COMMANDS[args.command](args, config, show_progress)
        result, code = CommandResult(command=args.command, status=Status.OK, payload=payload.dict()), 0
    except PreconditionViolated as e:
        result, code = CommandResult(command=args.command, status=Status.PRECONDITION, diagnostics=[str(e)]), 2
    except OrbiweightError as e:
        logger.error(f"{args.command} failed: {e}")
        result, code = CommandResult(command=args.command, status=Status.ERROR, diagnostics=[str(e)]), 1
    except Exception as e:
        logger.error(f"Unexpected error in {args.command}: {str(e)}")
        result, code = CommandResult(command=args.command, status=Status.ERROR, diagnostics=[str(e)]), 1

    if args.json:
        print(result.to_json())
    else:
        for line in lines:
            print(line)
        for message in result.diagnostics:
            print(f"{result.status.value}: {message}")
    return result, code


def main():
    _, code = run(sys.argv[1:])
    sys.exit(code)


if __name__ == "__main__":
    main()
