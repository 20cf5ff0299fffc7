"""Batch sweeps over parameter families, run on a thread pool and merged deterministically.

Each sweep splits its work into keyed chunks. Chunks carry their own seeded
random generator, so the merged table depends only on the seed and never on
scheduling.
"""
import logging
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from src.arithmetic.weight_lab import (QuasiPrimeTriple, find_rst_bruteforce, find_rst_constructive,
                                       is_case_analysis_route, is_valid_witness, quasiprime_triples, residue_classes)
from src.groups.presentations import Presentation
from src.groups.smith import abelianization, exponent_matrix, minors_criterion
from src.groups.words import Word
from src.nil.fibred_groups import check_fibred_conditions, random_instance
from src.seifert.alexander import alexander_torus, is_cyclotomic_squarefree
from src.seifert.surgery import PASS, euler_number, surgery_conditions_check, torus_surgery_data
from src.utils.exceptions import NoRstWitness, PreconditionViolated

logger = logging.getLogger(__name__)

Row = Dict[str, Any]

DEFAULTS: Dict[str, Any] = {
    'seed': 0,
    'max_workers': 4,
    'chunk_size': 250,
    'rst_bound': 23,
    'torus_max_p': 50,
    'alexander_max_p': 20,
    'minors_cases': 10000,
    'minors_max_generators': 5,
    'minors_max_relators': 6,
    'minors_max_entry': 9,
    'fibred_cases': 1000,
    'fibred_max_order': 9,
    'fibred_max_exponent': 9,
    'disk_cases': 200,
}


@dataclass
class SweepResult:
    name: str
    table: pd.DataFrame
    failures: int
    summary: Dict[str, Any] = field(default_factory=dict)


def chunk_rng(seed: int, key: Any) -> random.Random:
    return random.Random(f"{seed}:{key}")


def run_parallel(work: Sequence[Tuple[Any, Any]], worker: Callable[[Any], List[Row]], max_workers: int = 4,
                 desc: str = "Sweeping", show_progress: bool = True) -> List[Row]:
    """Run worker on every (key, item) and concatenate the rows in key order."""
    results: Dict[Any, List[Row]] = {}
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        future_to_key = {executor.submit(worker, item): key for key, item in work}
        for future in tqdm(as_completed(future_to_key), total=len(future_to_key), desc=desc,
                           disable=not show_progress):
            key = future_to_key[future]
            results[key] = future.result()
    rows: List[Row] = []
    for key in sorted(results):
        rows.extend(results[key])
    return rows


def _settings(config: Dict[str, Any]) -> Dict[str, Any]:
    return {**DEFAULTS, **(config.get('sweeps') or {})}


def _rst_rows(triple: QuasiPrimeTriple) -> List[Row]:
    cases = constructive_ok = no_witness = brute_found = 0
    routes: Dict[str, int] = {}
    for res in residue_classes(triple):
        cases += 1
        brute = find_rst_bruteforce(triple, res)
        if brute is not None:
            brute_found += 1
        try:
            witness = find_rst_constructive(triple, res)
        except NoRstWitness:
            no_witness += 1
            continue
        routes[witness.route] = routes.get(witness.route, 0) + 1
        if is_case_analysis_route(witness.route) and is_valid_witness(triple, res, *witness.values):
            constructive_ok += 1
    a, b, c = triple.moduli
    return [{'a': a, 'b': b, 'c': c, 'cases': cases, 'constructive_valid': constructive_ok,
             'no_witness': no_witness, 'bruteforce_found': brute_found,
             'routes': ','.join(f"{k}:{v}" for k, v in sorted(routes.items()))}]


def rst_agreement_sweep(settings: Dict[str, Any], show_progress: bool = True) -> SweepResult:
    """Constructive search against the brute-force oracle on every residue class of every triple.

    Classes without any witness are counted in no_witness and are not failures;
    a class fails when the case analysis misses a witness the oracle finds.
    """
    triples = quasiprime_triples(settings['rst_bound'])
    rows = run_parallel([(t.moduli, t) for t in triples], _rst_rows, settings['max_workers'],
                        "rst agreement", show_progress)
    df = pd.DataFrame(rows)
    failures = int(((df['constructive_valid'] + df['no_witness'] != df['cases'])
                    | (df['bruteforce_found'] + df['no_witness'] != df['cases'])).sum())
    summary = {'triples': len(df), 'cases': int(df['cases'].sum()), 'no_witness': int(df['no_witness'].sum())}
    if summary['no_witness']:
        logger.warning(f"{summary['no_witness']} residue classes admit no (r, s, t) at all")
    return SweepResult('rst', df, failures, summary)


def exceptional_triple_report(settings: Dict[str, Any], show_progress: bool = True) -> SweepResult:
    """Which residue classes of {3, 4, 5} admit a witness at all."""
    triple = QuasiPrimeTriple(3, 4, 5)
    rows = []
    for res in tqdm(list(residue_classes(triple)), desc="{3,4,5} residues", disable=not show_progress):
        witness = find_rst_bruteforce(triple, res)
        rows.append({'d': res.d, 'e': res.e, 'f': res.f,
                     'witness': None if witness is None else ' '.join(map(str, witness.values))})
    df = pd.DataFrame(rows)
    missing = df[df['witness'].isna()]
    summary = {'classes': len(df), 'without_witness': len(missing),
               'examples': [f"({r.d},{r.e},{r.f})" for r in missing.head(10).itertuples()]}
    # absence of a witness is the expected finding here, not a failure
    return SweepResult('exceptional', df, 0, summary)


def _coprime_pairs(max_p: int) -> List[Tuple[int, int]]:
    return [(p, q) for p in range(3, max_p + 1) for q in range(2, p) if gcd(p, q) == 1]


def _torus_rows(pq: Tuple[int, int]) -> List[Row]:
    p, q = pq
    data = torus_surgery_data(p, q)
    report = surgery_conditions_check(data)
    row = {'p': p, 'q': q, 'euler': str(euler_number(data))}
    for key in ('1', '2', '3'):
        row[f"condition_{key}"] = report.conditions[key].outcome
    row['reciprocal_sum'] = str(sum(Fraction(1, a) for a in data.base.cone_orders))
    return [row]


def torus_surgery_sweep(settings: Dict[str, Any], show_progress: bool = True) -> SweepResult:
    pairs = _coprime_pairs(settings['torus_max_p'])
    rows = run_parallel([(pq, pq) for pq in pairs], _torus_rows, settings['max_workers'],
                        "torus surgery", show_progress)
    df = pd.DataFrame(rows)
    ok = (df['euler'] == '0') & (df['condition_1'] == PASS) & (df['condition_2'] == PASS) & (df['condition_3'] == PASS)
    return SweepResult('torus', df, int((~ok).sum()), {'pairs': len(df)})


def _alexander_rows(pq: Tuple[int, int]) -> List[Row]:
    p, q = pq
    poly = alexander_torus(p, q)
    report = is_cyclotomic_squarefree(poly)
    return [{'p': p, 'q': q, 'degree': poly.span, 'expected_degree': (p - 1) * (q - 1),
             'squarefree': report.squarefree,
             'cyclotomic_factors': None if report.cyclotomic_factors is None
             else ' '.join(map(str, report.cyclotomic_factors))}]


def alexander_sweep(settings: Dict[str, Any], show_progress: bool = True) -> SweepResult:
    pairs = _coprime_pairs(settings['alexander_max_p'])
    rows = run_parallel([(pq, pq) for pq in pairs], _alexander_rows, settings['max_workers'],
                        "alexander", show_progress)
    df = pd.DataFrame(rows)
    ok = (df['degree'] == df['expected_degree']) & df['squarefree'] & df['cyclotomic_factors'].notna()
    return SweepResult('alexander', df, int((~ok).sum()), {'pairs': len(df)})


def random_presentation(rng: random.Random, max_generators: int, max_relators: int,
                        max_entry: int) -> Presentation:
    """Each relator uses every generator once, in random order, with exponent in [-max_entry, max_entry]."""
    g = rng.randint(1, max_generators)
    relators = []
    for _ in range(rng.randint(0, max_relators)):
        letters = [(i, rng.randint(-max_entry, max_entry)) for i in range(g)]
        rng.shuffle(letters)
        relators.append(Word(tuple(letters)))
    return Presentation(tuple(f"g{i + 1}" for i in range(g)), tuple(relators))


def _chunks(total: int, size: int) -> List[Tuple[int, range]]:
    return [(start // size, range(start, min(start + size, total))) for start in range(0, total, size)]


def minors_sweep(settings: Dict[str, Any], seed: int, show_progress: bool = True) -> SweepResult:
    """Minors criterion against the Smith normal form on random presentations."""

    def worker(item: Tuple[int, range]) -> List[Row]:
        chunk, cases = item
        rng = chunk_rng(seed, f"minors:{chunk}")
        rows = []
        for case in cases:
            p = random_presentation(rng, settings['minors_max_generators'], settings['minors_max_relators'],
                                    settings['minors_max_entry'])
            by_minors = minors_criterion(exponent_matrix(p))
            by_smith = abelianization(p).is_infinite_cyclic
            rows.append({'case': case, 'generators': p.generator_count, 'relators': len(p.relators),
                         'minors': by_minors, 'smith': by_smith, 'agree': by_minors == by_smith})
        return rows

    work = [(chunk, (chunk, cases)) for chunk, cases in _chunks(settings['minors_cases'], settings['chunk_size'])]
    df = pd.DataFrame(run_parallel(work, worker, settings['max_workers'], "minors vs smith", show_progress))
    summary = {'cases': len(df), 'infinite_cyclic': int(df['smith'].sum())}
    return SweepResult('minors', df, int((~df['agree']).sum()), summary)


def _instance_row(case: int, inst) -> Row:
    report = check_fibred_conditions(inst)
    return {'case': case, 'case_tag': inst.case_tag,
            'cone_orders': ' '.join(map(str, inst.cone_orders)),
            'corner_orders': ' '.join(map(str, inst.corner_orders)),
            'abelianization': report.abelianization.describe(),
            'predicted': report.predicted, 'oracle': report.oracle, 'agree': report.agree,
            **{f"reading_{name}": value for name, value in report.readings.items()}}


def fibred_sweep(settings: Dict[str, Any], seed: int, show_progress: bool = True) -> SweepResult:
    """Closed-form conditions against the abelianization on random S2 and P2 instances."""

    def worker(item: Tuple[int, range]) -> List[Row]:
        chunk, cases = item
        rng = chunk_rng(seed, f"fibred:{chunk}")
        return [_instance_row(case, random_instance(rng, 'S2' if case % 2 == 0 else 'P2',
                                                    settings['fibred_max_order'], settings['fibred_max_exponent']))
                for case in cases]

    work = [(chunk, (chunk, cases)) for chunk, cases in _chunks(settings['fibred_cases'], settings['chunk_size'])]
    df = pd.DataFrame(run_parallel(work, worker, settings['max_workers'], "fibred groups", show_progress))
    summary = {'cases': len(df), 'predicted_true': int(df['predicted'].sum())}
    return SweepResult('fibred', df, int((~df['agree']).sum()), summary)


def disk_reading_table(settings: Dict[str, Any], seed: int, show_progress: bool = True) -> SweepResult:
    """Both readings of the disk condition against the abelianization; a report, never a failure."""

    def worker(item: Tuple[int, range]) -> List[Row]:
        chunk, cases = item
        rng = chunk_rng(seed, f"disk:{chunk}")
        return [_instance_row(case, random_instance(rng, 'Disk', settings['fibred_max_order'],
                                                    settings['fibred_max_exponent']))
                for case in cases]

    work = [(chunk, (chunk, cases)) for chunk, cases in _chunks(settings['disk_cases'], settings['chunk_size'])]
    df = pd.DataFrame(run_parallel(work, worker, settings['max_workers'], "disk readings", show_progress))
    summary = {'cases': len(df)}
    for name in ('g', 'e'):
        matches = df[f"reading_{name}"] == df['oracle']
        summary[f"reading_{name}_matches"] = int(matches.sum())
        summary[f"reading_{name}_mismatches"] = int((~matches).sum())
        if (~matches).any():
            logger.warning(f"Disk reading '{name}' disagrees with the abelianization on {int((~matches).sum())} cases")
    return SweepResult('disk', df, 0, summary)


SWEEPS = ('rst', 'exceptional', 'torus', 'alexander', 'minors', 'fibred', 'disk')


def run_sweep(name: str, config: Dict[str, Any], seed: Optional[int] = None, show_progress: bool = True) -> SweepResult:
    settings = _settings(config)
    seed = settings['seed'] if seed is None else seed
    logger.info(f"Running sweep '{name}' with seed {seed} on {settings['max_workers']} workers")
    if name == 'rst':
        result = rst_agreement_sweep(settings, show_progress)
    elif name == 'exceptional':
        result = exceptional_triple_report(settings, show_progress)
    elif name == 'torus':
        result = torus_surgery_sweep(settings, show_progress)
    elif name == 'alexander':
        result = alexander_sweep(settings, show_progress)
    elif name == 'minors':
        result = minors_sweep(settings, seed, show_progress)
    elif name == 'fibred':
        result = fibred_sweep(settings, seed, show_progress)
    elif name == 'disk':
        result = disk_reading_table(settings, seed, show_progress)
    else:
        raise PreconditionViolated(f"unknown sweep {name!r}, expected one of {SWEEPS}")
    logger.info(f"Sweep '{name}': {len(result.table)} rows, {result.failures} failures")
    return result
