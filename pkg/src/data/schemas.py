"""JSON payload schemas for the command-line reports.

Rationals travel as strings ("p/q" or "n"); words use the presentation text
grammar. Bump SCHEMA_VERSION whenever a field changes meaning.
"""
import json
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

SCHEMA_VERSION = "1.0"


class Status(str, Enum):
    OK = 'ok'
    PRECONDITION = 'precondition'
    ERROR = 'error'


class Payload(BaseModel):
    schema_version: str = SCHEMA_VERSION

    class Config:
        extra = 'forbid'


class GoodTriplePayload(Payload):
    triple: List[str]
    psi: List[str]
    good: bool


class SignMapsPayload(Payload):
    triple: List[str]
    phi: Dict[str, int]
    theta: Dict[str, int]
    phi_bijective: bool
    theta_bijective: bool


class RstSearchPayload(Payload):
    moduli: List[int]
    residues: List[int]
    method: str
    witness: Optional[List[int]] = None
    route: Optional[str] = None
    angles: Optional[Dict[str, Any]] = None


class WeightCertificatePayload(Payload):
    moduli: List[int]
    word_exponents: List[int]
    derived_residues: List[int]
    verdict: str
    reason: str
    witness: Optional[List[int]] = None
    route: Optional[str] = None
    angles: Optional[Dict[str, Any]] = None
    upper_bound: str


class ClassifyBasePayload(Payload):
    base: str
    admissible: bool
    case_tag: str
    reasons: List[str]
    open_status: Optional[str] = None
    witness: Optional[str] = None
    witness_justification: Optional[str] = None
    witness_kills_small_quotients: Optional[bool] = None
    twist: Optional[int] = None
    twist_spin_base: Optional[bool] = None
    twist_spin_detail: Optional[str] = None


class OrbifoldPresentationPayload(Payload):
    base: str
    generators: List[str]
    relators: List[str]
    orientation: Dict[str, str]


class AbelianizationPayload(Payload):
    generators: List[str]
    relators: List[str]
    exponent_matrix: List[List[int]]
    smith_diagonal: List[int]
    rank: int
    torsion: List[int]
    abelianization: str
    is_infinite_cyclic: bool
    minors_criterion: bool


class TorusSurgeryPayload(Payload):
    p: int
    q: int
    connected_sum: bool
    base: str
    pairs: List[List[int]]
    euler: str
    seifert: str
    normalized: str


class ConditionPayload(BaseModel):
    outcome: str
    detail: str


class SurgeryCheckPayload(Payload):
    seifert: str
    euler: str
    conditions: Dict[str, ConditionPayload]
    overall: bool
    notes: List[str]


class AlexanderPayload(Payload):
    p: int
    q: int
    polynomial: str
    degree: int
    at_one: int
    squarefree: bool
    cyclotomic_factors: Optional[List[int]] = None


class FibredGroupPayload(Payload):
    case: str
    generators: List[str]
    relators: List[str]
    abelianization: str
    predicted: bool
    oracle: bool
    agree: bool
    minors: List[int]
    printed_minors: List[int]
    printed_predicted: Optional[bool] = None
    torsion_flags: List[int]
    readings: Dict[str, bool]


class NilKnotPayload(Payload):
    e: int
    presentation: List[str]
    abelianization: str
    theta: List[List[int]]
    smith_of_theta_minus_I: List[int]
    centrality: bool
    non_commuting: List[str]
    first_power_commutes: Dict[str, bool]
    automorphisms: Dict[str, bool]
    notes: List[str] = []


class SweepPayload(Payload):
    sweep: str
    seed: int
    cases: int
    failures: int
    summary: Dict[str, Any]
    outputs: List[str]


class CommandResult(BaseModel):
    command: str
    status: Status
    payload: Optional[Dict[str, Any]] = None
    diagnostics: List[str] = []

    def to_json(self) -> str:
        return json.dumps(self.dict(), sort_keys=True, indent=2, ensure_ascii=False, default=str)
