"""
Strategy registry: from parameters to a final circuit and its report

Strategies:
    naive      Gray-code multi-controlled rotations
    mottonen   rotation/CNOT ladder
    hybrid     t Mottonen levels, pairwise (or naive) residuals
    pseudo     log2(d) + 1 pseudo rotations, all-to-all connectivity
    lnn        pseudo rotations routed on a line by walking the target
    lnn-swap   pseudo program put on a line with standalone SWAPs

Every strategy builds the whole program for a^j (end-markers included) and
returns it lowered to CNOT and 1-qubit gates, optionally rewritten to the
{CNOT, I, RZ, SX, X} basis.
"""

import logging
from dataclasses import dataclass, field, replace

from qfasynth.circuit import metrics, program_circuit
from qfasynth.decompose import lower
from qfasynth.errors import SpecError
from qfasynth.lnn import (
    predicted_cnots, route_pseudo_lnn, route_with_swaps,
    unmerged_cnots,
)
from qfasynth.model import QfaSpec
from qfasynth.pseudo import PseudoSpec, multiples_of, pseudo_program
from qfasynth.rewrite import expand_to_basis, rewrite_to_rz_basis
from qfasynth.uniform import (
    naive_cost_bound, synth_hybrid, synth_mottonen, synth_naive,
)

logger = logging.getLogger(__name__)

UNIFORM_STRATEGIES = ("naive", "mottonen", "hybrid")
PSEUDO_STRATEGIES = ("pseudo", "lnn", "lnn-swap")
STRATEGIES = UNIFORM_STRATEGIES + PSEUDO_STRATEGIES
BASES = ("ry", "rz")


@dataclass(frozen=True)
class SynthRequest:
    """Everything needed to build one program"""

    strategy: str
    spec: QfaSpec = None
    pspec: PseudoSpec = None
    j: int = 1
    t: int = 0
    residual: str = "pair"
    basis: str = "ry"
    n: int = 5
    target: int = None
    merge: bool = True
    frame: str = "sx"

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise SpecError(f"unknown strategy {self.strategy!r}")
        if self.basis not in BASES:
            raise SpecError(f"basis must be one of {BASES}, got {self.basis!r}")
        if self.j < 0:
            raise SpecError(f"input length must be >= 0, got {self.j}")
        if self.strategy in UNIFORM_STRATEGIES and self.spec is None:
            raise SpecError(f"{self.strategy} needs a K set")
        if self.strategy in PSEUDO_STRATEGIES and self.pspec is None:
            raise SpecError(f"{self.strategy} needs pseudo angles")

    @property
    def p(self):
        return self.spec.p if self.spec is not None else self.pspec.p


@dataclass(frozen=True)
class SynthReport:
    strategy: str
    p: int
    metrics: object
    min_abs_angle: float
    predicted_cnots: int = None
    formula_ok: bool = None
    params: dict = field(default_factory=dict)

    def to_dict(self):
        out = {
            "strategy": self.strategy,
            "p": self.p,
            "cnot_count": self.metrics.cnot_count,
            "depth": self.metrics.depth,
            "histogram": dict(self.metrics.histogram),
            "min_abs_angle": self.min_abs_angle,
            "predicted_cnots": self.predicted_cnots,
            "formula_ok": self.formula_ok,
        }
        out.update(self.params)
        return out


@dataclass(frozen=True)
class Built:
    circuit: object
    report: SynthReport
    extra: object = None


def _finish(program, basis, target):
    if basis == "rz":
        return rewrite_to_rz_basis(program, target)
    return lower(program)


def _uniform_symbol(req):
    spec = req.spec
    if req.strategy == "naive":
        return synth_naive(spec), None
    if req.strategy == "mottonen":
        return synth_mottonen(spec), None
    return synth_hybrid(spec, req.t, req.residual)


def _build_uniform(req):
    spec = req.spec
    symbol, plan = _uniform_symbol(req)
    k = spec.num_controls
    program = program_circuit(symbol, req.j, range(k))
    circuit = _finish(program, req.basis, k)
    m = metrics(circuit)
    params = {"k": list(spec.ks), "j": req.j, "basis": req.basis}

    predicted, ok = None, None
    min_angle = metrics(symbol).min_abs_angle
    if req.strategy == "mottonen":
        predicted = spec.d * req.j
        ok = m.cnot_count == predicted
    elif req.strategy == "naive" and spec.d >= 32:
        predicted = naive_cost_bound(spec.d) * req.j
        ok = m.cnot_count <= predicted
    elif req.strategy == "hybrid":
        params.update(t=req.t, residual=req.residual,
                      angle_scale=plan.predicted_angle_scale,
                      in_formula_range=plan.in_formula_range)
        min_angle = plan.min_abs_angle
        if plan.predicted_cnots is not None:
            predicted = plan.predicted_cnots * req.j
            ok = m.cnot_count <= predicted
    return Built(circuit, SynthReport(req.strategy, spec.p, m, min_angle, predicted, ok, params), plan)


def _build_pseudo(req):
    pspec = req.pspec
    k = pspec.num_controls
    params = {"xi_multiples": list(multiples_of(pspec)), "j": req.j, "basis": req.basis}

    if req.strategy == "lnn":
        n = k + 1
        routed = route_pseudo_lnn(pspec.p, pspec, req.j, n, req.target, req.merge, req.frame)
        circuit = expand_to_basis(routed.circuit) if req.basis == "rz" else routed.circuit
        m = metrics(circuit)
        predicted = None
        if req.j >= 1:
            predicted = predicted_cnots(n, req.j) if req.merge else unmerged_cnots(n, req.j)
        params.update(n=n, initial_target=routed.initial_layout[-1], merged=req.merge,
                      frame=req.frame, final_layout=list(routed.final_layout))
        min_angle = metrics(routed.circuit).min_abs_angle
        ok = None if predicted is None else m.cnot_count == predicted
        return Built(circuit, SynthReport("lnn", pspec.p, m, min_angle, predicted, ok, params), routed)

    program = pseudo_program(pspec, req.j)
    circuit = _finish(program, req.basis, k)
    min_angle = metrics(program).min_abs_angle
    if req.strategy == "lnn-swap":
        swapped = route_with_swaps(circuit)
        circuit = swapped.circuit
        params.update(swaps=swapped.swap_count, final_layout=list(swapped.final_layout))
        m = metrics(circuit)
        return Built(circuit, SynthReport("lnn-swap", pspec.p, m, min_angle, None, None, params), swapped)

    m = metrics(circuit)
    predicted = 2 * k * req.j
    return Built(circuit, SynthReport("pseudo", pspec.p, m, min_angle, predicted,
                                      m.cnot_count == predicted, params))


def build(req):
    """Build the final program and report for a request"""
    built = _build_uniform(req) if req.strategy in UNIFORM_STRATEGIES else _build_pseudo(req)
    logger.debug("built %s j=%d: %d CNOTs", req.strategy, req.j, built.report.metrics.cnot_count)
    return built


def builder_for(req):
    """Callable j -> final circuit, for sweeps"""
    def make(j):
        return build(replace(req, j=j)).circuit
    return make
