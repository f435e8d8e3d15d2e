"""Entropic functionals of a quantum measurement.

The three headline quantities, all in bits:

* information gain  iota  = I(R:X), the mutual information between the
  purifying reference and the classical outcome register; equivalently the
  Holevo quantity of the ensemble the measurement induces on the reference.
* disturbance       delta = S(rho) - I_c(R -> Qp X), the loss of coherent
  information from the reference to output-plus-register; equivalently
  I(R : App X).
* missing information (noise) Delta = I(R : App | X), the conditional
  correlations between the reference and the apparatus multiplicity degrees
  of freedom given the outcome.

They satisfy the balance identity iota + Delta = delta, hence the tradeoff
iota <= delta, with equality exactly when every outcome map has a single
Kraus operator.  Each quantity is evaluated through two independent routes
whose residuals are recorded; negative round-off is clipped to zero only
for quantities that are provably nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .dilation import APPARATUS, OUTPUT, REFERENCE, REGISTER, dilate
from .errors import (
    BadDistribution,
    DimensionMismatch,
    LabelOverlap,
    NumericalInconsistency,
    UnknownOutcome,
    ZeroProbabilityOutcome,
)
from .objects import (
    PROB_EPS,
    Instrument,
    povm_of,
    purify,
    require_valid,
)
from .tensors import ENTROPY_CUTOFF, LabeledState, Subsystem, entropy_bits, partial_trace

#: tolerance for agreement between independent computation routes
ROUTE_ATOL = 1e-9
#: tolerance for the balance identity iota + Delta = delta
BALANCE_ATOL = 1e-9


def _clip_nonneg(x: float, tol: float = 1e-9) -> float:
    """Zero out round-off negatives; values below -tol pass through untouched
    so that genuine violations stay visible to callers and tests."""
    return 0.0 if -tol <= x < 0.0 else x


def binary_entropy(x: float) -> float:
    """h2(x) in bits with the conventions h2(0) = h2(1) = 0."""
    if x < 0.0 or x > 1.0:
        raise BadDistribution(f"binary entropy argument {x} outside [0, 1]")
    s = 0.0
    if x > 0.0:
        s -= x * np.log2(x)
    if x < 1.0:
        s -= (1.0 - x) * np.log2(1.0 - x)
    return float(s)


def shannon_entropy(probs: Sequence[float]) -> float:
    """Entropy in bits of a probability vector; ~0 entries are skipped."""
    p = np.asarray(probs, dtype=float)
    if p.size and (float(p.min()) < -1e-9 or abs(float(p.sum()) - 1.0) > 1e-9):
        raise BadDistribution("probabilities must be nonnegative and sum to 1")
    p = p[p > ENTROPY_CUTOFF]
    return float(-(p * np.log2(p)).sum()) if p.size else 0.0


def _disjoint(*groups: Sequence[str]) -> None:
    seen: set[str] = set()
    for g in groups:
        g = set(g)
        if g & seen:
            raise LabelOverlap(f"label groups overlap on {sorted(g & seen)}")
        seen |= g


def _restrict(state: LabeledState, *groups: Sequence[str]) -> LabeledState:
    """Trace out everything not mentioned by the groups."""
    union = [name for name in state.names if any(name in g for g in groups)]
    if len(union) == len(state.names):
        return state
    return partial_trace(state, union)


def mutual_information(
    state: LabeledState, part_a: Sequence[str], part_b: Sequence[str]
) -> float:
    """I(A:B) = S(A) + S(B) - S(AB) in bits; labels outside A,B are traced out."""
    _disjoint(part_a, part_b)
    joint = _restrict(state, part_a, part_b)
    value = (
        entropy_bits(partial_trace(joint, list(part_a)).matrix)
        + entropy_bits(partial_trace(joint, list(part_b)).matrix)
        - entropy_bits(joint.matrix)
    )
    return _clip_nonneg(value)


def conditional_mutual_information(
    state: LabeledState,
    part_a: Sequence[str],
    part_b: Sequence[str],
    part_c: Sequence[str],
) -> float:
    """I(A:B|C) = S(AC) + S(BC) - S(ABC) - S(C) in bits."""
    _disjoint(part_a, part_b, part_c)
    joint = _restrict(state, part_a, part_b, part_c)
    a, b, c = list(part_a), list(part_b), list(part_c)
    value = (
        entropy_bits(partial_trace(joint, a + c).matrix)
        + entropy_bits(partial_trace(joint, b + c).matrix)
        - entropy_bits(joint.matrix)
        - entropy_bits(partial_trace(joint, c).matrix)
    )
    return _clip_nonneg(value)


def coherent_information(
    state: LabeledState, from_labels: Sequence[str], to_labels: Sequence[str]
) -> float:
    """I_c(A -> B) = S(B) - S(AB) in bits; may be negative."""
    _disjoint(from_labels, to_labels)
    joint = _restrict(state, from_labels, to_labels)
    return entropy_bits(partial_trace(joint, list(to_labels)).matrix) - entropy_bits(
        joint.matrix
    )


def chi_quantity(ensemble: Sequence[tuple[float, LabeledState]]) -> float:
    """Holevo chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i) in bits."""
    if not ensemble:
        raise BadDistribution("empty ensemble")
    probs = np.array([p for p, _ in ensemble], dtype=float)
    if float(probs.min()) < -PROB_EPS:
        raise BadDistribution(f"negative ensemble weight {probs.min():.3e}")
    if abs(float(probs.sum()) - 1.0) > 1e-9:
        raise BadDistribution(f"ensemble weights sum to {probs.sum()}, expected 1")
    dims = {s.dim for _, s in ensemble}
    if len(dims) != 1:
        raise BadDistribution(f"ensemble members have mixed dimensions {sorted(dims)}")
    avg = np.zeros((ensemble[0][1].dim,) * 2, dtype=complex)
    mean_entropy = 0.0
    for p, s in ensemble:
        avg += p * s.matrix
        mean_entropy += p * entropy_bits(s.matrix)
    return _clip_nonneg(entropy_bits(avg) - mean_entropy)


# -- per-measurement analysis --------------------------------------------------


class _Analysis:
    """Shared machinery: one purification + dilation reused by every measure."""

    def __init__(self, instr: Instrument, rho: LabeledState) -> None:
        require_valid(instr)
        if rho.dim != instr.d_in:
            raise DimensionMismatch(
                f"state dimension {rho.dim} != instrument d_in {instr.d_in}"
            )
        self.instr = instr
        self.rho = rho
        self.inp = purify(rho)
        self.bundle = dilate(instr, self.inp)
        self.s_input = entropy_bits(rho.matrix)
        self.probs = self.bundle.probs

    @cached_property
    def theta_rx(self) -> LabeledState:
        return partial_trace(self.bundle.theta_full, [REFERENCE, REGISTER])

    @cached_property
    def theta_rqx(self) -> LabeledState:
        return partial_trace(self.bundle.theta_full, [REFERENCE, OUTPUT, REGISTER])

    @cached_property
    def theta_rax(self) -> LabeledState:
        return partial_trace(self.bundle.theta_full, [REFERENCE, APPARATUS, REGISTER])

    @cached_property
    def theta_rq(self) -> LabeledState:
        return partial_trace(self.bundle.theta_full, [REFERENCE, OUTPUT])

    def _cond_reduced(self, idx: int, keep: list[str]) -> LabeledState:
        cond = self.bundle.conditional_states[idx]
        if cond is None:
            raise ZeroProbabilityOutcome(
                f"outcome {self.bundle.outcome_labels[idx]!r} has probability "
                f"{self.probs[idx]:.3e}"
            )
        return partial_trace(cond, keep)

    def iota_routes(self) -> tuple[float, float]:
        """(register route, POVM-only chi route)."""
        route_a = mutual_information(self.theta_rx, [REFERENCE], [REGISTER])
        psi = self.inp.psi_matrix
        ensemble = []
        for label, element in povm_of(self.instr).elements:
            p = float(np.trace(self.rho.matrix @ element).real)
            if p <= PROB_EPS:
                continue
            cond = psi @ element.T @ psi.conj().T / p
            ensemble.append(
                (p, LabeledState((Subsystem(REFERENCE, self.inp.r_dim),), cond, validate=False))
            )
        route_b = chi_quantity(ensemble)
        return route_a, route_b

    def delta_routes(self) -> tuple[float, float]:
        """(coherent-information route, reference-apparatus route)."""
        route_a = self.s_input - coherent_information(
            self.theta_rqx, [REFERENCE], [OUTPUT, REGISTER]
        )
        route_b = mutual_information(self.theta_rax, [REFERENCE], [APPARATUS, REGISTER])
        return route_a, route_b

    def noise_routes(self) -> tuple[float, float]:
        """(conditional-mutual-information route, per-outcome average route)."""
        route_a = conditional_mutual_information(
            self.theta_rax, [REFERENCE], [APPARATUS], [REGISTER]
        )
        route_b = 0.0
        for idx in range(len(self.probs)):
            p = float(self.probs[idx])
            if p <= PROB_EPS:
                continue
            route_b += p * mutual_information(
                self._cond_reduced(idx, [REFERENCE, APPARATUS]),
                [REFERENCE],
                [APPARATUS],
            )
        return route_a, route_b

    def disturbance_no_outcomes(self) -> float:
        return self.s_input - coherent_information(self.theta_rq, [REFERENCE], [OUTPUT])

    def groenewold(self) -> float:
        value = self.s_input
        for idx, om in enumerate(self.instr.outcomes):
            p = float(self.probs[idx])
            if p <= PROB_EPS:
                continue
            value -= p * entropy_bits(om.apply(self.rho.matrix) / p)
        return value

    def single_outcome(self, idx: int) -> tuple[float, float, float]:
        iota_m = self.s_input - entropy_bits(self._cond_reduced(idx, [REFERENCE]).matrix)
        delta_m = self.s_input - coherent_information(
            self._cond_reduced(idx, [REFERENCE, OUTPUT]), [REFERENCE], [OUTPUT]
        )
        noise_m = mutual_information(
            self._cond_reduced(idx, [REFERENCE, APPARATUS]), [REFERENCE], [APPARATUS]
        )
        return iota_m, delta_m, noise_m


def _require_agree(name: str, a: float, b: float) -> None:
    if abs(a - b) > ROUTE_ATOL:
        raise NumericalInconsistency(
            f"{name}: independent routes disagree, {a!r} vs {b!r}"
        )


def information_gain(instr: Instrument, rho: LabeledState) -> float:
    """Information gain iota in bits.

    Computed both as I(R:X) of the reference-register state and as the chi
    quantity of the POVM-induced reference ensemble; the two must agree
    within 1e-9.  Depends on the instrument only through its POVM.
    """
    a, b = _Analysis(instr, rho).iota_routes()
    _require_agree("information gain", a, b)
    return a


def disturbance(instr: Instrument, rho: LabeledState) -> float:
    """Disturbance delta in bits, with the outcome register kept."""
    a, b = _Analysis(instr, rho).delta_routes()
    _require_agree("disturbance", a, b)
    return a


def disturbance_no_outcomes(instr: Instrument, rho: LabeledState) -> float:
    """Disturbance of the outcome-averaged channel; >= disturbance by data
    processing, and a strictly looser figure whenever outcomes help."""
    return _Analysis(instr, rho).disturbance_no_outcomes()


def noise_delta(instr: Instrument, rho: LabeledState) -> float:
    """Missing information Delta = I(R:App|X) in bits; zero iff every outcome
    leaves reference and apparatus in a product state."""
    a, b = _Analysis(instr, rho).noise_routes()
    _require_agree("missing information", a, b)
    return a


def groenewold_gain(instr: Instrument, rho: LabeledState) -> float:
    """Average posterior-entropy gain S(rho) - sum_m p(m) S(rho_m').

    Unlike the information gain this depends on the particular state
    reduction maps and can be negative.
    """
    return _Analysis(instr, rho).groenewold()


def single_outcome_quantities(
    instr: Instrument, rho: LabeledState, outcome: str
) -> tuple[float, float, float]:
    """(iota_m, delta_m, noise_m) conditioned on one outcome.

    iota_m and delta_m may be negative; noise_m is a mutual information and
    is not.  They satisfy iota_m + noise_m = delta_m.
    """
    ctx = _Analysis(instr, rho)
    idx = ctx.instr.outcome_index(outcome)
    if float(ctx.probs[idx]) <= PROB_EPS:
        raise ZeroProbabilityOutcome(
            f"outcome {outcome!r} has probability {ctx.probs[idx]:.3e}"
        )
    return ctx.single_outcome(idx)


@dataclass(frozen=True)
class OutcomeBalance:
    """Per-outcome row of a balance report."""

    label: str
    p: float
    iota_m: float
    delta_m: float
    noise_m: float


@dataclass(frozen=True)
class BalanceReport:
    """Complete information balance of one (state, instrument) pair.

    ``residual_balance`` is |iota + noise - delta| with each term computed
    by its own route, so it is a genuine numerical cross-check rather than
    an algebraic identity.  ``residual_routes`` records every other
    cross-check residual.
    """

    iota: float
    delta: float
    noise: float
    iota_g: float
    per_outcome: tuple[OutcomeBalance, ...]
    residual_balance: float
    residual_routes: dict[str, float]
    excluded_weight: float

    def to_dict(self) -> dict:
        return {
            "iota": self.iota,
            "delta": self.delta,
            "noise": self.noise,
            "iota_g": self.iota_g,
            "residual_balance": self.residual_balance,
            "per_outcome": [
                {
                    "label": row.label,
                    "p": row.p,
                    "iota_m": row.iota_m,
                    "delta_m": row.delta_m,
                    "noise_m": row.noise_m,
                }
                for row in self.per_outcome
            ],
            "residual_routes": dict(self.residual_routes),
            "excluded_weight": self.excluded_weight,
        }


def balance_report(instr: Instrument, rho: LabeledState) -> BalanceReport:
    """Evaluate iota, delta, Delta, iota_G, and all per-outcome quantities.

    Raises :class:`NumericalInconsistency` if any pair of independent routes
    disagrees beyond 1e-9 or the balance identity residual exceeds 1e-9.
    Outcomes with probability at or below 1e-12 are excluded from the table;
    their total weight is reported, never silently renormalized.
    """
    ctx = _Analysis(instr, rho)
    iota_a, iota_b = ctx.iota_routes()
    delta_a, delta_b = ctx.delta_routes()
    noise_a, noise_b = ctx.noise_routes()
    _require_agree("information gain", iota_a, iota_b)
    _require_agree("disturbance", delta_a, delta_b)
    _require_agree("missing information", noise_a, noise_b)

    rows = []
    excluded = 0.0
    agg_iota = agg_delta = agg_noise = 0.0
    worst_single = 0.0
    for idx, label in enumerate(ctx.instr.outcome_labels):
        p = float(ctx.probs[idx])
        if p <= PROB_EPS:
            excluded += max(p, 0.0)
            continue
        iota_m, delta_m, noise_m = ctx.single_outcome(idx)
        rows.append(OutcomeBalance(label, p, iota_m, delta_m, noise_m))
        agg_iota += p * iota_m
        agg_delta += p * delta_m
        agg_noise += p * noise_m
        worst_single = max(worst_single, abs(iota_m + noise_m - delta_m))

    residual = abs(iota_a + noise_a - delta_a)
    if residual > BALANCE_ATOL:
        raise NumericalInconsistency(
            f"balance identity violated: |iota + noise - delta| = {residual:.3e}"
        )
    report = BalanceReport(
        iota=iota_a,
        delta=delta_a,
        noise=noise_a,
        iota_g=ctx.groenewold(),
        per_outcome=tuple(rows),
        residual_balance=residual,
        residual_routes={
            "iota_routes": abs(iota_a - iota_b),
            "delta_routes": abs(delta_a - delta_b),
            "noise_routes": abs(noise_a - noise_b),
            "iota_aggregation": abs(agg_iota - iota_a),
            "delta_aggregation": abs(agg_delta - delta_a),
            "noise_aggregation": abs(agg_noise - noise_a),
            "single_outcome_balance": worst_single,
        },
        excluded_weight=excluded,
    )
    return report
