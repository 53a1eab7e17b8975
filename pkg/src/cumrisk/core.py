"""Analytic engine for cumulative cancer risk from age-grouped incidence tables.

The population model has two states: OFF (alive and never diagnosed) and RED
(ever diagnosed). RED is absorbing. Every five-year age group contributes one
transition matrix estimated from its annual incidence and cancer-death counts;
propagating the newborn state (1, 0) through the first t matrices gives the
probability of a diagnosis by age 5t. The classical cumulative rate/risk pair
is computed alongside, so the two estimators can be compared step by step.

All counts are annual. The factor 5 appearing throughout converts them to the
five-year step: over one step the at-risk pool is population + 5*cancer_deaths
(people who died of cancer during the step started it alive and cancer free),
of which 5*incidence receive a diagnosis. Deaths from other causes are carried
in the records but deliberately excluded from every computation: the model,
like the classical cumulative risk, assumes cancer is the only cause of death.
"""

import math
from dataclasses import dataclass, field

__all__ = [
    "PROB_TOL",
    "NEWBORN_STATE",
    "CumriskError",
    "InvalidRecord",
    "InvalidCohort",
    "OutOfRange",
    "NegativeRate",
    "EmptyOverlap",
    "AgeGroupRecord",
    "CohortMeta",
    "Cohort",
    "TransitionMatrix",
    "StateVector",
    "RiskStep",
    "RiskSeries",
    "ComparisonRow",
    "ComparisonReport",
    "estimate_transition",
    "transition_matrices",
    "cumulative_rate",
    "cumulative_risk_from_rate",
    "propagate",
    "red_probability",
    "risk_series",
    "conditional_risk",
    "compare",
]

# Tolerance for probability identities (row sums, state normalization).
PROB_TOL = 1e-12


class CumriskError(ValueError):
    """Base class for every validation or domain error in this package."""


class InvalidRecord(CumriskError):
    """An age-group record violates its invariants (counts or geometry)."""


class InvalidCohort(CumriskError):
    """Records do not form a contiguous, correctly indexed cohort."""


class OutOfRange(CumriskError):
    """A step index falls outside the cohort's data horizon."""


class NegativeRate(CumriskError):
    """Cumulative rates must be nonnegative."""


class EmptyOverlap(CumriskError):
    """Cohort comparison needs at least one step on both sides."""


@dataclass(frozen=True)
class AgeGroupRecord:
    """One five-year age group of an incidence table.

    ``age_high`` is exclusive, so the 0-4 years group is ``age_low=0,
    age_high=5``; ``None`` marks the open-ended final group (85+).
    ``incidence`` and the death counts are annual figures on a basis of
    ``population`` persons alive and never diagnosed.
    """

    index: int
    age_low: int
    age_high: int | None
    population: float
    incidence: float
    cancer_deaths: float
    other_deaths: float | None = None  # stored for completeness, never used

    @property
    def is_open(self) -> bool:
        return self.age_high is None

    @property
    def age_label(self) -> str:
        if self.is_open:
            return f"{self.age_low}+"
        return f"{self.age_low}-{self.age_high - 1}"

    def validate(self) -> None:
        """Raise InvalidRecord describing the first violated invariant."""
        for name in ("population", "incidence", "cancer_deaths"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidRecord(f"group {self.index}: {name} must be a finite number")
        if self.other_deaths is not None and not math.isfinite(self.other_deaths):
            raise InvalidRecord(f"group {self.index}: other_deaths must be a finite number")
        if self.population <= 0:
            raise InvalidRecord(f"group {self.index}: population must be positive, got {self.population!r}")
        if self.incidence < 0:
            raise InvalidRecord(f"group {self.index}: incidence must be >= 0, got {self.incidence!r}")
        if self.cancer_deaths < 0:
            raise InvalidRecord(f"group {self.index}: cancer_deaths must be >= 0, got {self.cancer_deaths!r}")
        if self.other_deaths is not None and self.other_deaths < 0:
            raise InvalidRecord(f"group {self.index}: other_deaths must be >= 0, got {self.other_deaths!r}")
        if 5.0 * self.incidence > self.population + 5.0 * self.cancer_deaths:
            raise InvalidRecord(
                f"group {self.index}: 5x > n + 5dc "
                f"(5*{self.incidence!r} exceeds the at-risk pool "
                f"{self.population!r} + 5*{self.cancer_deaths!r})"
            )
        if self.age_low < 0 or self.age_low % 5 != 0:
            raise InvalidRecord(f"group {self.index}: age_low must be a nonnegative multiple of 5")
        if not self.is_open and self.age_high - self.age_low != 5:
            raise InvalidRecord(
                f"group {self.index}: closed groups must span exactly 5 years "
                f"({self.age_low}..{self.age_high})"
            )


@dataclass(frozen=True)
class CohortMeta:
    """Free-text labels saying where a cohort came from."""

    region: str = ""
    year: str = ""
    sex: str = ""


@dataclass
class Cohort:
    """Ordered, validated age-group records for one region/year/sex.

    Indices must run 1..G without gaps, ages must be contiguous starting at
    0, and an open-ended group may only appear last. An empty record list is
    permitted at this level (file parsing rejects it) so that downstream
    operations can report it in their own terms.
    """

    records: tuple[AgeGroupRecord, ...]
    meta: CohortMeta = field(default_factory=CohortMeta)

    def __post_init__(self):
        self.records = tuple(self.records)
        expected_low = 0
        for position, record in enumerate(self.records, start=1):
            record.validate()
            if record.index != position:
                raise InvalidCohort(
                    f"record at position {position} has index {record.index}; indices must run 1..G"
                )
            if record.age_low != expected_low:
                raise InvalidCohort(
                    f"group {record.index}: age_low {record.age_low} breaks contiguity "
                    f"(expected {expected_low})"
                )
            if record.is_open and position != len(self.records):
                raise InvalidCohort(f"group {record.index}: open-ended group must be last")
            if not record.is_open:
                expected_low = record.age_high

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic 2x2 one-step matrix; RED (second state) is absorbing.

    ``p10`` must be exactly 0 and ``p11`` exactly 1: a diagnosis is never
    undone. The OFF row must sum to 1 within PROB_TOL.
    """

    p00: float
    p01: float
    p10: float = 0.0
    p11: float = 1.0

    def __post_init__(self):
        if self.p10 != 0.0:
            raise CumriskError(f"p10 must be exactly 0 (RED never reverts), got {self.p10!r}")
        if self.p11 != 1.0:
            raise CumriskError(f"p11 must be exactly 1 (RED is absorbing), got {self.p11!r}")
        for name in ("p00", "p01"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise CumriskError(f"{name} must lie in [0, 1], got {value!r}")
        if abs(self.p00 + self.p01 - 1.0) > PROB_TOL:
            raise CumriskError(f"OFF row must sum to 1, got {self.p00!r} + {self.p01!r}")


@dataclass(frozen=True)
class StateVector:
    """Occupancy probabilities (OFF, RED) after some number of steps."""

    p_off: float
    p_red: float

    def __post_init__(self):
        for name in ("p_off", "p_red"):
            value = getattr(self, name)
            if not -PROB_TOL <= value <= 1.0 + PROB_TOL:
                raise CumriskError(f"{name} must lie in [0, 1], got {value!r}")
        if abs(self.p_off + self.p_red - 1.0) > PROB_TOL:
            raise CumriskError(f"state must sum to 1, got {self.p_off!r} + {self.p_red!r}")


# Every cohort starts from the same place: alive and cancer free.
NEWBORN_STATE = StateVector(p_off=1.0, p_red=0.0)


@dataclass(frozen=True)
class RiskStep:
    """One row of the per-step risk table (the data behind the figures)."""

    t: int
    age_label: str
    b: float          # per-step OFF -> RED transition probability
    cum_rate: float   # 5 * summed annual incidence rates; a rate, can exceed 1
    cum_risk: float   # 1 - exp(-cum_rate)
    p_red: float
    p_off: float


@dataclass
class RiskSeries:
    """Per-step risk table for a whole cohort."""

    steps: list[RiskStep]

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)


@dataclass(frozen=True)
class ComparisonRow:
    """Differences (first cohort minus second) for one shared step."""

    t: int
    age_label: str
    delta_b: float
    delta_cum_rate: float
    delta_cum_risk: float
    delta_p_red: float
    delta_p_off: float


@dataclass
class ComparisonReport:
    """Aligned per-step differences between two cohorts.

    Rows cover the shared prefix of steps; ``steps_a``/``steps_b`` record the
    original lengths so truncation is never silent.
    """

    rows: list[ComparisonRow]
    steps_a: int
    steps_b: int

    @property
    def truncated(self) -> bool:
        return self.steps_a != self.steps_b

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)


def _transition_probability(record: AgeGroupRecord) -> float:
    # 5x / (n + 5dc); the record is assumed valid (cohorts validate on build)
    return 5.0 * record.incidence / (record.population + 5.0 * record.cancer_deaths)


def estimate_transition(record: AgeGroupRecord) -> TransitionMatrix:
    """Estimate the one-step transition matrix for an age group.

    The probability that an OFF individual turns RED during the group's five
    years is 5*incidence / (population + 5*cancer_deaths). Deaths from other
    causes are ignored by design.

    Raises:
        InvalidRecord: if the record violates its invariants, in particular
            when 5*incidence exceeds the at-risk pool (that would imply a
            transition probability above 1, i.e. inconsistent data).
    """
    record.validate()
    p01 = _transition_probability(record)
    return TransitionMatrix(p00=1.0 - p01, p01=p01)


def transition_matrices(cohort: Cohort) -> list[TransitionMatrix]:
    """Estimated matrices for every group of the cohort, in step order."""
    return [estimate_transition(record) for record in cohort.records]


def _check_step(cohort: Cohort, t: int) -> None:
    if not 1 <= t <= len(cohort.records):
        raise OutOfRange(f"step {t} outside the cohort's range 1..{len(cohort.records)}")


def cumulative_rate(cohort: Cohort, t: int) -> float:
    """Cumulative incidence rate by age 5t: five times the summed annual rates.

    This is a rate, not a probability; with enough groups it can exceed 1.

    Raises:
        OutOfRange: unless 1 <= t <= number of groups.
    """
    _check_step(cohort, t)
    annual_sum = 0.0
    for record in cohort.records[:t]:
        annual_sum += record.incidence / record.population
    return 5.0 * annual_sum


def cumulative_risk_from_rate(rate: float) -> float:
    """Convert a cumulative rate into the cumulative risk 1 - exp(-rate).

    Raises:
        NegativeRate: for rate < 0 (or NaN).
    """
    if not rate >= 0.0:
        raise NegativeRate(f"cumulative rate must be >= 0, got {rate!r}")
    return 1.0 - math.exp(-rate)


def propagate(state: StateVector, matrices) -> StateVector:
    """Apply transition matrices to a state vector, left to right.

    An empty sequence returns the starting state unchanged.
    """
    p_off, p_red = state.p_off, state.p_red
    for m in matrices:
        p_off, p_red = (
            p_off * m.p00 + p_red * m.p10,
            p_off * m.p01 + p_red * m.p11,
        )
    return StateVector(p_off=p_off, p_red=p_red)


def red_probability(cohort: Cohort, t: int) -> float:
    """Probability of a diagnosis by age 5t, via the closed-form product.

    Equals 1 minus the product of the per-group survival factors (1 - b_i)
    for i = 1..t. Algebraically identical to propagating the newborn state
    through the first t matrices; in floating point the two agree to well
    within PROB_TOL.

    Raises:
        OutOfRange: unless 1 <= t <= number of groups.
    """
    _check_step(cohort, t)
    off = 1.0
    for record in cohort.records[:t]:
        off *= 1.0 - _transition_probability(record)
    return 1.0 - off


def risk_series(cohort: Cohort) -> RiskSeries:
    """Assemble the full per-step table: b, cumulative rate/risk, state split.

    The RED/OFF columns come from the same closed-form product as
    ``red_probability``, so the two agree exactly.
    """
    steps = []
    off = 1.0
    annual_sum = 0.0
    for record in cohort.records:
        b = _transition_probability(record)
        off *= 1.0 - b
        annual_sum += record.incidence / record.population
        rate = 5.0 * annual_sum
        steps.append(
            RiskStep(
                t=record.index,
                age_label=record.age_label,
                b=b,
                cum_rate=rate,
                cum_risk=cumulative_risk_from_rate(rate),
                p_red=1.0 - off,
                p_off=off,
            )
        )
    return RiskSeries(steps)


def conditional_risk(cohort: Cohort, current_step: int, horizon_steps: int) -> float:
    """Chance of a diagnosis within the next ``horizon_steps`` steps.

    Conditions on still being OFF at the end of ``current_step`` (step 0 is
    birth), so ``conditional_risk(cohort, 0, t)`` equals
    ``red_probability(cohort, t)``.

    Raises:
        OutOfRange: unless 0 <= current_step, 1 <= horizon_steps and
            current_step + horizon_steps <= number of groups.
    """
    groups = len(cohort.records)
    if current_step < 0:
        raise OutOfRange(f"current step must be >= 0, got {current_step}")
    if horizon_steps < 1:
        raise OutOfRange(f"horizon must be at least one step, got {horizon_steps}")
    if current_step + horizon_steps > groups:
        raise OutOfRange(
            f"step {current_step} plus horizon {horizon_steps} exceeds the "
            f"cohort's {groups} groups"
        )
    off = 1.0
    for record in cohort.records[current_step:current_step + horizon_steps]:
        off *= 1.0 - _transition_probability(record)
    return 1.0 - off


def compare(a: Cohort, b: Cohort) -> ComparisonReport:
    """Per-step differences (a minus b) over the shared prefix of steps.

    Cohorts of different lengths are truncated to the shorter one; the report
    keeps both original lengths. Negating every delta of compare(a, b) gives
    exactly compare(b, a).

    Raises:
        EmptyOverlap: if either cohort has no groups.
    """
    if len(a.records) == 0 or len(b.records) == 0:
        raise EmptyOverlap("both cohorts need at least one age group to compare")
    series_a = risk_series(a)
    series_b = risk_series(b)
    shared = min(len(series_a.steps), len(series_b.steps))
    rows = []
    for step_a, step_b in zip(series_a.steps[:shared], series_b.steps[:shared]):
        rows.append(
            ComparisonRow(
                t=step_a.t,
                age_label=step_a.age_label,
                delta_b=step_a.b - step_b.b,
                delta_cum_rate=step_a.cum_rate - step_b.cum_rate,
                delta_cum_risk=step_a.cum_risk - step_b.cum_risk,
                delta_p_red=step_a.p_red - step_b.p_red,
                delta_p_off=step_a.p_off - step_b.p_off,
            )
        )
    return ComparisonReport(rows=rows, steps_a=len(series_a.steps), steps_b=len(series_b.steps))
