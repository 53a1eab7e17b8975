"""Builders for synthetic cohorts shared across the test modules."""

from cumrisk.core import AgeGroupRecord, Cohort, CohortMeta


def make_record(index, population, incidence, cancer_deaths=0.0, other_deaths=None,
                open_group=False):
    low = 5 * (index - 1)
    return AgeGroupRecord(
        index=index,
        age_low=low,
        age_high=None if open_group else low + 5,
        population=float(population),
        incidence=float(incidence),
        cancer_deaths=float(cancer_deaths),
        other_deaths=other_deaths,
    )


def make_cohort(rows, open_last=False, meta=None):
    """rows: one (population, incidence[, cancer_deaths]) tuple per group."""
    records = [
        make_record(i + 1, *row, open_group=open_last and i == len(rows) - 1)
        for i, row in enumerate(rows)
    ]
    return Cohort(records=records, meta=meta or CohortMeta())


def ramp_cohort(groups=18, b_low=0.001, b_high=0.12):
    """Synthetic cohort whose transition probabilities ramp b_low -> b_high.

    The cubic ramp keeps childhood probabilities low and old-age ones high,
    the shape real incidence tables show. Cancer deaths are pinned at 1% of
    population, inside the regime where the rate-based risk and the chain
    estimate stay within a couple of percentage points of each other.
    """
    rows = []
    for i in range(groups):
        fraction = i / (groups - 1)
        b = b_low + (b_high - b_low) * fraction**3
        population = 200_000.0
        cancer_deaths = 0.01 * population
        incidence = b * (population + 5.0 * cancer_deaths) / 5.0
        rows.append((population, incidence, cancer_deaths))
    return make_cohort(rows, open_last=True)
