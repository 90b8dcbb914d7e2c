#!/usr/bin/env python3
"""Generate the bundled synthetic datasets under src/vizcheck/data/.

Two tables ship with the package:

  absences.csv  517 students, 10 variables. `absences` is an overdispersed
                count driven strongly by guardian education (g_edu) and
                weakly by weekly study hours (study_time); study_time is
                itself correlated with g_edu so the two predictors overlap.
  engines.csv   234 cars. `mpg` is normal with mean and spread both set by
                cylinder count (cyl); hp and weight track cyl.

The script refits the generating models and asserts the estimates land
within three standard errors of the truth before writing anything, so the
shipped fixtures are known-good for convergence and model-comparison demos.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from vizcheck import coefficient_table, fit_model, load_csv, model_spec  # noqa: E402

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "vizcheck" / "data"

EDU_LEVELS = ["none", "primary", "secondary", "higher"]
EDU_PROBS = [0.15, 0.30, 0.35, 0.20]
# treatment effects on log absences, reference level is "higher" after
# lexicographic ordering: higher < none < primary < secondary
EDU_LOG_EFFECT = {"none": 0.0, "primary": 0.35, "secondary": 0.70,
                  "higher": 1.00}
EDU_STUDY_SHIFT = {"none": 0.0, "primary": 1.0, "secondary": 2.0,
                   "higher": 3.5}
B_STUDY = 0.02     # weak effect of study hours on log absences
B0 = 0.9
THETA = 1.5        # overdispersion: var = lam + lam^2 / theta


def make_absences(rng: np.random.Generator, n: int = 517) -> str:
    g_edu = rng.choice(EDU_LEVELS, size=n, p=EDU_PROBS)
    study = np.round(
        rng.gamma(shape=2.0, scale=2.2, size=n)
        + np.array([EDU_STUDY_SHIFT[g] for g in g_edu])
        + rng.normal(0, 0.4, size=n).clip(-0.3, 0.3), 1).clip(0.1, 35.0)
    log_lam = (B0 + np.array([EDU_LOG_EFFECT[g] for g in g_edu])
               + B_STUDY * study)
    lam = np.exp(log_lam)
    absences = rng.poisson(rng.gamma(shape=THETA, scale=lam / THETA))

    travel = np.round(rng.gamma(3.0, 8.0, size=n).clip(2, 120), 0)
    failures = rng.choice([0, 1, 2, 3], size=n, p=[0.72, 0.16, 0.08, 0.04])
    health = rng.integers(1, 6, size=n)
    famsize = rng.choice(["GT3", "LE3"], size=n, p=[0.6, 0.4])
    internet = rng.choice(["no", "yes"], size=n, p=[0.25, 0.75])
    grade = np.round(rng.normal(12.0, 3.0, size=n).clip(0, 20)
                     - 0.05 * absences, 1).clip(0, 20)
    free_time = rng.integers(1, 6, size=n)

    rows = ["absences,study_time,g_edu,travel_time,failures,health,"
            "famsize,internet,grade_avg,free_time"]
    for i in range(n):
        rows.append(
            f"{absences[i]},{study[i]},{g_edu[i]},{int(travel[i])},"
            f"{failures[i]},{health[i]},{famsize[i]},{internet[i]},"
            f"{grade[i]},{free_time[i]}")
    return "\n".join(rows) + "\n"


CYL_MPG_MEAN = {4: 28.0, 6: 21.0, 8: 16.0}
CYL_MPG_SD = {4: 3.5, 6: 2.0, 8: 1.4}
CYL_HP_MEAN = {4: 90.0, 6: 140.0, 8: 205.0}
CYL_HP_SD = {4: 16.0, 6: 22.0, 8: 32.0}


def make_engines(rng: np.random.Generator, n: int = 234) -> str:
    cyl = rng.choice([4, 6, 8], size=n, p=[0.45, 0.3, 0.25])
    mpg = np.round([rng.normal(CYL_MPG_MEAN[c], CYL_MPG_SD[c]) for c in cyl], 1)
    hp = np.round([max(rng.normal(CYL_HP_MEAN[c], CYL_HP_SD[c]), 45.0)
                   for c in cyl], 0)
    weight = np.round(1.2 + 0.35 * cyl + rng.normal(0, 0.25, size=n), 2)
    trans = rng.choice(["auto", "manual"], size=n, p=[0.55, 0.45])
    gear = rng.choice([3, 4, 5], size=n, p=[0.3, 0.45, 0.25])

    rows = ["mpg,cyl,hp,weight,trans,gear"]
    for i in range(n):
        rows.append(f"{mpg[i]},{cyl[i]},{int(hp[i])},{weight[i]},"
                    f"{trans[i]},{gear[i]}")
    return "\n".join(rows) + "\n"


def validate_absences(csv_text: str) -> None:
    d = load_csv(csv_text, "absences")
    assert d.n_rows == 517, d.n_rows
    assert len(d.column_names) == 10

    one = fit_model(d, model_spec(
        "negative_binomial", "absences ~ g_edu", label="edu only"))
    two = fit_model(d, model_spec(
        "negative_binomial", "absences ~ g_edu + study_time",
        label="edu + study"))
    assert one.converged and two.converged
    assert two.log_lik >= one.log_lik - 1e-6

    # recovery: estimates within 3 SE of the generating coefficients
    table = dict((lb, (est, se)) for lb, est, se in coefficient_table(two))
    ref = EDU_LOG_EFFECT["higher"]
    truth = {
        "(Intercept)": B0 + ref,
        "g_edu=none": EDU_LOG_EFFECT["none"] - ref,
        "g_edu=primary": EDU_LOG_EFFECT["primary"] - ref,
        "g_edu=secondary": EDU_LOG_EFFECT["secondary"] - ref,
        "study_time": B_STUDY,
    }
    for label, target in truth.items():
        est, se = table[label]
        assert abs(est - target) <= 3 * se, (label, est, target, se)


def validate_engines(csv_text: str) -> None:
    d = load_csv(csv_text, "engines")
    assert d.column("cyl").ctype.levels == (4, 6, 8)
    m = fit_model(d, model_spec("normal", "mpg ~ cyl", scale="~ cyl"))
    assert m.converged
    table = dict((lb, (est, se)) for lb, est, se in coefficient_table(m))
    assert abs(table["(Intercept)"][0] - CYL_MPG_MEAN[4]) \
        <= 3 * table["(Intercept)"][1]


def main() -> None:
    rng = np.random.default_rng(20240817)
    absences_csv = make_absences(rng)
    engines_csv = make_engines(rng)
    validate_absences(absences_csv)
    validate_engines(engines_csv)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / "absences.csv").write_text(absences_csv)
    (OUT_DIR / "engines.csv").write_text(engines_csv)
    print(f"wrote {OUT_DIR / 'absences.csv'}")
    print(f"wrote {OUT_DIR / 'engines.csv'}")


if __name__ == "__main__":
    main()
