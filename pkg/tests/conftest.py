import hypothesis
import pytest

from vizcheck import load_csv

hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=50,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("default")


def make_dataset(name="d", discrete_threshold=10, **cols):
    """Build a Dataset through the CSV loader from python columns."""
    headers = list(cols)
    n = len(next(iter(cols.values())))
    lines = [",".join(headers)]
    for i in range(n):
        lines.append(",".join(str(cols[h][i]) for h in headers))
    return load_csv("\n".join(lines) + "\n", name,
                    discrete_threshold=discrete_threshold)


@pytest.fixture
def simple_xy():
    # 12 distinct values per numeric column, so x and y infer continuous
    return make_dataset(
        x=[0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5, 7.5, 8.5, 9.5, 10.5, 11.5],
        y=[1.2, 1.9, 3.4, 3.9, 5.1, 6.2, 6.8, 8.1, 8.9, 10.2, 10.9, 12.3],
        g=["a", "b", "a", "b", "a", "b", "a", "b", "a", "b", "a", "b"],
    )
