import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from vinechar.montecarlo import McConfig, SampleMatrix, run
from vinechar.sensitivity import (
    LengthMismatch,
    SECTOR_SENSITIVITY_SETS,
    TooFew,
    UnknownSector,
    UnknownVariable,
    r_squared,
    sensitivity_report,
)


class TestRSquared:
    def test_exact_linear_fit(self):
        xs = [1.0, 2.0, 3.0, 4.0]
        ys = [3 * x + 7 for x in xs]
        assert r_squared(xs, ys) == pytest.approx(1.0, abs=1e-12)

    def test_constant_regressor_is_zero(self):
        assert r_squared([5.0, 5.0, 5.0], [1.0, 2.0, 3.0]) == 0.0

    def test_constant_outcome_is_zero(self):
        assert r_squared([1.0, 2.0, 3.0], [4.0, 4.0, 4.0]) == 0.0

    def test_self_regression_is_one(self):
        xs = [0.3, 1.9, -2.0, 7.5]
        assert r_squared(xs, xs) == pytest.approx(1.0, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            r_squared([1.0, 2.0], [1.0])

    def test_too_few(self):
        with pytest.raises(TooFew):
            r_squared([1.0], [1.0])

    def test_bounded_by_unit_interval(self):
        xs = [1.0, 2.0, 3.0, 4.0, 5.0]
        ys = [2.0, 1.0, 4.0, 3.0, 5.0]
        assert 0.0 <= r_squared(xs, ys) <= 1.0

    @settings(max_examples=150)
    @given(
        pairs=st.lists(
            st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)),
            min_size=3,
            max_size=60,
        ),
        a=st.floats(-50, 50).filter(lambda v: abs(v) > 1e-3),
        b=st.floats(-1e3, 1e3),
    )
    def test_affine_invariance(self, pairs, a, b):
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        transformed = [a * x + b for x in xs]
        # skip transforms that collapse the regressor in floating point;
        # with no spread left there is no signal to be invariant about
        spread = max(transformed) - min(transformed)
        magnitude = max(abs(v) for v in transformed) or 1.0
        assume(spread > 1e-7 * magnitude)
        assert r_squared(transformed, ys) == pytest.approx(
            r_squared(xs, ys), rel=1e-5, abs=1e-9
        )


@pytest.fixture(scope="module")
def matrix(independent):
    _, m = run(independent.spec, McConfig(iterations=500, master_seed=0))
    return m


class TestReport:
    def test_ranks_are_a_permutation(self, matrix):
        report = sensitivity_report(matrix, "biochar")
        assert [e.rank for e in report.entries] == list(
            range(1, len(SECTOR_SENSITIVITY_SETS["biochar"]) + 1)
        )
        r2s = [e.r_squared for e in report.entries]
        assert r2s == sorted(r2s, reverse=True)
        assert all(0.0 <= v <= 1.0 for v in r2s)

    def test_deterministic_given_matrix(self, matrix):
        a = sensitivity_report(matrix, "vineyard")
        b = sensitivity_report(matrix, "vineyard")
        assert a == b

    def test_winery_price_ranks_first(self, matrix):
        report = sensitivity_report(matrix, "winery")
        assert report.entries[0].variable_id == "winery.wine_price_per_l"

    def test_unknown_sector(self, matrix):
        with pytest.raises(UnknownSector):
            sensitivity_report(matrix, "distillery")

    def test_unknown_variable(self, matrix):
        with pytest.raises(UnknownVariable):
            sensitivity_report(matrix, "biochar", variables=("biochar.nope",))

    def test_variable_override(self, matrix):
        report = sensitivity_report(
            matrix, "biochar", variables=("biochar.prunings_cost", "biochar.biochar_price")
        )
        assert {e.variable_id for e in report.entries} == {
            "biochar.prunings_cost",
            "biochar.biochar_price",
        }
        assert report.entries[0].variable_id == "biochar.biochar_price"

    def test_degenerate_inputs_rank_by_name(self):
        columns = {
            "biochar.biochar_price": (5.0,) * 8,
            "biochar.variable_cost_per_t": (2.0,) * 8,
            "biochar.capital_equipment": (1.0,) * 8,
            "biochar.production_tonnes": (3.0,) * 8,
            "biochar.bc_ratio": tuple(float(i) for i in range(8)),
        }
        report = sensitivity_report(SampleMatrix(columns=columns), "biochar")
        assert all(e.r_squared == 0.0 for e in report.entries)
        # ties broken lexicographically
        ids = [e.variable_id for e in report.entries]
        assert ids == sorted(ids)
