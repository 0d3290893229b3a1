import json

import numpy as np
import pytest

from macrorealism.errors import InvalidModelError
from macrorealism.ontic import (
    AmbiguousModelError,
    OnticModel,
    OnticSpace,
    ResponseFunction,
    mixing_model,
    model_probability,
    model_to_ptm,
    partition_indicator,
    perturb_eigen_density,
    perturb_prep_density,
    push_forward,
    random_density,
    random_kernel,
    random_model,
    reproduces_ptm,
    total_variation,
    validate_model,
)
from macrorealism.overlap import symmetric_overlap

SPACE3 = OnticSpace(("q1", "q2", "q3"))
POINTS = {f"q{i + 1}": np.eye(3)[i] for i in range(3)}
WEIGHTS = {"q1": 0.2, "q2": 0.3, "q3": 0.5}


@pytest.fixture
def mix3():
    return mixing_model(SPACE3, POINTS, WEIGHTS)


class TestPushForward:
    def test_identity(self, rng):
        f = random_density(rng, 7)
        np.testing.assert_array_equal(push_forward(np.eye(7), f), f)

    def test_uniform_rows(self, rng):
        f = random_density(rng, 5)
        np.testing.assert_allclose(push_forward(np.full((5, 5), 0.2), f), np.full(5, 0.2), atol=1e-15)

    def test_two_state(self):
        np.testing.assert_allclose(push_forward([[0, 1], [0, 1]], [0.3, 0.7]), [0, 1], atol=1e-15)

    def test_mismatch(self):
        with pytest.raises(ValueError):
            push_forward(np.eye(3), [0.5, 0.5])

    def test_mass_preserved(self, rng):
        for _ in range(1000):
            n = int(rng.integers(1, 30))
            out = push_forward(random_kernel(rng, n), random_density(rng, n))
            assert out.sum() == pytest.approx(1.0, abs=1e-12)
            assert out.min() >= 0.0


class TestModelProbability:
    def test_eigenpreparation(self, mix3):
        assert model_probability(mix3, "P_q2", [], "Q", "q2") == 1.0
        assert model_probability(mix3, "P_q2", [], "Q", "q1") == 0.0

    def test_mixing_weights(self, mix3):
        assert model_probability(mix3, "P", [], "Q", "q2") == pytest.approx(0.3, abs=1e-15)

    def test_kernel_sequence(self):
        swap = np.eye(3)[[1, 2, 0]]
        m = OnticModel(SPACE3, {q: [f] for q, f in POINTS.items()}, {"P": [np.eye(3)[0]]}, {"T": swap})
        assert model_probability(m, "P", ["T"], "Q", "q2") == 1.0
        assert model_probability(m, "P", ["T", "T"], "Q", "q3") == 1.0

    def test_ambiguous_preparation(self):
        m = OnticModel(SPACE3, {q: [f] for q, f in POINTS.items()}, {"P": [np.eye(3)[0], np.eye(3)[1]]})
        with pytest.raises(AmbiguousModelError, match="disagree"):
            model_probability(m, "P", [], "Q", "q1")

    def test_unknown_labels(self, mix3):
        with pytest.raises(KeyError):
            model_probability(mix3, "nope", [], "Q", "q1")
        with pytest.raises(KeyError):
            model_probability(mix3, "P", [], "Q", "q9")
        with pytest.raises(KeyError):
            model_probability(mix3, "P", ["T"], "Q", "q1")


class TestReproduces:
    def test_own_table(self, mix3):
        assert reproduces_ptm(mix3, model_to_ptm(mix3), 1e-12).reproduces

    def test_bumped_density(self, mix3):
        table = model_to_ptm(mix3)
        bumped = np.array([0.3, 0.3, 0.5]) / 1.1
        m2 = OnticModel(SPACE3, mix3.eigen_densities, {"P": [bumped]})
        report = reproduces_ptm(m2, table, 1e-10)
        assert not report.reproduces
        # Recompute both sides: the worst entry is P(q1|Q,P), 0.3/1.1 vs 0.2.
        assert report.max_deviation == pytest.approx(0.3 / 1.1 - 0.2, abs=1e-12)
        assert report.max_deviation >= 0.01
        assert report.worst_entry[1] == "P"

    def test_tol_one(self, rng):
        m = random_model(3, 8)
        other = random_model(4, 8)
        assert reproduces_ptm(m, model_to_ptm(other, ["P", "T(P)"]), 1.0).reproduces

    def test_label_mismatch(self, mix3):
        m = random_model(3, 8)
        with pytest.raises(KeyError):
            reproduces_ptm(mix3, model_to_ptm(m, ["P"]), 1e-10)


class TestPartition:
    def test_simple(self):
        assert partition_indicator(SPACE3, "q2") == {1}

    def test_empty_cell(self):
        space = OnticSpace(("q1", "q1"), ("q1", "q2"))
        assert partition_indicator(space, "q2") == set()

    def test_unknown(self):
        with pytest.raises(KeyError):
            partition_indicator(SPACE3, "q7")

    def test_random_assignment_partitions(self, rng):
        labels = tuple(f"q{i}" for i in rng.integers(1, 6, size=100))
        space = OnticSpace(labels, tuple(f"q{i}" for i in range(1, 6)))
        cells = [partition_indicator(space, q) for q in space.outcomes]
        assert set().union(*cells) == set(range(100))
        assert sum(len(c) for c in cells) == 100


class TestMixing:
    def test_point_masses(self, mix3):
        np.testing.assert_allclose(mix3.prep_densities["P"][0], [0.2, 0.3, 0.5])

    def test_degenerate_weights(self):
        m = mixing_model(SPACE3, POINTS, {"q1": 1.0})
        np.testing.assert_array_equal(m.prep_densities["P"][0], POINTS["q1"])

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            mixing_model(SPACE3, POINTS, {"q1": 0.5, "q2": 0.6})
        with pytest.raises(ValueError):
            mixing_model(SPACE3, POINTS, {"q1": 1.2, "q2": -0.2})

    def test_overlap_equals_weight(self, rng):
        for seed in range(200):
            base = random_model(seed, int(rng.integers(3, 20)))
            w = rng.dirichlet(np.ones(3))
            weights = dict(zip(base.space.outcomes, w))
            eig = {q: base.eigen_densities[q][0] for q in base.space.outcomes}
            m = mixing_model(base.space, eig, weights)
            f_p = m.prep_densities["P"][0]
            for q in base.space.outcomes:
                assert symmetric_overlap(f_p, weights[q] * eig[q]) == pytest.approx(weights[q], abs=1e-12)
                assert symmetric_overlap(f_p, eig[q]) >= weights[q] - 1e-12

    def test_point_mass_equality(self, mix3):
        f_p = mix3.prep_densities["P"][0]
        for q, w in WEIGHTS.items():
            assert symmetric_overlap(f_p, POINTS[q]) == pytest.approx(w, abs=1e-15)


class TestPerturbations:
    def test_eigen_zero_epsilon(self, rng):
        f_q = np.array([0.6, 0.4, 0.0])
        out = perturb_eigen_density(f_q, [0.2, 0.2, 0.6], {0, 1}, 0.0)
        np.testing.assert_array_equal(out, f_q)

    def test_eigen_full_epsilon(self):
        out = perturb_eigen_density([1, 0, 0, 0], [0.1, 0.1, 0.1, 0.7], {0, 1, 2}, 1.0)
        np.testing.assert_allclose(out, [1 / 3, 1 / 3, 1 / 3, 0], atol=1e-15)

    def test_eigen_worked_example(self):
        out = perturb_eigen_density([1, 0, 0], [0.25, 0.25, 0.5], {0, 1}, 0.1)
        np.testing.assert_allclose(out, [0.95, 0.05, 0.0], atol=1e-15)

    def test_eigen_undefined(self):
        with pytest.raises(ValueError):
            perturb_eigen_density([1, 0, 0], [0, 0, 1], {0, 1}, 0.1)

    def test_eigen_total_variation_bound(self, rng):
        for _ in range(500):
            n = int(rng.integers(2, 15))
            cell = np.flatnonzero(rng.random(n) < 0.5)
            if cell.size == 0:
                cell = np.array([0])
            mask = np.zeros(n, dtype=bool)
            mask[cell] = True
            f_q = random_density(rng, n, mask)
            f_p = random_density(rng, n, keep=1.0)
            eps = rng.uniform(0, 1)
            out = perturb_eigen_density(f_q, f_p, set(cell.tolist()), eps)
            p = f_p[mask].sum()
            assert out[mask].sum() == pytest.approx(1.0, abs=1e-12)
            assert total_variation(out, f_q) <= 2 * eps / p + 1e-12

    def test_prep_endpoints(self):
        s, u = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        np.testing.assert_array_equal(perturb_prep_density(s, u, 0.0), s)
        np.testing.assert_array_equal(perturb_prep_density(s, u, 1.0), u)
        np.testing.assert_allclose(perturb_prep_density(s, u, 0.5), [0.5, 0.5])

    def test_prep_total_variation_linear(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 20))
            s, u = random_density(rng, n), random_density(rng, n)
            eps = rng.uniform(0, 1)
            out = perturb_prep_density(s, u, eps)
            assert total_variation(out, s) == pytest.approx(eps * total_variation(s, u), abs=1e-12)


class TestRandomModel:
    def test_deterministic(self):
        a, b = random_model(11, 9, eigen_count_per_outcome=2), random_model(11, 9, eigen_count_per_outcome=2)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_many_seeds_valid(self):
        for seed in range(1000):
            m = random_model(seed, 3 + seed % 20, eigen_count_per_outcome=1 + seed % 3, prep_count=1 + seed % 2)
            assert validate_model(m) == []
            for q, fs in m.eigen_densities.items():
                cell = m.space.cell_mask(q)
                for f in fs:
                    assert f[~cell].sum() == 0.0

    def test_single_state(self):
        m = random_model(0, 1, outcomes=("q1",))
        np.testing.assert_array_equal(m.prep_densities["P"][0], [1.0])
        np.testing.assert_array_equal(m.eigen_densities["q1"][0], [1.0])

    def test_too_small_space(self):
        with pytest.raises(ValueError):
            random_model(0, 2)


class TestValidation:
    def test_rejects_bad_density(self):
        with pytest.raises(InvalidModelError) as exc:
            OnticModel(SPACE3, {q: [f] for q, f in POINTS.items()}, {"P": [[0.5, 0.6, 0.0]]})
        assert exc.value.violations[0].magnitude == pytest.approx(0.1)

    def test_rejects_eigen_density_outside_cell(self):
        with pytest.raises(InvalidModelError, match="partition cell"):
            OnticModel(SPACE3, {"q1": [[0.5, 0.5, 0.0]]})

    def test_rejects_nondeterministic_q_response(self):
        rows = np.full((3, 3), 1 / 3)
        with pytest.raises(InvalidModelError, match="indicator"):
            OnticModel(SPACE3, {q: [f] for q, f in POINTS.items()}, responses={"Q": ResponseFunction(SPACE3.outcomes, rows)})

    def test_json_round_trip(self):
        m = random_model(5, 12, eigen_count_per_outcome=2, prep_count=2)
        back = OnticModel.from_dict(json.loads(json.dumps(m.to_dict())))
        assert json.dumps(back.to_dict()) == json.dumps(m.to_dict())
