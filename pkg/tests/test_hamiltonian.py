import numpy as np
import pytest

from blochpt.diagrams import enumerate_sequences
from blochpt.grouping import ENERGY, group
from blochpt.hamiltonian import (
    DegenerateTarget,
    DimensionMismatch,
    HamiltonianError,
    NotHermitian,
    ResolventConditionWarning,
    ResolventPowers,
    eval_diagram_energy,
    eval_diagram_vector,
    from_dict,
    load,
)
from conftest import make_random_spec


class TestLoad:
    def test_valid_two_level(self):
        spec = load([0, 1], [[0, 1], [1, 0]], 0)
        assert spec.dim == 2
        assert spec.target_energy == 0.0
        assert spec.gap == 1.0

    def test_degenerate_target(self):
        with pytest.raises(DegenerateTarget):
            load([0, 0, 1], np.zeros((3, 3)), 0)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            load([0, 1], [[0, 1], [2, 0]], 0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            load([0, 1], np.zeros((3, 3)), 0)
        with pytest.raises(DimensionMismatch):
            load([0, 1], np.zeros((2, 2)), 5)

    def test_gap_tolerance_configurable(self):
        load([0, 1e-6, 1], np.zeros((3, 3)), 0, gap_tol=1e-9)
        with pytest.raises(DegenerateTarget):
            load([0, 1e-6, 1], np.zeros((3, 3)), 0, gap_tol=1e-3)

    def test_non_target_degeneracy_allowed(self):
        spec = load([0, 1, 1], np.zeros((3, 3)), 0)
        assert spec.gap == 1.0

    def test_condition_warning(self):
        with pytest.warns(ResolventConditionWarning):
            load([0, 1e-7, 1e3], np.zeros((3, 3)), 0)

    def test_arrays_read_only(self):
        spec = load([0, 1], [[0, 1], [1, 0]], 0)
        with pytest.raises(ValueError):
            spec.h0[0] = 5.0


class TestJsonSchema:
    def test_real_matrix(self):
        spec = from_dict({"dim": 2, "h0": [0, 1], "v": [[0, 1], [1, 0]], "target": 0})
        assert spec.v[0, 1] == 1.0 + 0.0j

    def test_complex_matrix_pairs(self):
        data = {
            "h0": [0.0, 2.0],
            "v": [[[0.0, 0.0], [0.0, -1.0]], [[0.0, 1.0], [0.0, 0.0]]],
            "target": 1,
        }
        spec = from_dict(data)
        assert spec.v[0, 1] == -1.0j
        assert spec.v[1, 0] == 1.0j

    def test_round_trip(self):
        data = {"dim": 2, "h0": [0.0, 1.0], "v": [[0.0, 1.0], [1.0, 0.0]], "target": 0}
        assert from_dict(data).to_dict() == data

    def test_declared_dim_checked(self):
        with pytest.raises(DimensionMismatch):
            from_dict({"dim": 3, "h0": [0, 1], "v": [[0, 0], [0, 0]], "target": 0})

    def test_missing_key(self):
        with pytest.raises(HamiltonianError):
            from_dict({"h0": [0, 1], "target": 0})


class TestResolventPowers:
    def test_projector_convention(self, two_level):
        res = ResolventPowers(two_level)
        assert list(res.diagonal(0)) == [-1.0, 0.0]

    def test_projector_action_on_random_vector(self, rng):
        spec = make_random_spec(rng, dim=5)
        res = ResolventPowers(spec)
        vec = rng.normal(size=5) + 1j * rng.normal(size=5)
        expected = np.zeros(5, dtype=complex)
        expected[spec.target] = -vec[spec.target]
        np.testing.assert_array_equal(res.diagonal(0) * vec, expected)

    def test_annihilates_target(self, rng):
        spec = make_random_spec(rng, dim=5)
        res = ResolventPowers(spec)
        for k in range(1, 5):
            assert res.diagonal(k)[spec.target] == 0.0

    def test_power_composition(self, rng):
        spec = make_random_spec(rng, dim=5)
        res = ResolventPowers(spec)
        for k in range(1, 4):
            np.testing.assert_allclose(
                res.diagonal(k) * res.diagonal(1), res.diagonal(k + 1), rtol=1e-13
            )

    def test_negative_power_rejected(self, two_level):
        with pytest.raises(ValueError):
            ResolventPowers(two_level).diagonal(-1)


class TestDiagramEvaluation:
    def test_single_resolvent(self, two_level):
        np.testing.assert_allclose(eval_diagram_vector((1,), two_level), [0, -1.0])

    def test_projector_kills_offdiagonal_term(self, two_level):
        np.testing.assert_allclose(eval_diagram_vector((2, 0), two_level), [0, 0])

    def test_empty_sequence_is_identity(self, two_level):
        np.testing.assert_allclose(eval_diagram_vector((), two_level), [1.0, 0])

    def test_energy_examples(self, two_level):
        assert eval_diagram_energy((), two_level) == 0.0  # V00
        assert eval_diagram_energy((1,), two_level) == pytest.approx(-1.0)
        assert eval_diagram_energy((0,), two_level) == pytest.approx(0.0)

    def test_leading_resolvent_clears_target_component(self, rng):
        spec = make_random_spec(rng, dim=6)
        for seq in enumerate_sequences(4):
            if seq.parts[0] >= 1:
                vec = eval_diagram_vector(seq, spec)
                assert vec[spec.target] == 0.0

    def test_real_symmetric_energies_are_real(self, rng):
        spec = make_random_spec(rng, dim=6, real=True)
        for seq in enumerate_sequences(4):
            value = eval_diagram_energy(seq, spec)
            assert abs(value.imag) <= 1e-13 * max(1.0, abs(value))

    def test_projector_splits_matrix_element(self, rng):
        # a zero exponent inside the string factorizes the matrix element
        spec = make_random_spec(rng, dim=5)
        for seq in enumerate_sequences(4):
            parts = seq.parts
            for p in range(1, len(parts) - 1):
                if parts[p] != 0:
                    continue
                whole = eval_diagram_energy(parts, spec)
                left = eval_diagram_energy(parts[:p], spec)
                right = eval_diagram_energy(parts[p + 1 :], spec)
                assert whole == pytest.approx(-left * right, rel=1e-12, abs=1e-14)

    def test_energy_class_members_agree(self, rng):
        spec = make_random_spec(rng, dim=6)
        for n in range(1, 6):
            for cls in group(n, ENERGY):
                values = [eval_diagram_energy(m, spec) for m in cls.members]
                ref = values[0]
                scale = max(1.0, abs(ref))
                assert all(abs(v - ref) <= 1e-12 * scale for v in values), cls.representative
