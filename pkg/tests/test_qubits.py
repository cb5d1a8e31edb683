import numpy as np
import pytest

from gesforge.basis import evaluate, projector_from_vectors, subspace_pair
from gesforge.certification import enumerate_bipartitions, find_biproduct_seesaw, schmidt_rank
from gesforge.constructions import Scenario, build_standard, max_ges_dim
from gesforge.qubits import (
    MINUS_I_SIGMA_Y,
    apply_local,
    ghz,
    qubit_ges_basis,
    single_gme_state,
    three_qubit_max_ges,
)


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def random_superpositions(vectors, n, seed):
    rng = np.random.default_rng(seed)
    B = np.array(vectors)
    c = rng.standard_normal((n, len(vectors))) + 1j * rng.standard_normal((n, len(vectors)))
    out = c @ B
    return out / np.linalg.norm(out, axis=1, keepdims=True)


class TestQubitGesBasis:
    def test_three_qubits(self):
        a, b = qubit_ges_basis(3)
        np.testing.assert_array_equal(a, ket("001") + ket("010") - ket("100"))
        np.testing.assert_array_equal(b, ket("010") + ket("011") - ket("101"))

    def test_count_and_support(self):
        for n in (3, 4, 5):
            vecs = qubit_ges_basis(n)
            assert len(vecs) == 2 ** (n - 2)
            # direct expansion oracle
            for j, v in enumerate(vecs):
                ref = np.zeros(2**n)
                for k in range(2, n + 1):
                    ref[2 ** (n - k) + j] += 1
                ref[2 ** (n - 1) + j] -= 1
                np.testing.assert_array_equal(v.real, ref)

    def test_orthogonal_to_family(self):
        fam = build_standard("V3", Scenario.equal(3, 2))
        rng = np.random.default_rng(0)
        for a in rng.standard_normal(10) + 1j * rng.standard_normal(10):
            v = evaluate(fam, a)
            for g in qubit_ges_basis(3):
                assert abs(np.vdot(g, v)) < 1e-10 * np.linalg.norm(v)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_matches_realized_complement(self, n):
        pair = subspace_pair(build_standard("V3", Scenario.equal(n, 2)))
        P = projector_from_vectors(qubit_ges_basis(n))
        assert np.linalg.norm(P - pair.p_ges, 2) <= 1e-9

    def test_too_few_parties(self):
        with pytest.raises(ValueError):
            qubit_ges_basis(2)


class TestGhz:
    def test_plus(self):
        np.testing.assert_allclose(ghz(3), np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2))

    def test_orthogonal_phases(self):
        assert abs(np.vdot(ghz(3, 1), ghz(3, -1))) < 1e-15

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_schmidt_rank(self, n):
        assert all(schmidt_rank(ghz(n, -1), c) == 2 for c in enumerate_bipartitions(n))

    def test_bad_args(self):
        with pytest.raises(ValueError):
            ghz(1)
        with pytest.raises(ValueError):
            ghz(3, 2)


class TestLocalMap:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_minus_i_sigma_y_gives_ghz_plus(self, n):
        # |0 1..1> - |1 0..0>  ->  |1 1..1> + |0 0..0>, global phase +1
        out = apply_local(MINUS_I_SIGMA_Y, single_gme_state(n), 0, (2,) * n)
        np.testing.assert_allclose(out, ghz(n, 1), atol=1e-15)

    def test_matrix(self):
        sy = np.array([[0, -1j], [1j, 0]])
        np.testing.assert_allclose(MINUS_I_SIGMA_Y, -1j * sy)

    def test_apply_local_matches_kron(self):
        rng = np.random.default_rng(0)
        op = rng.standard_normal((3, 3))
        v = rng.standard_normal(12)
        ref = np.kron(np.kron(np.eye(2), op), np.eye(2)) @ v
        np.testing.assert_allclose(apply_local(op, v, 1, (2, 3, 2)), ref)


class TestThreeQubitMax:
    def test_dimension(self):
        vecs = three_qubit_max_ges()
        assert np.linalg.matrix_rank(np.array(vecs)) == 3 == max_ges_dim((2, 2, 2))

    def test_ges_by_sampling(self):
        for v in random_superpositions(three_qubit_max_ges(), 200, seed=0):
            assert all(schmidt_rank(v, c) >= 2 for c in enumerate_bipartitions(3))

    def test_ges_by_seesaw(self):
        P = projector_from_vectors(three_qubit_max_ges())
        for cut in enumerate_bipartitions(3):
            assert find_biproduct_seesaw(P, cut, restarts=30, maximize=True).value < 1 - 1e-3

    def test_ghz_plus_fails(self):
        P = projector_from_vectors(three_qubit_max_ges(ghz_phase=1))
        best = max(find_biproduct_seesaw(P, c, restarts=30, maximize=True).value
                   for c in enumerate_bipartitions(3))
        assert best >= 1 - 1e-8
