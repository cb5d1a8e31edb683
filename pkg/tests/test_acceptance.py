"""Acceptance gate. One test per criterion; conftest prints the PASS/FAIL table."""

import math
import time

import numpy as np
import pytest

from gesforge.basis import projector_from_vectors, realize_basis, subspace_pair
from gesforge.certification import (
    GES_CERTIFIED,
    REFUTED,
    certify_ges,
    enumerate_bipartitions,
    find_biproduct_seesaw,
    schmidt_rank,
)
from gesforge.cli import main
from gesforge.constructions import (
    Scenario,
    build_custom,
    build_naive_vandermonde,
    build_standard,
    build_symmetric_nupb,
    fixture_shifts_oupb,
    predicted_ges_dim,
    span_dim,
)
from gesforge.poly import ExpPoly, exact_matrix_rank, exact_rank, poly_mul
from gesforge.qubits import qubit_ges_basis, three_qubit_max_ges
from gesforge.witness import (
    build_witness,
    estimate_epsilon,
    ges_state,
    partial_transpose_min_eig,
    random_biproduct_states,
    witness_expectations,
)

SCENARIOS = [(3, 2), (4, 2), (5, 2), (3, 3), (2, 4), (2, 5)]
SEESAW_RESTARTS = 50


def certified_families():
    out = []
    for n, d in SCENARIOS:
        for v in ("V1", "V2", "V3"):
            out.append((f"{v} N={n} d={d}", build_standard(v, Scenario.equal(n, d)), v))
    out.append(("custom 0,9,17", build_custom((3, 3, 3), [0, 9, 17]), None))
    return out


def naive_families():
    return [(f"naive N=3 d={d}", build_naive_vandermonde(Scenario.equal(3, d))) for d in (2, 3)]


@pytest.fixture(scope="module")
def float_instances():
    """Unit-circle projectors plus 50-restart seesaw estimates, shared by 3 and 6."""
    out = []
    for label, fam, _ in certified_families():
        pair = subspace_pair(fam, seed=0)
        est = estimate_epsilon(pair.p_nupb, fam.dims, restarts=SEESAW_RESTARTS, seed=0)
        out.append((label, fam, pair, est))
    return out


def test_criterion_1_dimension_formulas():
    start = time.perf_counter()
    bad = []
    count = 0
    for d in range(2, 65):
        n = 2
        while d**n <= 4096:
            s = Scenario.equal(n, d)
            for v in ("V1", "V2", "V3"):
                got = s.D - span_dim(build_standard(v, s))
                count += 1
                if got != predicted_ges_dim(v, s):
                    bad.append((v, n, d, got))
            n += 1
    spots = {
        "V2 3,3": Scenario.equal(3, 3).D - span_dim(build_standard("V2", Scenario.equal(3, 3))),
        "V3 3,3": Scenario.equal(3, 3).D - span_dim(build_standard("V3", Scenario.equal(3, 3))),
        "V3 3,2": 8 - span_dim(build_standard("V3", Scenario.equal(3, 2))),
        "432 a": 24 - span_dim(build_custom((4, 3, 2), [0, 5, 10, 15])),
        "432 b": 24 - span_dim(build_custom((4, 3, 2), [0, 3, 6, 9])),
    }
    elapsed = time.perf_counter() - start
    print(f"\n[1] {count} (N, d, variant) cases, {elapsed:.1f}s, spots {spots}")
    assert not bad, bad
    assert spots == {"V2 3,3": 10, "V3 3,3": 12, "V3 3,2": 2, "432 a": 3, "432 b": 9}
    assert elapsed < 60


def test_criterion_2_certification():
    start = time.perf_counter()
    wrong = []
    for label, fam, v in certified_families():
        cert = certify_ges(realize_basis(fam))
        expected_dim = predicted_ges_dim(v, fam.scenario) if v else 1
        print(f"\n[2] {label}: {cert.verdict}, ges_dim {cert.ges_dim}", end="")
        if cert.verdict != GES_CERTIFIED or cert.ges_dim != expected_dim:
            wrong.append((label, cert.verdict, cert.ges_dim))
    for label, fam in naive_families():
        cert = certify_ges(realize_basis(fam))
        print(f"\n[2] {label}: {cert.verdict} at {cert.refuting_cut}", end="")
        if cert.verdict != REFUTED:
            wrong.append((label, cert.verdict))
    elapsed = time.perf_counter() - start
    print(f"\n[2] total {elapsed:.1f}s")
    assert not wrong, wrong
    assert elapsed < 600


def test_criterion_3_cross_oracle(float_instances):
    problems = []
    rng = np.random.default_rng(2024)
    for label, fam, pair, est in float_instances:
        print(f"\n[3] {label}: min seesaw overlap {est.epsilon_hat:.3e}", end="")
        if est.epsilon_hat < 1e-6:
            problems.append((label, "seesaw", est.epsilon_hat))
        G = pair.ges_basis
        c = rng.standard_normal((100, G.shape[0])) + 1j * rng.standard_normal((100, G.shape[0]))
        states = c @ G
        states /= np.linalg.norm(states, axis=1, keepdims=True)
        cuts = enumerate_bipartitions(fam.dims)
        if any(schmidt_rank(s, cut, 1e-9) < 2 for s in states for cut in cuts):
            problems.append((label, "schmidt"))
    for label, fam in naive_families():
        pair = subspace_pair(fam, seed=0)
        best = min(find_biproduct_seesaw(pair.p_nupb, cut, SEESAW_RESTARTS).value
                   for cut in enumerate_bipartitions(fam.dims))
        print(f"\n[3] {label}: min seesaw overlap {best:.3e}", end="")
        if best > 1e-8:
            problems.append((label, best))
    P = projector_from_vectors(fixture_shifts_oupb())
    shifts = find_biproduct_seesaw(P, enumerate_bipartitions(3)[0], SEESAW_RESTARTS).value
    print(f"\n[3] shifts fixture A1|A2A3: {shifts:.3e}")
    if shifts > 1e-8:
        problems.append(("shifts", shifts))
    assert not problems, problems


def test_criterion_4_qubit_anchors():
    a, b = qubit_ges_basis(3)
    e = np.eye(8)
    assert np.array_equal(a, e[1] + e[2] - e[4])
    assert np.array_equal(b, e[2] + e[3] - e[5])
    for n in (3, 4, 5):
        pair = subspace_pair(build_standard("V3", Scenario.equal(n, 2)))
        dist = np.linalg.norm(projector_from_vectors(qubit_ges_basis(n)) - pair.p_ges, 2)
        print(f"\n[4] N={n} projector distance {dist:.2e}", end="")
        assert dist <= 1e-9
    rng = np.random.default_rng(7)
    B = np.array(three_qubit_max_ges())
    for _ in range(200):
        v = (rng.standard_normal(3) + 1j * rng.standard_normal(3)) @ B
        assert all(schmidt_rank(v / np.linalg.norm(v), cut) >= 2 for cut in enumerate_bipartitions(3))
    P_plus = projector_from_vectors(three_qubit_max_ges(ghz_phase=1))
    best = max(find_biproduct_seesaw(P_plus, cut, SEESAW_RESTARTS, maximize=True).value
               for cut in enumerate_bipartitions(3))
    print(f"\n[4] GHZ+ completion: best biproduct overlap {best:.12f}")
    assert best >= 1 - 1e-8


def test_criterion_5_symmetric():
    for d in range(2, 7):
        rows = build_symmetric_nupb(d)
        assert exact_matrix_rank(rows) == math.comb(d + 1, 2)
    P = projector_from_vectors([[float(x) for x in r] for r in build_symmetric_nupb(2)])
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    err = np.abs((np.eye(4) - P) - np.outer(singlet, singlet)).max()
    print(f"\n[5] singlet projector error {err:.2e}")
    assert err <= 1e-10


def test_criterion_6_states_witnesses(float_instances):
    problems = []
    for label, fam, pair, est in float_instances:
        wit = build_witness(pair.p_nupb, est.epsilon_hat, per_cut=est.per_cut)
        rho = ges_state(pair)
        val = np.trace(wit.operator @ rho.matrix).real
        expected = wit.expected_on_state
        worst = min(
            witness_expectations(wit.operator, random_biproduct_states(cut, 10_000, seed=i)).min()
            for i, cut in enumerate(enumerate_bipartitions(fam.dims))
        )
        print(f"\n[6] {label}: Tr(W rho) {val:.6e}, min biproduct {worst:.3e}", end="")
        if abs(val - expected) > 1e-10 or val >= 0:
            problems.append((label, "identity", val, expected))
        if worst < -1e-10:
            problems.append((label, "sampling", worst))
    for n, d in ((3, 2), (3, 3)):
        pair = subspace_pair(build_standard("V3", Scenario.equal(n, d)))
        rho = ges_state(pair)
        mins = [partial_transpose_min_eig(rho, cut) for cut in enumerate_bipartitions((d,) * n)]
        print(f"\n[6] V3 N={n} d={d} PT minima {['%.4f' % m for m in mins]}", end="")
        if max(mins) >= -1e-6:
            problems.append(("PT", n, d, mins))
    print()
    assert not problems, problems


def _random_poly(rng, pool):
    k = int(rng.integers(1, 4))
    exps = rng.choice(pool, size=k, replace=False)
    return ExpPoly.from_dict({int(e): int(rng.integers(-3, 4)) or 1 for e in exps})


def test_criterion_7_product_lemma():
    rng = np.random.default_rng(11)
    informative = 0
    for _ in range(200):
        ns, nq = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        # small exponent pools make dependencies common enough to matter
        S = [_random_poly(rng, 6) for _ in range(ns)]
        Q = [_random_poly(rng, 6) for _ in range(nq)]
        if rng.random() < 0.3 and ns > 1:
            S[-1] = S[0] * 2
        prods = [poly_mul(s, q) for s in S for q in Q]
        if exact_rank(prods) == ns * nq:
            informative += 1
            assert exact_rank(S) == ns and exact_rank(Q) == nq
    S = [ExpPoly.monomial(k) for k in range(3)]
    sym = [poly_mul(a, b) for a in S for b in S]
    print(f"\n[7] 200 instances, {informative} with independent products; "
          f"symmetric products rank {exact_rank(sym)} of 9")
    assert informative > 0
    assert exact_rank(S) == 3 and exact_rank(sym) < 9


def test_criterion_8_determinism(tmp_path):
    commands = [
        ["dims", "--n", "2-5", "--d", "2-6"],
        ["construct", "--variant", "v3", "--n", "3", "--d", "3"],
        ["certify", "--variant", "v2", "--n", "3", "--d", "3"],
        ["state", "--variant", "v3", "--n", "3", "--d", "2"],
        ["witness", "--variant", "v3", "--n", "3", "--d", "2", "--restarts", "10", "--seed", "5"],
        ["ppt", "--variant", "v3", "--n", "3", "--d", "3"],
    ]
    for i, argv in enumerate(commands):
        outs = []
        for rep in range(2):
            target = tmp_path / f"{i}-{rep}"
            main(argv + ["-o", str(target)])
            outs.append(target.read_bytes())
        assert outs[0] == outs[1], argv
    a = estimate_epsilon(np.eye(8) - projector_from_vectors(qubit_ges_basis(3)), (2, 2, 2), 5, seed=3)
    b = estimate_epsilon(np.eye(8) - projector_from_vectors(qubit_ges_basis(3)), (2, 2, 2), 5, seed=3)
    assert a.per_cut == b.per_cut
