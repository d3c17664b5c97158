"""Acceptance criteria. Each test prints one PASS/FAIL line."""

import contextlib
import json

import numpy as np
import pytest

from oracles import purity_concurrence_sq, wootters_oracle
from qmonogamy import bounds, cli, measures, monogamy, qstate, search, states
from qmonogamy.bounds import RoofConfig
from qmonogamy.measures import Certainty
from qmonogamy.monogamy import Verdict
from qmonogamy.qstate import BipartiteSplit

AB = BipartiteSplit((0,), (1,))


@contextlib.contextmanager
def criterion(capsys, number, title):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")


def test_1_counterexample(capsys):
    with criterion(capsys, 1, "antisymmetric qutrit state violates monogamy on every focus"):
        psi = states.antisymmetric_qutrit()
        for r in monogamy.audit_all_foci(psi, RoofConfig(seed=0)):
            assert r.c2_focus_rest.certainty is Certainty.EXACT
            assert abs(r.c2_focus_rest.value_sq - 4 / 3) <= 1e-9
            for term in (r.c2_focus_b, r.c2_focus_c):
                assert term.certainty is Certainty.EXACT and term.value_sq == 1.0
            assert r.pair_sum == 2.0 > r.c2_focus_rest.value_sq
            assert abs(r.tangle + 2 / 3) <= 1e-9
            assert r.verdict is Verdict.VIOLATED_CERTIFIED
        rho = qstate.reduced_density(psi, [0, 1])
        assert bounds.antisym_exact_sq(rho, AB).value_sq == 1.0


def test_2_roof_on_counterexample(capsys):
    with criterion(capsys, 2, "every decomposition of the antisymmetric reduced state averages to 1"):
        rho = qstate.reduced_density(states.antisymmetric_qutrit(), [0, 1])
        rng = states.make_rng(2)
        r = rho.rank()
        for i in range(100):
            k = r + i % 7
            u = bounds.random_isometry(k, r, rng)
            assert abs(bounds.ensemble_average_sq(rho, AB, u) - 1) <= 1e-9
        assert abs(bounds.convex_roof_sq(rho, AB, RoofConfig(seed=0)).value_sq - 1) <= 1e-6


def test_3_ghz_qutrit(capsys):
    with criterion(capsys, 3, "GHZ qutrit state satisfies monogamy"):
        psi = states.ghz(3)
        cfg = RoofConfig(seed=0)
        r = monogamy.audit(psi, 0, cfg)
        for rho in (qstate.reduced_density(psi, [0, 1]), qstate.reduced_density(psi, [0, 2])):
            assert bounds.convex_roof_sq(rho, AB, cfg).value_sq <= 1e-6
            assert bounds.lower_bound_sq(rho, AB).value_sq == 0.0
        assert r.term_b.lower.value_sq == 0.0 and r.term_c.lower.value_sq == 0.0
        assert r.c2_focus_b.value_sq <= 1e-6 and r.c2_focus_c.value_sq <= 1e-6
        assert abs(r.c2_focus_rest.value_sq - 4 / 3) <= 1e-9
        assert r.verdict is Verdict.SATISFIED


def test_4_qubit_monogamy(capsys):
    with criterion(capsys, 4, "CKW inequality and three-tangle on 200 Haar random qubit states"):
        for i in range(200):
            psi = states.haar_random_pure((2, 2, 2), [4, i])
            for f in range(3):
                b, c = (j for j in range(3) if j != f)
                rest = measures.pure_concurrence_sq(psi, BipartiteSplit((f,), (b, c))).value_sq
                pair = sum(measures.wootters_concurrence(qstate.reduced_density(psi, sorted((f, j)))).value_sq
                           for j in (b, c))
                assert pair <= rest + 1e-8
            taus = [monogamy.three_tangle_qubits(psi, f) for f in range(3)]
            assert min(taus) >= -1e-8
            assert max(taus) - min(taus) <= 1e-8


def test_5_oracle_equivalences(capsys):
    with criterion(capsys, 5, "generator vs purity forms, 2xM and singular-value bounds vs Wootters"):
        rng = states.make_rng(5)
        for i in range(500):
            n = int(rng.integers(2, 4))
            dims = tuple(int(d) for d in rng.integers(2, 5, size=n))
            psi = states.haar_random_pure(dims, [5, i])
            size = int(rng.integers(1, n))
            left = tuple(sorted(int(x) for x in rng.choice(n, size=size, replace=False)))
            split = BipartiteSplit.of(left, n)
            gen = measures.pure_concurrence_sq(psi, split).value_sq
            assert abs(gen - measures.pure_concurrence_sq_purity(psi, split).value_sq) <= 1e-9
            assert abs(gen - purity_concurrence_sq(psi.amplitudes, list(dims), list(left))) <= 1e-9
        for i in range(100):
            rho = states.random_mixed((2, 2), 1 + i % 4, [55, i])
            w2 = wootters_oracle(rho.matrix) ** 2
            assert abs(bounds.lower_bound_2xM_sq(rho, AB).value_sq - w2) <= 1e-8
            assert abs(bounds.lower_bound_sq(rho, AB).value_sq - w2) <= 1e-6


def test_6_bound_ordering(capsys):
    with criterion(capsys, 6, "lower bound below roof, and lower-bound pair sums on 2xMxN states"):
        cfg = RoofConfig(seed=6)
        cuts = [(2, 2), (2, 3), (3, 3)]
        for i in range(50):
            dims = cuts[i % 3]
            rho = states.random_mixed(dims, 2 + i % 2, [6, i])
            lb = bounds.lower_bound_sq(rho, AB).value_sq
            assert lb <= bounds.convex_roof_sq(rho, AB, cfg).value_sq + 1e-6
        for i in range(60):
            dims = (2, 2 + i % 3, 2 + (i // 3) % 3)
            psi = states.haar_random_pure(dims, [66, i])
            rest = measures.pure_concurrence_sq(psi, BipartiteSplit((0,), (1, 2))).value_sq
            rab = qstate.reduced_density(psi, [0, 1])
            rac = qstate.reduced_density(psi, [0, 2])
            assert bounds.lower_bound_sq(rab, AB).value_sq + bounds.lower_bound_sq(rac, AB).value_sq <= rest + 1e-6
            assert bounds.lower_bound_2xM_sq(rab, AB).value_sq + bounds.lower_bound_2xM_sq(rac, AB).value_sq <= rest + 1e-6


def test_7_determinism(capsys):
    with criterion(capsys, 7, "byte-identical CLI reruns and no candidates on a 2x2x2 scan"):
        invocations = [
            ["eval", "--state", "haar_pure", "--dims", "2,3,2", "--split", "A:BC"],
            ["bound", "--state", "random_mixed", "--dims", "3,3", "--rank", "2", "--split", "A:B"],
            ["roof", "--state", "random_mixed", "--dims", "2,3", "--rank", "2", "--split", "A:B", "--max-iters", "300"],
            ["audit", "--state", "antisym3", "--all-foci", "--restarts", "2", "--max-iters", "300"],
            ["state", "--name", "random_mixed", "--dims", "2,2", "--rank", "3"],
            ["scan", "--dims", "2,2,3", "--samples", "3"],
        ]
        for argv in invocations:
            outs = []
            for _ in range(2):
                assert cli.run(argv + ["--seed", "7"]) == 0
                outs.append(capsys.readouterr().out)
            assert outs[0] == outs[1]
        assert cli.run(["scan", "--dims", "2,2,2", "--samples", "100", "--seed", "7"]) == 0
        records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert len(records) == 100
        assert not any(r["candidate"] for r in records)
        scanned = search.scan(search.ScanConfig((2, 2, 2), 100, seed=0))
        assert sum(r.candidate for r in scanned) == 0


def test_8_w_state(capsys):
    with criterion(capsys, 8, "W state regression"):
        w = states.w_state()
        for f in range(3):
            others = [j for j in range(3) if j != f]
            assert abs(purity_concurrence_sq(w.amplitudes, [2, 2, 2], [f]) - 8 / 9) <= 1e-9
            for j in others:
                rho = qstate.reduced_density(w, sorted((f, j))).matrix
                assert abs(wootters_oracle(rho) ** 2 - 4 / 9) <= 1e-9
            r = monogamy.audit(w, f, None)
            assert abs(r.c2_focus_b.value_sq - 4 / 9) <= 1e-9
            assert abs(r.c2_focus_c.value_sq - 4 / 9) <= 1e-9
            assert abs(r.c2_focus_rest.value_sq - 8 / 9) <= 1e-9
            assert abs(r.tangle) <= 1e-8
            assert abs(monogamy.three_tangle_qubits(w, f)) <= 1e-8
