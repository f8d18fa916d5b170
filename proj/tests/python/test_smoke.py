import math

import pytest

qtk = pytest.importorskip("qtestkit")


def test_generators_match_closed_forms():
    amps = qtk.comp_sup(2, 1, math.pi / 2).amplitudes()
    h = 1 / math.sqrt(2)
    assert abs(amps[1] - h) < 1e-12
    assert abs(amps[2] - 1j * h) < 1e-12
    assert qtk.ket_x(3, 5).amplitudes()[5] == 1
    assert qtk.pauli([3, 5]).n_qubits == 2
    assert qtk.generator("ket_x(n=2, x=3)").amplitudes()[3] == 1
    with pytest.raises(ValueError):
        qtk.generator("ket_x(n=2, x=9)")


def test_scaq():
    h = 1 / math.sqrt(2)

    def sup(a, b):
        v = [0j] * 8
        v[a] = v[b] = h
        return v

    assert qtk.scaq_check([sup(0, 4), sup(0, 2), sup(0, 1)]) == (True, [])
    assert qtk.scaq_check([sup(0, 4), sup(0, 2), sup(0, 6)]) == (False, [2])


def test_spec_qft_uniform_from_zero():
    out = qtk.spec_qft(3, [1, 0, 0, 0, 0, 0, 0, 0])
    assert all(abs(a - 1 / math.sqrt(8)) < 1e-12 for a in out)


def test_stat_fit():
    ok = qtk.stat_fit({0: 502, 1: 498}, {0: 0.5, 1: 0.5})
    assert ok["passed"]
    bad = qtk.stat_fit({0: 900, 1: 100}, {0: 0.5, 1: 0.5})
    assert not bad["passed"]


def test_catalog_and_suite():
    names = qtk.benchmarks()
    assert len(names) == 18 and "QFT" in names
    assert qtk.benchmark_info("QFT")["io_type"] == "transform"
    assert qtk.dump("Reverse").startswith("qir/1")
    summary = qtk.run_suite(qtk.default_suite_yaml(["Reverse", "QFT"]), seed=3)
    assert summary["failed"] == 0 and summary["passed"] > 0
    with pytest.raises(ValueError):
        qtk.benchmark_info("Shor")


def test_mutate_and_experiment():
    mutants = qtk.mutate("Reverse", ["GM", "MM"], limit=3, seed=1)
    assert 0 < len(mutants) <= 6
    assert {m["kind"] for m in mutants} <= {"GM", "MM"}
    csv, report = qtk.run_experiment("benchmarks = Empty\nscales = 3\nkinds = MM\nlimit = 2\ninputs = CI\ntrials = 5\n")
    assert csv.startswith("benchmark,n,kind,input,mutants,trials,triggers,rate")
    assert report["kind"] == "trigger-report"
    assert all(r["triggers"] == 0 for r in report["rows"])
    with pytest.raises(ValueError):
        qtk.run_experiment("benchmarks = Shor\nscales = 3\n")
