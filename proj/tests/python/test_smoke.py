import json
import os
from pathlib import Path

import pytest

import kraftlab as kl

DATA = Path(os.environ["KRAFTLAB_DATA"])


@pytest.fixture(scope="module")
def example1():
    return kl.load(DATA / "example1.json")


def test_kraft_matrix_golden(example1):
    km = kl.kraft_matrix(example1)
    assert km["matrix"][0] == [
        {"m": "0", "e": 0},
        {"m": "1", "e": 0},
        {"m": "1", "e": 2},
    ]
    assert km["matrix"][1][0] == {"m": "3", "e": 2}
    assert km["matrix"][2][0] == {"m": "1", "e": 0}
    assert abs(float(km["rho"]) - 1.0) < 1e-9
    assert km["irreducible"] is True
    assert kl.dyadic_value(km["row_sums"][1]) == 0.75


def test_matrix_power_golden(example1):
    p100 = kl.matrix_power(example1, 100)
    assert p100[0] == [{"m": "1", "e": 0}, {"m": "0", "e": 0}, {"m": "0", "e": 0}]
    assert p100[1][1] == {"m": "3", "e": 2}
    assert p100[1][2] == {"m": "3", "e": 4}
    assert kl.dyadic_value(p100[2][2]) == 0.25


def test_gki_holds(example1):
    rep = kl.gki(example1, ells=(1, 2, 4))
    assert rep["all_hold"] is True
    names = {r["inequality"] for r in rep["inequalities"]}
    assert "spectral_radius_le_one" in names
    assert "min_row_sum_le_one" in names


def test_check_il_clean_and_mutated(example1):
    clean = kl.check_il(example1, depth=6)
    assert clean["witness"] is None and clean["il_up_to_depth"] is True

    mut = json.loads(json.dumps(example1))
    for t in mut["transitions"]:
        if t["state"] == "O" and t["symbol"] == "1":
            t["output"] = "0"
    v = kl.check_il(mut, depth=6)
    assert v["checked_depth"] == 2
    assert v["witness"]["first"] == ["0", "0"]
    assert v["witness"]["second"] == ["0", "1"]
    assert v["witness"]["output"] == "0"


def test_check_il_budget_verdict(example1):
    v = kl.check_il(example1, depth=30, budget=100)
    assert v["budget_hit"] is True and v["witness"] is None


def test_jsr_counterexample_and_certificate():
    fam = kl.load(DATA / "family_eps.json")
    br = kl.jsr(fam)
    assert br["growth_certified"] is True
    assert float(br["lower"]) > 1.0
    assert br["lower_word"][:2] == ["A", "B"]
    assert br["subinvariant"]["found"] is False

    sip = kl.load(DATA / "si_pair.json")
    ok = kl.jsr(sip)
    assert ok["growth_certified"] is False
    assert ok["subinvariant"]["found"] is True
    assert all(float(x) == 1.0 for x in ok["subinvariant"]["v"])


def test_rate_bound_periodic(example1):
    rep = kl.rate_bound(example1, [0, 0] * 500)
    assert abs(float(rep["rate"]) - 0.5) < 1e-12
    assert rep["holds"] is True
    assert float(rep["bound"]) <= 0.5


def test_lz78_zeros():
    rep = kl.lz78([0] * 10000)
    assert rep["c"] == 140
    assert rep["last_repeats"] is True
    assert sum(length for _, length in rep["spans"]) == 10000
    bound = kl.lz_rate_bound(rep["c"], rep["n"])
    assert "heuristic" in bound["epsilon_label"]


def test_delta_and_baseline():
    assert kl.delta(2, 0.0) == 0.0
    assert abs(kl.delta(2, 1.0) - 0.5) < 1e-6
    assert abs(kl.zl_baseline(1, 2, 1) - 2.584962500721156) < 1e-12


def test_min_state_kraft_sum(example1):
    ms = kl.min_state_kraft_sum(example1, 1)
    assert ms["m"] == "3" and ms["e"] == 1


def test_lossy_chain():
    ham = kl.load(DATA / "hamming2.json")
    assert kl.b_ell(ham, 3, 1 / 3) == 4
    assert abs(kl.phi_of_d(ham, 0.11) - 0.49981) < 1e-3
    quant = kl.load(DATA / "quantizer_rep3.json")
    coder = kl.load(DATA / "repro_coder3.json")
    rep = kl.lossy_check(quant, coder, ham)
    assert rep["all_hold"] is True


def test_predictive_code_bound():
    pred = kl.load(DATA / "predictor_markov1.json")
    rep = kl.predictive_code(pred, [0, 1, 1, 0] * 100, theta=0.5, k=4)
    assert rep["bound_holds"] is True
    assert rep["bits"] <= float(rep["upper_bound"])


def test_encode_trace(example1):
    t = kl.encode(example1, [0, 0, 1])
    assert t["output"] == "011"
    assert t["final_state"] == "I"
    assert t["states"] == ["S", "O", "S", "I"]


def test_parse_errors_raise_value_error():
    with pytest.raises(ValueError):
        kl.validate({"transitions": []})
    with pytest.raises(ValueError):
        kl.kraft_matrix("not json at all")


def test_validate_kinds(example1):
    assert kl.validate(example1)["kind"] == "encoder"
    assert kl.validate(kl.load(DATA / "si_pair.json"))["kind"] == "si-encoder"
    assert kl.validate(kl.load(DATA / "family_eps.json"))["kind"] == "family"
    assert kl.validate(kl.load(DATA / "hamming2.json"))["kind"] == "loss"
    pred = kl.validate(kl.load(DATA / "predictor_markov1.json"))
    assert pred["kind"] == "predictor"
    quant = kl.validate(
        kl.load(DATA / "quantizer_rep3.json"), loss=kl.load(DATA / "hamming2.json")
    )
    assert quant["kind"] == "quantizer" and quant["ell"] == 3
