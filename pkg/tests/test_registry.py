import json

import numpy as np
import pytest

from hardyconj.verify_cli import DATA, REGISTRY, CaseResult, RunOptions, case_ids, run_case
from hardyconj.innerfun import theta_sharp
from hardyconj.verify_cli.registry import merge_overrides, model_corpus

FAST = RunOptions(trials=20)


@pytest.mark.parametrize("case_id", case_ids())
def test_every_case_passes(case_id):
    res = run_case(case_id, FAST)
    assert res.verdict == "pass", res.message or res.worst()
    assert res.residuals or res.checks, "every case should record something"
    assert res.failed == []
    for name, value in res.residuals.items():
        assert value <= res.tolerances[name]


def test_case_ids_are_unique_and_ordered():
    ids = case_ids()
    assert len(ids) == len(set(ids)) == len(REGISTRY)
    assert ids[0] == "ex-2.3" and ids[-1] == "ex-8.8"
    assert all(REGISTRY[c].summary for c in ids)


def test_unknown_case_raises():
    with pytest.raises(KeyError):
        run_case("no-such-case")


def test_results_are_deterministic():
    a = run_case("thm-4.3", FAST).to_dict()
    b = run_case("thm-4.3", FAST).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_worst_picks_largest_ratio():
    r = CaseResult("x", "pass", {"a": 1e-13, "b": 1e-11}, {"a": 1e-14, "b": 1e-10}, {}, {}, "")
    assert r.worst()[0] == "a"
    assert r.failed == ["a"]
    assert CaseResult("x", "fail", {}, {}, {"c": False}, {}, "").failed == ["c"]


def test_merge_overrides_converts_keys_and_pairs():
    merged = merge_overrides(DATA, {"ex-2.4": {"psi2": {"1": [0, 0.5]}}})
    assert merged["ex-2.4"]["psi2"][1] == 0.5j
    assert merged["ex-2.4"]["psi2"][-1] == DATA["ex-2.4"]["psi2"][-1]
    assert DATA["ex-2.4"]["psi2"][1] == -0.5j  # original untouched


def _mutated(case, key, n, factor):
    data = merge_overrides(DATA, {})
    data[case][key][n] *= factor
    return data


def test_sign_flip_in_block_entry_is_caught():
    data = _mutated("ex-2.4", "psi2", 1, -1)
    assert run_case("ex-2.4", FAST, data).verdict == "fail"
    assert run_case("ex-4.6", FAST, data).verdict == "fail"


def test_wrong_expected_coefficients_are_caught():
    data = merge_overrides(DATA, {})
    data["ex-8.8"]["expected"] = {k: np.asarray(v).T.tolist() for k, v in data["ex-8.8"]["expected"].items()}
    assert run_case("ex-8.8", FAST, data).verdict == "fail"


def test_broken_data_is_an_error_not_a_crash():
    data = merge_overrides(DATA, {})
    data["ex-2.4"]["psi2"] = "garbage"
    res = run_case("ex-2.4", FAST, data)
    assert res.verdict == "error" and res.message


def test_corpus_mixes_self_sharp_and_not():
    corpus = model_corpus()
    names = [n for n, _, _ in corpus]
    assert len(names) == len(set(names)) == 4
    assert all(" " not in n for n in names)
    self_sharp = {theta.distance(theta_sharp(theta)) < 1e-12 for _, theta, _ in corpus}
    assert self_sharp == {True, False}
