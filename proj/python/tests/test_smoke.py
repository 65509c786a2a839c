import pytest

import trank


def test_tensor_roundtrip():
    t = trank.Tensor("q", [1, 1, 2], [3, "-3/2"])
    assert t.dims == [1, 1, 2]
    assert t.entries() == ["3", "-3/2"]
    assert trank.Tensor.from_json(t.to_json()) == t
    with pytest.raises(trank.DimensionError):
        trank.Tensor("gf2", [2, 2, 2], [1, 0])


def test_matmul_rank_over_gf2():
    mu = trank.matmul_tensor(2, 2, 2, "gf2")
    assert trank.flattening_ranks(mu) == [4, 4, 4]
    r = trank.rank_oracle(mu)
    assert r["status"] == "exact"
    assert r["rank"] == 7
    assert trank.certifies(r["witness"], mu)


def test_matmul_over_q_is_bounded_only():
    mu = trank.matmul_tensor(2, 2, 2, "q")
    assert trank.verify_strassen("q")
    assert trank.verify_strassen("gf5")
    n, source, witness = trank.upper_bound(mu)
    assert n == 7
    assert trank.certifies(witness, mu)
    with pytest.raises(trank.UnsupportedField):
        trank.rank_oracle(mu)


def test_substitution_bound_is_sound():
    for seed in range(20):
        p = trank.random_tensor([2, 2, 3], "gf2", seed)
        lb = trank.substitution_lower_bound(p)["bound"]
        assert lb <= trank.rank_oracle(p)["rank"]


def test_additivity_and_classification():
    a = trank.random_tensor([2, 2, 2], "gf2", 3)
    b = trank.random_tensor([1, 2, 2], "gf2", 4)
    rep = trank.additivity_check(a, b)
    assert rep["defect"] == 0
    s = trank.direct_sum(a, b)
    split = {"aP": 2, "bP": 2, "cP": 2}
    cd = trank.classify(s, rep["rank_sum"]["witness"], split)
    assert sum(cd["counts"].values()) == rep["rank_sum"]["rank"]
    with pytest.raises(trank.FieldMismatch):
        trank.additivity_check(a, trank.random_tensor([1, 1, 1], "gf3", 1))
