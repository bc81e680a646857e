import math

import modkit


def test_linear_round_trip():
    g = modkit.LinearFunction(0.5, [1.0, -2.0, 3.0])
    f = modkit.SetFunction.linear(g)
    assert f([1, 3]) == 4.5
    assert f.mask(0b011) == -0.5


def test_pawlik_eps_and_delta():
    f = modkit.pawlik(3)
    assert modkit.modularity_eps(f, "weak")["eps"] == 1.0
    assert modkit.modularity_eps(f, "strong")["eps"] == 2.0
    _, delta = modkit.closest_linear(f)
    assert abs(delta - 0.75) < 1e-9


def test_four_item_witness():
    res = modkit.modularity_eps(modkit.four_item_worstcase(), "strong")
    assert res["eps"] == 2.0
    s, t, value = res["witness"]
    assert abs(value) == 2.0 and s and t


def test_learn_noiseless():
    g = modkit.random_linear(16, 5)
    h, queries = modkit.learn_hadamard(modkit.SetFunction.linear(g))
    assert queries <= 33
    assert abs(h.c0 - g.c0) < 1e-9
    assert max(abs(a - b) for a, b in zip(h.coeffs, g.coeffs)) < 1e-9


def test_python_oracle_under_threads():
    f = modkit.SetFunction.oracle(6, lambda items: float(len(items) ** 2))
    res = modkit.modularity_eps(f, "weak")
    # |S|^2 + |T|^2 - (|S|+|T|)^2 = -2|S||T|, largest at |S| = |T| = 3.
    assert res["eps"] == 18.0


def test_bounds_and_rate():
    b = modkit.bound_suite()
    assert abs(b["kr_a"] - 44.5) < 1e-9
    assert b["ks_final"] < 12.65
    assert abs(modkit.union_bound_rate(0.25, 5, 0.5) - 27 / 32) < 1e-9


def test_km20_sampled():
    rep = modkit.verify_construction("km20", samples=2000, pair_samples=20000)
    assert rep["all_pass"]
    assert rep["max_sampled_violation"] <= 2


def test_expander_and_capacity_error():
    edges, ok = modkit.expander_check(6, 5, 0.5, 0.25, 1)
    assert len(edges) == 60
    assert isinstance(ok, bool)
    try:
        modkit.closest_linear(modkit.SetFunction.linear(modkit.random_linear(40, 1)))
    except ValueError as e:
        assert "n <=" in str(e)
    else:
        raise AssertionError("expected a capacity error")
    assert math.isfinite(modkit.kalton_search(3, 50, 2)[0])
