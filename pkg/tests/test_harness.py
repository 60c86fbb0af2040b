import json
import math

import numpy as np
import pytest

from gueflux import harness as H


def small_cfg(**kw):
    base = dict(n=16, replicas=60, kmax=4, seed=3, grid=(-0.5, 0.0, 0.5))
    base.update(kw)
    return H.ExperimentConfig(**base)


def test_smoke_two_replicas():
    s = H.run_ensemble(H.ExperimentConfig(n=4, replicas=2, kmax=3, seed=1))
    assert s.stats["count"] == 2
    assert np.all(np.isfinite(s.stats["coeff_cov"]))


def test_deterministic_json():
    cfg = small_cfg()
    a = H.run_ensemble(cfg).to_json()
    b = H.run_ensemble(cfg).to_json()
    assert a == b
    d = json.loads(a)
    assert d["schema_version"] == H.SCHEMA_VERSION and d["master_seed"] == 3


def test_merge_invariance():
    cfg = small_cfg()
    whole = H.simulate_batch(cfg, 0, cfg.replicas)
    parts = [H.simulate_batch(cfg, a, b) for a, b in [(40, 60), (0, 7), (7, 40)]]
    merged = H.ReplicaBatch.merge(parts)
    for name in ("index", "coeffs", "linstats", "grid_values", "deviations"):
        np.testing.assert_array_equal(getattr(merged, name), getattr(whole, name))
    sa = H.summarize(whole, cfg)
    sb = H.summarize(merged, cfg)
    assert json.dumps(sa) == json.dumps(sb)
    with pytest.raises(ValueError):
        H.ReplicaBatch.merge([parts[0], parts[0]])


def test_worker_count_does_not_matter():
    one = H.run_ensemble(small_cfg(threads=1)).to_json()
    two = H.run_ensemble(small_cfg(threads=2)).to_json()
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "config"}
    assert strip(one) == strip(two)


def test_config_validation():
    with pytest.raises(ValueError):
        H.ExperimentConfig(replicas=1)
    with pytest.raises(ValueError):
        H.ExperimentConfig(grid=(0.5, 0.0))
    with pytest.raises(ValueError):
        H.ExperimentConfig(grid=(0.0, 1.0))
    with pytest.raises(ValueError):
        H.ExperimentConfig(sampler="goe")
    with pytest.raises(ValueError):
        H.ExperimentConfig.from_dict({"n": 8, "colour": 1})
    cfg = H.ExperimentConfig.from_dict({"n": 8, "bands": {"coeff_corr_max": 0.2}})
    assert cfg.bands["coeff_corr_max"] == 0.2 and cfg.bands["ks_level"] == 0.01
    assert H.ExperimentConfig.from_dict(cfg.to_dict()).to_dict() == cfg.to_dict()


def test_summary_shapes_and_psd():
    cfg = small_cfg(replicas=200)
    st = H.run_ensemble(cfg).stats
    cov = np.asarray(st["coeff_cov"])
    np.testing.assert_allclose(cov, cov.T)
    assert np.linalg.eigvalsh(cov).min() > -1e-12
    assert len(st["ks_pvalue"]) == cfg.kmax + 1
    assert [r["degree"] for r in st["linear_statistics"]] == [1, 2, 3]
    assert [(r["x"], r["y"]) for r in st["kernel_table"]] == [(-0.5, 0.0), (-0.5, 0.5), (0.0, 0.5)]


def test_standard_error_scaling():
    cfg = small_cfg(replicas=4000, kmax=2, grid=(), degrees=())
    b = H.simulate(cfg)
    ses = [H.cov_with_se(b.coeffs[:m, 0], b.coeffs[:m, 1])[1] for m in (1000, 4000)]
    assert 0.4 <= ses[1] / ses[0] <= 0.6


def test_variance_from_persisted_csv(tmp_path):
    cfg = small_cfg()
    s = H.run_ensemble(cfg)
    path = tmp_path / "coeffs.csv"
    with open(path, "w") as fh:
        fh.write("replica,k,s_k\n")
        for r, row in enumerate(s.batch.coeffs):
            for k, v in enumerate(row):
                fh.write("%d,%d,%.17g\n" % (r, k, v))
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    back = np.zeros_like(s.batch.coeffs)
    back[data[:, 0].astype(int), data[:, 1].astype(int)] = data[:, 2]
    var = np.var(np.pi * back, axis=0, ddof=1)
    np.testing.assert_allclose(var, s.stats["coeff_var"], rtol=1e-12)


def test_trace_variance():
    v, se = H.trace_variance(12, 4, 20000)
    assert abs(v - 0.25) <= 3 * se


def test_johansson_check():
    cfg = small_cfg(n=64, replicas=400)
    rec = H.johansson_check(cfg, 2)
    assert rec["theory_var"] == 0.5 and rec["empirical_var"] > 0
    with pytest.raises(ValueError):
        H.johansson_check(cfg, 0)


def test_rigidity_profile_small():
    cfg = small_cfg(ladder=(16, 32, 64, 128), ladder_replicas=150)
    rig = H.rigidity_profile(cfg)
    assert len(rig["rows"]) == 4
    assert all(r["bulk_var"] > 0 and math.isfinite(r["edge_var"]) for r in rig["rows"])
    assert rig["slope"] < 0
    with pytest.raises(ValueError):
        H.rigidity_profile(small_cfg(ladder=(16, 32)))


def test_kernel_comparison_rows():
    cfg = small_cfg(n=64, replicas=300)
    rows = H.kernel_comparison(cfg, pairs=[(0.0, 0.5), (0.5, 0.0)])
    assert rows[0]["empirical_cov"] == rows[1]["empirical_cov"]
    assert rows[0]["theory_cov"] == rows[1]["theory_cov"]
    with pytest.raises(ValueError):
        H.kernel_comparison(cfg, pairs=[(0.0, 0.1)])


def test_evaluate_suites_uses_config_bands():
    cfg = small_cfg(replicas=100)
    s = H.run_ensemble(cfg)
    loose = H.ExperimentConfig.from_dict({**cfg.to_dict(), "bands": {
        "coeff_var_ratio": [0, 100], "coeff_corr_max": 1.01, "ks_level": 0.0,
        "johansson_rel": 100.0, "kernel_ratio": [-100, 100]}})
    suites = H.evaluate_suites(s, loose)
    assert all(v["pass"] for v in suites.values())
    tight = H.ExperimentConfig.from_dict({**cfg.to_dict(), "bands": {"coeff_var_ratio": [5, 6]}})
    assert not H.evaluate_suites(s, tight)["coefficient_variance"]["pass"]


def test_proximity_distances_shape():
    d = H.proximity_distances(32, 1, 10, kmax=6)
    assert d.shape == (10,) and np.all(d >= 0)
