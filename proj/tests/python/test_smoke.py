"""Smoke tests for the python bindings. Plain asserts, no test framework."""

import math

import numpy as np

import randpol


def test_elu():
    assert randpol.elu(0.0) == 0.0
    assert randpol.elu(2.5) == 2.5
    assert abs(randpol.elu(-1.0) - (math.exp(-1.0) - 1.0)) < 1e-15
    xs = np.array([-2.0, -0.5, 0.0, 3.0])
    out = randpol.elu(xs)
    assert out.shape == xs.shape
    assert np.all(out[2:] == xs[2:])


def test_basis_determinism():
    a = randpol.RandomBasis(seed=7, input_dim=8, hidden_widths=[32], feature_dim=16)
    b = randpol.RandomBasis(seed=7, input_dim=8, hidden_widths=[32], feature_dim=16)
    c = randpol.RandomBasis(seed=8, input_dim=8, hidden_widths=[32], feature_dim=16)
    assert a.checksum() == b.checksum()
    assert a.checksum() != c.checksum()
    assert a.feature_dim == 16
    assert a.param_count() == 8 * 32 + 32 + 32 * 16 + 16

    x = np.linspace(-1.0, 1.0, 8)
    fa = a.features(x)
    fb = b.features(x)
    assert fa.shape == (16,)
    assert np.array_equal(fa, fb)

    batch = a.features_batch(np.tile(x, (5, 1)))
    assert batch.shape == (5, 16)
    assert np.allclose(batch[3], fa)


def test_gae():
    rewards = np.array([1.0, 1.0, 1.0])
    values = np.array([0.5, 0.5, 0.5])
    adv, targets = randpol.gae(
        rewards, values, [False] * 3, [False] * 3, np.zeros(3),
        bootstrap=0.5, gamma=0.9, lam=0.8,
    )
    assert np.allclose(adv, [2.12648, 1.634, 0.95], atol=1e-12)
    assert np.allclose(targets, adv + values, atol=1e-12)

    # lam = 0 collapses to one-step TD residuals
    adv0, _ = randpol.gae(
        rewards, values, [False] * 3, [False] * 3, np.zeros(3),
        bootstrap=0.5, gamma=0.9, lam=0.0,
    )
    assert np.allclose(adv0, 1.0 + 0.9 * 0.5 - 0.5)


def test_gaussian():
    lp = randpol.gaussian_log_prob(np.zeros(1), np.zeros(1), np.zeros(1))
    assert abs(lp - (-0.5 * math.log(2 * math.pi))) < 1e-14
    ent = randpol.gaussian_entropy(np.zeros(1))
    assert abs(ent - 0.5 * math.log(2 * math.pi * math.e)) < 1e-14
    # doubling sigma adds log 2 per dimension
    assert abs(randpol.gaussian_entropy(np.log(2.0) * np.ones(3)) - (ent * 3 + 3 * math.log(2))) < 1e-12


def test_running_mean_std():
    rng = np.random.default_rng(0)
    data = rng.normal(size=(4096, 3)) * 2.5 + 1.0
    stats = randpol.RunningMeanStd(3)
    stats.update_batch(data)
    assert np.allclose(stats.mean, data.mean(axis=0), atol=1e-10)
    assert np.allclose(stats.variance, data.var(axis=0), atol=1e-10)
    assert stats.count == len(data)


def test_counts():
    trainable, total = randpol.actor_critic_counts(
        actor_obs_dim=45, critic_obs_dim=60, action_dim=12, feature_dim=400,
        hidden_widths=[500],
    )
    assert trainable == 5225
    assert total == 459525


def test_config_defaults():
    text = randpol.default_config_text("randpol", "velocity_track")
    assert "horizon = 50" in text
    assert "learning_rate = 3e-04" in text
    dense = randpol.default_config_text("dense_baseline", "velocity_track")
    assert "horizon = 24" in dense
    assert "learning_rate = 0.001" in dense


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok: {name}")
    print("python smoke tests passed")
