import math

import numpy as np
import pytest
import torch
from torch import nn

from gesturegan.errors import ConfigError, DataFormatError, PhaseOrderError
from gesturegan.models import (
    AutoNormMeta,
    DganConfig,
    auto_denormalize,
    auto_normalize,
    build_dgan,
    generate_dgan,
    generate_sequence,
    gradient_penalty,
    train_dgan,
)
from gesturegan.pipeline.datasets import WindowedDataset
from gesturegan.pipeline.scaling import DEGENERATE_EPSILON
from tests.conftest import make_dataset


def tiny_cfg(**kw):
    base = dict(
        seq_len=12,
        sample_len=4,
        batch_size=4,
        epochs=2,
        latent_dim=4,
        generator_hidden=8,
        critic_hidden=8,
        critic_depth=2,
        attribute_hidden=8,
        attribute_depth=2,
        seed=0,
    )
    base.update(kw)
    return DganConfig(**base)


def tiny_ds(n=8, cfg=None, seed=0):
    cfg = cfg or tiny_cfg()
    return make_dataset(
        n=n, window=cfg.seq_len, features=cfg.measurement_cols, seed=seed, scaled=True
    )


class TestConfig:
    def test_defaults_match_reference_setup(self):
        cfg = DganConfig()
        assert cfg.learning_rate == 1e-3
        assert cfg.betas == (0.3, 0.9)
        assert cfg.gradient_penalty_weight == 3.0
        assert cfg.sample_len == 10
        assert cfg.rounds_per_batch == 2
        assert cfg.n_passes == 10

    def test_sequence_must_divide_into_passes(self):
        with pytest.raises(ConfigError, match="divisible"):
            tiny_cfg(seq_len=12, sample_len=5)

    def test_pass_count(self):
        assert tiny_cfg(seq_len=12, sample_len=4).n_passes == 3
        assert tiny_cfg(seq_len=12, sample_len=12).n_passes == 1

    def test_betas_validated(self):
        with pytest.raises(ConfigError, match="betas"):
            tiny_cfg(betas=(1.0, 0.9))

    def test_packing_must_be_positive(self):
        with pytest.raises(ConfigError):
            tiny_cfg(packing_degree=0)

    def test_external_attributes_unsupported(self):
        with pytest.raises(ConfigError, match="attributes"):
            tiny_cfg(attribute_cols=("subject",))


class TestAutoNormalization:
    def test_full_span_maps_to_unit_interval_endpoints(self):
        data = np.linspace(0.2, 0.8, 10)[None, :, None] * np.ones((1, 10, 3))
        ds = WindowedDataset(data=data, labels=np.array(["a"], dtype=object), scaled=True)
        normed, metas = auto_normalize(ds)
        assert normed.data.min() == pytest.approx(-1.0, abs=1e-12)
        assert normed.data.max() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(metas[0].midpoint, 0.5, atol=1e-12)
        np.testing.assert_allclose(metas[0].half_range, 0.3, atol=1e-12)

    def test_scale_is_per_instance_and_per_feature(self):
        rng = np.random.default_rng(0)
        data = rng.uniform(0.1, 0.9, size=(4, 20, 3))
        data[2, :, 1] *= 0.1  # one instance, one narrow feature
        ds = WindowedDataset(data=data, labels=np.array(["a"] * 4, dtype=object), scaled=True)
        _, metas = auto_normalize(ds)
        for i in range(4):
            np.testing.assert_allclose(
                metas[i].midpoint, (data[i].max(0) + data[i].min(0)) / 2, atol=1e-12
            )
            np.testing.assert_allclose(
                metas[i].half_range, (data[i].max(0) - data[i].min(0)) / 2, atol=1e-12
            )

    def test_constant_feature_widened_not_divided_by_zero(self):
        data = np.full((2, 6, 2), 0.5)
        ds = WindowedDataset(data=data, labels=np.array(["a", "a"], dtype=object), scaled=True)
        normed, metas = auto_normalize(ds)
        assert np.all(normed.data == 0.0)
        assert np.all(metas[0].half_range == DEGENERATE_EPSILON)

    def test_round_trip_is_exact(self):
        ds = make_dataset(n=6, window=15, features=4, seed=3, scaled=True)
        normed, metas = auto_normalize(ds)
        back = auto_denormalize(normed, metas)
        np.testing.assert_allclose(back.data, ds.data, atol=1e-9)
        np.testing.assert_array_equal(back.labels, ds.labels)

    def test_meta_count_mismatch_rejected(self):
        ds = make_dataset(n=4, window=10, features=2, scaled=True)
        normed, metas = auto_normalize(ds)
        with pytest.raises(DataFormatError, match="metadata"):
            auto_denormalize(normed, metas[:-1])

    def test_empty_dataset_rejected(self):
        ds = WindowedDataset(
            data=np.zeros((0, 5, 2)), labels=np.array([], dtype=object), scaled=True
        )
        with pytest.raises(DataFormatError, match="empty"):
            auto_normalize(ds)


class TestAutoNormMeta:
    def test_attribute_vector_round_trip(self):
        meta = AutoNormMeta(midpoint=np.array([0.4, 0.6]), half_range=np.array([0.1, 0.3]))
        attrs = meta.to_attributes()
        assert attrs.shape == (4,)
        back = AutoNormMeta.from_attributes(attrs)
        np.testing.assert_array_equal(back.midpoint, meta.midpoint)
        np.testing.assert_array_equal(back.half_range, meta.half_range)

    def test_bounds_derived_from_midpoint_and_half_range(self):
        meta = AutoNormMeta(midpoint=np.array([0.5]), half_range=np.array([0.2]))
        assert meta.minimum[0] == pytest.approx(0.3)
        assert meta.maximum[0] == pytest.approx(0.7)

    def test_nonpositive_half_range_rejected(self):
        with pytest.raises(ValueError):
            AutoNormMeta(midpoint=np.array([0.5]), half_range=np.array([0.0]))

    def test_decoding_widens_collapsed_half_range(self):
        back = AutoNormMeta.from_attributes(np.array([0.5, 0.0]))
        assert back.half_range[0] == DEGENERATE_EPSILON


class TestGradientPenalty:
    def test_sum_critic_closed_form(self):
        # critic = sum of all inputs has gradient all-ones, so the norm is
        # sqrt(100 * 6) for every interpolate and the penalty is exactly
        # (sqrt(600) - 1)^2 regardless of the random mixing weights
        def critic(t):
            return t.reshape(len(t), -1).sum(dim=1, keepdim=True)

        real = torch.rand(5, 100, 6, dtype=torch.float64)
        fake = torch.rand(5, 100, 6, dtype=torch.float64)
        got = float(gradient_penalty(critic, real, fake, seed=0))
        want = (math.sqrt(600.0) - 1.0) ** 2
        assert got == pytest.approx(want, abs=1e-9)
        assert got == pytest.approx(552.0102051443364, abs=1e-6)

    def test_unit_gradient_critic_pays_nothing(self):
        w = torch.full((24,), 1.0 / math.sqrt(24.0), dtype=torch.float64)

        def critic(t):
            return t.reshape(len(t), -1) @ w

        real = torch.rand(4, 6, 4, dtype=torch.float64)
        fake = torch.rand(4, 6, 4, dtype=torch.float64)
        assert float(gradient_penalty(critic, real, fake, seed=1)) <= 1e-12

    def test_matches_finite_difference_oracle(self):
        # identical real and fake batches pin the interpolates, so the
        # critic gradient can be estimated coordinate by coordinate
        torch.manual_seed(0)
        critic = nn.Sequential(nn.Linear(5, 8), nn.Tanh(), nn.Linear(8, 1)).double()
        x = torch.rand(3, 5, dtype=torch.float64)
        got = float(gradient_penalty(critic, x, x.clone(), seed=2).detach())

        eps = 1e-6
        penalties = []
        for i in range(3):
            grad = np.zeros(5)
            for j in range(5):
                up = x.clone()
                up[i, j] += eps
                down = x.clone()
                down[i, j] -= eps
                with torch.no_grad():
                    grad[j] = (
                        float(critic(up).sum()) - float(critic(down).sum())
                    ) / (2 * eps)
            penalties.append((np.linalg.norm(grad) - 1.0) ** 2)
        want = float(np.mean(penalties))
        assert abs(got - want) <= 1e-4 * max(1.0, abs(want))

    def test_seed_controls_mixing(self):
        def critic(t):
            return (t.reshape(len(t), -1) ** 2).sum(dim=1, keepdim=True)

        real = torch.zeros(4, 3, 2, dtype=torch.float64)
        fake = torch.ones(4, 3, 2, dtype=torch.float64)
        a = float(gradient_penalty(critic, real, fake, seed=0).detach())
        b = float(gradient_penalty(critic, real, fake, seed=0).detach())
        c = float(gradient_penalty(critic, real, fake, seed=3).detach())
        assert a == b
        assert a != c

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            gradient_penalty(lambda t: t.sum(1), torch.zeros(2, 3), torch.zeros(3, 3))


class TestGenerators:
    def test_sequence_assembled_from_fixed_size_chunks(self):
        for sample_len in (2, 4, 6, 12):
            cfg = tiny_cfg(seq_len=12, sample_len=sample_len)
            m = build_dgan(cfg)
            noise = torch.rand(cfg.n_passes, cfg.latent_dim)
            meta = AutoNormMeta(midpoint=np.full(6, 0.5), half_range=np.full(6, 0.5))
            out = generate_sequence(m, noise, meta)
            assert out.shape == (12, 6)

    def test_single_pass_boundary(self):
        cfg = tiny_cfg(seq_len=12, sample_len=12)
        m = build_dgan(cfg)
        noise = torch.rand(1, cfg.latent_dim)
        meta = AutoNormMeta(midpoint=np.full(6, 0.4), half_range=np.full(6, 0.1))
        out = generate_sequence(m, noise, meta)
        assert out.shape == (12, 6)

    def test_wrong_noise_shape_rejected(self):
        cfg = tiny_cfg()
        m = build_dgan(cfg)
        meta = AutoNormMeta(midpoint=np.full(6, 0.5), half_range=np.full(6, 0.5))
        with pytest.raises(ValueError, match="noise"):
            generate_sequence(m, torch.rand(cfg.n_passes + 1, cfg.latent_dim), meta)

    def test_output_confined_to_decoded_range(self):
        # the emitter is tanh-bounded, so decoding cannot escape
        # [midpoint - half_range, midpoint + half_range]
        cfg = tiny_cfg()
        m = build_dgan(cfg)
        meta = AutoNormMeta(midpoint=np.full(6, 0.6), half_range=np.full(6, 0.25))
        out = generate_sequence(m, torch.rand(cfg.n_passes, cfg.latent_dim), meta)
        assert out.min() >= 0.35 - 1e-12
        assert out.max() <= 0.85 + 1e-12

    def test_same_noise_same_sequence(self):
        cfg = tiny_cfg()
        m = build_dgan(cfg)
        noise = torch.rand(cfg.n_passes, cfg.latent_dim)
        meta = AutoNormMeta(midpoint=np.full(6, 0.5), half_range=np.full(6, 0.5))
        np.testing.assert_array_equal(
            generate_sequence(m, noise, meta), generate_sequence(m, noise, meta)
        )

    def test_attribute_generator_emits_valid_scales(self):
        cfg = tiny_cfg()
        m = build_dgan(cfg)
        with torch.no_grad():
            attrs = m.attribute_generator(torch.rand(16, cfg.latent_dim)).numpy()
        f = cfg.measurement_cols
        assert attrs.shape == (16, 2 * f)
        assert np.all(attrs[:, :f] > 0.0) and np.all(attrs[:, :f] < 1.0)
        assert np.all(attrs[:, f:] > 0.0) and np.all(attrs[:, f:] < 0.5)

    def test_critic_scores_instances_independently(self):
        cfg = tiny_cfg()
        m = build_dgan(cfg)
        flat = torch.rand(6, cfg.seq_len * 6 + 12)
        perm = torch.tensor([3, 1, 5, 0, 2, 4])
        with torch.no_grad():
            direct = m.critic(flat)[perm]
            permuted = m.critic(flat[perm])
        np.testing.assert_allclose(direct.numpy(), permuted.numpy(), atol=1e-9)


class TestTraining:
    def test_history_covers_every_update(self):
        cfg = tiny_cfg()
        ds = tiny_ds(n=8, cfg=cfg)
        m = build_dgan(cfg)
        hist = train_dgan(m, ds)
        n_updates = cfg.epochs * (8 // cfg.batch_size) * cfg.rounds_per_batch
        assert set(hist) == {"critic", "aux_critic", "generator"}
        assert all(len(v) == n_updates for v in hist.values())
        assert m.trained
        assert m.class_label == "01a"

    def test_packed_batches_rejected(self):
        cfg = tiny_cfg(packing_degree=2)
        m = build_dgan(cfg)
        with pytest.raises(ConfigError, match="packing"):
            train_dgan(m, tiny_ds(cfg=cfg))

    def test_data_must_be_scaled(self):
        cfg = tiny_cfg()
        ds = make_dataset(n=6, window=cfg.seq_len, features=6, scaled=False)
        with pytest.raises(DataFormatError, match="scaled"):
            train_dgan(build_dgan(cfg), ds)

    def test_window_shape_must_match_config(self):
        cfg = tiny_cfg()
        ds = make_dataset(n=6, window=cfg.seq_len * 2, features=6, scaled=True)
        with pytest.raises(DataFormatError, match="match"):
            train_dgan(build_dgan(cfg), ds)

    def test_training_is_seed_deterministic(self):
        outs = []
        for _ in range(2):
            cfg = tiny_cfg(seed=9)
            m = build_dgan(cfg)
            train_dgan(m, tiny_ds(cfg=cfg, seed=4), epochs=2)
            outs.append(generate_dgan(m, 3, seed=1).data)
        np.testing.assert_array_equal(outs[0], outs[1])

    def test_fixed_scale_mode_trains_and_samples(self):
        cfg = tiny_cfg(auto_normalize=False)
        m = build_dgan(cfg)
        train_dgan(m, tiny_ds(cfg=cfg), epochs=1)
        out = generate_dgan(m, 4, seed=0)
        assert out.data.shape == (4, cfg.seq_len, 6)
        assert out.data.min() >= 0.0 and out.data.max() <= 1.0


class TestGenerate:
    @pytest.fixture(scope="class")
    def trained(self):
        cfg = tiny_cfg()
        m = build_dgan(cfg)
        train_dgan(m, tiny_ds(cfg=cfg), epochs=1)
        return m

    def test_untrained_model_refuses(self):
        m = build_dgan(tiny_cfg())
        with pytest.raises(PhaseOrderError):
            generate_dgan(m, 2)

    def test_output_contract(self, trained):
        out = generate_dgan(trained, 5, seed=3)
        cfg = trained.config
        assert out.data.shape == (5, cfg.seq_len, cfg.measurement_cols)
        assert out.scaled
        assert out.data.min() >= 0.0 and out.data.max() <= 1.0
        assert set(out.labels) == {trained.class_label}

    def test_zero_request_yields_empty_dataset(self, trained):
        out = generate_dgan(trained, 0)
        assert out.n_instances == 0

    def test_negative_request_rejected(self, trained):
        with pytest.raises(ValueError):
            generate_dgan(trained, -1)

    def test_seeds_separate_samples(self, trained):
        a = generate_dgan(trained, 4, seed=0)
        b = generate_dgan(trained, 4, seed=0)
        c = generate_dgan(trained, 4, seed=1)
        np.testing.assert_array_equal(a.data, b.data)
        assert not np.array_equal(a.data, c.data)

    def test_instances_carry_distinct_scales(self, trained):
        # sampled attributes differ per instance, so per-instance spans
        # should not all collapse to one value
        out = generate_dgan(trained, 12, seed=5)
        spans = out.data.max(axis=1) - out.data.min(axis=1)
        assert np.std(spans, axis=0).max() > 0.0
