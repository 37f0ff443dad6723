import numpy as np
import pytest
import torch
from hypothesis import given, settings
from hypothesis import strategies as st

from muralinpaint.errors import ConfigError, ShapeError, TrainingError
from muralinpaint.losses.adversarial import (
    adversarial_losses,
    discriminator_hinge,
    generator_hinge,
)
from muralinpaint.losses.histogram import (
    HistogramConfig,
    histogram_loss,
    histogram_match,
)
from muralinpaint.losses.perceptual import (
    IdentityExtractor,
    PerceptualConfig,
    RandomConvExtractor,
    Vgg19Extractor,
    content_loss,
    default_perceptual_config,
    gram_matrix,
    style_loss,
)
from muralinpaint.losses.pixel import pixel_l1
from muralinpaint.losses.total import LossWeights, generator_total

from .oracles import gram_loop, histogram_match_sort, style_layer_loop

torch.set_num_threads(1)


def _pixel_cfg(**kw):
    return PerceptualConfig(
        extractor=IdentityExtractor(),
        content_layers=("pixels",),
        style_layers=("pixels",),
        **kw,
    )


# ---------------------------------------------------------------- style


class TestGramAndStyle:
    def test_gram_matches_double_loop(self, rng):
        feats = rng.normal(size=(3, 4, 5))
        got = gram_matrix(torch.from_numpy(feats)).numpy()
        np.testing.assert_allclose(got, gram_loop(feats), atol=1e-10)

    def test_batched_gram_shape(self):
        assert gram_matrix(torch.randn(2, 4, 3, 3)).shape == (2, 4, 4)

    def test_style_loss_zero_on_identical_inputs(self):
        x = torch.rand(3, 6, 6) * 2 - 1
        assert style_loss(x, x.clone(), _pixel_cfg()).item() == 0.0

    def test_style_loss_matches_oracle(self, rng):
        a = rng.normal(size=(3, 5, 5))
        b = rng.normal(size=(3, 5, 5))
        got = style_loss(torch.from_numpy(a), torch.from_numpy(b), _pixel_cfg())
        np.testing.assert_allclose(got.item(), style_layer_loop(a, b), rtol=1e-10)

    def test_style_layer_weight_scales_linearly(self, rng):
        a = torch.from_numpy(rng.normal(size=(3, 5, 5)))
        b = torch.from_numpy(rng.normal(size=(3, 5, 5)))
        base = style_loss(a, b, _pixel_cfg())
        weighted = style_loss(a, b, _pixel_cfg(style_layer_weights={"pixels": 3.0}))
        np.testing.assert_allclose(weighted.item(), 3.0 * base.item(), rtol=1e-12)

    def test_batch_mean_semantics(self, rng):
        a = torch.from_numpy(rng.normal(size=(3, 5, 5)))
        b = torch.from_numpy(rng.normal(size=(3, 5, 5)))
        single = style_loss(a, b, _pixel_cfg())
        pair = style_loss(torch.stack([a, a]), torch.stack([b, b]), _pixel_cfg())
        np.testing.assert_allclose(pair.item(), single.item(), rtol=1e-12)

    def test_style_gradient_against_finite_differences(self, rng):
        a = torch.from_numpy(rng.normal(size=(2, 4, 4))).requires_grad_(True)
        b = torch.from_numpy(rng.normal(size=(2, 4, 4)))
        loss = style_loss(a, b, _pixel_cfg())
        loss.backward()
        eps = 1e-6
        for idx in [(0, 1, 2), (1, 3, 0)]:
            ap = a.detach().clone()
            ap[idx] += eps
            am = a.detach().clone()
            am[idx] -= eps
            fd = (style_loss(ap, b, _pixel_cfg()) - style_loss(am, b, _pixel_cfg())) / (2 * eps)
            np.testing.assert_allclose(a.grad[idx].item(), fd.item(), rtol=1e-4)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            style_loss(torch.zeros(3, 4, 4), torch.zeros(3, 5, 5), _pixel_cfg())


class TestContentLoss:
    def test_is_half_summed_squared_difference_in_pixel_space(self, rng):
        a = torch.from_numpy(rng.normal(size=(3, 6, 6)))
        b = torch.from_numpy(rng.normal(size=(3, 6, 6)))
        got = content_loss(a, b, _pixel_cfg())
        expect = 0.5 * (a - b).pow(2).sum()
        np.testing.assert_allclose(got.item(), expect.item(), rtol=1e-12)

    def test_zero_on_identical(self):
        x = torch.rand(3, 6, 6)
        assert content_loss(x, x.clone(), _pixel_cfg()).item() == 0.0


class TestExtractors:
    def test_random_extractor_is_seed_deterministic(self):
        a = RandomConvExtractor(seed=4)
        b = RandomConvExtractor(seed=4)
        x = torch.randn(1, 3, 16, 16)
        for la, lb in zip(a(x).values(), b(x).values()):
            assert torch.equal(la, lb)

    def test_random_extractor_is_frozen(self):
        ext = RandomConvExtractor()
        assert all(not p.requires_grad for p in ext.parameters())

    def test_random_extractor_layer_shapes(self):
        feats = RandomConvExtractor(width=8)(torch.randn(2, 3, 16, 16))
        assert feats["feat1"].shape == (2, 8, 16, 16)
        assert feats["feat2"].shape == (2, 16, 8, 8)
        assert feats["feat3"].shape == (2, 32, 4, 4)

    def test_vgg_without_weights_is_a_config_error(self):
        # pretrained weights cannot be fetched in this environment
        with pytest.raises(ConfigError):
            Vgg19Extractor()

    def test_default_config_adapts_layers_to_extractor(self):
        cfg = default_perceptual_config(RandomConvExtractor())
        assert cfg.content_layers == ("feat1", "feat2", "feat3")
        assert cfg.style_layers == ("feat1", "feat2", "feat3")

    def test_unknown_layer_rejected(self):
        with pytest.raises(ConfigError, match="relu9_9"):
            PerceptualConfig(extractor=IdentityExtractor(),
                             content_layers=("relu9_9",),
                             style_layers=("pixels",))


# ------------------------------------------------------------- histogram


def _hist_cfg(**kw):
    return HistogramConfig(extractor=IdentityExtractor(), layers=("pixels",), **kw)


class TestHistogramMatch:
    def test_matches_sort_oracle(self, rng):
        vals = rng.normal(size=40)
        ref = rng.normal(size=40)
        got = histogram_match(torch.from_numpy(vals), torch.from_numpy(ref))
        np.testing.assert_allclose(got.numpy(), histogram_match_sort(vals, ref))

    def test_stable_ties(self):
        vals = torch.tensor([1.0, 0.0, 1.0, 0.0])
        ref = torch.tensor([10.0, 20.0, 30.0, 40.0])
        got = histogram_match(vals, ref)
        # ties resolved in index order: the two zeros take ranks 0, 1
        torch.testing.assert_close(got, torch.tensor([30.0, 10.0, 40.0, 20.0]))

    @given(seed=st.integers(0, 10_000), n=st.integers(1, 64))
    @settings(max_examples=50, deadline=None)
    def test_result_is_permutation_of_reference(self, seed, n):
        rng = np.random.default_rng(seed)
        vals = torch.from_numpy(rng.normal(size=n))
        ref = torch.from_numpy(rng.normal(size=n))
        got = histogram_match(vals, ref)
        np.testing.assert_allclose(np.sort(got.numpy()), np.sort(ref.numpy()))

    def test_size_mismatch_and_empty_rejected(self):
        with pytest.raises(ShapeError):
            histogram_match(torch.zeros(3), torch.zeros(4))
        with pytest.raises(ShapeError):
            histogram_match(torch.zeros(0), torch.zeros(0))


class TestHistogramLoss:
    def test_zero_on_identical(self, rng):
        x = torch.from_numpy(rng.normal(size=(3, 6, 6)))
        assert histogram_loss(x, x.clone(), _hist_cfg()).item() == pytest.approx(0.0)

    def test_zero_on_channelwise_monotone_remap(self, rng):
        target = torch.from_numpy(rng.uniform(-1, 1, size=(3, 8, 8)))
        output = 0.5 * target + 0.2  # strictly increasing per channel
        assert histogram_loss(output, target, _hist_cfg()).item() == pytest.approx(0.0)
        output = target.pow(3)  # nonlinear but monotone
        assert histogram_loss(output, target, _hist_cfg()).item() == pytest.approx(0.0)

    def test_positive_on_rank_disagreement(self):
        target = torch.tensor([[[0.0, 1.0], [2.0, 3.0]]])
        output = torch.tensor([[[3.0, 2.0], [1.0, 0.0]]])
        assert histogram_loss(output, target, _hist_cfg()).item() > 0

    def test_gradient_against_finite_differences(self, rng):
        # distinct values keep ranks stable under the probe
        base = rng.permutation(36).astype(np.float64).reshape(1, 6, 6)
        target = rng.permutation(36).astype(np.float64).reshape(1, 6, 6) * 0.7
        out = torch.from_numpy(base.copy()).requires_grad_(True)
        tgt = torch.from_numpy(target)
        loss = histogram_loss(out, tgt, _hist_cfg())
        loss.backward()
        eps = 1e-5
        for idx in [(0, 2, 3), (0, 5, 1)]:
            p = torch.from_numpy(base.copy())
            p[idx] += eps
            m = torch.from_numpy(base.copy())
            m[idx] -= eps
            fd = (histogram_loss(p, tgt, _hist_cfg())
                  - histogram_loss(m, tgt, _hist_cfg())) / (2 * eps)
            np.testing.assert_allclose(out.grad[idx].item(), fd.item(), rtol=1e-4)

    def test_layer_weight_scales(self, rng):
        a = torch.from_numpy(rng.normal(size=(3, 5, 5)))
        b = torch.from_numpy(rng.normal(size=(3, 5, 5)))
        base = histogram_loss(a, b, _hist_cfg())
        scaled = histogram_loss(a, b, _hist_cfg(layer_weights={"pixels": 2.0}))
        np.testing.assert_allclose(scaled.item(), 2.0 * base.item(), rtol=1e-12)

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            _hist_cfg(bins=1)
        with pytest.raises(ConfigError):
            HistogramConfig(extractor=IdentityExtractor(), layers=("nope",))
        with pytest.raises(ConfigError):
            _hist_cfg(layer_weights={"pixels": -1.0})


# ----------------------------------------------------------------- pixel


class TestPixelLoss:
    def test_full_frame_is_mean_abs(self, rng):
        a = torch.from_numpy(rng.normal(size=(2, 3, 8, 8)))
        b = torch.from_numpy(rng.normal(size=(2, 3, 8, 8)))
        np.testing.assert_allclose(pixel_l1(a, b).item(),
                                   (a - b).abs().mean().item(), rtol=1e-12)

    def test_squared_variant(self, rng):
        a = torch.from_numpy(rng.normal(size=(3, 8, 8)))
        b = torch.from_numpy(rng.normal(size=(3, 8, 8)))
        np.testing.assert_allclose(pixel_l1(a, b, squared=True).item(),
                                   (a - b).pow(2).mean().item(), rtol=1e-12)

    def test_region_restriction(self):
        a = torch.zeros(1, 3, 4, 4)
        b = torch.ones(1, 3, 4, 4)
        region = torch.zeros(4, 4)
        region[0] = 1.0
        # errors outside the region are invisible
        b[:, :, 1:] = 99.0
        assert pixel_l1(a, b, region=region).item() == pytest.approx(1.0)

    def test_empty_region_returns_zero(self, caplog):
        a = torch.zeros(3, 4, 4)
        b = torch.ones(3, 4, 4)
        with caplog.at_level("WARNING"):
            out = pixel_l1(a, b, region=torch.zeros(4, 4))
        assert out.item() == 0.0
        assert "empty region" in caplog.text

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            pixel_l1(torch.zeros(3, 4, 4), torch.zeros(3, 5, 5))
        with pytest.raises(ShapeError):
            pixel_l1(torch.zeros(3, 4, 4), torch.zeros(3, 4, 4),
                     region=torch.zeros(8, 8))


# ----------------------------------------------------------- adversarial


class TestAdversarial:
    def test_uninformative_logits(self):
        zeros = torch.zeros(2, 1, 4, 4)
        g_term, d_term = adversarial_losses(zeros, zeros)
        assert g_term.item() == pytest.approx(0.0)
        assert d_term.item() == pytest.approx(2.0)

    def test_perfect_separation_saturates_d(self):
        real = torch.full((2, 1, 4, 4), 2.0)
        fake = torch.full((2, 1, 4, 4), -2.0)
        g_term, d_term = adversarial_losses(real, fake)
        assert d_term.item() == pytest.approx(0.0)
        assert g_term.item() == pytest.approx(2.0)

    def test_helpers_agree_with_pair(self, rng):
        real = torch.from_numpy(rng.normal(size=(2, 1, 3, 3)))
        fake = torch.from_numpy(rng.normal(size=(2, 1, 3, 3)))
        g_term, d_term = adversarial_losses(real, fake)
        assert generator_hinge(fake).item() == pytest.approx(g_term.item())
        assert discriminator_hinge(real, fake).item() == pytest.approx(d_term.item())

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            adversarial_losses(torch.zeros(1, 1, 4, 4), torch.zeros(1, 1, 3, 3))


# ----------------------------------------------------------------- total


class TestGeneratorTotal:
    def _terms(self):
        return dict(
            adversarial=torch.tensor(0.5),
            content=torch.tensor(2.0),
            style=torch.tensor(0.01),
            l1=torch.tensor(0.3),
        )

    def test_stage1_weighted_sum(self):
        w = LossWeights(lambda_adv=0.1, lambda_gram=1.0, lambda_l1=1.0,
                        alpha=1.0, beta=250.0)
        total, report = generator_total(**self._terms(), stage=1, weights=w)
        expect = 0.1 * 0.5 + (2.0 + 250.0 * 0.01) + 0.3
        assert total.item() == pytest.approx(expect)
        assert report.total == pytest.approx(expect)
        assert report.histogram == 0.0

    def test_stage2_adds_histogram(self):
        w = LossWeights(lambda_hist=2.0)
        total, report = generator_total(**self._terms(),
                                        histogram=torch.tensor(0.25),
                                        stage=2, weights=w)
        stage1_part = 0.1 * 0.5 + (2.0 + 250.0 * 0.01) + 0.3
        assert total.item() == pytest.approx(stage1_part + 2.0 * 0.25)
        assert report.histogram == pytest.approx(0.25)

    def test_stage1_with_histogram_is_config_error(self):
        with pytest.raises(ConfigError):
            generator_total(**self._terms(), histogram=torch.tensor(0.1), stage=1)

    def test_stage2_without_histogram_is_config_error(self):
        with pytest.raises(ConfigError):
            generator_total(**self._terms(), stage=2)

    def test_invalid_stage(self):
        with pytest.raises(ConfigError):
            generator_total(**self._terms(), stage=3)

    def test_nonfinite_term_names_the_culprit(self):
        terms = self._terms()
        terms["style"] = torch.tensor(float("nan"))
        with pytest.raises(TrainingError, match="style"):
            generator_total(**terms, stage=1)

    def test_total_keeps_autograd_graph(self):
        terms = {k: v.clone().requires_grad_(True) for k, v in self._terms().items()}
        total, _ = generator_total(**terms, stage=1)
        assert total.requires_grad
        total.backward()
        assert terms["l1"].grad is not None
