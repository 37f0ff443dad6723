"""Stage-dependent composite generator objective and its per-term report."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import torch

from ..errors import ConfigError, TrainingError


@dataclass(frozen=True)
class LossWeights:
    """Term weights for the composite generator loss.

    The perceptual pair enters as lambda_gram * (alpha*content + beta*style);
    the histogram term is gated off in stage 1.
    """

    lambda_adv: float = 0.1
    lambda_gram: float = 1.0
    lambda_l1: float = 1.0
    lambda_hist: float = 1.0
    alpha: float = 1.0
    beta: float = 250.0


@dataclass
class LossReport:
    """Raw per-term scalars plus the weighted total for one step."""

    stage: int
    adversarial: float
    content: float
    style: float
    l1: float
    histogram: float
    total: float

    def to_dict(self) -> dict:
        return asdict(self)


def _scalar(value, name: str) -> float:
    out = float(value.detach() if isinstance(value, torch.Tensor) else value)
    if not math.isfinite(out):
        raise TrainingError(f"non-finite loss term: {name} = {out}")
    return out


def generator_total(adversarial, content, style, l1, histogram=None, *,
                    stage: int, weights: LossWeights = LossWeights()):
    """Weighted sum of the generator's loss terms for the given stage.

    Stage 1 excludes the histogram term entirely; passing one (or a nonzero
    histogram weight along with a term) in stage 1 is a configuration error.
    Returns ``(total, LossReport)`` where total keeps the autograd graph.
    """
    if stage not in (1, 2):
        raise ConfigError(f"stage must be 1 or 2, got {stage}")
    if stage == 1 and histogram is not None:
        raise ConfigError("histogram loss is not employed in training stage 1")
    if stage == 2 and histogram is None:
        raise ConfigError("stage 2 requires a histogram term")

    terms = {"adversarial": adversarial, "content": content, "style": style, "l1": l1}
    if histogram is not None:
        terms["histogram"] = histogram
    raw = {name: _scalar(value, name) for name, value in terms.items()}

    total = (
        weights.lambda_adv * adversarial
        + weights.lambda_gram * (weights.alpha * content + weights.beta * style)
        + weights.lambda_l1 * l1
    )
    if stage == 2:
        total = total + weights.lambda_hist * histogram

    report = LossReport(
        stage=stage,
        adversarial=raw["adversarial"],
        content=raw["content"],
        style=raw["style"],
        l1=raw["l1"],
        histogram=raw.get("histogram", 0.0),
        total=_scalar(total, "total"),
    )
    return total, report
