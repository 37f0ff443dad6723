from .metrics import lpips, mse, psnr, ssim
from .report import (
    BundleModel,
    ConstantFillModel,
    IdentityModel,
    MetricsReport,
    MetricsRow,
    evaluate_set,
)

__all__ = [
    "BundleModel",
    "ConstantFillModel",
    "IdentityModel",
    "MetricsReport",
    "MetricsRow",
    "evaluate_set",
    "lpips",
    "mse",
    "psnr",
    "ssim",
]
