"""Command-line entry points: prepare, fixtures, train, eval, inpaint, serve."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from .data import fixtures as data_fixtures
from .data import io as data_io
from .data.manifest import DatasetManifest, build_manifest
from .training.config import load_train_config


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose: bool):
    """Line-drawing guided two-stage mural inpainting toolkit."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)


@main.command()
@click.option("--root", type=click.Path(exists=True), required=True,
              help="Dataset root with images/ and lines/.")
@click.option("--val-fraction", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None,
              help="Manifest path; defaults to <root>/manifest.json.")
def prepare(root, val_fraction, seed, out):
    """Pair images with line drawings and write a dataset manifest."""
    manifest = build_manifest(root, (1.0 - val_fraction, val_fraction), seed=seed)
    out = Path(out) if out else Path(root) / "manifest.json"
    manifest.save(out)
    click.echo(f"wrote {out} ({manifest.counts}, {len(manifest.rejected)} rejected)")


@main.command()
@click.option("--n", type=int, default=8, show_default=True)
@click.option("--size", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--root", type=click.Path(), required=True)
def fixtures(n, size, seed, root):
    """Generate a synthetic mural fixture set with exact line drawings."""
    manifest = data_fixtures.make_fixture_set(n, size, seed, root)
    click.echo(f"wrote {n} fixtures under {root} ({manifest.counts})")


@main.command()
@click.option("--manifest", "manifest_path", type=click.Path(exists=True), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="YAML training config; flags below override file values.")
@click.option("--out", type=click.Path(), required=True, help="Output directory.")
@click.option("--seed", type=int, default=None)
@click.option("--image-size", type=int, default=None)
@click.option("--base-channels", type=int, default=None)
@click.option("--lr-g", type=float, default=None)
@click.option("--lr-d", type=float, default=None)
@click.option("--stage1-epochs", type=int, default=None)
@click.option("--stage2-epochs", type=int, default=None)
@click.option("--stage1-batch", type=int, default=None)
@click.option("--stage2-batch", type=int, default=None)
@click.option("--extractor", type=click.Choice(["auto", "vgg19", "random", "identity"]),
              default=None)
@click.option("--resume", type=click.Path(exists=True), default=None,
              help="Checkpoint to resume from.")
def train(manifest_path, config_path, out, seed, image_size, base_channels,
          lr_g, lr_d, stage1_epochs, stage2_epochs, stage1_batch, stage2_batch,
          extractor, resume):
    """Run the two-stage training schedule."""
    from .training.loop import Trainer

    overrides = {
        "seed": seed,
        "image_size": image_size,
        "base_channels": base_channels,
        "lr_g": lr_g,
        "lr_d": lr_d,
        "stage1.epochs": stage1_epochs,
        "stage2.epochs": stage2_epochs,
        "stage1.batch": stage1_batch,
        "stage2.batch": stage2_batch,
        "extractor": extractor,
    }
    cfg = load_train_config(config_path, overrides)
    trainer = Trainer(DatasetManifest.load(manifest_path), cfg, out)
    if resume:
        trainer.resume(resume)
    bundle = trainer.train()
    click.echo(f"training done; final checkpoint in {out} "
               f"(fingerprint {bundle.fingerprint})")


@main.command(name="eval")
@click.option("--manifest", "manifest_path", type=click.Path(exists=True), required=True)
@click.option("--checkpoint", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True, help="Report directory.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bins", type=str, default="10,20,30,40,50", show_default=True)
def evaluate(manifest_path, checkpoint, out, seed, bins):
    """Evaluate a checkpoint over the validation split, binned by mask ratio."""
    from .evaluation.report import evaluate_set
    from .models.bundle import ModelBundle

    mask_bins = tuple(int(b) for b in bins.split(","))
    bundle = ModelBundle.load(checkpoint)
    report = evaluate_set(bundle, DatasetManifest.load(manifest_path),
                          mask_bins=mask_bins, seed=seed)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    report.write_csv(out / "metrics.csv")
    report.write_summary(out / "summary.json")
    report.write_plot_data(out / "ratio_curves.csv")
    click.echo(f"overall: {report.overall}")


@main.command()
@click.option("--image", type=click.Path(exists=True), required=True)
@click.option("--mask", type=click.Path(exists=True), required=True)
@click.option("--line", type=click.Path(exists=True), required=True)
@click.option("--checkpoint", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
def inpaint(image, mask, line, checkpoint, out):
    """Inpaint a single image and write the composited result."""
    from .models.bundle import ModelBundle
    from .models.pipeline import inpaint_image

    bundle = ModelBundle.load(checkpoint).eval_mode()
    result = inpaint_image(
        bundle,
        data_io.load_image(image),
        data_io.load_line(line),
        data_io.load_mask(mask),
    )
    data_io.save_image(out, result)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", type=str, default="127.0.0.1", show_default=True)
@click.option("--checkpoint", type=click.Path(exists=True), multiple=True,
              help="Checkpoint(s) to register and load; name = file stem.")
def serve(port, host, checkpoint):
    """Start the inpainting job service."""
    import uvicorn

    from .service.app import ModelRegistry, create_app

    registry = ModelRegistry()
    for path in checkpoint:
        name = Path(path).stem
        registry.register(name, path)
        registry.load(name)
    uvicorn.run(create_app(registry), host=host, port=port)


if __name__ == "__main__":
    main()
