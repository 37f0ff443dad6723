from .app import InpaintJob, ModelRegistry, RegistryEntry, create_app

__all__ = ["InpaintJob", "ModelRegistry", "RegistryEntry", "create_app"]
