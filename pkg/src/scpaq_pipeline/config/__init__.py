"""
Configuration package for the SC-PAQ pipeline.

Import the settings instance from ``config.settings`` directly; the submodule
of the same name shadows any package-level attribute.
"""


def __getattr__(name):
    if name in ("Settings", "resolve_workers"):
        from .settings import Settings, resolve_workers
        return {"Settings": Settings, "resolve_workers": resolve_workers}[name]
    if name in ("get_logger", "setup_logging"):
        from .logging import get_logger, setup_logging
        return {"get_logger": get_logger, "setup_logging": setup_logging}[name]
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = ["Settings", "resolve_workers", "get_logger", "setup_logging"]
