# Runtime configuration package
from semimatch.config.loader import RuntimeConfig, load_runtime_config

__all__ = ["RuntimeConfig", "load_runtime_config"]
