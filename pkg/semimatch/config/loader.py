import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import BaseModel, Field

DEFAULT_CONFIG_PATH = Path(__file__).with_name("runtime.yaml")

ENV_OVERRIDES = {
    "SEMIMATCH_SWEEP_BOUND": "sweep_bound",
    "SEMIMATCH_WORKERS": "workers",
    "SEMIMATCH_LOG_LEVEL": "log_level",
}


class RuntimeConfig(BaseModel):
    sweep_bound: int = Field(default=7, ge=1)
    workers: int = Field(default=0, ge=0)
    hall_full_sweep_limit: int = Field(default=22, ge=1)
    backtracking_limit: int = Field(default=300, ge=1)
    log_level: str = "INFO"


def load_runtime_config(config_path: Optional[Union[str, Path]] = None) -> RuntimeConfig:
    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
    if not path.is_file():
        raise RuntimeError(f"Config file not found: {path}")

    with open(path, "r", encoding="utf-8") as f:
        data: Dict[str, Any] = yaml.safe_load(f) or {}

    # Environment wins over the file
    for variable, key in ENV_OVERRIDES.items():
        value = os.getenv(variable)
        if value is not None:
            data[key] = value

    return RuntimeConfig.model_validate(data)
