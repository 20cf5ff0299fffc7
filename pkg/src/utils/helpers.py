import logging
import os
import re
from math import gcd
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent.parent / 'configs' / 'config.yaml'
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

_PLACEHOLDER = re.compile(r'\$\{(\w+)\}')


def _expand(value: Any) -> Any:
    if isinstance(value, str):
        return _PLACEHOLDER.sub(lambda m: os.environ.get(m.group(1), m.group(0)), value)
    if isinstance(value, dict):
        return {k: _expand(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_expand(v) for v in value]
    return value


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load the YAML config, expanding ${VAR} placeholders from the environment."""
    load_dotenv()
    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
    with open(path, 'r') as f:
        config = _expand(yaml.safe_load(f) or {})

    threads = os.environ.get('ORBIWEIGHT_THREADS')
    if threads:
        try:
            cap = int(threads)
        except ValueError:
            logger.warning(f"Ignoring non-integer ORBIWEIGHT_THREADS={threads!r}")
        else:
            if cap > 0:
                sweeps = config.setdefault('sweeps', {})
                sweeps['max_workers'] = min(sweeps.get('max_workers', cap), cap)
    return config


def setup_logging(config: Dict[str, Any], level: Optional[str] = None) -> None:
    log_config = config.get('logging', {})
    level_name = (level or log_config.get('level', 'INFO')).upper()
    logging.basicConfig(level=getattr(logging, level_name, logging.INFO),
                        format=log_config.get('format', LOG_FORMAT), force=True)


def gcd_all(values: Iterable[int]) -> int:
    result = 0
    for v in values:
        result = gcd(result, v)
    return result


