import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List

import pandas as pd

from src.groups.presentations import Presentation, parse_presentation

logger = logging.getLogger(__name__)


def read_presentation(source: str) -> Presentation:
    """Read a presentation from a file path, or from stdin when source is '-'."""
    if source == '-':
        text = sys.stdin.read()
        logger.debug("Read presentation from stdin")
    else:
        with open(source, 'r', encoding='utf-8') as f:
            text = f.read()
        logger.debug(f"Read presentation from {source}")
    return parse_presentation(text)


def save_table(df: pd.DataFrame, output_dir: str, name: str) -> List[str]:
    """Write a sweep table as CSV and as JSON records; returns the written paths."""
    directory = Path(output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    csv_path = directory / f"{name}.csv"
    json_path = directory / f"{name}.json"
    df.to_csv(csv_path, index=False)
    with open(json_path, 'w', encoding='utf-8') as f:
        json.dump(df.to_dict(orient='records'), f, ensure_ascii=False, indent=2, default=str)
    logger.info(f"Saved {len(df)} rows to {csv_path} and {json_path}")
    return [str(csv_path), str(json_path)]


def save_report(payload: Dict[str, Any], output_dir: str, name: str) -> str:
    directory = Path(output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{name}.json"
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, ensure_ascii=False, indent=2, sort_keys=True)
    logger.info(f"Saved report to {path}")
    return str(path)

