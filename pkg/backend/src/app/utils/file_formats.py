"""
Output file helpers: fixed-column CSV through pandas, plain text files.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from app.core.config import settings

logger = logging.getLogger(__name__)


def rows_to_frame(rows: Sequence[Dict], columns: List[str]) -> pd.DataFrame:
    """DataFrame with exactly the given columns, in order."""
    rows = list(rows)
    for row in rows:
        missing = [c for c in columns if c not in row]
        if missing:
            raise ValueError(f"row is missing columns {missing}")
    return pd.DataFrame(rows, columns=columns)


def frame_to_csv_text(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=settings.float_format, lineterminator="\n")


def write_csv(frame: pd.DataFrame, path: Optional[Union[str, Path]]) -> str:
    """Write CSV to path (stdout when path is None); returns the text."""
    text = frame_to_csv_text(frame)
    if path is None:
        print(text, end="")
    else:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(frame)} rows to {path}")
    return text


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    return pd.read_csv(path)


def write_text(text: str, path: Optional[Union[str, Path]]) -> None:
    if path is None:
        print(text, end="")
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
