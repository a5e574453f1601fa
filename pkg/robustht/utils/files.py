"""
File input and output for robustht: distributions in, tables and summaries out
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Union

import numpy as np

from robustht.config import SIGNIFICANT_DIGITS

logger = logging.getLogger(__name__)

__all__ = (
    "load_vector",
    "format_number",
    "to_jsonable",
    "dumps",
    "dump_json",
    "append_jsonl",
    "write_csv"
)

PathLike = Union[str, Path]

def load_vector(path: PathLike) -> List[float]:
    """Read a vector of reals from a JSON array or the first row of a CSV file"""
    file_path = Path(path)
    text = file_path.read_text(encoding='utf-8')
    if file_path.suffix.lower() == '.csv':
        rows = [row for row in csv.reader(text.splitlines()) if row]
        if not rows:
            raise ValueError(f"{file_path}: empty CSV file")
        try:
            return [float(cell) for cell in rows[0]]
        except ValueError as e:
            raise ValueError(f"{file_path}: {e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        logger.error(f"Error parsing {file_path}: {e}")
        raise ValueError(f"{file_path}: not valid JSON ({e.msg})") from None
    if isinstance(data, dict) and 'probs' in data:
        data = data['probs']
    if not isinstance(data, list) or not all(isinstance(v, (int, float)) for v in data):
        raise ValueError(f"{file_path}: expected a JSON array of numbers")
    return [float(v) for v in data]

def format_number(value: float) -> str:
    """Format a real with 17 significant digits; infinities as ``inf``/``-inf``"""
    value = float(value)
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return f"{value:.{SIGNIFICANT_DIGITS}g}"

def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and infinities into plain JSON values"""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if math.isnan(value):
            return 'nan'
        return value
    return obj

def dumps(obj: Any) -> str:
    """Serialize to JSON text with sorted keys"""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2)

def dump_json(obj: Any, path: Optional[PathLike] = None) -> str:
    """Serialize ``obj``; write it to ``path`` when given. Returns the text."""
    text = dumps(obj)
    if path is not None:
        Path(path).write_text(text + '\n', encoding='utf-8')
    return text

def append_jsonl(obj: Any, path: PathLike) -> None:
    """Append one compact JSON record to a JSON-lines results file"""
    with open(path, 'a', encoding='utf-8') as f:
        f.write(json.dumps(to_jsonable(obj), sort_keys=True) + '\n')

def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], path: Optional[PathLike] = None) -> str:
    """Render rows as CSV with '.' decimals and 17 significant digits"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (bool, np.bool_)):
                cells.append('true' if cell else 'false')
            elif isinstance(cell, (int, np.integer)):
                cells.append(str(int(cell)))
            elif isinstance(cell, (float, np.floating)):
                cells.append(format_number(cell))
            else:
                cells.append(str(cell))
        writer.writerow(cells)
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding='utf-8')
    return text
