"""Small helpers for deterministic text artifacts."""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Any, Optional, Union


def fmt(value: Optional[float]) -> str:
    """17 significant digits; ``None`` becomes an empty cell."""
    return "" if value is None else f"{value:.17g}"


def atomic_write(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def thread_count() -> int:
    """Worker cap from ADER_ADR_THREADS (0 or unset means one per CPU)."""
    raw = os.environ.get("ADER_ADR_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("ADER_ADR_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)
