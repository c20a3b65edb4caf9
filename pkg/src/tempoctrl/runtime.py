"""Process-level runtime knobs read from the environment."""

from __future__ import annotations

import os


def thread_cap() -> int:
    """Worker cap from TEMPOCTRL_THREADS; defaults to 1 (sequential)."""
    raw = os.environ.get("TEMPOCTRL_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"TEMPOCTRL_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)
