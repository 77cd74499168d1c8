"""Shared test helper: build small frames from named columns."""

import numpy as np

from factorlab.data import FactorFrame


def frame_with(columns: dict, response: str = "price") -> FactorFrame:
    """Build a frame from named columns, adding term/panel fillers if absent."""
    n = len(next(iter(columns.values())))
    cols = dict(columns)
    cols.setdefault("term", list(range(n)))
    cols.setdefault("panel", [1.0] * n)
    names = tuple(cols)
    values = np.column_stack([np.asarray(cols[name], dtype=float) for name in names])
    return FactorFrame(column_names=names, values=values, response_name=response)
