"""Deterministic artifact writers: RFC-4180 CSV, sorted-key JSON and SVG.

Every artifact carries the model JSON, the seed and the tolerance set.
Files are written to a temporary name and renamed into place.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import EmptyData
from .verdicts import jsonable

SVG_SALT = "levygeo"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _atomic_write(path: Path, data: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def ensure_out_dir(path) -> Path:
    """Create the output directory (via a temporary sibling and rename when absent)."""
    path = Path(path)
    if path.is_dir():
        return path
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(dir=path.parent, prefix=".tmp-"))
    try:
        os.rename(tmp, path)
    except OSError:
        tmp.rmdir()
        if not path.is_dir():
            raise
    return path


def csv_text(rows: Sequence[dict], header: dict, columns: Optional[Sequence[str]] = None) -> str:
    """CSV with CRLF line ends; metadata lines start with ``#`` before the column row."""
    rows = list(rows)
    if not rows:
        raise EmptyData("no rows to write")
    columns = list(columns or rows[0].keys())
    buf = io.StringIO()
    for key in sorted(header):
        val = header[key]
        text = val if isinstance(val, str) else json.dumps(jsonable(val), sort_keys=True)
        buf.write(f"# {key}: {text}\r\n")
    w = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c, "")) for c in columns])
    return buf.getvalue()


def emit_csv(rows: Iterable[dict], path, header: dict, columns: Optional[Sequence[str]] = None) -> Path:
    return _atomic_write(Path(path), csv_text(list(rows), header, columns).encode("utf-8"))


def json_text(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def emit_json(obj, path) -> Path:
    return _atomic_write(Path(path), json_text(obj).encode("utf-8"))


def svg_bytes(
    series: Sequence[tuple],
    xlabel: str,
    ylabel: str,
    title: str = "",
    logx: bool = False,
    logy: bool = False,
) -> bytes:
    """Render ``(x, y, label)`` series as one polyline each.

    Output is byte-stable: fixed hash salt, no date metadata, text kept as
    text rather than glyph paths.
    """
    series = [s for s in series if len(s[0])]
    if not series:
        raise EmptyData("no series to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": SVG_SALT, "svg.fonttype": "none", "path.simplify": False}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        try:
            for x, y, label in series:
                ax.plot(x, y, label=label, linewidth=1.2)
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            if logx:
                ax.set_xscale("log")
            if logy:
                ax.set_yscale("log")
            if title:
                ax.set_title(title)
            if len(series) > 1:
                ax.legend()
            buf = io.BytesIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buf.getvalue()


def emit_svg(series, path, xlabel: str, ylabel: str, **kw) -> Path:
    return _atomic_write(Path(path), svg_bytes(series, xlabel, ylabel, **kw))
