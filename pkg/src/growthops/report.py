"""CSV, text and SVG output for criterion reports.

Every file is written to a temporary name in the target directory and then
renamed into place, so readers never see a partial report. Floats are
written with repr, which makes the CSV byte-identical across runs with the
same inputs.
"""

import csv
import io
import os
import re
import tempfile

import numpy as np

CSV_COLUMNS = ("quantity", "j", "m", "r", "value", "slope")


def atomic_write(path, data):
    """Write ``data`` (str or bytes) to ``path`` via a temp file and rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x):
    x = float(x)
    if np.isnan(x):
        return "nan"
    return repr(x)


def trace_rows(trace, label=None):
    slope = trace.slope
    for m, r, v in zip(trace.m, trace.radii, trace.values):
        yield (label or trace.quantity, trace.j, _num(m), _num(r), _num(v), _num(slope))


def csv_text(reports):
    """One row per (quantity, j, m) over all traces of all reports."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        for t in rep.traces:
            w.writerows(trace_rows(t, f"{rep.theorem}:{t.quantity}"))
    return buf.getvalue()


def rows_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def summary_text(reports, header_lines=()):
    lines = list(header_lines)
    for rep in reports:
        lines.append(rep.summary())
    return "\n".join(lines) + "\n"


def slug(text):
    s = re.sub(r"[^A-Za-z0-9]+", "_", text).strip("_")
    return s or "trace"


def trace_svg(trace, title=None):
    """Static SVG of value against -log2(1 - r), log-scaled when positive."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "growthops", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        vals = np.asarray(trace.values, dtype=float)
        ax.plot(trace.m, vals, marker="o", lw=1.2, ms=3)
        if np.all(vals[np.isfinite(vals)] > 0) and np.any(np.isfinite(vals)):
            ax.set_yscale("log")
        ax.set_xlabel("-log2(1 - r)")
        ax.set_ylabel("value")
        ax.set_title(title or f"{trace.quantity} (slope {trace.slope:.3g})", fontsize=9)
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
        plt.close(fig)
    return buf.getvalue()


def write_report(out_dir, reports, header_lines=(), plots=True, prefix="criteria"):
    """Write <prefix>.csv, summary.txt and one SVG per quantity. Returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    p = os.path.join(out_dir, f"{prefix}.csv")
    atomic_write(p, csv_text(reports))
    paths.append(p)
    p = os.path.join(out_dir, "summary.txt")
    atomic_write(p, summary_text(reports, header_lines))
    paths.append(p)
    if plots:
        for rep in reports:
            for t in rep.traces:
                p = os.path.join(out_dir, f"{slug(rep.theorem + '_' + t.quantity)}_j{t.j}.svg")
                atomic_write(p, trace_svg(t, f"{rep.theorem}: {t.quantity}"))
                paths.append(p)
    return paths
