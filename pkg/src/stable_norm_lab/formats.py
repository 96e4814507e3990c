"""File formats: JSONL catalogs and tables, CSV count series, atomic writes."""

import csv
import io
import json
import os
import tempfile
from typing import Dict, Iterable

from .counting import CountSeries
from .enumeration import Catalog, ConjugacyClass
from .errors import InvalidInputError
from .stable_norm import StableNormTable
from .surfaces import FlatTorus, surface_from_spec
from .words import format_word, parse_word


def fmt(x) -> str:
    """Fixed 12 significant digit formatting used in every output file."""
    if isinstance(x, bool) or isinstance(x, int):
        return str(x)
    return f"{float(x):.12g}"


def r12(x: float) -> float:
    return float(fmt(x))


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def surface_spec(s) -> Dict:
    if isinstance(s, FlatTorus):
        return {"kind": "flat_torus", "u": list(s.u), "v": list(s.v)}
    kind = getattr(s, "kind", None)
    if kind == "octagon":
        return {"kind": "octagon"}
    if kind == "giraffe":
        m = s.metadata
        return {"kind": "giraffe", "l_sep": m["l_sep"], "torus_params": m["torus_params"]}
    raise InvalidInputError(f"surface of kind {kind!r} has no serializable spec")


def _class_row(c: ConjugacyClass) -> Dict:
    row = {"key": c.key, "length": r12(c.length), "homology": list(c.homology), "power": c.power}
    if c.canonical_word is not None:
        row["word"] = format_word(c.canonical_word)
        row["trace"] = r12(c.trace)
        row["root"] = format_word(c.root) if c.root else row["word"]
    return row


def catalog_to_jsonl(cat: Catalog) -> str:
    meta = {
        "surface": surface_spec(cat.surface),
        "horizon": cat.length_bound,
        "complete": bool(cat.complete_flag),
        "method": cat.method,
        "count": len(cat.classes),
    }
    lines = [json.dumps({"meta": meta}, sort_keys=True)]
    rows = sorted((_class_row(c) for c in cat.classes), key=lambda r: (r["length"], r["key"]))
    lines += [json.dumps(r, sort_keys=True) for r in rows]
    return "\n".join(lines) + "\n"


def catalog_from_jsonl(text: str) -> Catalog:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidInputError("empty catalog file")
    try:
        meta = json.loads(lines[0])["meta"]
        rows = [json.loads(ln) for ln in lines[1:]]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed catalog file: {exc}") from exc
    s = surface_from_spec(meta["surface"])
    classes = []
    for r in rows:
        if "word" in r:
            w = parse_word(r["word"])
            root = parse_word(r["root"])
            classes.append(ConjugacyClass(w, r["length"], r["trace"], tuple(r["homology"]), root, r["power"]))
        else:
            classes.append(
                ConjugacyClass(None, r["length"], float("nan"), tuple(r["homology"]), None, r["power"], r["key"])
            )
    return Catalog(s, float(meta["horizon"]), tuple(classes), bool(meta["complete"]), meta.get("method", ""), {})


def table_to_jsonl(table: StableNormTable) -> str:
    meta = {
        "horizon": table.horizon,
        "complete": table.complete,
        "stored": len(table.values),
        "genericity_violations": [list(h) for h in table.genericity_violations],
    }
    lines = [json.dumps({"meta": meta}, sort_keys=True)]
    for h in sorted(table.values):
        sn, wit = table.values[h]
        lines.append(json.dumps(
                {"homology": list(h), "sn": r12(sn), "witness": [{"word": k, "mult": m} for k, m in wit]}, sort_keys=True
            ))
    return "\n".join(lines) + "\n"


def series_to_csv(series: CountSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["T", "count", "count_over_T2"])
    for T, c in series.samples:
        w.writerow([fmt(T), c, fmt(c / T**2) if T > 0 else "nan"])
    return buf.getvalue()


def lattice_rows_to_csv(rows: Iterable, area) -> str:
    buf = io.StringIO()
    buf.write(f"# area={area}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "count", "count_over_t2"])
    for t, c, r in rows:
        w.writerow([fmt(t), c, fmt(r)])
    return buf.getvalue()
