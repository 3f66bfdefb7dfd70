"""Serialization: JSON reports, CSV tables and raw function tables."""

import csv
import io
import json
from functools import lru_cache
from importlib import resources

import jsonschema
import numpy as np

from .gf2n import field_new
from .vbf import VBF


def dumps(obj):
    """Key-sorted JSON, one line; the canonical form for byte-identical output."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def vbf_to_json(F):
    return {
        "n": F.n,
        "modulus": f"0x{F.spec.modulus:x}",
        "table": [f"0x{v:x}" for v in F.table],
    }


def vbf_from_json(obj):
    spec = field_new(obj["n"], int(obj["modulus"], 16))
    return VBF(spec, [int(v, 16) for v in obj["table"]])


def vbf_to_bytes(F):
    return F.table.astype("<u2").tobytes()


def vbf_from_bytes(spec, data):
    return VBF(spec, np.frombuffer(data, dtype="<u2").astype(np.int64))


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def walsh_csv(W):
    from .spectral import walsh_csv_rows

    return _csv(["a", "b", "w"], walsh_csv_rows(W))


def ddt_csv(table):
    q = table.counts.shape[0]
    rows = ((a, b, int(table.counts[a, b])) for a in range(q) for b in range(q))
    return _csv(["a", "b", "count"], rows)


def table1_csv(rows):
    return _csv(
        ["n", "exponents", "delta"],
        ((r.n, ";".join(str(e) for e in r.exponents), r.delta) for r in rows),
    )


def table1_from_csv(text):
    from .search import Table1Row

    reader = csv.DictReader(io.StringIO(text))
    return [
        Table1Row(int(r["n"]), tuple(int(e) for e in r["exponents"].split(";")), int(r["delta"]))
        for r in reader
    ]


@lru_cache(maxsize=None)
def analysis_schema():
    text = resources.files("papnlab").joinpath("schemas/analysis_report.schema.json").read_text()
    return json.loads(text)


def validate_analysis(report):
    """Raise jsonschema.ValidationError if ``report`` does not match the schema."""
    jsonschema.validate(report, analysis_schema())
