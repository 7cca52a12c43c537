"""
Deterministic JSON and CSV reports: scan records, verdicts, witnesses and Fourier checks.

Floats are written with a fixed number of significant digits (17 by default, enough to
round trip doubles) which the `json` module cannot do, so the documents are rendered here.
Non-finite floats become the strings "inf", "-inf" and "nan" and complex numbers [re, im].
"""

import csv
import json
import math
from enum import Enum
from typing import Any, Iterator, Optional, Sequence, TextIO

import ijson  # type: ignore
import numpy as np
from packaging.version import Version

from . import __version__
from .bounds import BoundReport
from .counterexample import CounterexampleWitness
from .diagnostics import Fragment, ScanRecord, Verdict
from .groups import GroupId, format_rep, parse_group, parse_rep
from .settings import Consts
from .util import ConfigError

CSV_COLUMNS = ("xi", "bracket", "lambda_min", "det_hs", "det_chain", "varah", "varah_relaxed")


def format_float(value: float, precision: int = 17) -> str:
    """render a float with `precision` significant digits, keeping it recognizably a float"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = f"{value:.{precision}g}"
    return text if any(ch in text for ch in ".en") else f"{text}.0"


def encode(value: Any, precision: int = 17, group: Optional[GroupId] = None) -> str:
    """
    Render a value as compact JSON with deterministic float formatting.

    :param value: nested dicts, lists, numbers, strings, enums and (with `group`) indices
    :param precision: significant digits of floats
    :param group: if given then tuples are representation indices written as their strings
    :return: the JSON text
    """
    # pylint: disable=too-many-return-statements
    if value is None or isinstance(value, (bool, np.bool_)):
        return "null" if value is None else ("true" if value else "false")
    if isinstance(value, Enum):
        return json.dumps(value.value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return format_float(value, precision) if math.isfinite(value) \
            else json.dumps(format_float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return f"[{encode(value.real, precision)}, {encode(value.imag, precision)}]"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, tuple) and group is not None:
        return json.dumps(format_rep(group, value))
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(key))}: {encode(item, precision, group)}"
                               for key, item in value.items()) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(encode(item, precision, group) for item in value) + "]"
    raise TypeError(f"cannot encode value of type {type(value).__name__}")


def write_document(out: TextIO, doc: dict[str, Any], precision: int = 17,
                   group: Optional[GroupId] = None) -> None:
    """
    Write a report document with one top-level key per line and each element of top-level
    lists on its own line.
    """
    out.write("{\n")
    for pos, (key, value) in enumerate(doc.items()):
        out.write(f"  {json.dumps(key)}: ")
        if isinstance(value, list) and value:
            out.write("[\n")
            out.write(",\n".join(f"    {encode(item, precision, group)}" for item in value))
            out.write("\n  ]")
        else:
            out.write(encode(value, precision, group))
        out.write(",\n" if pos < len(doc) - 1 else "\n")
    out.write("}\n")


def meta(kind: str, **extra: Any) -> dict[str, Any]:
    """common header of every report"""
    return {"ghx_version": __version__, "format": kind,
            "format_version": Consts.records_format(), **extra}


def _bound_value(value: Optional[float], missing: str) -> Any:
    return missing if value is None else value


def bounds_to_dict(bounds: BoundReport) -> dict[str, Any]:
    """the "bounds" object of a record"""
    return {"det_hs": _bound_value(bounds.det_hs, "n/a"),
            "det_chain": _bound_value(bounds.det_chain, "n/a"),
            "varah": _bound_value(bounds.varah, "not dominant" if bounds.dominant_maxnorm is False
                                  else "n/a"),
            "varah_relaxed": _bound_value(bounds.varah_relaxed, "not dominant"),
            "dominant_maxnorm": bounds.dominant_maxnorm,
            "dominant_opnorm": bounds.dominant_opnorm,
            "marginal": bounds.marginal,
            "hs_factor": _bound_value(bounds.hs_factor, "n/a"),
            "hs_factor_weyl": _bound_value(bounds.hs_factor_weyl, "n/a"),
            "hs_factor_bounded_dim": _bound_value(bounds.hs_factor_bounded_dim, "n/a")}


def record_to_dict(group: GroupId, record: ScanRecord) -> dict[str, Any]:
    """a scan record as written in the records file"""
    doc: dict[str, Any] = {
        "xi": format_rep(group, record.xi), "bracket": record.bracket, "dim": record.dim,
        "lambda_min": record.lambda_min, "zero_flag": record.zero_flag, "hs": record.hs,
        "op": record.op,
        "det_re": None if record.det is None else record.det.real,
        "det_im": None if record.det is None else record.det.imag}
    if record.bounds is not None:
        doc["bounds"] = bounds_to_dict(record.bounds)
    return doc


def write_records(out: TextIO, group: GroupId, records: Sequence[ScanRecord],
                  header: dict[str, Any], precision: int = 17) -> None:
    """write a records file: {"meta": header, "records": [...]}"""
    write_document(out, {"meta": header,
                         "records": [record_to_dict(group, r) for r in records]}, precision)


def _optional(value: Any) -> Optional[float]:
    if value is None or value in ("n/a", "not dominant"):
        return None
    return float(value)


def _float(value: Any) -> float:
    # non-finite values come back as strings
    return float(value)


def record_from_dict(group: GroupId, doc: dict[str, Any]) -> ScanRecord:
    """inverse of `record_to_dict`"""
    xi = parse_rep(group, doc["xi"])
    bounds = None
    if (bdoc := doc.get("bounds")) is not None:
        bounds = BoundReport(
            xi, _float(doc["lambda_min"]), _optional(bdoc.get("det_hs")),
            _optional(bdoc.get("det_chain")), _optional(bdoc.get("varah")),
            _optional(bdoc.get("varah_relaxed")), bool(bdoc.get("dominant_maxnorm")),
            bool(bdoc.get("dominant_opnorm")), bool(bdoc.get("marginal")),
            _optional(bdoc.get("hs_factor")), _optional(bdoc.get("hs_factor_weyl")),
            _optional(bdoc.get("hs_factor_bounded_dim")))
    det = None
    if doc.get("det_re") is not None:
        det = complex(_float(doc["det_re"]), _float(doc["det_im"]))
    return ScanRecord(xi, _float(doc["bracket"]), int(doc["dim"]), _float(doc["lambda_min"]),
                      bool(doc["zero_flag"]), bounds, det, _float(doc["hs"]), _float(doc["op"]))


def check_format(header: dict[str, Any], path: str, kind: str) -> None:
    """
    Refuse documents of another kind or written with a newer major/minor format version.
    """
    if header.get("format") != kind:
        raise ConfigError(f"expected a '{kind}' report but got '{header.get('format')}'", path)
    version = Version(str(header.get("format_version", "0")))
    supported = Version(Consts.records_format())
    if version.release[:2] > supported.release[:2]:
        raise ConfigError(f"report format {version} is newer than the supported {supported}, "
                          f"upgrade ghx (this is {__version__})", path)


def read_header(path: str) -> dict[str, Any]:
    """read only the "meta" object of a report"""
    with open(path, "rb") as report_fd:
        for header in ijson.items(report_fd, "meta", use_float=True):
            return header
    raise ConfigError("report has no 'meta' object", path)


def iter_records(path: str, group: GroupId) -> Iterator[ScanRecord]:
    """stream the records of a records file without loading the whole document"""
    with open(path, "rb") as report_fd:
        for doc in ijson.items(report_fd, "records.item", use_float=True):
            yield record_from_dict(group, doc)


def read_records(path: str) -> tuple[dict[str, Any], GroupId, list[ScanRecord]]:
    """
    Read a records file checking its format.

    :param path: the records file
    :return: tuple of the header, the group and the records in file order
    """
    try:
        header = read_header(path)
        check_format(header, path, "records")
        group = parse_group(str(header.get("group")))
        return header, group, list(iter_records(path, group))
    except ijson.JSONError as ex:
        raise ConfigError(f"invalid JSON: {ex}", path) from ex
    except (KeyError, ValueError) as ex:
        raise ConfigError(f"malformed record: {ex}", path) from ex


def write_csv(out: TextIO, group: GroupId, records: Sequence[ScanRecord],
              precision: int = 17) -> None:
    """
    Plot-ready CSV of the records with the columns of `CSV_COLUMNS`; bounds that do not apply
    are empty cells.
    """
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        bounds = r.bounds
        cells = [None, None, None, None] if bounds is None else \
            [bounds.det_hs, bounds.det_chain, bounds.varah, bounds.varah_relaxed]
        writer.writerow([format_rep(group, r.xi), format_float(r.bracket, precision),
                         format_float(r.lambda_min, precision)] +
                        ["" if c is None else format_float(c, precision) for c in cells])


def fragment_to_dict(fragment: Fragment) -> dict[str, Any]:
    """a criterion fragment of the verdict report"""
    return {"classification": fragment.classification, "holds": fragment.holds,
            "reasons": fragment.reasons, "details": fragment.details}


def verdict_to_dict(verdict: Verdict, header: dict[str, Any]) -> dict[str, Any]:
    """the verdict report"""
    return {"meta": header, "classification": verdict.classification,
            "exit_code": verdict.classification.exit_code, "evidence": verdict.evidence,
            "criteria": {name: fragment_to_dict(frag) for name, frag in verdict.criteria.items()}}


def witness_to_list(witness: CounterexampleWitness) -> list[dict[str, Any]]:
    """the violating sequence as a list of {"ell", "xi", "v", "image_norm"}"""
    return [{"ell": term.ell, "xi": format_rep(witness.group, term.xi),
             "v": [complex(x) for x in term.v], "image_norm": term.image_norm}
            for term in witness.terms]
