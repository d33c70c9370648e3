"""JSON and CSV file formats.

Matrices are written as nested lists of ``[re, im]`` pairs. Floats go through
``json``'s shortest round-trip repr, so a write-then-read cycle reproduces
every value bit for bit.
"""

import csv
import json
import math

import numpy as np

from .errors import InvalidStateError
from .quantum import Dataset, DensityMatrix, Povm

SWEEP_HEADER = ("t", "rule", "iterations", "converged", "final_loglik")
LOG_HEADER = ("k", "t", "loglik", "residual_extremal", "backtracks", "iterate_distance")


class FormatError(InvalidStateError):
    """A file parsed as JSON but does not match the expected schema."""


def matrix_to_json(m):
    m = np.asarray(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj, where="matrix"):
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: not a numeric array ({exc})") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise FormatError(f"{where}: expected a d x d array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _read_json(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=1, allow_nan=False)
        fh.write("\n")


# -- POVM --------------------------------------------------------------------


def povm_to_dict(povm):
    return {"dim": povm.dim, "effects": [matrix_to_json(e.matrix) for e in povm]}


def povm_from_dict(obj):
    if not isinstance(obj, dict) or "effects" not in obj:
        raise FormatError("POVM file needs an 'effects' field")
    effects = [matrix_from_json(e, f"effects[{i}]") for i, e in enumerate(obj["effects"])]
    if "dim" in obj and effects and effects[0].shape[0] != obj["dim"]:
        raise FormatError(f"'dim' is {obj['dim']} but effects are {effects[0].shape[0]}x{effects[0].shape[0]}")
    return Povm(effects)


def write_povm(path, povm):
    _write_json(path, povm_to_dict(povm))


def read_povm(path):
    return povm_from_dict(_read_json(path))


# -- datasets ----------------------------------------------------------------


def dataset_to_dict(data, metadata=None):
    if data.total_count is not None:
        obj = {"counts": [int(c) for c in data.counts]}
    else:
        obj = {"frequencies": [float(f) for f in data.frequencies]}
    if metadata:
        obj["metadata"] = metadata
    return obj


def dataset_from_dict(obj):
    if not isinstance(obj, dict):
        raise FormatError("dataset file must hold a JSON object")
    if "counts" in obj:
        counts = obj["counts"]
        if not isinstance(counts, list) or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in counts
        ):
            raise FormatError("'counts' must be a list of integers")
        return Dataset.from_counts(counts)
    if "frequencies" in obj:
        freqs = obj["frequencies"]
        if not isinstance(freqs, list):
            raise FormatError("'frequencies' must be a list of numbers")
        return Dataset(np.array(freqs, dtype=float), total_count=obj.get("total_count"))
    raise FormatError("dataset file needs 'frequencies' or 'counts'")


def write_dataset(path, data, metadata=None):
    _write_json(path, dataset_to_dict(data, metadata))


def read_dataset(path):
    return dataset_from_dict(_read_json(path))


# -- results -----------------------------------------------------------------


def result_to_dict(rho, loglik, log, config_echo):
    return {
        "rho": matrix_to_json(rho.matrix),
        "loglik": float(loglik),
        "iterations": int(log.iterations),
        "termination": log.termination_reason.value,
        "config": config_echo,
    }


def write_result(path, rho, loglik, log, config_echo):
    _write_json(path, result_to_dict(rho, loglik, log, config_echo))


def read_result(path):
    obj = _read_json(path)
    for key in ("rho", "loglik", "iterations", "termination"):
        if key not in obj:
            raise FormatError(f"result file lacks '{key}'")
    obj = dict(obj)
    obj["rho"] = DensityMatrix(matrix_from_json(obj["rho"], "rho"))
    return obj


def read_matrix(path):
    """A bare matrix file (e.g. a starting state): JSON ``[[[re, im], ...], ...]``
    or an object with a ``rho`` field."""
    obj = _read_json(path)
    if isinstance(obj, dict):
        if "rho" not in obj:
            raise FormatError("matrix file object needs a 'rho' field")
        obj = obj["rho"]
    return matrix_from_json(obj)


# -- CSV ---------------------------------------------------------------------


def write_iteration_log(path, log):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LOG_HEADER)
        for r in log.records:
            w.writerow([r.k, repr(r.t), repr(r.loglik), repr(r.residual_extremal), r.backtracks, repr(r.iterate_distance)])


def write_sweep(path_or_file, rows):
    """Rows are ``SweepRow``-like objects; written sorted by (t, rule)."""
    rows = sorted(rows, key=lambda r: (r.t, r.rule))
    own = isinstance(path_or_file, str)
    fh = open(path_or_file, "w", encoding="utf-8", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for r in rows:
            loglik = "" if r.final_loglik is None or not math.isfinite(r.final_loglik) else repr(r.final_loglik)
            w.writerow([repr(r.t), r.rule, r.iterations, "true" if r.converged else "false", loglik])
    finally:
        if own:
            fh.close()


def read_sweep(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SWEEP_HEADER:
            raise FormatError(f"unexpected sweep header {reader.fieldnames}")
        return [
            {
                "t": float(row["t"]),
                "rule": row["rule"],
                "iterations": int(row["iterations"]),
                "converged": row["converged"] == "true",
                "final_loglik": float(row["final_loglik"]) if row["final_loglik"] else None,
            }
            for row in reader
        ]
