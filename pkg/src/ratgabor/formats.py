"""Canonical CSV/JSON encodings for scan results, sweep records, matrices and certificates.

Floats are written with 17 significant digits so every value round-trips.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .analysis import DomainMode, GridSpec, ScanResult, SweepRecord, Verdict
from .gramian import Certificate, LatticeParams, ReducedFraction
from .zak import ZakPoint

SWEEP_HEADER = ("n", "j", "ab", "p", "q", "min_eig")
SCAN_HEADER = ("x", "omega", "sigma_min")


def fmt(value: float) -> str:
    return f"{float(value):.17g}"


def _writer(buf):
    return csv.writer(buf, lineterminator="\n")


def _meta_line(pairs) -> str:
    return "# " + ",".join(f"{k}={v}" for k, v in pairs) + "\n"


def _parse_meta(line: str) -> dict:
    body = line.lstrip("#").strip()
    return dict(item.split("=", 1) for item in body.split(","))


def scan_to_csv(result: ScanResult, window: str = "") -> str:
    params, grid = result.params, result.grid
    buf = io.StringIO()
    buf.write(_meta_line([("window", window), ("alpha", fmt(params.alpha)),
                          ("beta", fmt(params.beta)), ("p", params.p), ("q", params.q),
                          ("nx", grid.nx), ("nw", grid.nw), ("x_mode", grid.x_mode.value)]))
    w = _writer(buf)
    w.writerow(SCAN_HEADER)
    for i, x in enumerate(result.xs):
        for k, omega in enumerate(result.omegas):
            w.writerow((fmt(x), fmt(omega), fmt(result.sigma_min_field[i, k])))
    buf.write(_meta_line([("global_min", fmt(result.global_min)),
                          ("argmin_x", fmt(result.argmin.x)),
                          ("argmin_omega", fmt(result.argmin.omega)),
                          ("verdict", result.verdict.value)]))
    return buf.getvalue()


def scan_from_csv(text: str) -> ScanResult:
    lines = text.splitlines()
    head = _parse_meta(lines[0])
    tail = _parse_meta(lines[-1])
    rows = list(csv.reader(lines[2:-1]))
    nx, nw = int(head["nx"]), int(head["nw"])
    data = np.array([[float(v) for v in row] for row in rows]).reshape(nx, nw, 3)
    params = LatticeParams(float(head["alpha"]), float(head["beta"]),
                           ReducedFraction(int(head["p"]), int(head["q"])))
    values = data[..., 2]
    i, k = np.unravel_index(int(np.argmin(values)), values.shape)
    return ScanResult(params, GridSpec(nx, nw, DomainMode(head["x_mode"])),
                      data[:, 0, 0].copy(), data[0, :, 1].copy(), values.copy(),
                      float(tail["global_min"]),
                      ZakPoint(float(tail["argmin_x"]), float(tail["argmin_omega"])),
                      (int(i), int(k)), Verdict(tail["verdict"]))


def scan_to_json(result: ScanResult, window: str = "") -> str:
    return json.dumps({
        "window": window,
        "alpha": result.params.alpha, "beta": result.params.beta,
        "p": result.params.p, "q": result.params.q,
        "grid": {"nx": result.grid.nx, "nw": result.grid.nw,
                 "x_mode": result.grid.x_mode.value},
        "global_min": result.global_min,
        "argmin": {"x": result.argmin.x, "omega": result.argmin.omega},
        "verdict": result.verdict.value,
        "x": result.xs.tolist(), "omega": result.omegas.tolist(),
        "sigma_min": result.sigma_min_field.tolist(),
    }, indent=2)


def sweep_to_csv(records) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(SWEEP_HEADER)
    for r in records:
        w.writerow((r.n, r.j, fmt(float(r.ab)), r.reduced.p, r.reduced.q, fmt(r.min_eig)))
    return buf.getvalue()


def sweep_from_csv(text: str) -> list:
    reader = csv.DictReader(io.StringIO(text))
    return [SweepRecord(int(row["n"]), int(row["j"]),
                        Fraction(int(row["n"]) - int(row["j"]), int(row["n"])),
                        ReducedFraction(int(row["p"]), int(row["q"])),
                        float(row["min_eig"]))
            for row in reader]


def matrix_to_json(M, which: str = "") -> str:
    M = np.asarray(M, dtype=complex)
    return json.dumps({
        "which": which, "rows": M.shape[0], "cols": M.shape[1],
        "entries": [[[z.real, z.imag] for z in row] for row in M],
    })


def matrix_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    M = np.array([[complex(re, im) for re, im in row] for row in obj["entries"]],
                 dtype=complex).reshape(obj["rows"], obj["cols"])
    return M


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, tuple):
        return list(value)
    return value


def certificate_to_json(cert: Certificate) -> str:
    return json.dumps({
        "kind": cert.kind,
        "pass": cert.passed,
        "details": {k: _jsonable(v) for k, v in cert.details.items()},
        "x_intervals": [list(iv) for iv in cert.x_intervals],
    }, indent=2)


def certificate_from_json(text: str) -> Certificate:
    obj = json.loads(text)
    return Certificate(obj["kind"], obj["pass"], obj["details"],
                       [tuple(iv) for iv in obj["x_intervals"]])
