"""JSON/CSV serialisation with exact rationals as strings.

Rationals serialise as "numerator/denominator" in lowest terms (optional
leading minus); bare integers are accepted on input.  Polynomials serialise
as coefficient arrays, lowest power first.  Output files are written
atomically (temp file + rename) and deterministically (sorted keys, no
timestamps), so identical runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from fractions import Fraction
from typing import Any

from .boolcube import DualWitness, SymmetricDistribution
from .ratpoly import ChebyshevExpansion, RationalPoly


def rat_to_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s)


def poly_to_json(p: RationalPoly) -> list[str]:
    return [rat_to_str(c) for c in p.coeffs]


def poly_from_json(coeffs: list[str]) -> RationalPoly:
    return RationalPoly.from_coeffs(Fraction(c) for c in coeffs)


def expansion_to_json(e: ChebyshevExpansion) -> list[str]:
    return [rat_to_str(c) for c in e.half_coeffs]


def dist_to_json(d: SymmetricDistribution) -> dict:
    return {"n": d.n, "weight_probs": [rat_to_str(p) for p in d.weight_probs]}


def dist_from_json(obj: dict) -> SymmetricDistribution:
    return SymmetricDistribution.of(obj["n"], [Fraction(p) for p in obj["weight_probs"]])


def witness_to_json(w: DualWitness) -> dict:
    out = {
        "n": w.n,
        "representation": w.representation,
        "values": [rat_to_str(v) for v in w.values],
    }
    if w.claimed_degree is not None:
        out["claimed_degree"] = rat_to_str(w.claimed_degree)
    return out


def witness_from_json(obj: dict) -> DualWitness:
    return DualWitness(
        n=obj["n"],
        values=tuple(Fraction(v) for v in obj["values"]),
        representation=obj.get("representation", "cube"),
        claimed_degree=Fraction(obj["claimed_degree"])
        if "claimed_degree" in obj
        else None,
    )


def _atomic_write(path: str, write_fn) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-dualshare-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, payload: Any) -> None:
    _atomic_write(
        path, lambda fh: fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    )


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    def _write(fh):
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)

    _atomic_write(path, _write)


def load_json(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)
