# Copyright 2026 The treegopt Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Solves an MPS file with scipy.optimize.milp and writes a solution file.

Usage:
  scipy_milp_solver.py INPUT.mps OUTPUT.txt
  scipy_milp_solver.py --dump-json INPUT.mps OUTPUT.json

The solution file holds "status <word>", "objective <value>" and one
"<column> <value>" line per column. --dump-json writes the parsed model
instead, for round-trip checks.
"""

import json
import math
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix


def finite_or_none(v):
    return v if math.isfinite(v) else None


def parse_mps(text):
    rows, senses, cols, cost, integer = [], {}, [], {}, {}
    coeffs, rhs, ranges, lower, upper = {}, {}, {}, {}, {}
    objective, offset = None, 0.0
    section, in_int = None, False
    for line_no, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.startswith("*"):
            continue
        fields = raw.split()
        if not raw[0].isspace():
            section = fields[0]
            if section == "ENDATA":
                break
            continue
        if section == "ROWS":
            sense, name = fields
            if sense == "N":
                objective = objective or name
            else:
                rows.append(name)
                senses[name] = sense
        elif section == "COLUMNS":
            if len(fields) >= 3 and fields[1] == "'MARKER'":
                in_int = fields[-1] == "'INTORG'"
                continue
            name = fields[0]
            if name not in integer:
                cols.append(name)
                integer[name] = in_int
            for row, value in zip(fields[1::2], fields[2::2]):
                if row == objective:
                    cost[name] = cost.get(name, 0.0) + float(value)
                else:
                    coeffs[(row, name)] = coeffs.get((row, name), 0.0) + float(value)
        elif section == "RHS":
            for row, value in zip(fields[1::2], fields[2::2]):
                if row == objective:
                    offset = -float(value)
                else:
                    rhs[row] = float(value)
        elif section == "RANGES":
            for row, value in zip(fields[1::2], fields[2::2]):
                ranges[row] = float(value)
        elif section == "BOUNDS":
            kind, name = fields[0], fields[2]
            value = float(fields[3]) if len(fields) > 3 else None
            if kind in ("UP", "UI"):
                upper[name] = value
            elif kind in ("LO", "LI"):
                lower[name] = value
            elif kind == "FX":
                lower[name] = upper[name] = value
            elif kind == "FR":
                lower[name], upper[name] = -math.inf, math.inf
            elif kind == "MI":
                lower[name] = -math.inf
            elif kind == "PL":
                upper[name] = math.inf
            elif kind == "BV":
                lower[name], upper[name], integer[name] = 0.0, 1.0, True
            else:
                raise ValueError(f"line {line_no}: unknown bound type {kind}")
            if kind in ("LI", "UI"):
                integer[name] = True
        elif section not in ("NAME", "OBJSENSE"):
            raise ValueError(f"line {line_no}: unexpected section {section}")

    row_lo, row_up = [], []
    for r in rows:
        b = rhs.get(r, 0.0)
        s = senses[r]
        lo, up = {"E": (b, b), "G": (b, math.inf), "L": (-math.inf, b)}[s]
        if r in ranges:
            v = ranges[r]
            if s == "G":
                up = b + abs(v)
            elif s == "L":
                lo = b - abs(v)
            elif v > 0:
                up = b + v
            else:
                lo = b + v
        row_lo.append(lo)
        row_up.append(up)
    return {
        "columns": cols,
        "integer": [integer[c] for c in cols],
        "lower": [finite_or_none(lower.get(c, 0.0)) for c in cols],
        "upper": [finite_or_none(upper.get(c, math.inf)) for c in cols],
        "cost": [cost.get(c, 0.0) for c in cols],
        "offset": offset,
        "rows": rows,
        "row_lower": [finite_or_none(v) for v in row_lo],
        "row_upper": [finite_or_none(v) for v in row_up],
        "coeffs": {f"{r} {c}": v for (r, c), v in sorted(coeffs.items())},
    }


def inf_or(values, default):
    return [default if v is None else v for v in values]


def solve(model):
    n = len(model["columns"])
    index = {c: j for j, c in enumerate(model["columns"])}
    rindex = {r: i for i, r in enumerate(model["rows"])}
    constraints = []
    if model["rows"]:
        a = lil_matrix((len(model["rows"]), n))
        for key, v in model["coeffs"].items():
            r, c = key.split(" ")
            a[rindex[r], index[c]] = v
        constraints.append(
            LinearConstraint(a.tocsr(), inf_or(model["row_lower"], -math.inf),
                             inf_or(model["row_upper"], math.inf)))
    res = milp(
        c=np.array(model["cost"]),
        integrality=np.array(model["integer"], dtype=int),
        bounds=Bounds(inf_or(model["lower"], -math.inf), inf_or(model["upper"], math.inf)),
        constraints=constraints,
        options={"mip_rel_gap": 0.0},
    )
    status = {0: "optimal", 1: "iteration-limit", 2: "infeasible", 3: "unbounded"}.get(res.status, "error")
    return status, res


def main(argv):
    if len(argv) == 4 and argv[1] == "--dump-json":
        with open(argv[2]) as f:
            model = parse_mps(f.read())
        with open(argv[3], "w") as f:
            json.dump(model, f, indent=1)
        return 0
    if len(argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    with open(argv[1]) as f:
        model = parse_mps(f.read())
    status, res = solve(model)
    with open(argv[2], "w") as f:
        f.write(f"status {status}\n")
        if res.x is not None:
            f.write(f"objective {res.fun + model['offset']!r}\n")
            for name, v in zip(model["columns"], res.x):
                f.write(f"{name} {float(v)!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
