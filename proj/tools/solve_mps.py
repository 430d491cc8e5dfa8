#!/usr/bin/env python3
"""Solve an MPS file written by export_mps with scipy's HiGHS wrapper.

Usage: solve_mps.py <model.mps> <names.csv> <solution.out>

The MPS subset matches the exporter: N/L/E rows, RHS (including an entry on
the objective row for the constant, which linprog ignores), and
FX/LO/UP/MI/PL bounds. Output is one "<column-name> <value>" line per
structural column, consumable by import_external_solution.
"""

import sys

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix


def parse_mps(path):
    obj_row = None
    rows = {}         # name -> (sense, index)
    senses = []
    col_names = []
    col_index = {}
    obj = {}
    entries = []      # (row_idx, col_idx, value)
    rhs = {}
    bounds = {}       # col -> [lo, up]
    section = None
    with open(path) as fh:
        for line in fh:
            if not line.strip() or line.startswith("*"):
                continue
            tokens = line.split()
            if not line[0].isspace():
                section = tokens[0]
                if section == "RANGES":
                    raise SystemExit("RANGES not supported")
                if section == "ENDATA":
                    break
                continue
            if section == "ROWS":
                kind, name = tokens
                if kind == "N":
                    obj_row = name
                else:
                    rows[name] = (kind, len(senses))
                    senses.append(kind)
            elif section == "COLUMNS":
                col = tokens[0]
                if col not in col_index:
                    col_index[col] = len(col_names)
                    col_names.append(col)
                    bounds[col_index[col]] = [0.0, np.inf]
                j = col_index[col]
                for rname, value in zip(tokens[1::2], tokens[2::2]):
                    if rname == obj_row:
                        obj[j] = obj.get(j, 0.0) + float(value)
                    else:
                        entries.append((rows[rname][1], j, float(value)))
            elif section == "RHS":
                for rname, value in zip(tokens[1::2], tokens[2::2]):
                    if rname != obj_row:
                        rhs[rows[rname][1]] = float(value)
            elif section == "BOUNDS":
                kind = tokens[0]
                j = col_index[tokens[2]]
                value = float(tokens[3]) if len(tokens) > 3 else 0.0
                if kind == "UP":
                    bounds[j][1] = value
                elif kind == "LO":
                    bounds[j][0] = value
                elif kind == "FX":
                    bounds[j] = [value, value]
                elif kind == "MI":
                    bounds[j][0] = -np.inf
                elif kind == "PL":
                    bounds[j][1] = np.inf
                else:
                    raise SystemExit(f"unsupported bound kind {kind}")
    n = len(col_names)
    c = np.zeros(n)
    for j, v in obj.items():
        c[j] = v
    b = np.zeros(len(senses))
    for i, v in rhs.items():
        b[i] = v
    return col_names, c, senses, entries, b, [tuple(bounds[j]) for j in range(n)]


def main():
    if len(sys.argv) != 4:
        raise SystemExit(__doc__)
    mps_path, _names_path, out_path = sys.argv[1:]
    col_names, c, senses, entries, b, bounds = parse_mps(mps_path)

    n = len(col_names)
    ub_rows = [i for i, s in enumerate(senses) if s == "L"]
    eq_rows = [i for i, s in enumerate(senses) if s == "E"]
    ub_map = {i: k for k, i in enumerate(ub_rows)}
    eq_map = {i: k for k, i in enumerate(eq_rows)}

    def build(row_map):
        data, ri, ci = [], [], []
        for i, j, v in entries:
            if i in row_map:
                data.append(v)
                ri.append(row_map[i])
                ci.append(j)
        return csr_matrix((data, (ri, ci)), shape=(len(row_map), n))

    kwargs = {}
    if ub_rows:
        kwargs["A_ub"] = build(ub_map)
        kwargs["b_ub"] = b[ub_rows]
    if eq_rows:
        kwargs["A_eq"] = build(eq_map)
        kwargs["b_eq"] = b[eq_rows]

    res = linprog(c, bounds=bounds, method="highs", **kwargs)
    if not res.success:
        raise SystemExit(f"linprog failed: {res.message}")
    with open(out_path, "w") as out:
        out.write(f"# linprog status: {res.message}\n")
        for name, value in zip(col_names, res.x):
            out.write(f"{name} {float(value)!r}\n")


if __name__ == "__main__":
    main()
