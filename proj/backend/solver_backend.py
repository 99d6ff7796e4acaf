#!/usr/bin/env python3
"""Line-oriented MILP/LP solving service.

Reads one JSON request per line on stdin, writes one JSON response per line
on stdout. The process keeps the last loaded model so repeated solves with
different bound fixings skip re-serialization.

Requests:
  {"op": "ping"}
  {"op": "load", "model": {...}}          -> {"ok": true}
  {"op": "solve", "opts": {...},
   "fix": {"idx": [...], "val": [...]}}   -> result for the loaded model

Model payload: sense ("max"/"min"), obj (dense list), lb/ub (lists, null =
unbounded), integrality (0/1 list), rows ([{idx, val, sense, rhs}]).

Result: {"status": "optimal"|"infeasible"|"unbounded"|"limit",
         "objective": float, "x": [...], "nodes": int|null}
"""

import json
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, linprog, milp


class LoadedModel:
    def __init__(self, payload):
        n = len(payload["obj"])
        self.n = n
        self.maximize = payload["sense"] == "max"
        self.obj = np.asarray(payload["obj"], dtype=float)
        self.lb = np.array([-np.inf if v is None else float(v) for v in payload["lb"]])
        self.ub = np.array([np.inf if v is None else float(v) for v in payload["ub"]])
        self.integrality = np.asarray(payload["integrality"], dtype=np.uint8)
        rows = payload["rows"]
        data, ri, ci = [], [], []
        con_lb = np.empty(len(rows))
        con_ub = np.empty(len(rows))
        for r, row in enumerate(rows):
            for j, v in zip(row["idx"], row["val"]):
                ri.append(r)
                ci.append(j)
                data.append(v)
            rhs = float(row["rhs"])
            sense = row["sense"]
            con_lb[r] = rhs if sense in ("ge", "eq") else -np.inf
            con_ub[r] = rhs if sense in ("le", "eq") else np.inf
        self.a = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
        self.con_lb = con_lb
        self.con_ub = con_ub


STATUS_NAMES = {0: "optimal", 1: "limit", 2: "infeasible", 3: "unbounded"}


def solve(model, opts, fix):
    lb = model.lb
    ub = model.ub
    if fix:
        lb = lb.copy()
        ub = ub.copy()
        idx = np.asarray(fix["idx"], dtype=int)
        val = np.asarray(fix["val"], dtype=float)
        lb[idx] = val
        ub[idx] = val
    c = -model.obj if model.maximize else model.obj
    time_limit = opts.get("time_limit", 0.0) or None
    if model.integrality.any():
        options = {"disp": False, "presolve": True,
                   "mip_rel_gap": opts.get("rel_gap", 0.0)}
        if time_limit:
            options["time_limit"] = time_limit
        constraints = ([LinearConstraint(model.a, model.con_lb, model.con_ub)]
                       if model.a.shape[0] else [])
        res = milp(c=c,
                   constraints=constraints,
                   integrality=model.integrality,
                   bounds=Bounds(lb, ub),
                   options=options)
        nodes = getattr(res, "mip_node_count", None)
        nodes = int(nodes) if nodes is not None else None
    else:
        # Dual simplex so optima land on vertices of the feasible region —
        # the integrality probes depend on that.
        a_ub, b_ub, a_eq, b_eq = split_rows(model)
        res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
                      bounds=np.column_stack((lb, ub)),
                      method="highs-ds",
                      options={"disp": False, "time_limit": time_limit}
                      if time_limit else {"disp": False})
        nodes = None
    status = STATUS_NAMES.get(res.status)
    if status is None:
        return {"error": "solver reported: %s" % res.message}
    out = {"status": status, "nodes": nodes}
    if res.x is not None and status in ("optimal", "limit"):
        fun = float(res.fun)
        out["objective"] = -fun if model.maximize else fun
        out["x"] = [float(v) for v in res.x]
    return out


def feasible_grid(model, idx):
    """Feasibility of every 0/1 assignment over the variables in idx."""
    n_fixed = len(idx)
    if n_fixed > 24:
        return {"error": "feasibility grid limited to 24 variables"}
    idx = np.asarray(idx, dtype=int)
    c = np.zeros(model.n)
    constraints = ([LinearConstraint(model.a, model.con_lb, model.con_ub)]
                   if model.a.shape[0] else [])
    options = {"disp": False, "presolve": True}
    shift = np.arange(n_fixed)
    feasible = []
    for mask in range(1 << n_fixed):
        lb = model.lb.copy()
        ub = model.ub.copy()
        bits = ((mask >> shift) & 1).astype(float)
        lb[idx] = bits
        ub[idx] = bits
        res = milp(c=c, constraints=constraints, integrality=model.integrality,
                   bounds=Bounds(lb, ub), options=options)
        if res.status == 0:
            feasible.append(mask)
        elif res.status != 2:
            return {"error": "grid assignment %d ended with status %d" % (mask, res.status)}
    return {"feasible_masks": feasible}


def split_rows(model):
    ge = np.isinf(model.con_ub) & ~np.isinf(model.con_lb)
    le = np.isinf(model.con_lb) & ~np.isinf(model.con_ub)
    eq = ~np.isinf(model.con_lb) & ~np.isinf(model.con_ub)
    a_ub = sparse.vstack([model.a[le], -model.a[ge]]) if (le.any() or ge.any()) else None
    b_ub = np.concatenate([model.con_ub[le], -model.con_lb[ge]]) if a_ub is not None else None
    a_eq = model.a[eq] if eq.any() else None
    b_eq = model.con_lb[eq] if a_eq is not None else None
    return a_ub, b_ub, a_eq, b_eq


def main():
    model = None
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            op = req.get("op")
            if op == "ping":
                resp = {"ok": True, "engine": "scipy-highs"}
            elif op == "load":
                model = LoadedModel(req["model"])
                resp = {"ok": True}
            elif op == "solve":
                if model is None:
                    resp = {"error": "no model loaded"}
                else:
                    resp = solve(model, req.get("opts", {}), req.get("fix"))
            elif op == "feasible_grid":
                if model is None:
                    resp = {"error": "no model loaded"}
                else:
                    resp = feasible_grid(model, req["idx"])
            else:
                resp = {"error": "unknown op %r" % op}
        except Exception as exc:  # noqa: BLE001 - report, keep serving
            resp = {"error": "%s: %s" % (type(exc).__name__, exc)}
        sys.stdout.write(json.dumps(resp) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    main()
