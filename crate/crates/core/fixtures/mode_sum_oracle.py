#!/usr/bin/env python3
"""Independent oracle for the golden fixtures in golden.json.

Evaluates the lattice commutator with the literal mode sum
    D(dx, dt) = (1/N) * sum_n sin(k_n dx - w_n dt) / w_n
in mpmath at 40 significant digits, enumerates cliques with networkx, and
brute-forces the three-event orientation fixture. Shares no code with the
Rust crate.

    python3 mode_sum_oracle.py              # print fixture JSON to stdout
    python3 mode_sum_oracle.py --write P    # write VERIFIED fixture to P
    python3 mode_sum_oracle.py --verify P   # check an UNVERIFIED file, relabel on success
"""
import argparse
import itertools
import json
import sys

import mpmath as mp
import networkx as nx

mp.mp.dps = 40


def omega(n_sites, mass, n):
    return mp.sqrt(mp.mpf(mass) ** 2 + 4 * mp.sin(mp.pi * n / n_sites) ** 2)


def commutator(n_sites, mass, dx, dt):
    total = mp.mpf(0)
    for n in range(n_sites):
        k = 2 * mp.pi * n / n_sites
        w = omega(n_sites, mass, n)
        total += mp.sin(k * dx - w * dt) / w
    return total / n_sites


def extent(n_sites, mass, dt, eps):
    best = 0
    for dx in range(0, n_sites // 2 + 1):
        if abs(commutator(n_sites, mass, dx, dt)) >= eps:
            best = dx
    return best


def least_squares(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return slope, my - slope * mx


def cone(n_sites, mass, time_steps, eps):
    dts = list(range(1, time_steps // 2 + 1))
    exts = [extent(n_sites, mass, dt, eps) for dt in dts]
    slope, intercept = least_squares(dts, exts)
    broadening = max(0.0, max(e - (intercept + slope * dt) for dt, e in zip(dts, exts)))
    return exts, slope, intercept, broadening


def lattice_graph(n_sites, mass, time_steps, eps):
    g = nx.Graph()
    verts = [(x, t) for t in range(time_steps) for x in range(n_sites)]
    g.add_nodes_from(verts)
    for a, b in itertools.combinations(verts, 2):
        d = commutator(n_sites, mass, a[0] - b[0], a[1] - b[1])
        if abs(d) < eps:
            g.add_edge(a, b)
    return g


def minimal_points(g):
    # A set S is an intersection of a subfamily of maximal cliques exactly when
    # S equals the intersection of all maximal cliques containing it.
    cliques = [frozenset(c) for c in nx.find_cliques(g)]
    closed = set()
    for c in cliques:
        closed.add(c)
    frontier = list(closed)
    while frontier:
        nxt = []
        for s in frontier:
            for c in cliques:
                i = s & c
                if i and i not in closed:
                    closed.add(i)
                    nxt.append(i)
        frontier = nxt
    return [s for s in closed if not any(o < s for o in closed)], cliques


def orientation_fixture():
    events = {"e1": (1.0, -0.99), "e2": (1.0, 0.99), "e3": (1.5, 1.2)}
    ids = sorted(events)

    def before(a, b):
        (ta, xa), (tb, xb) = events[a], events[b]
        return tb > ta and (tb - ta) ** 2 - (xb - xa) ** 2 >= 0

    classical = {(a, b) for a in ids for b in ids if a != b and before(a, b)}
    free = [(a, b) for a, b in itertools.combinations(ids, 2)
            if (a, b) not in classical and (b, a) not in classical]
    admissible = []
    for bits in itertools.product([0, 1], repeat=len(free)):
        edges = set(classical)
        for (a, b), bit in zip(free, bits):
            edges.add((a, b) if bit == 0 else (b, a))
        g = nx.DiGraph(list(edges))
        g.add_nodes_from(ids)
        if nx.is_directed_acyclic_graph(g):
            admissible.append(nx.transitive_closure_dag(g))
    always = []
    for a, b in itertools.combinations(ids, 2):
        if all(c.has_edge(a, b) or c.has_edge(b, a) for c in admissible):
            always.append([a, b])
    return {
        "fixture": "F3",
        "total": 2 ** len(free),
        "admissible": len(admissible),
        "alwaysComparable": always,
    }


def build():
    out = {"status": "VERIFIED", "generator": "mode_sum_oracle.py"}

    pj = []
    for (n, m, dx, dt) in [(64, 1.0, 0, 1.0), (64, 1.0, 3, 2.0), (64, 1.0, -7, 5.5),
                           (128, 0.1, 10, 12.0), (8, 1.0, 1, 1.0)]:
        pj.append({"sites": n, "mass": m, "dx": dx, "dt": dt,
                   "D": float(commutator(n, m, dx, dt))})
    out["pauliJordan"] = pj

    exts, slope, intercept, broad = cone(128, 0.1, 32, 1e-3)
    out["cone"] = {"sites": 128, "mass": 0.1, "timeSteps": 32, "eps": 1e-3,
                   "extents": exts, "fittedSpeed": float(slope),
                   "intercept": float(intercept), "broadening": float(broad)}

    widths = {}
    for m in [1.0, 2.0, 4.0]:
        e = [extent(64, m, dt, 1e-3) for dt in range(1, 17)]
        widths[str(m)] = max(ex - dt for dt, ex in zip(range(1, 17), e))
    out["coneContainment"] = {"sites": 64, "timeSteps": 32, "eps": 1e-3,
                              "masses": [1.0, 2.0, 4.0],
                              "broadening": max(widths.values())}

    speeds = []
    for m in [0.01, 0.1, 0.2, 0.4, 0.8, 1.6]:
        _, s, _, _ = cone(128, m, 32, 1e-3)
        speeds.append({"mass": m, "fittedSpeed": float(s)})
    out["massSweep"] = {"sites": 128, "timeSteps": 32, "eps": 1e-3, "speeds": speeds}

    slices = []
    for t in range(1, 16):
        if any(abs(commutator(64, 1.0, dx, t)) < 1e-3 for dx in range(64)):
            slices.append(t)
    out["hypersurfaces"] = {"sites": 64, "mass": 1.0, "timeSteps": 16, "eps": 1e-3,
                            "commutingSlices": slices}

    g = lattice_graph(8, 1.0, 4, 1e-3)
    points, cliques = minimal_points(g)
    pg = nx.Graph()
    pg.add_nodes_from(range(len(points)))
    for i, j in itertools.combinations(range(len(points)), 2):
        if all(a == b or g.has_edge(a, b) for a in points[i] for b in points[j]):
            pg.add_edge(i, j)
    out["latticeGraph"] = {"sites": 8, "mass": 1.0, "timeSteps": 4, "eps": 1e-3,
                           "cliqueCount": len(cliques), "sliceCount": 4,
                           "pointCount": len(points),
                           "maxHypersurface": max(len(c) for c in nx.find_cliques(pg))}

    out["orientations"] = orientation_fixture()
    return out


def close(a, b):
    if isinstance(a, dict):
        return isinstance(b, dict) and a.keys() == b.keys() and all(
            close(a[k], b[k]) for k in a if k not in ("status", "generator"))
    if isinstance(a, list):
        return isinstance(b, list) and len(a) == len(b) and all(close(x, y) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return abs(float(a) - float(b)) <= 1e-12 * max(1.0, abs(float(a)))
    return a == b


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--write")
    p.add_argument("--verify")
    args = p.parse_args()
    reference = build()
    if args.verify:
        with open(args.verify) as f:
            candidate = json.load(f)
        if not close(reference, candidate):
            print("MISMATCH: candidate fixture disagrees with the oracle", file=sys.stderr)
            sys.exit(1)
        candidate["status"] = "VERIFIED"
        with open(args.verify, "w") as f:
            json.dump(candidate, f, indent=2, sort_keys=True)
            f.write("\n")
        print("verified", args.verify)
        return
    text = json.dumps(reference, indent=2, sort_keys=True) + "\n"
    if args.write:
        with open(args.write, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
