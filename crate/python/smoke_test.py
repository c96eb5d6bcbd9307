"""Smoke test for the gupb_lab extension module.

Build with `cargo build --release -p gupb-py`, then copy
target/release/libgupb_lab.so next to this file as gupb_lab.so.
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import gupb_lab as gl


def main():
    assert "M5057" in gl.catalog_names()
    m = gl.Graph.from_catalog("M5057")
    assert (m.n, m.is_regular(), m.is_connected()) == (13, 4, True)
    assert m.identify() == "M5057"
    assert gl.Graph.from_graph6(m.graph6()) == m

    quartic8 = gl.enumerate(8, 4, "all")
    assert len(quartic8) == 6
    report = gl.filter_graphs(quartic8, "O3")
    assert [r["pattern"] for r in report["rows"]] == ["A6", "K5", "H5", "C4"]
    assert len(report["survivors"]) == 1

    a6 = gl.Graph.from_catalog("A6")
    assert gl.find_embedding(a6, a6) is not None
    assert gl.find_embedding(gl.Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), gl.Graph(3, [(0, 1)])) is None

    prop = gl.propagate(m, 3)
    assert prop["status"]["status"] == "open"
    assert sorted(map(sorted, prop["forced"])) == [[2, 3], [8, 9, 10]]
    assert gl.propagate(a6, 3)["status"]["status"] == "impossible"

    label, vecs = gl.solve(gl.Graph.from_catalog("D6"), 3, restarts=20, iterations=2000)
    assert label == "found" and len(vecs) == 6
    assert gl.verify(gl.Graph.from_catalog("D6"), 3, vecs)["pass"]

    assert gl.verify_fixture("M5057_FOR3")["pass"]
    assert gl.fixture_rank("M5057_FOR3", [2, 3, 8, 9, 10]) == 2

    b = gl.lower_bound(4, 3)
    assert (b["rational_bound"], b["minimal_size"]) == ("47/2", 24)
    assert gl.count_degree_sequences(14, [3, 4, 5]) == 120
    assert gl.edge_feasible(13, [4, 4, 4]) and not gl.edge_feasible(14, [4, 4, 4])

    ev = gl.run_scenario("verify_paper_reps")
    assert ev["verdict"]["status"] == "verified"
    print("smoke test passed")


if __name__ == "__main__":
    main()
