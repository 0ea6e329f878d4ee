"""Smoke test for the turan extension module.

Build and install first, e.g. `maturin build --release -o dist` in crates/py
followed by `pip install dist/*.whl`, then run `python python/smoke_test.py`.
"""

import turan
from turan import Graph


def main() -> None:
    k3 = Graph.complete(3)
    p3 = Graph.from_graph6("Bg")
    claw = Graph.star(3)
    assert p3 == Graph.path(3)
    assert k3.graph6() == "Bw"
    assert p3.canonical_form() == "BW"
    assert claw.is_tree() and not k3.is_tree()
    assert Graph.from_edge_list(p3.edge_list()) == p3

    assert turan.count_copies(k3, p3) == 3
    assert turan.find_copy(p3, k3) is None

    prof = turan.exponent_r(k3, claw)
    assert (prof.status, prof.r, prof.witness, prof.t_used) == ("Finite", 1, [], 4)
    assert prof.to_dict() == {"status": "Finite", "r": 1, "witness_U": [], "t_used": 4}
    assert turan.verify_profile(k3, claw, prof) == (True, None)
    assert turan.exponent_r(Graph.path(4), p3).status == "Zero"

    graph, phi, copy_index = turan.blow_up(p3, [1], 3)
    assert graph.n == 7 and len(phi) == 7 and copy_index.count(0) == 1
    assert turan.count_copies(graph, Graph.star(6)) == 1

    growth = turan.growth_report(p3, Graph.path(4), [9, 18, 36])
    assert [c for _, c in growth["rows"]] == [28, 120, 561]
    assert growth["csv"].splitlines()[0] == "n,count,slope"

    ex = turan.brute_force_ex(5, Graph.path(2), Graph.path(4))
    construction = turan.lower_bound_construction(Graph.path(2), Graph.path(4), 5)
    assert ex["max_count"] >= turan.count_copies(construction, Graph.path(2))

    report = turan.run_pipeline(Graph.star(20), p3, claw, constants=2)
    assert report["m"] == "190"
    assert report["structured"]["embedding"]["status"] == "embedded"
    assert isinstance(report["trace"], list)

    try:
        Graph.from_graph6("B")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed graph6 accepted")

    print("turan smoke test: ok")


if __name__ == "__main__":
    main()
