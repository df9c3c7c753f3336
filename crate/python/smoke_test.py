"""Smoke test for the finshape Python module.

Build and install it first:
    pip install --no-build-isolation -e crates/python
"""

import finshape


def circle():
    return finshape.FiniteSpace.from_topology(
        ["a", "b", "c", "d"],
        [[], ["a"], ["b"], ["a", "b"], ["a", "b", "c"], ["a", "b", "d"], ["a", "b", "c", "d"]],
    )


def main():
    x = circle()
    assert len(x) == 4
    assert x.leq("a", "c") and not x.leq("c", "a")
    assert x.beat_points() == []
    assert len(x.core()) == 4
    h = x.homology()
    assert str(h) == "(Z; Z)", str(h)
    assert x == finshape.FiniteSpace(["a", "b", "c", "d"], [("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")])

    basis = finshape.Cover.minimal_basis(x)
    u = finshape.Cover(x, [["a", "b"], ["a", "b", "c"], ["a", "b", "d"]])
    assert basis.projection_to(u) == [0, 0, 1, 2]
    assert u.projection_to(basis) is None
    assert u.to_poset().is_contractible()
    assert not basis.to_poset().is_contractible()
    assert u.nerve().cone_apex() is not None

    assert finshape.cover_count(x) == 34
    assert len(finshape.covers(x, "all")) == 40
    assert finshape.rudimentary(x)["passed"]
    assert finshape.coherence(x)["passed"]

    verdict = finshape.sw_compare(x, x.subdivision())
    assert verdict["verdict"] == "equivalent", verdict
    assert finshape.sw_compare(x, finshape.FiniteSpace.chain(3))["verdict"] == "distinct"

    rp2 = finshape.SimplicialComplex(
        [str(i) for i in range(6)],
        [["0", "1", "2"], ["0", "2", "3"], ["0", "3", "4"], ["0", "4", "5"], ["0", "5", "1"],
         ["1", "2", "4"], ["2", "3", "5"], ["3", "4", "1"], ["4", "5", "2"], ["5", "1", "3"]],
    )
    assert rp2.homology().torsion(1) == [2]
    assert [len(finshape.census(n)) for n in range(1, 5)] == [1, 2, 5, 16]
    assert len(finshape.census(4, cumulative=True)) == 24

    try:
        finshape.FiniteSpace(["a", "b"], [("a", "b"), ("b", "a")])
    except ValueError:
        pass
    else:
        raise AssertionError("cyclic relation accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
