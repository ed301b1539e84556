"""Smoke test for the qmckay_py extension module."""

import qmckay_py as q


def main():
    assert q.coxeter_number("E8") == 30
    assert q.tensor(5, 3, 1) == {2: 1}
    assert q.tensor(5, 2, 2) == {0: 1, 2: 1}
    assert q.admissible_graphs(10) == ["A9", "D6"]
    assert q.subgroup_violation("D6") is None
    assert "twist" in q.subgroup_violation("E7")
    assert all(q.triangle_exact(7, n) for n in range(14))

    labels, hom, ext = q.hom_table("A2")
    assert len(labels) == 6 and len(hom) == 6
    assert all(hom[i][i] == 1 and ext[i][i] == 0 for i in range(6))

    rank, snf, bijection, order = q.k_group("E6")
    assert rank == 6 and bijection and order == 12
    assert set(snf) <= {0, 1}

    assert q.serre_violations("A1") == (0, 4)
    assert q.serre_violations("A3", -2)[0] == 0

    rows = q.restrict("D4")
    assert len(rows) == 24
    assert len({(tuple(d), s) for _, s, d in rows}) == 24

    try:
        q.hom_table("D5")
    except ValueError as e:
        assert "not a quantum subgroup graph" in str(e)
    else:
        raise AssertionError("D5 should be rejected")
    print("smoke test passed")


if __name__ == "__main__":
    main()
