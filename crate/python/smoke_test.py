"""Smoke test for the pyrns3 extension module.

Build and install first:  maturin develop -m crates/py/Cargo.toml
"""

import random

import pyrns3


def main():
    s = pyrns3.ModuliSet(2)
    assert s.moduli == (4, 15, 17)
    assert s.range == 1020
    assert s.inverses == (3, 2, 2)

    rv = s.encode(100)
    assert (rv.r1, rv.r2, rv.r3) == (0, 10, 15)
    assert rv == pyrns3.ResidueVector(0, 10, 15)
    assert s.decode(rv) == 100 == s.crt(rv)

    t = s.trace(rv)
    assert (t["s1_prime"], t["s2"], t["s31"]) == (225, 85, 225)
    assert t["s2_bits"] == "01010101"
    assert (t["sum"], t["carry"], t["y"], t["x"]) == (85, 195, 25, 100)

    for x in range(s.range):
        assert s.decode(s.encode(x)) == x

    big = pyrns3.ModuliSet(32)
    rng = random.Random(1)
    for _ in range(1000):
        x = rng.randrange(big.range)
        assert big.decode(big.encode(x)) == x
        y = rng.randrange(big.range)
        prod = big.op("mul", big.encode(x), big.encode(y))
        assert big.crt(prod) == x * y % big.range

    try:
        s.encode(1020)
    except ValueError as e:
        assert "1020" in str(e)
    else:
        raise AssertionError("out-of-range X accepted")
    try:
        pyrns3.ModuliSet(0)
    except ValueError:
        pass
    else:
        raise AssertionError("n = 0 accepted")

    assert pyrns3.pairwise_coprime([4, 15, 17])
    assert not pyrns3.pairwise_coprime([2, 4, 15])
    assert pyrns3.converter_cost("ours", 2) == (151, 12)
    assert pyrns3.converter_cost("ref11", 3) == (136, 14)

    rows = pyrns3.table4()
    assert [r["a_ours"] for r in rows] == [151, 341, 674, 1400]
    assert [r["speedup_pct"] for r in rows] == [14.2, 12.5, 11.1, 10.0]
    assert pyrns3.table4_csv().splitlines()[1] == "8,2,3,151,136,11.02,12,14,14.2"

    print("pyrns3 smoke test: ok")


if __name__ == "__main__":
    main()
