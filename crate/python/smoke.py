"""Smoke test for the etaq_py bindings.

Build and install first:  cd crates/etaq-py && maturin develop --release
"""

from fractions import Fraction

import etaq_py as eq


def main():
    f = eq.EtaQuotient("1^1 2^1 3^1 6^3")
    assert f.level == 6 and f.weight == 3
    assert dict(f.cusp_orders()) == {1: 14, 2: 16, 3: 18, 6: 24}
    assert f.is_cuspform_side()

    theta2 = eq.EtaQuotient("1^-4 2^10 4^-4")
    coeffs = [c for _, c in theta2.expand(6)]
    assert coeffs == [1, 4, 4, 0, 4, 8, 0]

    g = eq.EtaQuotient("1^-15 2^16 7^1", level=98)
    d = eq.dimension(g)
    assert d["status"] == "exact" and d["value"] == 8

    assert eq.classify(4)["count"] == 192
    assert eq.invariants(36)["genus"] == 1

    rows = eq.hecke_check(f, lmax=13, nmax=5)
    assert rows and all(r["equal"] for r in rows)

    level1 = eq.search([1])
    assert len(level1) == 24

    rep = eq.eis_verify("7", "-4", nmax=4, cmax=300, tol=1e-2)
    assert rep["pass"], rep

    half = eq.EtaQuotient("1^-7 2^17 4^-3")
    assert half.weight == Fraction(7, 2) and half.cover_index == 2

    try:
        eq.EtaQuotient("1^x")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed input accepted")

    print("etaq_py smoke test passed")


if __name__ == "__main__":
    main()
