"""Smoke tests for the pyicis module (run with PYTHONPATH at the built
extension)."""

import pyicis


def check(cond, msg):
    if not cond:
        raise SystemExit("FAIL: " + msg)


def main():
    rep = pyicis.classify("x^2 + y^3 ; x*y^3", p=5)
    check(rep["type"] == "I0_even", "classify tag: %r" % rep)
    check(rep["params"]["q"] == 3, "classify params: %r" % rep)
    check(rep["simple"] is True, "classify simple flag")

    rep2 = pyicis.classify("x*y ; x^2*y", p=5)
    check(rep2["type"] == "NotICIS", "NotICIS detection")

    t = pyicis.tjurina("x^2 ; y^3", p=7)
    check(t["tau"] == 7 and t["tau_sec"] == 7, "tjurina values: %r" % t)

    basis = pyicis.t1sec_basis("x^2 ; y^3", p=7)
    check(len(basis) == 7, "basis size: %r" % basis)
    check("(x,0)" in basis, "basis contents: %r" % basis)

    nf = pyicis.normal_form("H", [4])
    check(nf == "y^4 + x^2 ; x*y^2", "normal form text: %r" % nf)

    check(pyicis.is_icis("x^2 ; y^3", p=5)["icis"] is True, "is_icis")

    hist = pyicis.unfold("x^2 ; y^3", p=3)
    check(hist["total"] == 81, "G5_0/GF(3) fiber count: %r" % hist)

    v = pyicis.order("x*y ; x^3 + y^3", [6, 9], [3, 3])
    check(v == 0, "weighted order: %r" % v)

    poly = pyicis.repro_char2()
    check(
        poly == "a^4*b^2*c^4*d+a^2*b^4*c^4*d+a^4*c^2*d^3+b^4*c^2*d^3",
        "char-2 elimination output: %r" % poly,
    )

    print("python smoke: all checks passed")


if __name__ == "__main__":
    main()
