"""Quick end-to-end check of the `starters` extension module.

Build it first, e.g. `maturin develop -m crates/py/Cargo.toml`, or copy
target/release/libstarters.so to python/starters.so.
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import starters


def main():
    base = starters.Pairing(7, [(2, 3), (4, 6), (1, 5)])
    assert base.verify().is_strong
    assert starters.admissible_keys(base) == [1, 2, 4]
    assert starters.crt(5, 1, 7) == 19

    out = starters.triplicate(base, 1)
    assert out.status == "SAT", out
    a, b = out.starter_a, out.starter_b
    assert a.order == 21 and a.verify() and b.verify()
    assert json.loads(out.report_json)["starter_a_strong"] is True
    assert starters.Pairing.parse(a.to_json()) == a

    verdict = starters.inverse_test(a)
    assert verdict.status == "Inconclusive" and verdict.key == 1
    assert any(c.same_set(base) and k == 1 for c, k, _ in verdict.candidates)

    try:
        starters.triplicate(base, 0)
        raise AssertionError("zero key accepted")
    except starters.RefusedError:
        pass
    assert starters.triplicate(base, 0, force=True).status == "UNSAT"

    not_image = starters.Pairing(21, [(13, 12), (19, 17), (7, 4), (10, 14), (15, 20),
                                      (3, 9), (1, 8), (5, 18), (11, 2), (16, 6)])
    assert starters.inverse_test(not_image).status == "False"

    assert len(starters.enumerate(13)) == 8
    s = starters.hill_climb(25, seed=3)
    assert s.verify().is_strong
    assert "p cnf" in starters.encode_dimacs(base, 2)

    try:
        starters.Pairing(7, [(2, 3), (4, 6)])
        raise AssertionError("short pairing accepted")
    except starters.StarterError:
        pass

    summary = starters.inverse_sampling(39, 50, seed=1)
    assert summary["inconclusive"] == 0
    print("smoke test ok")


if __name__ == "__main__":
    main()
