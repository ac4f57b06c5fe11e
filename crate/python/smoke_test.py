"""Smoke test for the pyramid_partitions extension module."""

import json

import pyramid_partitions as pp


def main():
    # enumeration agrees with the product formula
    for n, d in [(1, 6), (2, 5)]:
        assert pp.partition_series(n, d) == pp.product_formula(n, d), (n, d)

    items = pp.enumerate_partitions(1, 2)
    weights = sorted(w for _, w in items)
    assert weights[0] == (0, 0)
    assert len(items) == sum(1 for _ in items)
    s = pp.partition_series(1, 2)
    assert s.coeff(0, 0) == 1 and s.coeff(1, 0) == 1 and s.coeff(1, 1) == 2
    assert sum(c for _, _, c in s.terms()) == len(items)

    # series arithmetic
    m = pp.macmahon(6)
    assert [m.coeff(k, k) for k in range(4)] == [1, 1, 3, 6]
    z1 = pp.partition_series(1, 6)
    assert (m * z1).div_unit(m) == z1

    # configs round-trip through JSON and shuffle
    cfg, _ = max(items, key=lambda it: sum(it[1]))
    back = pp.DimerConfig.from_json(json.dumps(cfg.to_json()))
    assert back == cfg and back.canonical_key() == cfg.canonical_key()
    deleted, created = cfg.shuffle_counts()
    assert deleted == created + cfg.n
    assert len(cfg.shuffle()) == 2 ** created
    assert len(cfg.shuffle("vertical")) == 1
    try:
        cfg.shuffle("sideways")
    except ValueError:
        pass
    else:
        raise AssertionError("bad fill accepted")

    # identity checks
    assert "theorem1" in pp.check_ids()
    reports = pp.verify("general-n", degree=4, n=2)
    assert reports and all(r["equal"] for r in reports)
    assert not pp.verify("theorem1-other-reading", degree=4)[0]["equal"]

    field = pp.weight_field(1, 1, 2)
    assert len(field["horizontal"]) == 12

    triples = pp.enumerate_superrigid(3)
    assert any(t["z"] == 0 and t["q"] == 0 for t in triples)
    assert pp.one_leg_sum([2, 1], 6) == pp.one_leg_closed_form([2, 1], 6)
    zx = pp.superrigid_series(2, 4)
    assert zx.coeff(0, 0) == 1

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
