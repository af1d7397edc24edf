from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from qcong.congruences import (
    FAMILIES,
    TARGETS,
    SeriesCache,
    family_ids,
    integrality_audit,
    omega_table,
    sweep,
    sweep_equivalence,
    sweep_series_congruence,
    sweep_vanishing,
)
from qcong.newman import omega
from qcong.partitions import count_regular_table
from qcong.qseries import compile_quotient

STABLE_IDS = {
    "T1.1.i", "T1.1.ii.a", "T1.1.ii.b", "T1.2.i", "T1.2.ii", "T1.2.iii-printed", "T1.2.iii-corrected",
    "T1.3.i", "T1.3.ii", "T1.3.iii", "T1.3.iv", "T1.4.i", "T1.4.ii.a", "T1.4.ii.b",
    "T1.5.i", "T1.5.ii", "T1.5.iii", "T1.5.iv", "T1.6", "R1", "S1", "S2",
}


@pytest.fixture(scope="module")
def cache():
    return SeriesCache()


def test_registry_ids():
    assert set(family_ids()) == STABLE_IDS


# --- integrality -------------------------------------------------------------------


def test_printed_index_is_fractional():
    fam = FAMILIES["T1.2.iii-printed"]
    assert fam.index(0, 3, 1) == Fraction(663, 2)
    rep = integrality_audit(fam, primes=[3])
    assert rep.status == "fail"
    first = rep.failures[0]
    assert first.params == {"n": 0, "p": 3, "j": 1}
    assert first.to_dict()["index"] == "331.5"


def test_corrected_index_is_integral():
    fam = FAMILIES["T1.2.iii-corrected"]
    assert fam.index(0, 3, 1) == 405
    assert integrality_audit(fam).passed


def test_t11_index_integral():
    assert FAMILIES["T1.1.i"].index(0, 5, 0) == 261
    for fid in ("T1.1.i", "T1.1.ii.a", "T1.1.ii.b", "T1.4.i", "T1.4.ii.a", "T1.4.ii.b", "T1.6", "T1.2.ii"):
        assert integrality_audit(fid, primes=[5, 7, 11, 13], j_max=3).passed, fid


# --- sweeps against an independent oracle --------------------------------------------


def test_t13i_against_dp_oracle():
    table = count_regular_table(8 * 40 + 7, {4, 9})
    assert table[7] == 12
    assert all(table[8 * n + 7] % 12 == 0 for n in range(41))
    rep = sweep("T1.3.i", n_max=40)
    assert rep.passed and rep.checks_run == 41


def test_r1_against_dp_oracle():
    table = count_regular_table(686 * 3 + 98 * 6 + 21, {3, 8})
    for n in range(4):
        for r in (0, 1, 2, 4, 5, 6):
            assert table[686 * n + 98 * r + 21] % 2 == 0
    # the excluded residue r = 3 is not a congruence
    assert any(table[686 * n + 98 * 3 + 21] % 2 for n in range(4))


@pytest.mark.parametrize("fid", sorted(STABLE_IDS - {"T1.2.iii-printed", "T1.4.ii.a", "T1.4.ii.b"}))
def test_family_passes_at_defaults(fid, cache):
    rep = sweep(fid, cache=cache)
    assert rep.status == "pass", rep.summary()
    assert rep.checks_run > 0


def test_printed_fails_and_corrected_passes(cache):
    printed = sweep("T1.2.iii-printed", primes=[3], cache=cache)
    assert printed.status == "fail"
    assert printed.failures[0].params["check"] == "integrality"
    corrected = sweep("T1.2.iii-corrected", primes=[3], n_max=20, cache=cache)
    assert corrected.passed and corrected.checks_run == 2 * 21


def test_series_congruences(cache):
    s2 = sweep_series_congruence("S2", 150, cache=cache)
    assert s2.passed and s2.checks_run == 150
    b49 = compile_quotient(TARGETS["b_4_9"].quotient, 7, 8)
    assert b49.coeff(7) == 4
    s1 = sweep_series_congruence("S1", 150, cache=cache)
    assert s1.passed


def test_t13iii_coefficientwise_matches_s2(cache):
    assert sweep("T1.3.iii", n_max=149, cache=cache).passed


def test_t16_k0_is_trivial():
    fam = FAMILIES["T1.6"]
    for n in range(10):
        assert fam.index(n, None, 0) == fam.other_index(n, None, 0)


# --- omega branches --------------------------------------------------------------------


def test_omega_dispatch_matches_newman(cache):
    primes = [5, 7, 11, 13]
    b_table = omega_table("b", primes, 2)
    assert b_table == {p: omega("b", p, 2) for p in primes}
    rep = sweep("T1.1.i", cache=cache)
    assert rep.passed
    assert rep.skipped.get("omega_branch") == sum(1 for p in primes if b_table[p] != 0)
    rep = sweep("T1.1.ii.a", cache=cache)
    assert rep.skipped.get("omega_branch", 0) == sum(1 for p in primes if b_table[p] == 0)


def test_t14ii_vacuous_with_table(cache):
    for fid in ("T1.4.ii.a", "T1.4.ii.b"):
        rep = sweep(fid, cache=cache)
        assert rep.status == "vacuous"
        assert rep.checks_run == 0
        assert any("omega table" in note and "p=7: 0" in note for note in rep.notes)


def test_hypothesis_filter_nonempty():
    hyp = FAMILIES["T1.1.ii.a"].hypotheses[0]
    for p in (7, 13):
        assert any(hyp.holds(n, p, 0) for n in range(50))
        assert not all(hyp.holds(n, p, 0) for n in range(50))
    assert omega("b", 7, 2) == 1


def test_t11ii_active_at_seven(cache):
    rep = sweep("T1.1.ii.a", primes=[7], n_max=200, cache=cache)
    assert rep.passed
    assert rep.skipped.get("hypothesis", 0) > 0


# --- structural properties --------------------------------------------------------------


@pytest.mark.parametrize("fid", ["T1.2.ii", "T1.5.iv", "T1.6"])
def test_equivalence_symmetric(fid, cache):
    fam = FAMILIES[fid]
    a = sweep_equivalence(fam, n_max=15, primes=[3, 5], cache=cache)
    b = sweep_equivalence(fam.swapped(), n_max=15, primes=[3, 5], cache=cache)
    assert a.status == b.status == "pass"
    assert a.checks_run == b.checks_run


def test_swapped_rejects_asymmetric():
    with pytest.raises(ValueError):
        FAMILIES["T1.3.iv"].swapped()


def test_wrong_target_is_caught(cache):
    rep = sweep("T1.3.i", target="b_4_7", n_max=30, cache=cache)
    assert rep.status == "fail"
    assert rep.failures[0].residue


def test_true_358_count_breaks_t15ii():
    # the (3,5,8) families hold for the quotient with f120 downstairs, not for the count
    table = count_regular_table(1011, {3, 5, 8})
    assert table[1011] == 2452811127648208046287
    rep = sweep("T1.5.ii", target="b_3_5_8", n_max=5)
    assert rep.status == "fail"
    assert rep.failures[0].index == 1011


def test_order_shortfall_is_counted_not_hidden(cache):
    rep = sweep("T1.2.i", n_max=50, order=3000, cache=cache)
    assert rep.skipped["beyond_order"] > 0
    assert rep.checks_run + rep.skipped["beyond_order"] == 6 * 51


def test_kind_mismatch():
    with pytest.raises(ValueError):
        sweep_vanishing(FAMILIES["T1.3.iv"])
    with pytest.raises(ValueError):
        sweep_equivalence(FAMILIES["T1.3.i"])
    with pytest.raises(KeyError):
        sweep("T9.9")
    with pytest.raises(KeyError):
        sweep("T1.3.i", target="nope")


def test_pass_implies_checks():
    rep = sweep("T1.3.i", n_max=0)
    assert rep.passed and rep.checks_run == 1


# --- cache ----------------------------------------------------------------------------


def test_cache_reuses_longer_entry():
    c = SeriesCache()
    eq = TARGETS["b_4_9"].quotient
    long = c.get(eq, 500, 8)
    short = c.get(eq, 100, 8)
    assert short == long.truncate(100)
    assert c.get(eq, 600, 8).truncate(500) == long


def test_cache_concurrent_reads_agree():
    c = SeriesCache()
    eq = TARGETS["b_3_8"].quotient
    orders = [2000, 500, 3000, 1000] * 4
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(lambda n: c.get(eq, n, 2), orders))
    ref = compile_quotient(eq, 3000, 2)
    for n, s in zip(orders, got):
        assert s == ref.truncate(n)
