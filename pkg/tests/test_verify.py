import pytest

from growthops import multiindex, verify


def test_identities_on_small_corpus():
    cs = verify.corpus(size=20, seed=5)
    for res in (verify.check_faa_di_bruno(cs), verify.check_product_rule(cs), verify.check_psi_phi(cs)):
        assert res.passed, res.counterexample
        assert res.cases >= 20


def test_multinomial_check_and_fault_detection(monkeypatch):
    assert verify.check_multinomial().passed
    good = multiindex.multinomial
    monkeypatch.setattr(multiindex, "multinomial", lambda n, k: good(n, k) + (n == 4))
    res = verify.check_multinomial()
    assert not res.passed
    assert res.counterexample["n"] == 4 and res.counterexample["got"] == res.counterexample["oracle"] + 1


def test_mobius_and_nested_checks():
    assert verify.check_mobius(samples=100).passed
    assert verify.check_nested_integral(radii=(0.5,), kmax=2).passed


def test_corpus_is_seeded():
    a, b = verify.corpus(size=3, seed=1), verify.corpus(size=3, seed=1)
    assert [c.describe() for c in a] == [c.describe() for c in b]


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run_suite("nope")
