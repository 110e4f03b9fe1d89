import math
import struct

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthops import specfile
from growthops.errors import ConfigError
from growthops.mobius import MobiusMap
from growthops.specfile import BUILTINS, MapSpec, RunConfig, SymbolSpec, WeightSpec
from growthops.symbols import LacunarySeries, MultiPoly, SelfMap

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
cplx = st.builds(complex, finite, finite)


def terms(N):
    return st.lists(st.tuples(cplx, st.tuples(*[st.integers(0, 4)] * N)), max_size=4).map(tuple)


@st.composite
def configs(draw):
    N = draw(st.integers(1, 3))
    w = st.one_of(st.builds(WeightSpec, st.just("standard"), st.floats(0.1, 3.0)),
                  st.builds(lambda a, b: WeightSpec("unit", a=a, b=a + b), st.floats(0.1, 1), st.floats(0.1, 1)))
    psi = draw(st.one_of(
        st.builds(lambda t: SymbolSpec("poly", N, t), terms(N)),
        st.builds(lambda a, o: SymbolSpec("lacunary", N, p=1, q=10, alpha=a, K=5, order=o),
                  st.floats(0.05, 0.95), st.integers(0, 3))))
    phi = draw(st.one_of(
        st.lists(terms(N), min_size=N, max_size=N).map(lambda cs: MapSpec("poly", tuple(cs))),
        st.lists(cplx, min_size=N, max_size=N).map(lambda a: MapSpec("mobius", alpha=tuple(a)))))
    return RunConfig(draw(w), draw(w), psi, phi, n=draw(st.integers(0, 4)), m=draw(st.integers(0, 4)),
                     p=draw(st.integers(1, N)), n0=draw(st.one_of(st.none(), st.integers(0, 5))),
                     max_m=draw(st.integers(6, 40)), dirs=draw(st.integers(1, 4096)),
                     seed=draw(st.integers(0, 2**31)), name=draw(st.text("abc-_ xyz\"\\", max_size=12)),
                     theorems=tuple(draw(st.lists(st.sampled_from(specfile.THEOREMS), min_size=1, max_size=4))),
                     restrict=draw(st.sampled_from(["phi", "phi_p"])))


def _bits(x):
    return struct.pack("<d", x)


@settings(max_examples=150, deadline=None)
@given(configs())
def test_round_trip_is_exact(cfg):
    back = specfile.loads(specfile.dumps(cfg))
    assert back == cfg
    for (c1, _), (c2, _) in zip(cfg.psi.terms, back.psi.terms):
        assert _bits(c1.real) == _bits(c2.real) and _bits(c1.imag) == _bits(c2.imag)


@pytest.mark.parametrize("name", list(BUILTINS))
def test_builtins_round_trip_and_build(name, tmp_path):
    cfg = BUILTINS[name]
    path = tmp_path / "c.toml"
    specfile.dump(cfg, path)
    assert specfile.load(path) == cfg
    phi = specfile.build_map(cfg.phi)
    assert isinstance(phi, SelfMap) and phi.N == 2
    assert specfile.build_symbol(cfg.psi).at_origin() == 1


GOOD = """
n = 1
m = 1

[nu]
kind = "standard"
alpha = 1.0

[mu]
kind = "standard"
alpha = 1.0

[psi]
kind = "poly"
dimension = 2
terms = [[1.0, 0.0, [0, 0]]]

[phi]
kind = "poly"
components = [[[0.5, 0.0, [1, 0]]], [[0.5, 0.0, [0, 1]]]]
"""


def test_documented_example_parses():
    cfg = specfile.loads(GOOD)
    assert cfg.n == 1 and cfg.dimension == 2 and cfg.phi.components[0][0][0] == 0.5


def _err(text):
    with pytest.raises(ConfigError) as exc:
        specfile.loads(text)
    return exc.value


def test_syntax_error_location():
    e = _err(GOOD.replace("alpha = 1.0", "alpha = = 1.0", 1))
    assert e.line == 7 and e.column is not None
    assert "line 7" in str(e)


def test_unterminated_document_location():
    e = _err(GOOD + "[phi\n")
    assert e.line is not None and e.column is not None


def test_semantic_errors_point_at_key():
    e = _err(GOOD.replace("n = 1", "n = 99"))
    assert e.line == 2 and e.column == 1
    e = _err(GOOD + "bogus = 3\n")
    assert "bogus" in str(e) and "[phi]" in str(e)
    e = _err("bogus = 3\n" + GOOD)
    assert e.line == 1
    e = _err(GOOD.replace("dimension = 2", "dimension = 3"))
    assert e.line is not None
    e = _err(GOOD.replace('kind = "poly"\ncomponents', 'kind = "rational"\ncomponents'))
    assert "unknown map kind" in str(e) and e.line is not None


def test_build_objects():
    lac = specfile.build_symbol(SymbolSpec("lacunary", 2, p=2, q=10, alpha=0.5, K=4, order=1))
    assert lac.exponents[0] == 2 and lac.p == 2
    g = specfile.build_map(MapSpec("mobius", alpha=(0.3 + 0j, 0j)))
    z = [[0.1, 0.2j]]
    assert abs(g(z)[0, 0] - MobiusMap([0.3, 0]).apply(z)[0, 0]) < 1e-14
    w = specfile.build_weight(WeightSpec("standard", 2.0))
    assert math.isclose(w(0.5), 0.75**2)
    f = MultiPoly({(1, 2): 2 - 1j}, 2)
    assert specfile.poly_spec(f) == ((2 - 1j, (1, 2)),)
