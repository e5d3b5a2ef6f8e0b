import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filiso.admissibility import FilteredIsocrystal
from filiso.generate import curated_fixtures, random_filtered, random_filtration, random_lattice
from filiso.serialize import (
    SchemaError,
    canonical_dumps,
    filtration_from_json,
    filtration_to_json,
    instance_from_json,
    instance_hash,
    instance_to_json,
    report_dumps,
)

from conftest import rng_of, seeds


@given(seeds, st.integers(1, 5))
def test_filtration_roundtrip(seed, n):
    f = random_filtration(rng_of(seed), n)
    doc = filtration_to_json(f)
    weights = [bp["weight"] for bp in doc["breakpoints"]]
    assert filtration_from_json(json.loads(json.dumps(doc))) == f
    assert [w for w, _ in reversed(f.breakpoints)] == [Fraction(w) for w in weights]


@given(seeds, st.integers(1, 4))
def test_instance_roundtrip(seed, n):
    rng = rng_of(seed)
    fi = random_filtered(rng, n)
    lat = random_lattice(rng, n, fi.p)
    doc = json.loads(json.dumps(instance_to_json(fi, lattice=lat, name="x")))
    inst = instance_from_json(doc)
    assert inst.filtered == fi
    assert inst.lattice == lat
    assert inst.name == "x"


def test_fixture_files_match_generator(fixtures_dir):
    for fx in curated_fixtures():
        path = fixtures_dir / f"fixture_{fx.name}.json"
        doc = json.loads(path.read_text())
        assert doc == instance_to_json(fx.fi, name=f"fixture_{fx.name}")
        assert instance_from_json(doc).filtered == fx.fi


def test_hash_ignores_key_order():
    a = {"p": 3, "phi": [["1"]]}
    b = {"phi": [["1"]], "p": 3}
    assert canonical_dumps(a) == canonical_dumps(b)
    assert instance_hash(a) == instance_hash(b)
    assert report_dumps(a).endswith("\n")


@pytest.mark.parametrize("doc,where", [
    ({"phi": [["1"]]}, "missing field 'p'"),
    ({"p": 3, "phi": [["x"]]}, "instance.phi[0][0]"),
    ({"p": 3, "phi": [[1.5]]}, "instance.phi[0][0]"),
    ({"p": 3, "phi": [["1", "0"]]}, "square"),
    ({"p": 3, "phi": [["1"]], "hodge": {"dim": 1, "breakpoints": [{"weight": "0"}]}},
     "instance.hodge.breakpoints[0]"),
    ({"p": 3, "phi": [["1"]], "hodge": {"dim": 1, "breakpoints": [{"weight": "0", "basis": [["1", "2"]]}]}},
     "length 1"),
    ({"p": "3", "phi": [["1"]]}, "instance.p"),
])
def test_schema_errors_name_location(doc, where):
    with pytest.raises(SchemaError) as exc:
        instance_from_json(doc).filtered if "hodge" in doc else instance_from_json(doc)
    assert where in str(exc.value)


def test_missing_hodge():
    inst = instance_from_json({"p": 3, "phi": [["1"]]})
    with pytest.raises(SchemaError, match="hodge"):
        inst.filtered
    assert isinstance(instance_from_json(instance_to_json(curated_fixtures()[0].fi)).filtered,
                      FilteredIsocrystal)
