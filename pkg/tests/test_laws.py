import json
import random
from pathlib import Path

import pytest

from slopes import lattices as lattices_mod
from slopes.core import Budget
from slopes.filtered import FilteredBackend
from slopes.lattices import EuclideanLattice, LatticeBackend
from slopes.laws import (
    bost_experiment,
    check_degree_axioms,
    check_dominance,
    check_exactness,
    check_hn_uniqueness,
    check_minmax,
    check_coprime_stability,
    check_duality_filtered,
    check_tensor_mult_filtered,
    gr_kernel_demo,
    morphism_slope_law,
    sample_filtered_space,
)
from slopes.tables import TableBackend, load_table

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "slopes" / "fixtures"


def table(name):
    return TableBackend(load_table(json.loads((FIXTURES / name).read_text())))


def test_axioms_filtered_clean():
    report = check_degree_axioms("filtered", 60, seed=1)
    assert report["violations"] == []
    assert report["checked"] > 10


def test_axioms_lattice_clean():
    report = check_degree_axioms("lattice", 40, seed=2)
    assert report["violations"] == []


def test_axioms_table_eq5_2_additivity():
    report = check_degree_axioms("table", 0, seed=0, table=table("eq5_2.json"))
    assert report["violations"] == [] and report["checked"] == 1


def test_axioms_detect_fault_injection(monkeypatch):
    """A corrupted quotient metric must surface as an additivity violation."""

    real = lattices_mod.quotient_with_metric

    def corrupted(lat, sub):
        q = real(lat, sub)
        if q.rank == 0:
            return q
        g = [[2 * c for c in row] for row in q.gram]
        return EuclideanLattice(g)

    monkeypatch.setattr("slopes.laws.quotient_with_metric", corrupted)
    report = check_degree_axioms("lattice", 40, seed=2)
    assert any(v["kind"] == "additivity" for v in report["violations"])


def test_exactness_lattice_counterexample():
    backend = LatticeBackend()
    report = check_exactness(backend, [EuclideanLattice.standard(2)])
    assert report["exact"] is False
    assert report["witness"]["subobject"] == {"basis_columns": [[1, 1]]}
    assert report["witness"]["sub_slope"] == {"neg_half_log": "2"}


def test_exactness_filtered_single_filtration_none():
    rng = random.Random(9)
    backend = FilteredBackend()
    objects = [sample_filtered_space(rng, dim_max=3, n=1) for _ in range(25)]
    report = check_exactness(backend, objects)
    assert report["exact"] is None


def test_exactness_table_eq5_1():
    t = table("eq5_1.json")
    report = check_exactness(t, ["O2"])
    assert report["exact"] is False
    assert report["witness"]["subobject"] == "Om1"


def test_gr_kernel_demo_cases():
    t = table("eq5_1.json")
    by_kernel = {m.kernel: m for m in t.morphisms()}
    assert gr_kernel_demo(t, by_kernel["Om1"])["iso_possible"] is False
    assert gr_kernel_demo(t, by_kernel["0"])["iso_possible"] is True
    assert gr_kernel_demo(t, by_kernel["O2"])["iso_possible"] is True


def test_gr_kernel_requires_kernel_data():
    t = table("eq5_1.json")
    m = t.morphisms()[0]
    broken = type(m)(source=m.source, target=m.target, kernel=None)
    with pytest.raises(ValueError):
        gr_kernel_demo(t, broken)


def test_morphism_slope_law():
    report = morphism_slope_law(table("eq5_1.json"))
    assert report["violations"] == [] and report["checked"] >= 1


def test_morphism_slope_law_filtered():
    from slopes.laws import morphism_slope_law_filtered

    report = morphism_slope_law_filtered(10, seed=21)
    assert report["checked"] >= 5
    assert report["violations"] == []


def test_minmax_random():
    report = check_minmax(80, seed=3)
    assert report["failures"] == []
    assert report["checked"] > 20


def test_uniqueness_and_dominance_on_fixture_tables():
    budget = Budget()
    for name in ("eq5_1.json", "rem3_2_5.json", "hn_chain.json"):
        t = table(name)
        for oid in t.cat.objects:
            if oid == "0":
                continue
            uni = check_hn_uniqueness(t, oid, budget)
            assert uni["qualifying"] == 1 and uni["matches_hn"], (name, oid)
            dom = check_dominance(t, oid, budget)
            assert dom["dominance_failures"] == 0


def test_uniqueness_and_dominance_filtered_random():
    rng = random.Random(13)
    backend = FilteredBackend()
    for _ in range(25):
        v = sample_filtered_space(rng, dim_max=3, n=2)
        uni = check_hn_uniqueness(backend, v)
        assert uni["qualifying"] == 1 and uni["matches_hn"]
        dom = check_dominance(backend, v)
        assert dom["dominance_failures"] == 0


def test_tensor_mult_filtered():
    report = check_tensor_mult_filtered(25, seed=5)
    assert report["failures"] == []


def test_bifil_tensor_semistable_evidence():
    from slopes.laws import check_bifil_tensor_semistable

    report = check_bifil_tensor_semistable(6, seed=15)
    assert report["found"] >= 4
    assert report["failures"] == []


def test_duality_filtered():
    report = check_duality_filtered(30, seed=6)
    assert report["failures"] == []


def test_coprime_stability():
    report = check_coprime_stability(8, seed=7)
    assert report["found"] >= 8
    assert report["failures"] == []


def test_bost_experiment_reports_no_counterexample():
    report = bost_experiment(3, seed=8)
    assert report["pairs"] >= 1
    assert report["counterexamples"] == []
