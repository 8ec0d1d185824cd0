import json
import os
from fractions import Fraction
from pathlib import Path

import pytest

import multispec

SPECS = Path(os.environ.get("MULTISPEC_SPEC_DIR", Path(__file__).resolve().parents[2] / "data" / "specs"))
BIPARTITE = {
    "kappa": 2,
    "alpha": ["1/2", "1/2"],
    "gamma": [[0, 1], [1, 0]],
    "p": 1,
    "even_moments": [1] * 8,
}


def test_limiting_moments_are_fractions():
    m = multispec.limiting_moments(BIPARTITE, 4)
    assert m == [1, 0, Fraction(1, 2), 0, 1]
    assert all(isinstance(x, Fraction) for x in m)


def test_spec_from_file_and_text():
    path = SPECS / "path3.json"
    assert multispec.limiting_moments(path, 2) == multispec.limiting_moments(path.read_text(), 2)
    assert multispec.validate_spec(str(path))["alpha"] == ["1/3", "1/3", "1/3"]


def test_oracle_matches_recurrence():
    star = SPECS / "star4.json"
    m = multispec.limiting_moments(star, 8)
    for order in (0, 2, 4, 6, 8):
        assert multispec.oracle_moment(star, order) == m[order]


def test_walk_listing():
    walks = dict(multispec.essential_walks(BIPARTITE, 2))
    assert walks == {"1_1,1_2,1_1": Fraction(1, 4), "1_2,1_1,1_2": Fraction(1, 4)}
    assert len(multispec.essential_walks(BIPARTITE, 4)) == 6


def test_identities_and_clusters():
    assert multispec.verify_first_splitting(BIPARTITE, 3, 2)
    assert multispec.verify_second_splitting(BIPARTITE, 1, 2)
    assert multispec.cluster_pass_count(2, [1]) == 2
    assert multispec.brute_force_cluster_count(1, [1, 1]) == multispec.cluster_pass_count(1, [1, 1])


def test_errors_map_to_python_exceptions():
    bad = dict(BIPARTITE, gamma=[[0, 0], [0, 0]])
    with pytest.raises(multispec.SpecError, match="gamma-disconnected"):
        multispec.limiting_moments(bad, 2)
    assert issubclass(multispec.SpecError, ValueError)
    with pytest.raises(multispec.GuardError):
        multispec.essential_walks(BIPARTITE, 14)


def test_sampling_is_reproducible():
    spec = dict(BIPARTITE, p=2)
    a = multispec.sample_matrix(spec, 200, "rademacher", 5)
    assert a == multispec.sample_matrix(spec, 200, "rademacher", 5)
    assert all(i < j for i, j, _ in a)
    exact = multispec.sample_moments(spec, 200, "rademacher", 5, 4)
    eigen = multispec.sample_moments(spec, 200, "rademacher", 5, 4, method="eigen")
    assert exact[2] == pytest.approx(2 * len(a) / 200)
    assert eigen[4] == pytest.approx(exact[4], rel=1e-8)


def test_studies():
    spec = dict(BIPARTITE, p=2)
    rows = multispec.convergence_study(spec, "rademacher", [200], 2, 20, 1)
    assert [r["k"] for r in rows] == [1, 2]
    assert rows[1]["limit"] == 1
    c, se = multispec.correlator(spec, "rademacher", 200, 2, 2, 20, 1)
    assert c > 0 and se > 0
    report = multispec.carleman(BIPARTITE)
    assert report["consistent"] and 0 <= report["gamma"] <= 2


def test_cli_entry_point():
    code, out, err = multispec.run_cli(["moments", "--spec", SPECS / "bipartite.json", "--order", "2", "--json"])
    assert code == 0, err
    doc = json.loads(out)
    assert doc["rows"][2]["m_s"] == "1/2"
    code, _, err = multispec.run_cli(["moments", "--spec", SPECS / "disconnected.json"])
    assert code == 1 and "gamma-disconnected" in err
