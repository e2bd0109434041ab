from __future__ import annotations

import pytest

from mumford_strata.cli import main
from mumford_strata.verify import corrupted_structures, run_verify, suite_poisson, suite_strata


def test_all_suites_pass():
    rep = run_verify("all", seed=0)
    assert rep["ok"], rep
    assert set(rep["suites"]) == {"resultants", "poisson", "strata"}


def test_report_names_every_check():
    rep = run_verify("all", seed=1)
    names = {n for s in rep["suites"].values() for n in s["checks"]}
    for expected in (
        "gcd_degree_pair",
        "subresultant_gcd",
        "gcd_degree_multi",
        "resultant_chain_threshold",
        "kernel_basis",
        "jacobi",
        "hamiltonian_equals_lax",
        "involution",
        "tangency",
        "shifted_index_correspondence",
        "sigma_equals_g_minus_rho",
        "jacobian_rank",
        "pushforward",
        "sample_round_trip",
    ):
        assert expected in names


def test_corrupted_table_fails_jacobi():
    tally = suite_poisson(0, max_g=2, structures=corrupted_structures)
    assert not tally.ok
    assert tally.counts["jacobi"][1] > 0


def test_strata_fixture_has_four_strata():
    tally = suite_strata(0, corpus=5, pushforwards=2)
    assert tally.ok
    # x^3 has 2 strata, x^3 (x-1)^2 has 4
    assert tally.counts["sample_round_trip"] == (6, 0)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_verify("nothing")


def test_cli_output_is_bytewise_deterministic(capsys):
    outputs = []
    for _ in range(2):
        assert main(["verify", "strata", "--seed", "3"]) == 0
        outputs.append(capsys.readouterr().out)
    assert outputs[0] == outputs[1]
