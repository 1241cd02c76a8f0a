"""Witness searches: frozen small cases, band membership, minimality, tamper checks."""

import dataclasses
from fractions import Fraction

import pytest

from chartab.stats import StatKind, render_decimal
from chartab.tables import Dihedral, Extraspecial2, Psl2Even
from chartab.witness import (
    Scope,
    Witness,
    WitnessDomainError,
    WitnessFactor,
    WitnessInconsistencyError,
    WitnessQuery,
    verify_witness,
    witness_global,
    witness_local,
    witness_theta_character,
    witness_theta_group,
)

TENTH = Fraction(1, 10)
HUNDREDTH = Fraction(1, 100)


# ---------------------------------------------------------------------------
# frozen searches


def test_theta_character_coarse():
    w = witness_theta_character(Fraction(1, 2), TENTH)
    assert w.k == 0
    assert w.value == Fraction(9, 16)  # 1/2 + 2^-4
    assert w.factors == (WitnessFactor(Dihedral(4), "rot1", 1),)


def test_theta_character_fine():
    w = witness_theta_character(Fraction(1, 2), HUNDREDTH)
    assert w.k == 0
    assert w.value == Fraction(65, 128)
    assert w.factors == (WitnessFactor(Dihedral(7), "rot1", 1),)


def test_local_unit_class_coarse():
    w = witness_local(StatKind.U_CLASS, 1, TENTH)
    assert w.k == 1
    assert w.value == Fraction(31, 33)  # (q-1)/(q+1) at q = 32
    assert w.factors == (WitnessFactor(Psl2Even(5), "steinberg", 1),)


def test_local_zero_elem_coarse():
    w = witness_local(StatKind.Z_ELEM, 0, TENTH)
    assert w.k == 1
    assert w.value == Fraction(1, 16)
    assert w.factors == (WitnessFactor(Psl2Even(4), "steinberg", 1),)


def test_local_theta_class_parameters():
    # the step is 3/(2^(n-1) + 3); a wrong inequality (on 2^n) once sent
    # this search past the target with no way back
    w = witness_local(StatKind.THETA_CLASS, 0, HUNDREDTH)
    assert w.factors == (WitnessFactor(Dihedral(10), "rot1", 1),)
    assert w.k == 1
    assert w.value == Fraction(3, 515)


def test_theta_group_fine():
    w = witness_theta_group(Fraction(1, 2), HUNDREDTH)
    assert w.k == 0
    assert w.value == Fraction(518, 1027)  # z + u of the order-2^12 dihedral group
    assert w.factors == (WitnessFactor(Dihedral(11), None, 1),)


def test_theta_group_needs_extraspecial_tail():
    w = witness_theta_group(Fraction(9, 10), HUNDREDTH)
    assert w.k >= 1
    assert w.factors[0] == WitnessFactor(Dihedral(11), None, 1)
    assert w.factors[1].family == Extraspecial2(4)
    assert w.factors[1].power == w.k
    assert abs(w.value - Fraction(9, 10)) < HUNDREDTH


def test_searches_are_deterministic():
    a = witness_global(StatKind.U_ELEM, Fraction(1, 3), Fraction(1, 50))
    b = witness_global(StatKind.U_ELEM, Fraction(1, 3), Fraction(1, 50))
    assert a == b  # bit-identical dataclasses, not just close values


# ---------------------------------------------------------------------------
# band membership across a coarse grid


LOCAL_KINDS = [
    StatKind.Z_ELEM,
    StatKind.Z_CLASS,
    StatKind.U_ELEM,
    StatKind.U_CLASS,
    StatKind.THETA_CLASS,
]


@pytest.mark.parametrize("eps", [Fraction(1, 7), Fraction(1, 25), Fraction(1, 100)])
def test_grid_hits_the_band(eps):
    unit_targets = [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)]
    theta_targets = [Fraction(1, 2), Fraction(2, 3), Fraction(9, 10), Fraction(1)]
    witnesses = []
    for tgt in theta_targets:
        witnesses.append(witness_theta_character(tgt, eps))
        witnesses.append(witness_theta_group(tgt, eps))
    for kind in LOCAL_KINDS:
        for tgt in unit_targets:
            witnesses.append(witness_local(kind, tgt, eps))
            witnesses.append(witness_global(kind, tgt, eps))
    for w in witnesses:
        assert abs(w.value - w.query.target) < w.query.epsilon
        assert w.trail, "every search explains itself"
        assert any(s.value == w.value for s in w.trail)


def test_witness_powers_match_k():
    w = witness_global(StatKind.Z_CLASS, Fraction(1, 2), Fraction(1, 30))
    assert len(w.factors) == 1
    assert w.factors[0].power == w.k >= 1


# ---------------------------------------------------------------------------
# minimality: the accepted k is the first k in the band


def test_local_zero_minimality():
    eps = HUNDREDTH
    w = witness_local(StatKind.Z_ELEM, Fraction(1, 2), eps)
    step = Fraction(1, 128)  # steinberg zero fraction at q = 2^7
    assert w.factors[0].family == Psl2Even(7)
    value = lambda j: 1 - (1 - step) ** j
    assert value(w.k) == w.value
    assert abs(value(w.k) - Fraction(1, 2)) < eps
    assert w.k == 1 or abs(value(w.k - 1) - Fraction(1, 2)) >= eps


def test_global_unit_minimality():
    eps = Fraction(1, 50)
    w = witness_global(StatKind.U_CLASS, Fraction(1, 3), eps)
    assert w.factors[0].family == Extraspecial2(3)
    u = Fraction(64, 65)
    value = lambda j: u**j
    assert value(w.k) == w.value
    assert w.k > 1 and abs(value(w.k - 1) - Fraction(1, 3)) >= eps


def test_theta_character_minimality_deep_scan():
    eps = HUNDREDTH
    w = witness_theta_character(Fraction(1), eps)
    z0 = Fraction(1, 2) + Fraction(1, 128)
    step = Fraction(1, 128)
    value = lambda j: 1 - (1 - z0) * (1 - step) ** j
    assert w.k > 100  # the climb from just above 1/2 to 1 is slow by design
    assert value(w.k) == w.value
    assert abs(value(w.k - 1) - 1) >= eps


# ---------------------------------------------------------------------------
# domain validation


def test_query_parses_strings():
    q = WitnessQuery(StatKind.Z_ELEM, Scope.GROUP, "1/3", "1/50")
    assert q.target == Fraction(1, 3)
    assert q.epsilon == Fraction(1, 50)


def test_epsilon_must_be_positive():
    with pytest.raises(WitnessDomainError):
        witness_local(StatKind.Z_ELEM, Fraction(1, 2), 0)
    with pytest.raises(WitnessDomainError):
        witness_theta_group(Fraction(1, 2), Fraction(-1, 10))


def test_theta_target_range():
    with pytest.raises(WitnessDomainError) as exc:
        witness_theta_character(Fraction(2, 5), TENTH)
    assert "[1/2, 1]" in str(exc.value)
    assert "2/5" in str(exc.value)
    with pytest.raises(WitnessDomainError):
        witness_theta_group(Fraction(11, 10), TENTH)


def test_unit_target_range():
    with pytest.raises(WitnessDomainError):
        witness_local(StatKind.U_ELEM, Fraction(3, 2), TENTH)
    with pytest.raises(WitnessDomainError):
        witness_global(StatKind.Z_CLASS, Fraction(-1, 10), TENTH)


def test_element_theta_goes_through_its_own_searches():
    with pytest.raises(WitnessDomainError):
        witness_local(StatKind.THETA_ELEM, Fraction(1, 2), TENTH)
    with pytest.raises(WitnessDomainError):
        witness_global(StatKind.THETA_ELEM, Fraction(1, 2), TENTH)


# ---------------------------------------------------------------------------
# verification


def test_verify_small_witness_uses_table():
    w = witness_local(StatKind.Z_ELEM, 0, TENTH)
    report = verify_witness(w)
    assert report.replay_value == w.value
    assert report.table_value == w.value
    assert report.table_skipped is None


def test_verify_group_scope_table():
    w = witness_theta_group(Fraction(1, 2), Fraction(1, 8))
    report = verify_witness(w)
    assert report.table_value == w.value


def test_verify_skips_oversized_cells():
    # one factor of 16385 classes passes the class guard but not the cell guard
    w = witness_global(StatKind.Z_ELEM, 0, Fraction(1, 10**4))
    assert w.factors[0].family == Extraspecial2(7)
    report = verify_witness(w)
    assert report.table_value is None
    assert "cells" in report.table_skipped
    assert report.replay_value == w.value


def test_verify_skips_oversized_class_products():
    # 257 classes to the power ~178 is far past any explicit table
    w = witness_global(StatKind.U_ELEM, Fraction(1, 2), HUNDREDTH)
    assert w.k > 100
    report = verify_witness(w)
    assert report.table_value is None
    assert "classes exceed" in report.table_skipped


def test_verify_catches_tampered_value():
    w = witness_local(StatKind.U_ELEM, Fraction(1, 2), Fraction(1, 20))
    bad = dataclasses.replace(w, value=w.value + Fraction(1, 10**9))
    with pytest.raises(WitnessInconsistencyError) as exc:
        verify_witness(bad)
    assert str(w.value + Fraction(1, 10**9)) in str(exc.value)


def test_verify_catches_tampered_power():
    w = witness_global(StatKind.Z_ELEM, Fraction(1, 2), Fraction(1, 20))
    assert w.k > 1
    factors = (dataclasses.replace(w.factors[0], power=w.k - 1),)
    with pytest.raises(WitnessInconsistencyError):
        verify_witness(dataclasses.replace(w, factors=factors))


def test_verify_rejects_unknown_character():
    w = witness_local(StatKind.Z_ELEM, 0, TENTH)
    factors = (dataclasses.replace(w.factors[0], character="trivial"),)
    with pytest.raises(WitnessInconsistencyError) as exc:
        verify_witness(dataclasses.replace(w, factors=factors))
    assert "steinberg" in str(exc.value)


def test_verify_rejects_degenerate_witnesses():
    w = witness_local(StatKind.Z_ELEM, 0, TENTH)
    with pytest.raises(WitnessInconsistencyError):
        verify_witness(dataclasses.replace(w, factors=()))
    factors = (dataclasses.replace(w.factors[0], power=0),)
    with pytest.raises(WitnessInconsistencyError):
        verify_witness(dataclasses.replace(w, factors=factors))


@pytest.mark.parametrize("eps", [Fraction(1, 7), Fraction(1, 25)])
def test_verify_grid(eps):
    for tgt in (Fraction(1, 2), Fraction(9, 10)):
        verify_witness(witness_theta_character(tgt, eps))
        verify_witness(witness_theta_group(tgt, eps))
    for kind in LOCAL_KINDS:
        for tgt in (Fraction(0), Fraction(1, 2), Fraction(1)):
            verify_witness(witness_local(kind, tgt, eps))
            verify_witness(witness_global(kind, tgt, eps))


# ---------------------------------------------------------------------------
# serialization


def test_witness_json_shape():
    w = witness_theta_character(Fraction(2, 3), TENTH)
    doc = w.to_json()
    assert doc["query"] == {
        "kind": "theta",
        "scope": "character",
        "target": "2/3",
        "epsilon": "1/10",
    }
    families = [f["family"]["kind"] for f in doc["expression"]["factors"]]
    assert families[0] == "dihedral"
    assert all(set(f) == {"family", "character", "power"} for f in doc["expression"]["factors"])
    assert doc["k"] == w.k
    assert doc["value"] == str(w.value)
    assert doc["decimal"] == render_decimal(w.value)
    assert all(set(s) == {"choice", "rule", "value"} for s in doc["trail"])
