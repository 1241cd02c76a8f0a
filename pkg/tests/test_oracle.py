"""Permutation-group oracle: classification, Dixon tables, relabeling comparison."""

import pytest

from chartab.oracle import (
    GroupTooLargeError,
    PermGroup,
    builtin_perm_group,
    compare_tables,
    dixon_character_table,
    enumerate_and_classify,
    format_perm_group,
    parse_perm_group,
)
from chartab.stats import group_stats
from chartab.tables import (
    CharacterTable,
    Dihedral,
    Extraspecial2,
    InvalidParameterError,
    Product,
    Psl2Even,
    build_table,
    dihedral_table,
    product_table,
    validate_table,
)

A5 = parse_perm_group("5\n1 2 0 3 4\n1 2 3 4 0")
S4 = parse_perm_group("4\n1 0 2 3\n1 2 3 0")
S3 = parse_perm_group("3\n1 0 2\n1 2 0")
# quaternion group inside the regular action: i and j as left translations
Q8 = PermGroup(8, ((2, 3, 1, 0, 6, 7, 5, 4), (4, 5, 7, 6, 1, 0, 2, 3)))


def rationals(table: CharacterTable, row: int) -> tuple:
    return tuple(v.as_rational() for v in table.characters[row])


# ---------------------------------------------------------------------------
# enumeration and classification


def test_classify_dihedral16():
    data = enumerate_and_classify(builtin_perm_group(Dihedral(3)))
    assert data.group_order == 16
    assert data.sizes == (1, 1, 2, 2, 2, 4, 4)
    assert data.element_orders == (1, 2, 4, 8, 8, 2, 2)
    assert data.exponent == 8


def test_classify_a5():
    data = enumerate_and_classify(A5)
    assert data.group_order == 60
    assert data.sizes == (1, 12, 12, 15, 20)
    assert data.element_orders == (1, 5, 5, 2, 2 + 1)
    assert data.exponent == 30


def test_classification_ignores_generator_presentation():
    # same group, different generators: canonical classes must agree
    other = parse_perm_group("5\n1 2 3 4 0\n0 2 1 4 3")  # 5-cycle + double swap
    a, b = enumerate_and_classify(A5), enumerate_and_classify(other)
    assert a.representatives == b.representatives
    assert a.sizes == b.sizes
    assert a.power_maps == b.power_maps


def test_power_maps_a5():
    data = enumerate_and_classify(A5)
    assert set(data.power_maps) == {2, 3, 5, 7, 11, 13, 17, 19, 23, 29}
    # squaring swaps the two classes of 5-cycles and kills the involutions
    assert data.power_maps[2] == (0, 2, 1, 0, 4)
    assert data.power_maps[5] == (0, 0, 0, 3, 4)
    assert data.power_maps[3] == (0, 2, 1, 3, 0)


def test_class_of_covers_the_group():
    data = enumerate_and_classify(S4)
    assert len(data.class_of) == 24
    for rep, idx in zip(data.representatives, range(data.num_classes)):
        assert data.class_of[rep] == idx


def test_enumeration_limit():
    with pytest.raises(GroupTooLargeError):
        enumerate_and_classify(A5, limit=10)


def test_enumeration_limit_env(monkeypatch):
    monkeypatch.setenv("CHARTAB_ORACLE_LIMIT", "10")
    with pytest.raises(GroupTooLargeError):
        enumerate_and_classify(A5)
    assert enumerate_and_classify(A5, limit=60).group_order == 60


# ---------------------------------------------------------------------------
# the character-table oracle


def test_dixon_s3():
    t = dixon_character_table(S3)
    assert t.group_name == "perm(deg=3, order=6)"
    assert [(c.name, c.size, c.element_order) for c in t.classes] == [
        ("c0", 1, 1),
        ("c1", 2, 3),
        ("c2", 3, 2),
    ]
    rows = {rationals(t, i) for i in range(3)}
    assert rows == {(1, 1, 1), (1, 1, -1), (2, -1, 0)}
    assert validate_table(t).ok


def test_dixon_s4():
    t = dixon_character_table(S4)
    assert [(c.size, c.element_order) for c in t.classes] == [
        (1, 1),
        (3, 2),
        (6, 2),
        (6, 4),
        (8, 3),
    ]
    assert sorted(t.degrees) == [1, 1, 2, 3, 3]
    degree3 = {rationals(t, i) for i, d in enumerate(t.degrees) if d == 3}
    assert degree3 == {(3, -1, 1, -1, 0), (3, -1, -1, 1, 0)}


def test_dixon_a5_matches_psl2_of_4():
    t = dixon_character_table(A5)
    assert sorted(t.degrees) == [1, 3, 3, 4, 5]
    result = compare_tables(psl2_even := build_table(Psl2Even(2)), t)
    assert result.matched
    assert result.reason is None
    # stats are relabeling invariants, so they must carry over exactly
    assert group_stats(t) == group_stats(psl2_even)


def test_dixon_klein_four():
    t = dixon_character_table(builtin_perm_group(Dihedral(1)))
    assert compare_tables(dihedral_table(1), t).matched


def test_dixon_handles_product_groups():
    spec = Product((Dihedral(1), Psl2Even(1)))
    g = builtin_perm_group(spec)
    assert g.degree == 7
    result = compare_tables(build_table(spec), dixon_character_table(g))
    assert result.matched


def test_dixon_agrees_with_generator_dihedral16():
    t = dixon_character_table(builtin_perm_group(Dihedral(3)))
    reference = dihedral_table(3)
    assert compare_tables(reference, t).matched
    assert group_stats(t) == group_stats(reference)


# ---------------------------------------------------------------------------
# comparison up to relabeling


def shuffled(t: CharacterTable) -> CharacterTable:
    # deterministic relabeling: rotate classes (identity stays put) and rows
    k = t.num_classes
    class_perm = [0] + [1 + (i + 1) % (k - 1) for i in range(k - 1)]
    row_perm = [(i + 2) % len(t.characters) for i in range(len(t.characters))]
    return CharacterTable(
        group_name="shuffled",
        group_order=t.group_order,
        classes=tuple(t.classes[i] for i in class_perm),
        character_names=tuple(f"y{i}" for i in range(len(t.characters))),
        characters=tuple(
            tuple(t.characters[x][i] for i in class_perm) for x in row_perm
        ),
    )


def test_compare_recovers_a_shuffle():
    a = build_table(Psl2Even(2))
    b = shuffled(a)
    result = compare_tables(a, b)
    assert result.matched
    for x in range(len(a.characters)):
        for i in range(a.num_classes):
            y, j = result.row_map[x], result.class_map[i]
            assert a.characters[x][i] == b.characters[y][j]
            assert a.classes[i].size == b.classes[j].size


def test_compare_q8_against_dihedral8():
    # same character table over plain values, different element orders
    q8 = dixon_character_table(Q8)
    d8 = dihedral_table(2)
    strict = compare_tables(d8, q8)
    assert not strict.matched
    assert "(size, element order)" in strict.reason
    assert "multisets differ" in strict.reason
    loose = compare_tables(d8, q8, match_element_orders=False)
    assert loose.matched
    assert loose.element_order_mismatches == (
        ("s", "c3", 2, 4),
        ("st", "c4", 2, 4),
    )


def test_compare_reports_structural_mismatches():
    d8 = dihedral_table(2)
    result = compare_tables(d8, dihedral_table(3))
    assert "group orders differ" in result.reason

    d16 = dihedral_table(3)
    klein_sq = product_table(dihedral_table(1), dihedral_table(1))
    result = compare_tables(d16, klein_sq)  # both order 16
    assert "class counts differ" in result.reason

    fewer_rows = CharacterTable(
        d8.group_name, d8.group_order, d8.classes,
        d8.character_names[:-1], d8.characters[:-1],
    )
    assert "character counts differ" in compare_tables(d8, fewer_rows).reason

    flattened = CharacterTable(
        d8.group_name, d8.group_order, d8.classes,
        d8.character_names, d8.characters[:-1] + (d8.characters[0],),
    )
    assert "degree multisets differ" in compare_tables(d8, flattened).reason


def test_compare_detects_value_disagreement():
    d8 = dihedral_table(2)
    rows = list(d8.characters)
    i = d8.class_index("s")
    j = d8.class_index("st")
    # swap the two reflection columns on one linear character only; all
    # multiset prechecks still pass, the joint assignment cannot
    x = d8.character_index("sign_rot")
    row = list(rows[x])
    row[i], row[j] = row[j], row[i]
    rows[x] = tuple(row)
    tampered = CharacterTable(
        d8.group_name, d8.group_order, d8.classes, d8.character_names, tuple(rows)
    )
    result = compare_tables(d8, tampered)
    assert not result.matched
    assert "no class correspondence" in result.reason


# ---------------------------------------------------------------------------
# built-in realizations and the text format


def test_builtin_degrees():
    assert builtin_perm_group(Dihedral(1)).degree == 4
    assert builtin_perm_group(Dihedral(4)).degree == 16
    assert builtin_perm_group(Extraspecial2(1)).degree == 8
    assert builtin_perm_group(Psl2Even(2)).degree == 5
    assert builtin_perm_group(Psl2Even(3)).degree == 9


@pytest.mark.parametrize(
    "spec",
    [Dihedral(1), Dihedral(3), Extraspecial2(1), Extraspecial2(2), Psl2Even(1), Psl2Even(2)],
)
def test_builtin_realizes_the_right_group(spec):
    data = enumerate_and_classify(builtin_perm_group(spec))
    table = build_table(spec)
    assert data.group_order == table.group_order
    assert sorted(zip(data.sizes, data.element_orders)) == sorted(
        (c.size, c.element_order) for c in table.classes
    )


def test_parse_format_round_trip():
    text = format_perm_group(A5)
    assert parse_perm_group(text) == A5
    assert text.splitlines()[0] == "5"


def test_parse_rejects_garbage():
    with pytest.raises(InvalidParameterError):
        parse_perm_group("")
    with pytest.raises(InvalidParameterError):
        parse_perm_group("3\n1 0 x")
    with pytest.raises(InvalidParameterError):
        parse_perm_group("3\n1 0")  # wrong length
    with pytest.raises(InvalidParameterError):
        parse_perm_group("3\n0 0 1")  # not a bijection


def test_perm_group_validation():
    with pytest.raises(InvalidParameterError):
        PermGroup(0, ())
    with pytest.raises(InvalidParameterError):
        PermGroup(2, ((1, 2),))
