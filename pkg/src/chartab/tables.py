"""Character tables for the supported group families.

A `CharacterTable` is a plain immutable container: conjugacy classes (name,
size, element order) and one row of exact `Cyclotomic` values per
irreducible character.  Generators exist for three families plus direct
products:

* ``dihedral_table(n)``        dihedral group of order ``2**(n+1)``
  (for ``n == 1`` this degenerates to the abelian group of order 4);
* ``extraspecial2_table(n)``   the extraspecial group of order ``2**(2n+1)``
  obtained as a central product of ``n`` dihedral groups of order 8
  (the "plus type" form, whose squaring map is the split quadratic form);
* ``psl2_even_table(r)``       PSL(2, q) for ``q = 2**r``, where the group
  coincides with SL(2, q);
* ``product_table(a, b)``      the direct product, classes and characters
  in row-major factor order.

Class ordering in each generator follows the construction given in its
docstring; the identity class always comes first.  Generated tables carry
values in the conductor of their construction (a power of two for the
2-groups, ``q - 1`` and ``q + 1`` for the split and nonsplit torus values),
never shrunk to the minimal field.

``validate_table`` checks the defining exact relations (class equation,
degree equation, row and column orthogonality) and reports the first
violation, which makes it usable as an oracle against independently
computed tables.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from chartab.exactnum import Cyclotomic, canonicalize

DEFAULT_CLASS_LIMIT = 10**6


class InvalidParameterError(ValueError):
    """Raised when a family parameter is outside the supported range."""


class TableTooLargeError(ValueError):
    """Raised when a requested product table exceeds the class-count guard."""


class MalformedTableError(ValueError):
    """Raised when a table fails a structural lookup (missing Steinberg row, ...)."""


@dataclass(frozen=True)
class ClassInfo:
    name: str
    size: int
    element_order: int


@dataclass(frozen=True)
class CharacterTable:
    group_name: str
    group_order: int
    classes: tuple[ClassInfo, ...]
    character_names: tuple[str, ...]
    characters: tuple[tuple[Cyclotomic, ...], ...]

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def degrees(self) -> tuple[int, ...]:
        # The identity class is first, so degrees are the first column.
        out = []
        for row in self.characters:
            d = row[0].as_rational()
            if d.denominator != 1 or d <= 0:
                raise MalformedTableError(f"identity value {d} is not a positive integer")
            out.append(int(d))
        return tuple(out)

    def class_index(self, name: str) -> int:
        for i, c in enumerate(self.classes):
            if c.name == name:
                return i
        raise MalformedTableError(f"{self.group_name}: no class named {name!r}")

    def character_index(self, name: str) -> int:
        for i, c in enumerate(self.character_names):
            if c == name:
                return i
        raise MalformedTableError(f"{self.group_name}: no character named {name!r}")

    def to_json(self) -> dict:
        return {
            "group": self.group_name,
            "order": self.group_order,
            "classes": [
                {"name": c.name, "size": c.size, "order": c.element_order}
                for c in self.classes
            ],
            "characters": [
                {"name": name, "values": [v.to_json() for v in row]}
                for name, row in zip(self.character_names, self.characters)
            ],
        }

    @staticmethod
    def from_json(doc: dict) -> "CharacterTable":
        return CharacterTable(
            group_name=doc["group"],
            group_order=int(doc["order"]),
            classes=tuple(
                ClassInfo(c["name"], int(c["size"]), int(c["order"]))
                for c in doc["classes"]
            ),
            character_names=tuple(ch["name"] for ch in doc["characters"]),
            characters=tuple(
                tuple(Cyclotomic.from_json(v) for v in ch["values"])
                for ch in doc["characters"]
            ),
        )


# ---------------------------------------------------------------------------
# family specs


@dataclass(frozen=True)
class Dihedral:
    n: int


@dataclass(frozen=True)
class Extraspecial2:
    n: int


@dataclass(frozen=True)
class Psl2Even:
    r: int


@dataclass(frozen=True)
class Product:
    factors: tuple["FamilySpec", ...]


FamilySpec = Dihedral | Extraspecial2 | Psl2Even | Product


def spec_to_json(spec: FamilySpec) -> dict:
    if isinstance(spec, Dihedral):
        return {"kind": "dihedral", "n": spec.n}
    if isinstance(spec, Extraspecial2):
        return {"kind": "extraspecial2", "n": spec.n}
    if isinstance(spec, Psl2Even):
        return {"kind": "psl2even", "r": spec.r}
    if isinstance(spec, Product):
        return {"kind": "product", "factors": [spec_to_json(f) for f in spec.factors]}
    raise InvalidParameterError(f"unknown family spec {spec!r}")


def spec_from_json(doc: dict) -> FamilySpec:
    kind = doc["kind"]
    if kind == "dihedral":
        return Dihedral(int(doc["n"]))
    if kind == "extraspecial2":
        return Extraspecial2(int(doc["n"]))
    if kind == "psl2even":
        return Psl2Even(int(doc["r"]))
    if kind == "product":
        return Product(tuple(spec_from_json(f) for f in doc["factors"]))
    raise InvalidParameterError(f"unknown family kind {kind!r}")


def spec_class_count(spec: FamilySpec) -> int:
    """Number of conjugacy classes, computed without building the table."""
    if isinstance(spec, Dihedral):
        _check_positive(spec.n, "n")
        return 2 ** (spec.n - 1) + 3
    if isinstance(spec, Extraspecial2):
        _check_positive(spec.n, "n")
        return 2 ** (2 * spec.n) + 1
    if isinstance(spec, Psl2Even):
        _check_positive(spec.r, "r")
        return 2**spec.r + 1
    if isinstance(spec, Product):
        count = 1
        for f in spec.factors:
            count *= spec_class_count(f)
        return count
    raise InvalidParameterError(f"unknown family spec {spec!r}")


def spec_group_order(spec: FamilySpec) -> int:
    if isinstance(spec, Dihedral):
        return 2 ** (spec.n + 1)
    if isinstance(spec, Extraspecial2):
        return 2 ** (2 * spec.n + 1)
    if isinstance(spec, Psl2Even):
        q = 2**spec.r
        return q**3 - q
    if isinstance(spec, Product):
        order = 1
        for f in spec.factors:
            order *= spec_group_order(f)
        return order
    raise InvalidParameterError(f"unknown family spec {spec!r}")


def build_table(spec: FamilySpec, class_limit: int | None = None) -> CharacterTable:
    if isinstance(spec, Dihedral):
        return dihedral_table(spec.n)
    if isinstance(spec, Extraspecial2):
        return extraspecial2_table(spec.n)
    if isinstance(spec, Psl2Even):
        return psl2_even_table(spec.r)
    if isinstance(spec, Product):
        if not spec.factors:
            return trivial_table()
        table = build_table(spec.factors[0], class_limit)
        for f in spec.factors[1:]:
            table = product_table(table, build_table(f, class_limit), class_limit)
        return table
    raise InvalidParameterError(f"unknown family spec {spec!r}")


def _check_positive(value: int, name: str) -> None:
    if not isinstance(value, int) or value < 1:
        raise InvalidParameterError(f"{name} must be a positive integer, got {value!r}")


# ---------------------------------------------------------------------------
# generators


def trivial_table() -> CharacterTable:
    one = Cyclotomic.one()
    return CharacterTable(
        group_name="trivial",
        group_order=1,
        classes=(ClassInfo("1", 1, 1),),
        character_names=("trivial",),
        characters=((one,),),
    )


def dihedral_table(n: int) -> CharacterTable:
    """Dihedral group of order ``2**(n+1)``: rotations of order ``2**n`` plus
    reflections.

    Classes, in order: identity; the central rotation half-turn; the rotation
    pairs ``k = 1 .. 2**(n-1)-1`` (size 2); the two reflection classes (size
    ``2**(n-1)`` each).  Characters: four linear ones cut out by the parity
    of the rotation exponent and the rotation/reflection split, then the
    planar characters ``rot1 .. rot{2**(n-1)-1}`` of degree 2 whose value on
    the rotation class ``k`` is ``zeta**(h*k) + zeta**(-h*k)`` for
    ``zeta = zeta_{2**n}``.

    ``n == 1`` is allowed and yields the elementary abelian group of order 4
    (four singleton classes, four linear characters).
    """
    _check_positive(n, "n")
    if n == 1:
        one = Cyclotomic.one()
        neg = Cyclotomic.from_rational(-1)
        classes = (
            ClassInfo("1", 1, 1),
            ClassInfo("t", 1, 2),
            ClassInfo("s", 1, 2),
            ClassInfo("st", 1, 2),
        )
        rows = {
            "trivial": (1, 1, 1, 1),
            "sign_refl": (1, 1, -1, -1),
            "sign_rot": (1, -1, 1, -1),
            "sign_both": (1, -1, -1, 1),
        }
        return CharacterTable(
            group_name="dihedral(1)",
            group_order=4,
            classes=classes,
            character_names=tuple(rows),
            characters=tuple(
                tuple(one if v == 1 else neg for v in row) for row in rows.values()
            ),
        )

    order = 2 ** (n + 1)
    rot = 2**n  # order of the rotation subgroup
    half = 2 ** (n - 1)
    classes = [ClassInfo("1", 1, 1), ClassInfo(f"t^{half}", 1, 2)]
    for k in range(1, half):
        classes.append(ClassInfo(f"t^{k}", 2, rot // gcd(rot, k)))
    classes.append(ClassInfo("s", half, 2))
    classes.append(ClassInfo("st", half, 2))

    # exponents of the rotation representative in class order, for the
    # linear characters and the shared cosine-pair cache below
    rot_exponents = [0, half] + list(range(1, half))

    one = Cyclotomic.one()
    neg = Cyclotomic.from_rational(-1)

    def linear(rot_sign: int, refl_sign: int) -> tuple[Cyclotomic, ...]:
        row = [one if rot_sign**k == 1 else neg for k in rot_exponents]
        row.append(one if refl_sign == 1 else neg)
        row.append(one if refl_sign * rot_sign == 1 else neg)
        return tuple(row)

    names = ["trivial", "sign_refl", "sign_rot", "sign_both"]
    rows = [linear(1, 1), linear(1, -1), linear(-1, 1), linear(-1, -1)]

    pair_cache: dict[int, Cyclotomic] = {}

    def cosine_pair(e: int) -> Cyclotomic:
        e %= rot
        if e not in pair_cache:
            pair_cache[e] = canonicalize(rot, {e: 1, -e: 1} if e else {0: 2})
        return pair_cache[e]

    zero = Cyclotomic.zero(rot)
    for h in range(1, half):
        names.append(f"rot{h}")
        rows.append(
            tuple(cosine_pair(h * k) for k in rot_exponents) + (zero, zero)
        )

    return CharacterTable(
        group_name=f"dihedral({n})",
        group_order=order,
        classes=tuple(classes),
        character_names=tuple(names),
        characters=tuple(rows),
    )


def extraspecial2_table(n: int) -> CharacterTable:
    """Extraspecial group of order ``2**(2n+1)``, central product of ``n``
    dihedral groups of order 8.

    Elements are modeled as pairs ``(v, c)`` with ``v`` a ``2n``-bit vector
    (the image in the Frattini quotient) and ``c`` a central bit; the class
    of a noncentral element is ``{(v, 0), (v, 1)}``.  An element squares to
    the central involution exactly when the split quadratic form
    ``Q(v) = x . y`` (with ``v = (x, y)``) is 1, which fixes the element
    orders.  Characters: ``2**(2n)`` linear ones indexed by ``w``, with
    value ``(-1)**(w . v)``, and the single faithful character of degree
    ``2**n`` supported on the center.
    """
    _check_positive(n, "n")
    dim = 2 * n
    classes = [ClassInfo("1", 1, 1), ClassInfo("z", 1, 2)]
    for v in range(1, 2**dim):
        q = bin((v >> n) & v).count("1") & 1
        classes.append(ClassInfo(f"e{v:0{dim}b}", 2, 4 if q else 2))

    one = Cyclotomic.one()
    neg = Cyclotomic.from_rational(-1)
    zero = Cyclotomic.zero()
    names = []
    rows = []
    for w in range(2**dim):
        names.append(f"lin{w:0{dim}b}")
        row = [one, one]
        for v in range(1, 2**dim):
            row.append(neg if bin(w & v).count("1") & 1 else one)
        rows.append(tuple(row))
    names.append("faithful")
    deg = Cyclotomic.from_rational(2**n)
    rows.append((deg, -deg) + (zero,) * (2**dim - 1))

    return CharacterTable(
        group_name=f"extraspecial2({n})",
        group_order=2 ** (2 * n + 1),
        classes=tuple(classes),
        character_names=tuple(names),
        characters=tuple(rows),
    )


def psl2_even_table(r: int) -> CharacterTable:
    """PSL(2, q) for ``q = 2**r`` on its classical class list.

    Classes, in order: identity; the involution class of size ``q**2 - 1``;
    the ``(q - 2) / 2`` split-torus classes (size ``q(q+1)``, element orders
    dividing ``q - 1``); the ``q / 2`` nonsplit-torus classes (size
    ``q(q-1)``, element orders dividing ``q + 1``).  Characters: trivial;
    the Steinberg character of degree ``q``; the ``(q - 2) / 2`` principal
    series of degree ``q + 1`` carrying ``zeta_{q-1}`` cosine pairs on the
    split classes; the ``q / 2`` discrete series of degree ``q - 1``
    carrying negated ``zeta_{q+1}`` cosine pairs on the nonsplit classes.
    """
    _check_positive(r, "r")
    q = 2**r
    order = q**3 - q
    n_split = (q - 2) // 2
    n_nonsplit = q // 2

    classes = [ClassInfo("1", 1, 1), ClassInfo("u", q * q - 1, 2)]
    for l in range(1, n_split + 1):
        classes.append(ClassInfo(f"split{l}", q * (q + 1), (q - 1) // gcd(l, q - 1)))
    for m in range(1, n_nonsplit + 1):
        classes.append(ClassInfo(f"nonsplit{m}", q * (q - 1), (q + 1) // gcd(m, q + 1)))

    one = Cyclotomic.one()
    neg = Cyclotomic.from_rational(-1)
    zero = Cyclotomic.zero()

    def pair(conductor: int, e: int, sign: int) -> Cyclotomic:
        e %= conductor
        raw = {e: sign, -e: sign} if e else {0: 2 * sign}
        return canonicalize(conductor, raw)

    names = ["trivial", "steinberg"]
    rows: list[tuple[Cyclotomic, ...]] = [
        (one,) * (q + 1),
        (Cyclotomic.from_rational(q), zero)
        + (one,) * n_split
        + (neg,) * n_nonsplit,
    ]
    for j in range(1, n_split + 1):
        names.append(f"principal{j}")
        rows.append(
            (Cyclotomic.from_rational(q + 1), one)
            + tuple(pair(q - 1, l * j, 1) for l in range(1, n_split + 1))
            + (zero,) * n_nonsplit
        )
    for m in range(1, n_nonsplit + 1):
        names.append(f"discrete{m}")
        rows.append(
            (Cyclotomic.from_rational(q - 1), neg)
            + (zero,) * n_split
            + tuple(pair(q + 1, m * k, -1) for k in range(1, n_nonsplit + 1))
        )

    return CharacterTable(
        group_name=f"psl2even({r})",
        group_order=order,
        classes=tuple(classes),
        character_names=tuple(names),
        characters=tuple(rows),
    )


# ---------------------------------------------------------------------------
# products


def _class_limit(class_limit: int | None) -> int:
    if class_limit is not None:
        return class_limit
    return int(os.environ.get("CHARTAB_CLASS_LIMIT", DEFAULT_CLASS_LIMIT))


def product_table(
    a: CharacterTable, b: CharacterTable, class_limit: int | None = None
) -> CharacterTable:
    """Direct product table; classes and characters in row-major factor order.

    Class sizes multiply, element orders take the lcm, and every product
    value is materialized exactly and re-classified by later consumers (no
    shortcut is taken for whether a product of two non-roots of unity is a
    root of unity, because it sometimes is).  Guarded by a class-count
    limit; oversized requests get an error pointing at the closed-form
    statistics instead.
    """
    limit = _class_limit(class_limit)
    count = a.num_classes * b.num_classes
    if count > limit:
        raise TableTooLargeError(
            f"product would have {count} classes, above the guard {limit}; "
            "use closed-form statistics and recurrences for products this size"
        )

    classes = tuple(
        ClassInfo(
            f"({ca.name},{cb.name})",
            ca.size * cb.size,
            lcm(ca.element_order, cb.element_order),
        )
        for ca in a.classes
        for cb in b.classes
    )

    memo: dict[tuple, Cyclotomic] = {}

    def mul(x: Cyclotomic, y: Cyclotomic) -> Cyclotomic:
        k = (x.key(), y.key())
        got = memo.get(k)
        if got is None:
            got = memo[k] = x * y
        return got

    names = []
    rows = []
    for na, ra in zip(a.character_names, a.characters):
        for nb, rb in zip(b.character_names, b.characters):
            names.append(f"{na}*{nb}")
            rows.append(tuple(mul(x, y) for x in ra for y in rb))

    return CharacterTable(
        group_name=f"{a.group_name} x {b.group_name}",
        group_order=a.group_order * b.group_order,
        classes=classes,
        character_names=tuple(names),
        characters=tuple(rows),
    )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_table(t: CharacterTable) -> ValidationReport:
    """Check the exact defining relations of a character table.

    Verifies, in this order, stopping at the first violation: shape; the
    class equation; identity-column degrees; the degree equation; entry
    integrality; row orthogonality (all pairs, including the norm); column
    orthogonality.  All checks are exact; nothing is approximated.
    """

    def fail(msg: str) -> ValidationReport:
        return ValidationReport(False, msg)

    k = t.num_classes
    if len(t.characters) != k:
        return fail(f"{len(t.characters)} characters for {k} classes")
    if len(t.character_names) != len(t.characters):
        return fail("character_names and characters lengths differ")
    if any(len(row) != k for row in t.characters):
        return fail("ragged character row")
    if t.classes[0].size != 1 or t.classes[0].element_order != 1:
        return fail("first class is not the identity class")

    if sum(c.size for c in t.classes) != t.group_order:
        return fail(
            f"class equation: sizes sum to {sum(c.size for c in t.classes)}, "
            f"order is {t.group_order}"
        )
    for c in t.classes:
        if t.group_order % c.size != 0:
            return fail(f"class {c.name} size {c.size} does not divide the order")

    try:
        degrees = t.degrees
    except MalformedTableError as e:
        return fail(str(e))
    if sum(d * d for d in degrees) != t.group_order:
        return fail(
            f"degree equation: sum of squares is {sum(d * d for d in degrees)}, "
            f"order is {t.group_order}"
        )

    for name, row in zip(t.character_names, t.characters):
        for c, v in zip(t.classes, row):
            if not v.is_algebraic_integer():
                return fail(f"entry ({name}, {c.name}) is not an algebraic integer")

    # All sums are accumulated as raw power-basis coefficient maps in the
    # joint conductor; one canonicalize per inner product instead of one
    # Cyclotomic addition per term.
    joint = 1
    for row in t.characters:
        for v in row:
            joint = lcm(joint, v.conductor)

    conj_memo: dict[tuple, Cyclotomic] = {}

    def conj(v: Cyclotomic) -> Cyclotomic:
        key = v.key()
        got = conj_memo.get(key)
        if got is None:
            got = conj_memo[key] = v.conjugate()
        return got

    term_memo: dict[tuple, tuple] = {}

    def term_coeffs(x: Cyclotomic, yc: Cyclotomic) -> tuple:
        key = (x.key(), yc.key())
        got = term_memo.get(key)
        if got is None:
            got = term_memo[key] = (x * yc).embed(joint).coeffs
        return got

    sizes = [c.size for c in t.classes]
    conj_rows = [tuple(conj(v) for v in row) for row in t.characters]

    for i in range(len(t.characters)):
        for j in range(i, len(t.characters)):
            acc: dict[int, object] = {}
            for s, x, yc in zip(sizes, t.characters[i], conj_rows[j]):
                for e, c in term_coeffs(x, yc):
                    acc[e] = acc.get(e, 0) + s * c
            expect = t.group_order if i == j else 0
            if canonicalize(joint, acc) != expect:
                return fail(
                    "row orthogonality "
                    f"({t.character_names[i]}, {t.character_names[j]}): "
                    f"got {canonicalize(joint, acc)}, expected {expect}"
                )

    for ci in range(k):
        for cj in range(ci, k):
            acc = {}
            for row, crow in zip(t.characters, conj_rows):
                for e, c in term_coeffs(row[ci], crow[cj]):
                    acc[e] = acc.get(e, 0) + c
            expect_col = (
                Fraction(t.group_order, sizes[ci]) if ci == cj else Fraction(0)
            )
            if canonicalize(joint, acc) != expect_col:
                return fail(
                    "column orthogonality "
                    f"({t.classes[ci].name}, {t.classes[cj].name}): "
                    f"got {canonicalize(joint, acc)}, expected {expect_col}"
                )

    return ValidationReport(True)


def steinberg_index(t: CharacterTable, q: int) -> int:
    """Index of the unique character of degree q; error if absent or ambiguous."""
    hits = [i for i, d in enumerate(t.degrees) if d == q]
    if len(hits) != 1:
        raise MalformedTableError(
            f"{t.group_name}: expected exactly one character of degree {q}, "
            f"found {len(hits)}"
        )
    return hits[0]
