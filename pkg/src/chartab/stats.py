"""Exact denseness statistics of character values.

Every entry of a character table is zero, a root of unity, or neither.
The six statistics here measure how much of one row, or of a whole
table, the first two cases cover: z for zeros, u for roots of unity,
theta for their union.  The *_elem forms weight each conjugacy class by
its size (proportions of (character, element) pairs); the *_class forms
count table cells.  theta = z + u in both weightings, and everything is
a Fraction computed from the exact value trichotomy; no floats.

Closed forms are provided for the three generated families and are
cross-checked against the generated tables in the test suite.  Two
composition rules cover direct products:

* zero fractions always compose as 1 - z(a x b) = (1 - z(a))(1 - z(b)),
  because a product entry vanishes exactly when a factor does;
* root-of-unity fractions multiply only under a hypothesis on the
  factors (all nonzero values on the unit circle up to zeros), which
  holds for the 2-group families and for the degree-q character of
  PSL(2, q) but NOT for general tables; `u_power` documents the burden.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from chartab.exactnum import Cyclotomic, Rational, ValueClass, classify_value
from chartab.tables import (
    CharacterTable,
    Dihedral,
    Extraspecial2,
    FamilySpec,
    InvalidParameterError,
    Product,
    Psl2Even,
)

K_MAX_LIMIT = 10**6


class StatKind(Enum):
    Z_ELEM = "zI"
    Z_CLASS = "zII"
    U_ELEM = "uI"
    U_CLASS = "uII"
    THETA_ELEM = "theta"
    THETA_CLASS = "thetaII"

    @property
    def field(self) -> str:
        return _KIND_FIELDS[self]

    @property
    def element_weighted(self) -> bool:
        return self in (StatKind.Z_ELEM, StatKind.U_ELEM, StatKind.THETA_ELEM)


def render_decimal(value: Rational, places: int = 12) -> str:
    """Fixed-point rendering, round-half-even; an annotation, never an input."""
    x = Fraction(value)
    sign = "-" if x < 0 else ""
    scaled = round(abs(x) * 10**places)
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{frac:0{places}d}"


@dataclass(frozen=True)
class StatRecord:
    z_elem: Fraction
    z_class: Fraction
    u_elem: Fraction
    u_class: Fraction
    theta_elem: Fraction
    theta_class: Fraction

    def get(self, kind: StatKind) -> Fraction:
        return getattr(self, kind.field)

    def to_json(self) -> dict:
        return {
            name: {"fraction": str(v), "decimal": render_decimal(v)}
            for name, v in (
                ("z_elem", self.z_elem),
                ("z_class", self.z_class),
                ("u_elem", self.u_elem),
                ("u_class", self.u_class),
                ("theta_elem", self.theta_elem),
                ("theta_class", self.theta_class),
            )
        }


_KIND_FIELDS = {
    StatKind.Z_ELEM: "z_elem",
    StatKind.Z_CLASS: "z_class",
    StatKind.U_ELEM: "u_elem",
    StatKind.U_CLASS: "u_class",
    StatKind.THETA_ELEM: "theta_elem",
    StatKind.THETA_CLASS: "theta_class",
}


def _record(z_elem, z_class, u_elem, u_class) -> StatRecord:
    z_elem, z_class = Fraction(z_elem), Fraction(z_class)
    u_elem, u_class = Fraction(u_elem), Fraction(u_class)
    return StatRecord(
        z_elem, z_class, u_elem, u_class, z_elem + u_elem, z_class + u_class
    )


# classification results are cached by exact value; tables reuse a small
# set of shared value objects, so this cache stays tiny
_CLASSIFY_CACHE: dict[tuple, ValueClass] = {}


def _classify(v: Cyclotomic) -> ValueClass:
    key = v.key()
    got = _CLASSIFY_CACHE.get(key)
    if got is None:
        got = _CLASSIFY_CACHE[key] = classify_value(v)
    return got


def char_stats(t: CharacterTable, row: int) -> StatRecord:
    """Statistics of a single character (one table row)."""
    values = t.characters[row]
    zero_elems = zero_cells = rou_elems = rou_cells = 0
    for info, v in zip(t.classes, values):
        cls = _classify(v)
        if cls is ValueClass.ZERO:
            zero_elems += info.size
            zero_cells += 1
        elif cls is ValueClass.ROOT_OF_UNITY:
            rou_elems += info.size
            rou_cells += 1
    return _record(
        Fraction(zero_elems, t.group_order),
        Fraction(zero_cells, t.num_classes),
        Fraction(rou_elems, t.group_order),
        Fraction(rou_cells, t.num_classes),
    )


def group_stats(t: CharacterTable) -> StatRecord:
    """Whole-table statistics by pair counting.

    Element-weighted forms count (character, group element) pairs,
    class-weighted forms count table cells.  Because every character
    carries the same total weight, this equals the mean of `char_stats`
    over rows; the test suite checks that coincidence explicitly.
    """
    zero_elems = zero_cells = rou_elems = rou_cells = 0
    sizes = [c.size for c in t.classes]
    for row in t.characters:
        for size, v in zip(sizes, row):
            cls = _classify(v)
            if cls is ValueClass.ZERO:
                zero_elems += size
                zero_cells += 1
            elif cls is ValueClass.ROOT_OF_UNITY:
                rou_elems += size
                rou_cells += 1
    rows = len(t.characters)
    pair_total = t.group_order * rows
    cell_total = t.num_classes * rows
    return _record(
        Fraction(zero_elems, pair_total),
        Fraction(zero_cells, cell_total),
        Fraction(rou_elems, pair_total),
        Fraction(rou_cells, cell_total),
    )


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class ClosedFormStats:
    group: StatRecord
    character_name: str | None
    character: StatRecord | None


def extraspecial_closed_form(p: int, n: int) -> StatRecord:
    """Group statistics of an extraspecial group of order p^(2n+1), any prime p.

    Only p = 2 has a table generator here; the closed form is kept general
    because it costs nothing and pins the shape of the formulas.
    """
    if p < 2 or n < 1:
        raise InvalidParameterError(f"need p >= 2 and n >= 1, got p={p}, n={n}")
    big = p ** (2 * n)
    chars = big + p - 1
    u = Fraction(big, chars)
    z_elem = Fraction((p - 1) * (p ** (2 * n + 1) - p), chars * p ** (2 * n + 1))
    z_class = Fraction((p - 1) * (big - 1), chars * chars)
    return _record(z_elem, z_class, u, u)


def _dihedral_group_record(n: int) -> StatRecord:
    u = Fraction(4, 2 ** (n - 1) + 3)
    z_elem = Fraction(2**n + n - 3, 2 * (2**n + 6))
    # numerator 2^(n-2)(n+3) - 2 written over 4 so n = 1 stays integral
    z_class = Fraction(2**n * (n + 3) - 8, 4 * (2 ** (n - 1) + 3) ** 2)
    return _record(z_elem, z_class, u, u)


def _dihedral_char_record(n: int) -> StatRecord:
    # the first planar character: zeros cover half the rotations plus all
    # reflections, and no value is a root of unity (degree 2 in a 2-group)
    z_elem = Fraction(1, 2) + Fraction(1, 2**n)
    z_class = Fraction(3, 2 ** (n - 1) + 3)
    return _record(z_elem, z_class, 0, 0)


def _extraspecial_faithful_record(n: int) -> StatRecord:
    big = 2 ** (2 * n)
    return _record(Fraction(big - 1, big), Fraction(big - 1, big + 1), 0, 0)


def _steinberg_record(r: int) -> StatRecord:
    q = 2**r
    return _record(
        Fraction(1, q),
        Fraction(1, q + 1),
        1 - Fraction(1, q) - Fraction(1, q**3 - q),
        Fraction(q - 1, q + 1),
    )


def _psl2_group_record(r: int) -> StatRecord:
    """PSL(2, 2^r) statistics counted from the table's structure.

    A torus value is a cosine pair zeta^e + zeta^(-e) in an odd conductor
    c (c = q-1 split, c = q+1 nonsplit), so it never vanishes, and it is a
    root of unity exactly when e has order 3 mod c, where the pair sums
    to -1.  Everything else is counting.
    """
    q = 2**r
    order = q**3 - q
    ncls = q + 1
    nsplit = (q - 2) // 2
    nnonsplit = q // 2
    split_size = q * (q + 1)
    nonsplit_size = q * (q - 1)
    inv_size = q * q - 1

    zero_elems = zero_cells = rou_elems = rou_cells = 0

    # trivial character
    rou_elems += order
    rou_cells += ncls

    # degree-q character: one vanishing class, +-1 across both tori
    zero_elems += inv_size
    zero_cells += 1
    rou_elems += nsplit * split_size + nnonsplit * nonsplit_size
    rou_cells += nsplit + nnonsplit

    # principal series (degree q+1): zero on the whole nonsplit block
    for j in range(1, nsplit + 1):
        zero_elems += nnonsplit * nonsplit_size
        zero_cells += nnonsplit
        rou_elems += inv_size
        rou_cells += 1
        for l in range(1, nsplit + 1):
            e = l * j % (q - 1)
            if e and 3 * e % (q - 1) == 0:
                rou_elems += split_size
                rou_cells += 1

    # discrete series (degree q-1): zero on the whole split block
    for m in range(1, nnonsplit + 1):
        zero_elems += nsplit * split_size
        zero_cells += nsplit
        rou_elems += inv_size
        rou_cells += 1
        if q == 2:
            # degree q-1 = 1: the identity value itself is a root of unity
            rou_elems += 1
            rou_cells += 1
        for k in range(1, nnonsplit + 1):
            e = m * k % (q + 1)
            if e and 3 * e % (q + 1) == 0:
                rou_elems += nonsplit_size
                rou_cells += 1

    pair_total = order * ncls
    cell_total = ncls * ncls
    return _record(
        Fraction(zero_elems, pair_total),
        Fraction(zero_cells, cell_total),
        Fraction(rou_elems, pair_total),
        Fraction(rou_cells, cell_total),
    )


def closed_form_stats(spec: FamilySpec) -> ClosedFormStats:
    """Closed-form group statistics plus the family's distinguished character.

    Computed without building any table.  The distinguished characters are
    the ones the witness searches use: the first planar character of the
    dihedral family (absent for n = 1, where the group is abelian), the
    degree-2^n character of the extraspecial family, and the degree-q
    character of PSL(2, q).  Products have no closed form here; compose
    single-family records with the product rules instead.
    """
    if isinstance(spec, Dihedral):
        if spec.n < 1:
            raise InvalidParameterError(f"n must be >= 1, got {spec.n}")
        group = _dihedral_group_record(spec.n)
        if spec.n == 1:
            return ClosedFormStats(group, None, None)
        return ClosedFormStats(group, "rot1", _dihedral_char_record(spec.n))
    if isinstance(spec, Extraspecial2):
        if spec.n < 1:
            raise InvalidParameterError(f"n must be >= 1, got {spec.n}")
        return ClosedFormStats(
            extraspecial_closed_form(2, spec.n),
            "faithful",
            _extraspecial_faithful_record(spec.n),
        )
    if isinstance(spec, Psl2Even):
        if spec.r < 1:
            raise InvalidParameterError(f"r must be >= 1, got {spec.r}")
        return ClosedFormStats(
            _psl2_group_record(spec.r), "steinberg", _steinberg_record(spec.r)
        )
    if isinstance(spec, Product):
        raise InvalidParameterError(
            "closed forms cover single families; compose product statistics "
            "with the z/u recurrences"
        )
    raise InvalidParameterError(f"unknown family spec {spec!r}")


# ---------------------------------------------------------------------------
# product recurrences


def _check_unit_interval(value: Fraction, name: str) -> Fraction:
    value = Fraction(value)
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def z_sequence(z0: Rational, z_step: Rational, k_max: int) -> list[Fraction]:
    """Iterate z(k+1) = z(k) + (1 - z(k)) * z_step, returning k_max + 1 terms.

    The zero fraction of a product grows by exactly the step rule, so this
    is the exact zero statistic of x^(k+1) given z(x) = z_step.  The
    sequence is non-decreasing with consecutive gaps below z_step.
    """
    z = _check_unit_interval(z0, "z0")
    step = _check_unit_interval(z_step, "z_step")
    if not 0 <= k_max <= K_MAX_LIMIT:
        raise ValueError(f"k_max must lie in [0, {K_MAX_LIMIT}], got {k_max}")
    out = [z]
    for _ in range(k_max):
        z = z + (1 - z) * step
        out.append(z)
    return out


def u_power(u0: Rational, k: int) -> Fraction:
    """u0^k, the root-of-unity fraction of a k-fold product.

    Caller asserts the multiplicativity hypothesis: every factor's nonzero
    values away from the identity lie on the unit circle.  That holds for
    the 2-group families (all of them, by the degree-1 dichotomy) and for
    powers of the degree-q PSL(2, q) character (values 0 and +-1), but it
    FAILS for general tables; products of two non-unit values can land on
    a root of unity.  The test suite pins a counterexample.
    """
    u = _check_unit_interval(u0, "u0")
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return u**k


def theta_master(l: int, m: int, k: int) -> Fraction:
    """Element-weighted theta of the product group: dihedral parameter l
    times k copies of extraspecial parameter m.

    Evaluates u(G) * u(H)^k + z(G) + (1 - z(G)) * z(H^k) exactly, with
    z(H^k) taken from the z recurrence.  All factors are 2-groups, so the
    u product rule applies.
    """
    if l < 1 or m < 1 or k < 0:
        raise InvalidParameterError(f"need l, m >= 1 and k >= 0, got {l}, {m}, {k}")
    g = closed_form_stats(Dihedral(l)).group
    h = closed_form_stats(Extraspecial2(m)).group
    z_hk = z_sequence(0, h.z_elem, k)[-1]
    return g.u_elem * h.u_elem**k + g.z_elem + (1 - g.z_elem) * z_hk
