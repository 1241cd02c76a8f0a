"""Constructive witness search for the six statistics.

Given a statistic, a target, and a positive epsilon, each search returns
an explicit product expression (family parameters, a distinguished
character when the statistic is character-local, and a product exponent
k) whose exact statistic lies strictly within epsilon of the target.

All searches share one shape.  First the smallest family parameters are
chosen whose closed-form statistics satisfy the strict inequalities that
make the scan work: the value sequence must start next to one end of the
target range and move toward the other end in steps smaller than
epsilon, so it cannot jump over the epsilon band around any reachable
target.  Then k is walked upward and the first index inside the band is
returned.  Minimal parameters and first hits make the output a pure
function of the query.

Every sequence scanned here has the form c0 + c1*r1^k + c2*r2^k with
rational constants, so the scanner keeps integer numerators and
denominators and compares |value - target| < epsilon by cross
multiplication; no per-step Fraction normalization, which matters when k
runs into the thousands.  The exact Fraction is materialized once, at
the accepted index.

`verify_witness` recomputes a witness two ways: replaying the closed
forms through the product rules, and, when the expression is small
enough to materialize, building the explicit product table and counting.
Disagreement raises; both paths must reproduce the stored value exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from chartab.stats import (
    StatKind,
    StatRecord,
    char_stats,
    closed_form_stats,
    group_stats,
    render_decimal,
)
from chartab.tables import (
    Dihedral,
    Extraspecial2,
    FamilySpec,
    Product,
    Psl2Even,
    build_table,
    spec_class_count,
    spec_to_json,
)

K_GUARD = 10**7
PARAM_GUARD = 10**4
VERIFY_CLASS_LIMIT = 10**5
VERIFY_CELL_LIMIT = 8 * 10**6


class Scope(Enum):
    CHARACTER = "character"
    GROUP = "group"


class WitnessDomainError(ValueError):
    """Raised when a query's target or epsilon is outside the valid range."""


class WitnessInconsistencyError(ValueError):
    """Raised when a witness fails independent re-verification."""


@dataclass(frozen=True)
class WitnessQuery:
    kind: StatKind
    scope: Scope
    target: Fraction
    epsilon: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "target", Fraction(self.target))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.epsilon <= 0:
            raise WitnessDomainError(f"epsilon must be positive, got {self.epsilon}")
        low = Fraction(1, 2) if self.kind is StatKind.THETA_ELEM else Fraction(0)
        if not low <= self.target <= 1:
            raise WitnessDomainError(
                f"{self.kind.value} targets must lie in [{low}, 1], got {self.target}"
            )

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "scope": self.scope.value,
            "target": str(self.target),
            "epsilon": str(self.epsilon),
        }


@dataclass(frozen=True)
class TrailStep:
    choice: str
    rule: str
    value: Fraction


@dataclass(frozen=True)
class WitnessFactor:
    family: FamilySpec
    character: str | None
    power: int

    def to_json(self) -> dict:
        return {
            "family": spec_to_json(self.family),
            "character": self.character,
            "power": self.power,
        }


@dataclass(frozen=True)
class Witness:
    query: WitnessQuery
    factors: tuple[WitnessFactor, ...]
    k: int
    value: Fraction
    trail: tuple[TrailStep, ...]

    def to_json(self) -> dict:
        return {
            "query": self.query.to_json(),
            "expression": {"factors": [f.to_json() for f in self.factors]},
            "k": self.k,
            "value": str(self.value),
            "decimal": render_decimal(self.value),
            "trail": [
                {"choice": s.choice, "rule": s.rule, "value": str(s.value)}
                for s in self.trail
            ],
        }


def _scan_sequence(
    c0: Fraction,
    c1: Fraction,
    r1: Fraction,
    c2: Fraction,
    r2: Fraction,
    k_start: int,
    target: Fraction,
    epsilon: Fraction,
) -> tuple[int, Fraction]:
    """First k >= k_start with |c0 + c1*r1^k + c2*r2^k - target| < epsilon."""
    d = c0 - target
    a, b = r1.numerator, r1.denominator
    e, f = r2.numerator, r2.denominator
    pow1_n, pow1_d = a**k_start, b**k_start
    pow2_n, pow2_d = e**k_start, f**k_start
    q0 = d.denominator * c1.denominator * c2.denominator
    eps_n, eps_d = epsilon.numerator, epsilon.denominator
    k = k_start
    while True:
        num = (
            d.numerator * c1.denominator * c2.denominator * pow1_d * pow2_d
            + c1.numerator * d.denominator * c2.denominator * pow1_n * pow2_d
            + c2.numerator * d.denominator * c1.denominator * pow1_d * pow2_n
        )
        if abs(num) * eps_d < eps_n * q0 * pow1_d * pow2_d:
            value = (
                c0
                + c1 * Fraction(pow1_n, pow1_d)
                + c2 * Fraction(pow2_n, pow2_d)
            )
            return k, value
        k += 1
        if k > K_GUARD:
            raise RuntimeError(
                "witness scan exceeded the k guard; epsilon is too small"
            )
        pow1_n *= a
        pow1_d *= b
        pow2_n *= e
        pow2_d *= f


_ZERO = Fraction(0)
_ONE = Fraction(1)


def _min_power_of_two(bound_times_eps: Fraction, epsilon: Fraction, start: int) -> int:
    """Smallest exponent j >= start with 2^j * epsilon > bound_times_eps."""
    j = start
    while Fraction(2**j) * epsilon <= bound_times_eps:
        j += 1
        if j > PARAM_GUARD:
            raise RuntimeError("parameter scan exceeded its guard")
    return j


def witness_theta_character(target, epsilon) -> Witness:
    """Character-scope theta: a planar dihedral character times a power of
    the degree-q PSL(2, q) character.

    The base character contributes theta = 1/2 + 2^-n (zeros only), and
    each PSL factor multiplies the nonzero fraction by exactly 1 - 1/q
    while contributing no roots of unity, so the sequence climbs from just
    above 1/2 toward 1 in steps below epsilon.
    """
    query = WitnessQuery(StatKind.THETA_ELEM, Scope.CHARACTER, target, epsilon)
    tgt, eps = query.target, query.epsilon
    n = _min_power_of_two(_ONE, eps, 2)
    r = _min_power_of_two(_ONE, eps, 1)
    q = 2**r
    base = closed_form_stats(Dihedral(n)).character
    st = closed_form_stats(Psl2Even(r)).character
    z0 = base.z_elem
    step = st.z_elem
    trail = [
        TrailStep(f"n = {n}", "smallest n >= 2 with 2^n > 1/epsilon", Fraction(2**n)),
        TrailStep(f"r = {r}", "smallest r >= 1 with q = 2^r > 1/epsilon", Fraction(q)),
        TrailStep(
            "start", "value at k = 0 is 1/2 + 2^-n (zeros only, no unit values)", z0
        ),
        TrailStep("step", "each factor scales the nonzero fraction by 1 - 1/q", step),
    ]
    k, value = _scan_sequence(_ONE, -(1 - z0), 1 - step, _ZERO, _ONE, 0, tgt, eps)
    trail.append(TrailStep(f"k = {k}", "first k with |value - target| < epsilon", value))
    factors = [WitnessFactor(Dihedral(n), "rot1", 1)]
    if k:
        factors.append(WitnessFactor(Psl2Even(r), "steinberg", k))
    return Witness(query, tuple(factors), k, value, tuple(trail))


def witness_local(kind: StatKind, target, epsilon) -> Witness:
    """Character-scope witnesses for the five non-theta statistics.

    z statistics ride the zero recurrence on powers of the degree-q
    PSL(2, q) character; u statistics ride the geometric decay of the same
    character's unit fraction; class-weighted theta rides the planar
    dihedral character, whose unit fraction is 0.  Powers start at k = 1:
    a witness is always a concrete character.
    """
    if kind is StatKind.THETA_ELEM:
        raise WitnessDomainError(
            "element-weighted theta uses witness_theta_character"
        )
    query = WitnessQuery(kind, Scope.CHARACTER, target, epsilon)
    tgt, eps = query.target, query.epsilon
    trail = []
    if kind in (StatKind.Z_ELEM, StatKind.Z_CLASS):
        r = _min_power_of_two(_ONE, eps, 1)
        rec = closed_form_stats(Psl2Even(r)).character
        step = rec.z_elem if kind is StatKind.Z_ELEM else rec.z_class
        trail.append(
            TrailStep(
                f"r = {r}", "smallest r >= 1 with q = 2^r > 1/epsilon", Fraction(2**r)
            )
        )
        trail.append(
            TrailStep("step", "zero fraction of one factor, below epsilon", step)
        )
        k, value = _scan_sequence(_ONE, -_ONE, 1 - step, _ZERO, _ONE, 1, tgt, eps)
        factors = (WitnessFactor(Psl2Even(r), "steinberg", k),)
    elif kind in (StatKind.U_ELEM, StatKind.U_CLASS):
        r = _min_power_of_two(Fraction(2), eps, 1)
        rec = closed_form_stats(Psl2Even(r)).character
        u1 = rec.u_elem if kind is StatKind.U_ELEM else rec.u_class
        trail.append(
            TrailStep(
                f"r = {r}", "smallest r >= 1 with q = 2^r > 2/epsilon", Fraction(2**r)
            )
        )
        trail.append(
            TrailStep(
                "ratio",
                "unit fraction of one factor; the gap to 1 stays below epsilon",
                u1,
            )
        )
        k, value = _scan_sequence(_ZERO, _ONE, u1, _ZERO, _ONE, 1, tgt, eps)
        factors = (WitnessFactor(Psl2Even(r), "steinberg", k),)
    else:  # class-weighted theta; the step is 3/(2^(n-1) + 3), so the
        # inequality is on 2^(n-1), not 2^n
        n = _min_power_of_two(Fraction(3), eps, 1) + 1
        rec = closed_form_stats(Dihedral(n)).character
        step = rec.z_class
        trail.append(
            TrailStep(
                f"n = {n}",
                "smallest n >= 2 with 2^(n-1) > 3/epsilon",
                Fraction(2 ** (n - 1)),
            )
        )
        trail.append(
            TrailStep(
                "step",
                "class-weighted zero fraction of one factor; unit fraction is 0",
                step,
            )
        )
        k, value = _scan_sequence(_ONE, -_ONE, 1 - step, _ZERO, _ONE, 1, tgt, eps)
        factors = (WitnessFactor(Dihedral(n), "rot1", k),)
    trail.append(TrailStep(f"k = {k}", "first k with |value - target| < epsilon", value))
    return Witness(query, factors, k, value, tuple(trail))


def witness_theta_group(target, epsilon) -> Witness:
    """Group-scope theta: a dihedral group times a power of an extraspecial
    group.

    The dihedral parameter is the smallest whose unit fraction is below
    epsilon/2 while its zero fraction sits strictly inside
    (1/2, 1/2 + epsilon/2); the extraspecial parameter is the smallest
    whose zero fraction is below epsilon.  All factors are 2-groups, so
    theta(k) = u(G)u(H)^k + 1 - (1 - z(G))(1 - z(H))^k exactly.
    """
    query = WitnessQuery(StatKind.THETA_ELEM, Scope.GROUP, target, epsilon)
    tgt, eps = query.target, query.epsilon
    half = Fraction(1, 2)
    l = 1
    while True:
        g = closed_form_stats(Dihedral(l)).group
        if g.u_elem < eps / 2 and half < g.z_elem < half + eps / 2:
            break
        l += 1
        if l > PARAM_GUARD:
            raise RuntimeError("parameter scan exceeded its guard")
    m = 1
    while closed_form_stats(Extraspecial2(m)).group.z_elem >= eps:
        m += 1
        if m > PARAM_GUARD:
            raise RuntimeError("parameter scan exceeded its guard")
    h = closed_form_stats(Extraspecial2(m)).group
    trail = [
        TrailStep(f"l = {l}", "smallest l with u(G) < epsilon/2", g.u_elem),
        TrailStep(
            "z(G) check", "1/2 < z(G) < 1/2 + epsilon/2 at the same l", g.z_elem
        ),
        TrailStep(f"m = {m}", "smallest m with z(H) < epsilon", h.z_elem),
    ]
    k, value = _scan_sequence(
        _ONE, g.u_elem, h.u_elem, -(1 - g.z_elem), 1 - h.z_elem, 0, tgt, eps
    )
    u_term = g.u_elem * h.u_elem**k
    trail.append(TrailStep(f"k = {k}", "first k with |value - target| < epsilon", value))
    trail.append(TrailStep("u part", "u(G) * u(H)^k at the accepted k", u_term))
    factors = [WitnessFactor(Dihedral(l), None, 1)]
    if k:
        factors.append(WitnessFactor(Extraspecial2(m), None, k))
    return Witness(query, tuple(factors), k, value, tuple(trail))


def witness_global(kind: StatKind, target, epsilon) -> Witness:
    """Group-scope witnesses for the five non-theta statistics, all powers
    of a single 2-group family.

    z statistics and class-weighted theta ride powers of one group whose
    per-factor fractions are below epsilon (theta needs both the u and z
    fractions small, each below epsilon/2); u statistics ride powers of an
    extraspecial group whose unit fraction is within epsilon of 1.
    """
    if kind is StatKind.THETA_ELEM:
        raise WitnessDomainError("element-weighted theta uses witness_theta_group")
    query = WitnessQuery(kind, Scope.GROUP, target, epsilon)
    tgt, eps = query.target, query.epsilon
    trail = []
    if kind is StatKind.THETA_CLASS:
        l = 1
        while True:
            g = closed_form_stats(Dihedral(l)).group
            if g.u_class < eps / 2 and g.z_class < eps / 2:
                break
            l += 1
            if l > PARAM_GUARD:
                raise RuntimeError("parameter scan exceeded its guard")
        trail.append(
            TrailStep(f"l = {l}", "smallest l with u(G) < epsilon/2", g.u_class)
        )
        trail.append(
            TrailStep("z(G) check", "z(G) < epsilon/2 at the same l", g.z_class)
        )
        k, value = _scan_sequence(
            _ONE, _ONE, g.u_class, -_ONE, 1 - g.z_class, 1, tgt, eps
        )
        factors = (WitnessFactor(Dihedral(l), None, k),)
    elif kind in (StatKind.U_ELEM, StatKind.U_CLASS):
        m = 1
        while True:
            rec = closed_form_stats(Extraspecial2(m)).group
            u1 = rec.u_elem if kind is StatKind.U_ELEM else rec.u_class
            if 1 - u1 < eps:
                break
            m += 1
            if m > PARAM_GUARD:
                raise RuntimeError("parameter scan exceeded its guard")
        trail.append(TrailStep(f"m = {m}", "smallest m with 1 - u(H) < epsilon", u1))
        k, value = _scan_sequence(_ZERO, _ONE, u1, _ZERO, _ONE, 1, tgt, eps)
        factors = (WitnessFactor(Extraspecial2(m), None, k),)
    else:  # zI / zII
        m = 1
        while True:
            rec = closed_form_stats(Extraspecial2(m)).group
            z1 = rec.z_elem if kind is StatKind.Z_ELEM else rec.z_class
            if z1 < eps:
                break
            m += 1
            if m > PARAM_GUARD:
                raise RuntimeError("parameter scan exceeded its guard")
        trail.append(TrailStep(f"m = {m}", "smallest m with z(H) < epsilon", z1))
        k, value = _scan_sequence(_ONE, -_ONE, 1 - z1, _ZERO, _ONE, 1, tgt, eps)
        factors = (WitnessFactor(Extraspecial2(m), None, k),)
    trail.append(TrailStep(f"k = {k}", "first k with |value - target| < epsilon", value))
    return Witness(query, factors, k, value, tuple(trail))


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    witness_value: Fraction
    replay_value: Fraction
    table_value: Fraction | None
    table_skipped: str | None


def _factor_record(fct: WitnessFactor) -> StatRecord:
    cf = closed_form_stats(fct.family)
    if fct.character is None:
        return cf.group
    if cf.character_name != fct.character:
        raise WitnessInconsistencyError(
            f"no closed form for character {fct.character!r} of {fct.family!r} "
            f"(distinguished character is {cf.character_name!r})"
        )
    return cf.character


def verify_witness(
    w: Witness,
    *,
    class_limit: int = VERIFY_CLASS_LIMIT,
    cell_limit: int = VERIFY_CELL_LIMIT,
) -> VerificationReport:
    """Recompute a witness value two independent ways.

    (a) Replay the closed forms through the product rules: the nonzero
    fraction of the expression is the product of per-factor nonzero
    fractions, the unit fraction is the product of per-factor unit
    fractions (all witness factors satisfy the multiplicativity
    hypothesis).  (b) When the expression is small enough, build the
    explicit product table and count, entry by entry.  Any disagreement
    with the stored value raises; path (b) reports why when skipped.
    """
    kind = w.query.kind
    element = kind.element_weighted
    if not w.factors:
        raise WitnessInconsistencyError("witness has no factors")
    one_minus_z = _ONE
    u_total = _ONE
    for fct in w.factors:
        if fct.power < 1:
            raise WitnessInconsistencyError(f"factor power {fct.power} is not >= 1")
        rec = _factor_record(fct)
        z = rec.z_elem if element else rec.z_class
        u = rec.u_elem if element else rec.u_class
        one_minus_z *= (1 - z) ** fct.power
        u_total *= u**fct.power
    if kind in (StatKind.Z_ELEM, StatKind.Z_CLASS):
        replay = 1 - one_minus_z
    elif kind in (StatKind.U_ELEM, StatKind.U_CLASS):
        replay = u_total
    else:
        replay = (1 - one_minus_z) + u_total
    if replay != w.value:
        raise WitnessInconsistencyError(
            f"recurrence replay gives {replay}, witness records {w.value}"
        )

    total_classes = 1
    for fct in w.factors:
        total_classes *= spec_class_count(fct.family) ** fct.power
    table_value = None
    skipped = None
    if total_classes > class_limit:
        skipped = (
            f"explicit table skipped: {total_classes} classes exceed "
            f"the guard {class_limit}"
        )
    elif total_classes * total_classes > cell_limit:
        skipped = (
            f"explicit table skipped: {total_classes * total_classes} cells "
            f"exceed the guard {cell_limit}"
        )
    else:
        flat: list[FamilySpec] = []
        names: list[str] = []
        for fct in w.factors:
            flat.extend([fct.family] * fct.power)
            if fct.character is not None:
                names.extend([fct.character] * fct.power)
        table = build_table(Product(tuple(flat)))
        if w.query.scope is Scope.CHARACTER:
            rec = char_stats(table, table.character_index("*".join(names)))
        else:
            rec = group_stats(table)
        table_value = rec.get(kind)
        if table_value != w.value:
            raise WitnessInconsistencyError(
                f"explicit table gives {table_value}, witness records {w.value}"
            )
    return VerificationReport(w.value, replay, table_value, skipped)
