"""Permutation-group oracle: character tables rebuilt from scratch.

This module recomputes character tables by a route that shares nothing
with the closed-form generators in `chartab.tables`: enumerate a
permutation group from its generators, split it into conjugacy classes,
and diagonalize the class-algebra multiplication matrices over a prime
field, lifting eigenvalue data back to exact cyclotomic values.  The two
routes meeting entry-for-entry is the correctness argument for both.

The modular step follows the classical plan: pick a prime p congruent to
1 mod the group exponent with p^2 > 4|G|, so F_p contains the needed
roots of unity and every character degree is determined by its residue.
Common eigenvectors of the class matrices give the central character
values, degrees come from the orthogonality relation, and the cyclotomic
lift recovers each value as a multiplicity vector over e-th roots of
unity (each multiplicity is a non-negative integer below p, so residues
determine them exactly).  A prime that fails any internal consistency
check is abandoned for the next candidate.

Costs are polynomial but steep: memory grows with the cube of the class
count and enumeration with |G| times the class count, hence the hard
element limit.

`compare_tables` decides whether two tables differ only by relabeling of
classes and characters, which is the honest notion of equality between a
generated table and an oracle table: neither naming scheme survives the
round trip.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from math import gcd, isqrt, lcm

from chartab.exactnum import Cyclotomic, canonicalize
from chartab.tables import (
    CharacterTable,
    ClassInfo,
    Dihedral,
    Extraspecial2,
    FamilySpec,
    InvalidParameterError,
    Product,
    Psl2Even,
    validate_table,
)

DEFAULT_GROUP_LIMIT = 2 * 10**5
GROUP_LIMIT_ENV = "CHARTAB_ORACLE_LIMIT"

Perm = tuple[int, ...]


class GroupTooLargeError(ValueError):
    """Group closure exceeded the element limit."""


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...]

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise InvalidParameterError(f"degree must be at least 1, got {self.degree}")
        expected = frozenset(range(self.degree))
        for g in self.generators:
            if len(g) != self.degree or frozenset(g) != expected:
                raise InvalidParameterError(
                    f"{g!r} is not a permutation of 0..{self.degree - 1}"
                )


def parse_perm_group(text: str) -> PermGroup:
    """Text format: first line the degree, then one generator per line as
    space-separated images of 0..degree-1."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise InvalidParameterError("empty permutation group description")
    try:
        degree = int(lines[0])
        gens = tuple(tuple(int(tok) for tok in ln.split()) for ln in lines[1:])
    except ValueError as exc:
        raise InvalidParameterError(f"bad permutation group text: {exc}") from exc
    return PermGroup(degree, gens)


def format_perm_group(group: PermGroup) -> str:
    lines = [str(group.degree)]
    lines.extend(" ".join(str(i) for i in g) for g in group.generators)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# permutation arithmetic


def _mul(p: Perm, q: Perm) -> Perm:
    """Left-to-right function composition: apply q, then p."""
    return tuple(p[i] for i in q)


def _invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def _perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    order = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = p[i]
            length += 1
        order = lcm(order, length)
    return order


def _perm_power(p: Perm, m: int) -> Perm:
    result = tuple(range(len(p)))
    base = p
    while m:
        if m & 1:
            result = _mul(result, base)
        base = _mul(base, base)
        m >>= 1
    return result


# ---------------------------------------------------------------------------
# enumeration and conjugacy classes


@dataclass(frozen=True)
class ClassData:
    group_order: int
    representatives: tuple[Perm, ...]
    sizes: tuple[int, ...]
    element_orders: tuple[int, ...]
    power_maps: dict[int, tuple[int, ...]]
    class_of: dict[Perm, int]

    @property
    def num_classes(self) -> int:
        return len(self.representatives)

    @property
    def exponent(self) -> int:
        out = 1
        for o in self.element_orders:
            out = lcm(out, o)
        return out


def _group_limit(limit: int | None) -> int:
    if limit is not None:
        return limit
    return int(os.environ.get(GROUP_LIMIT_ENV, DEFAULT_GROUP_LIMIT))


def _enumerate_elements(group: PermGroup, limit: int) -> set[Perm]:
    identity = tuple(range(group.degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        fresh = []
        for x in frontier:
            for g in group.generators:
                y = _mul(x, g)
                if y not in seen:
                    if len(seen) >= limit:
                        raise GroupTooLargeError(
                            f"group has more than {limit} elements; raise the limit "
                            f"argument or {GROUP_LIMIT_ENV} to enumerate it anyway"
                        )
                    seen.add(y)
                    fresh.append(y)
        frontier = fresh
    return seen


def _primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]


def enumerate_and_classify(group: PermGroup, limit: int | None = None) -> ClassData:
    """Enumerate the group and partition it into conjugacy classes.

    Classes are ordered identity first, then by (size, element order,
    lexicographically smallest member); the representative of each class
    is that smallest member, so the result is a pure function of the
    group, independent of generator order.
    """
    elements = sorted(_enumerate_elements(group, _group_limit(limit)))
    gens = group.generators
    ginvs = [_invert(g) for g in gens]
    class_of: dict[Perm, int] = {}
    orbits: list[tuple[Perm, int]] = []
    for x in elements:
        if x in class_of:
            continue
        idx = len(orbits)
        orbit = {x}
        frontier = [x]
        while frontier:
            z = frontier.pop()
            for g, gi in zip(gens, ginvs):
                w = _mul(g, _mul(z, gi))
                if w not in orbit:
                    orbit.add(w)
                    frontier.append(w)
        for w in orbit:
            class_of[w] = idx
        # x == min(orbit): the first member reached in sorted element order
        orbits.append((x, len(orbit)))

    identity = tuple(range(group.degree))
    keyed = []
    for old_idx, (rep, size) in enumerate(orbits):
        sort_key = (0,) if rep == identity else (1, size, _perm_order(rep), rep)
        keyed.append((sort_key, old_idx, rep, size))
    keyed.sort()
    renumber = {old_idx: new for new, (_, old_idx, _, _) in enumerate(keyed)}
    reps = tuple(item[2] for item in keyed)
    sizes = tuple(item[3] for item in keyed)
    orders = tuple(_perm_order(rep) for rep in reps)
    class_of = {x: renumber[i] for x, i in class_of.items()}

    exponent = 1
    for o in orders:
        exponent = lcm(exponent, o)
    power_maps = {
        p: tuple(class_of[_perm_power(rep, p)] for rep in reps)
        for p in _primes_up_to(exponent)
    }
    return ClassData(
        group_order=len(elements),
        representatives=reps,
        sizes=sizes,
        element_orders=orders,
        power_maps=power_maps,
        class_of=class_of,
    )


# ---------------------------------------------------------------------------
# linear algebra mod p


def _rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        lead = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [(x - c * y) % p for x, y in zip(rows[i], lead)]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def _kernel(mat: list[list[int]], p: int) -> list[list[int]]:
    """Basis of {v : mat v = 0} mod p, for a square matrix."""
    rows, pivots = _rref(mat, p)
    d = len(mat)
    basis = []
    pivot_set = set(pivots)
    for free_col in range(d):
        if free_col in pivot_set:
            continue
        v = [0] * d
        v[free_col] = 1
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free_col] % p
        basis.append(v)
    return basis


def _split_subspace(basis, pivots, mat, p):
    """Split an invariant subspace into eigenspaces of mat.

    basis is in reduced row echelon form, so coordinates of any vector in
    the subspace can be read off its pivot columns.  Returns a list of
    (basis, pivots) pieces, or None when mat does not act diagonalizably
    on the subspace (the caller then retries with another prime).
    """
    r = len(basis[0])
    d = len(basis)
    restriction = []
    for bvec in basis:
        image = [sum(m_row[k] * bvec[k] for k in range(r)) % p for m_row in mat]
        coords = [image[pc] for pc in pivots]
        for j in range(r):
            residual = image[j] - sum(c * basis[t][j] for t, c in enumerate(coords))
            if residual % p:
                return None  # subspace not invariant mod p
        restriction.append(coords)
    # right eigenvectors of the transposed restriction give coefficient
    # vectors over the subspace basis
    transposed = [[restriction[s][t] for s in range(d)] for t in range(d)]
    pieces = []
    found = 0
    for lam in range(p):
        shifted = [
            [(transposed[i][j] - (lam if i == j else 0)) % p for j in range(d)]
            for i in range(d)
        ]
        ker = _kernel(shifted, p)
        if not ker:
            continue
        mapped = [
            [sum(c[s] * basis[s][j] for s in range(d)) % p for j in range(r)]
            for c in ker
        ]
        pieces.append(_rref(mapped, p))
        found += len(ker)
        if found == d:
            break
    if found != d:
        return None
    return pieces


def _common_eigenvectors(mats, p: int):
    """One-dimensional common invariant subspaces of all mats, or None."""
    r = len(mats[0])
    full = [[1 if j == i else 0 for j in range(r)] for i in range(r)]
    subspaces = [(full, list(range(r)))]
    for mat in mats[1:]:  # mats[0] is the identity class, always scalar
        if all(len(basis) == 1 for basis, _ in subspaces):
            break
        refined = []
        for basis, pivots in subspaces:
            if len(basis) == 1:
                refined.append((basis, pivots))
                continue
            pieces = _split_subspace(basis, pivots, mat, p)
            if pieces is None:
                return None
            refined.extend(pieces)
        subspaces = refined
    if any(len(basis) != 1 for basis, _ in subspaces):
        return None
    return [basis[0] for basis, _ in subspaces]


# ---------------------------------------------------------------------------
# the modular character table algorithm


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _candidate_primes(exponent: int, group_order: int, count: int):
    found = 0
    p = 1
    while found < count:
        p += exponent
        if p * p > 4 * group_order and _is_prime(p):
            found += 1
            yield p


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = []
    m = p - 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for w in range(2, p):
        if all(pow(w, (p - 1) // f, p) != 1 for f in factors):
            return w
    raise RuntimeError(f"no primitive root mod {p}")  # unreachable for prime p


def _structure_constants(data: ClassData) -> list[list[list[int]]]:
    """mats[i][j][k] counts pairs (x, y) with x in class i, y in class j,
    and x*y the representative of class k.  The count is independent of
    which member of class k is fixed."""
    r = data.num_classes
    reps = data.representatives
    mats = [[[0] * r for _ in range(r)] for _ in range(r)]
    for x, i in data.class_of.items():
        xi = _invert(x)
        row = mats[i]
        for k, z in enumerate(reps):
            row[data.class_of[_mul(xi, z)]][k] += 1
    return mats


def _try_prime(data: ClassData, mats, exponent: int, p: int) -> CharacterTable | None:
    r = data.num_classes
    reduced = [[[c % p for c in mrow] for mrow in m] for m in mats]
    vectors = _common_eigenvectors(reduced, p)
    if vectors is None:
        return None

    inverse_class = [data.class_of[_invert(rep)] for rep in data.representatives]
    size_inverse = [pow(s, p - 2, p) for s in data.sizes]
    order_residue = data.group_order % p

    root = _primitive_root(p)
    zeta_inv = pow(pow(root, (p - 1) // exponent, p), p - 2, p)
    zeta_inv_pow = [pow(zeta_inv, t, p) for t in range(exponent)]
    exp_inverse = pow(exponent % p, p - 2, p)

    # class index of rep^s for s = 0..exponent-1, per class
    identity = tuple(range(len(data.representatives[0])))
    power_sequences = []
    for rep in data.representatives:
        cur = identity
        seq = []
        for _ in range(exponent):
            seq.append(data.class_of[cur])
            cur = _mul(cur, rep)
        power_sequences.append(seq)

    rows = []
    for v in vectors:
        if v[0] % p == 0:
            return None
        scale = pow(v[0], p - 2, p)
        omega = [x * scale % p for x in v]
        norm = (
            sum(omega[k] * omega[inverse_class[k]] * size_inverse[k] for k in range(r))
            % p
        )
        if norm == 0:
            return None
        degree_sq = order_residue * pow(norm, p - 2, p) % p
        degree = next(
            (t for t in range(1, (p + 1) // 2) if t * t % p == degree_sq), None
        )
        if degree is None:
            return None
        residues = [degree * omega[k] % p * size_inverse[k] % p for k in range(r)]

        values = []
        for k in range(r):
            seq = power_sequences[k]
            multiplicity = {}
            total = 0
            for j in range(exponent):
                acc = 0
                for s in range(exponent):
                    acc += residues[seq[s]] * zeta_inv_pow[j * s % exponent]
                m_j = acc % p * exp_inverse % p
                if m_j:
                    multiplicity[j] = m_j
                    total += m_j
            if total != degree:
                return None
            values.append(canonicalize(exponent, multiplicity))
        if not values[0].is_rational or values[0].as_rational() != degree:
            return None
        rows.append((degree, values))

    rows.sort(key=lambda item: (item[0], tuple(v.key() for v in item[1])))
    classes = tuple(
        ClassInfo(f"c{k}", data.sizes[k], data.element_orders[k]) for k in range(r)
    )
    return CharacterTable(
        group_name=f"perm(deg={len(identity)}, order={data.group_order})",
        group_order=data.group_order,
        classes=classes,
        character_names=tuple(f"x{i}" for i in range(r)),
        characters=tuple(tuple(values) for _, values in rows),
    )


def dixon_character_table(group: PermGroup, limit: int | None = None) -> CharacterTable:
    """Compute the full character table of a permutation group.

    Output classes are named c0, c1, ... in the canonical class order of
    `enumerate_and_classify`; characters are named x0, x1, ... sorted by
    (degree, value tuple).  The result is validated against the standard
    table identities before being returned.
    """
    data = enumerate_and_classify(group, limit)
    mats = _structure_constants(data)
    exponent = data.exponent
    for p in _candidate_primes(exponent, data.group_order, 25):
        table = _try_prime(data, mats, exponent, p)
        if table is not None:
            report = validate_table(table)
            if not report:
                raise RuntimeError(f"oracle produced an invalid table: {report.failure}")
            return table
    raise RuntimeError("character table computation failed for 25 candidate primes")


# ---------------------------------------------------------------------------
# built-in permutation realizations of the table families


def _gf2poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _gf2_irreducible(r: int) -> int:
    # brute force is fine: r stays small and the scan runs once per call
    for candidate in range(1 << r, 1 << (r + 1)):
        if not candidate & 1:
            continue
        if all(
            _gf2poly_mod(candidate, q)
            for d in range(1, r // 2 + 1)
            for q in range(1 << d, 1 << (d + 1))
        ):
            return candidate
    raise RuntimeError(f"no irreducible polynomial of degree {r}")  # unreachable


def _gf_mul(a: int, b: int, modpoly: int) -> int:
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return _gf2poly_mod(acc, modpoly)


def _gf_pow(a: int, m: int, modpoly: int) -> int:
    out = 1
    while m:
        if m & 1:
            out = _gf_mul(out, a, modpoly)
        a = _gf_mul(a, a, modpoly)
        m >>= 1
    return out


def _psl2_perm_group(r: int) -> PermGroup:
    q = 1 << r
    modpoly = _gf2_irreducible(r)

    def mul(a, b):
        return _gf_mul(a, b, modpoly)

    def inv(a):
        return _gf_pow(a, q - 2, modpoly)

    # projective line: point 0 is infinity, point 1 + a is the field element a
    def moebius(ma, mb, mc, md) -> Perm:
        image = [0] * (q + 1)
        image[0] = 0 if mc == 0 else 1 + mul(ma, inv(mc))
        for elt in range(q):
            den = mul(mc, elt) ^ md
            num = mul(ma, elt) ^ mb
            image[1 + elt] = 0 if den == 0 else 1 + mul(num, inv(den))
        return tuple(image)

    gens = [moebius(1, 1, 0, 1), moebius(0, 1, 1, 0)]
    if q > 2:
        # a multiplicative generator; conjugating the translation by its
        # powers reaches every translation, since squaring is onto
        gen = None
        for g in range(2, q):
            x, steps = g, 1
            while x != 1:
                x = mul(x, g)
                steps += 1
            if steps == q - 1:
                gen = g
                break
        gens.append(moebius(gen, 0, 0, inv(gen)))
    return PermGroup(q + 1, tuple(gens))


def _extraspecial_perm_group(n: int) -> PermGroup:
    dim = 2 * n
    size = 1 << (dim + 1)

    def cocycle(a: int, b: int) -> int:
        return bin((a >> n) & b).count("1") & 1

    gens = []
    for i in range(dim):
        basis_vec = 1 << i
        image = [0] * size
        for w in range(1 << dim):
            shift = cocycle(basis_vec, w)
            for d in (0, 1):
                image[w * 2 + d] = (basis_vec ^ w) * 2 + (d ^ shift)
        gens.append(tuple(image))
    return PermGroup(size, tuple(gens))


def builtin_perm_group(spec: FamilySpec) -> PermGroup:
    """A faithful permutation realization of a family spec.

    Dihedral groups act on the vertices of the polygon (n = 1, the Klein
    group, needs two 2-point blocks instead); extraspecial groups act on
    themselves by left translation; the linear groups act on the
    projective line; products act on the disjoint union of the factors'
    points.
    """
    if isinstance(spec, Dihedral):
        if spec.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {spec.n}")
        if spec.n == 1:
            return PermGroup(4, ((1, 0, 2, 3), (0, 1, 3, 2)))
        m = 1 << spec.n
        rotate = tuple((i + 1) % m for i in range(m))
        reflect = tuple(-i % m for i in range(m))
        return PermGroup(m, (rotate, reflect))
    if isinstance(spec, Extraspecial2):
        if spec.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {spec.n}")
        return _extraspecial_perm_group(spec.n)
    if isinstance(spec, Psl2Even):
        if spec.r < 1:
            raise InvalidParameterError(f"r must be a positive integer, got {spec.r}")
        return _psl2_perm_group(spec.r)
    if isinstance(spec, Product):
        parts = [builtin_perm_group(f) for f in spec.factors]
        if not parts:
            return PermGroup(1, ())
        degree = sum(part.degree for part in parts)
        gens = []
        offset = 0
        for part in parts:
            for g in part.generators:
                image = list(range(degree))
                for i, gi in enumerate(g):
                    image[offset + i] = offset + gi
                gens.append(tuple(image))
            offset += part.degree
        return PermGroup(degree, tuple(gens))
    raise InvalidParameterError(f"unknown family spec {spec!r}")


# ---------------------------------------------------------------------------
# table comparison up to relabeling


@dataclass(frozen=True)
class TableComparison:
    matched: bool
    reason: str | None
    class_map: tuple[int, ...] | None
    row_map: tuple[int, ...] | None
    element_order_mismatches: tuple[tuple[str, str, int, int], ...] = ()

    def __bool__(self) -> bool:
        return self.matched


def compare_tables(
    a: CharacterTable, b: CharacterTable, match_element_orders: bool = True
) -> TableComparison:
    """Decide whether b is a relabeling of a.

    Looks for a class bijection and a character bijection under which the
    tables agree entry by entry; class sizes must correspond, and element
    orders must too unless match_element_orders is False.  On success
    class_map and row_map send indices of a to indices of b.  With order
    matching disabled, any order disagreements along the matched classes
    are reported rather than enforced.

    Values are compared semantically: both tables are rewritten into the
    smallest common cyclotomic field first, so differing conductors for
    equal values never cause a spurious mismatch.
    """

    def fail(reason: str) -> TableComparison:
        return TableComparison(False, reason, None, None, ())

    if a.group_order != b.group_order:
        return fail(f"group orders differ: {a.group_order} vs {b.group_order}")
    if a.num_classes != b.num_classes:
        return fail(f"class counts differ: {a.num_classes} vs {b.num_classes}")
    if len(a.characters) != len(b.characters):
        return fail(
            f"character counts differ: {len(a.characters)} vs {len(b.characters)}"
        )

    if match_element_orders:
        profile_a = sorted((c.size, c.element_order) for c in a.classes)
        profile_b = sorted((c.size, c.element_order) for c in b.classes)
        label = "(size, element order)"
    else:
        profile_a = sorted((c.size,) for c in a.classes)
        profile_b = sorted((c.size,) for c in b.classes)
        label = "(size,)"
    if profile_a != profile_b:
        return fail(
            f"class {label} multisets differ: {profile_a} vs {profile_b}"
        )

    degrees_a, degrees_b = a.degrees, b.degrees
    if sorted(degrees_a) != sorted(degrees_b):
        return fail(
            f"degree multisets differ: {sorted(degrees_a)} vs {sorted(degrees_b)}"
        )

    joint = 1
    for table in (a, b):
        for row in table.characters:
            for v in row:
                joint = lcm(joint, v.conductor)
    embed_cache: dict[tuple, tuple] = {}

    def joint_key(v: Cyclotomic) -> tuple:
        k = v.key()
        out = embed_cache.get(k)
        if out is None:
            out = v.embed(joint).key()
            embed_cache[k] = out
        return out

    vals_a = [[joint_key(v) for v in row] for row in a.characters]
    vals_b = [[joint_key(v) for v in row] for row in b.characters]
    r = a.num_classes
    nrows = len(vals_a)

    def column_invariant(table, vals, degrees, j):
        info = table.classes[j]
        profile = (
            (info.size, info.element_order) if match_element_orders else (info.size,)
        )
        pairs = Counter((degrees[i], vals[i][j]) for i in range(nrows))
        return (profile, tuple(sorted(pairs.items())))

    invariant_a = [column_invariant(a, vals_a, degrees_a, j) for j in range(r)]
    invariant_b = [column_invariant(b, vals_b, degrees_b, j) for j in range(r)]
    if Counter(invariant_a) != Counter(invariant_b):
        return fail("no class correspondence: per-class value profiles differ")

    buckets: dict[tuple, list[int]] = {}
    for j, inv in enumerate(invariant_b):
        buckets.setdefault(inv, []).append(j)
    # small buckets first: forced assignments come free, ambiguity is deferred
    column_order = sorted(
        range(r), key=lambda j: (len(buckets[invariant_a[j]]), invariant_a[j], j)
    )

    used = [False] * r
    assignment = [0] * r

    def search(t, sig_a, sig_b) -> bool:
        # sig_a[i] / sig_b[i]: the row's values along the columns assigned
        # so far; equal multisets are necessary for any completion
        if t == r:
            return True
        i = column_order[t]
        for j in buckets[invariant_a[i]]:
            if used[j]:
                continue
            next_a = tuple(sig_a[x] + (vals_a[x][i],) for x in range(nrows))
            next_b = tuple(sig_b[x] + (vals_b[x][j],) for x in range(nrows))
            if Counter(next_a) != Counter(next_b):
                continue
            used[j] = True
            assignment[i] = j
            if search(t + 1, next_a, next_b):
                return True
            used[j] = False
        return False

    empty = tuple(() for _ in range(nrows))
    if not search(0, empty, empty):
        return fail("no class correspondence aligns the character values")

    signature_to_b_rows: dict[tuple, list[int]] = {}
    for y in range(nrows):
        sig = tuple(vals_b[y][assignment[i]] for i in column_order)
        signature_to_b_rows.setdefault(sig, []).append(y)
    row_map = []
    for x in range(nrows):
        sig = tuple(vals_a[x][i] for i in column_order)
        row_map.append(signature_to_b_rows[sig].pop(0))

    mismatches = ()
    if not match_element_orders:
        mismatches = tuple(
            (
                a.classes[i].name,
                b.classes[assignment[i]].name,
                a.classes[i].element_order,
                b.classes[assignment[i]].element_order,
            )
            for i in range(r)
            if a.classes[i].element_order != b.classes[assignment[i]].element_order
        )
    return TableComparison(True, None, tuple(assignment), tuple(row_map), mismatches)
