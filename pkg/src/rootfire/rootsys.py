"""Exact arithmetic for the irreducible crystallographic root systems.

Conventions, fixed across the whole package:

* Weights are tuples of integers in the fundamental-weight basis, so
  coordinate ``i`` of a weight is its pairing with the i-th simple coroot.
* Roots are tuples of integers in the simple-root basis.
* ``cartan[i][j]`` is the pairing of the i-th simple root with the j-th
  simple coroot; consequently row ``i`` of the Cartan matrix is the i-th
  simple root written in weight coordinates.
* Node indices in the public API (simple reflections, Weyl words, support
  sets, minuscule nodes) are 1-based, following the standard Bourbaki
  numbering of Dynkin diagrams.  Positions into ``pos_roots`` are plain
  0-based list indices.

Everything here is integer or ``fractions.Fraction`` arithmetic; no floats.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .errors import ClassificationError, DomainError, InvariantViolationError

Weight = tuple[int, ...]
RootVec = tuple[int, ...]
WeylWord = tuple[int, ...]

_VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 3,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def parse_system(spec: str) -> tuple[str, int]:
    """Parse a specifier like ``"A2"`` or ``"b3"`` into (letter, rank)."""
    m = re.fullmatch(r"\s*([A-Za-z])\s*([0-9]+)\s*", spec or "")
    if not m:
        raise ClassificationError(f"cannot parse root-system specifier {spec!r}")
    letter = m.group(1).upper()
    rank = int(m.group(2))
    if letter not in _VALID_RANKS or not _VALID_RANKS[letter](rank):
        raise ClassificationError(f"no irreducible root system of type {letter}{rank}")
    return letter, rank


def _dynkin_edges(letter: str, rank: int) -> list[tuple[int, int, int, int]]:
    """Edges (i, j, cij, cji) of the Dynkin diagram, 0-based nodes."""
    path = [(i, i + 1, -1, -1) for i in range(rank - 1)]
    if letter == "A":
        return path
    if letter == "B":  # short root at node n
        path[-1] = (rank - 2, rank - 1, -2, -1)
        return path
    if letter == "C":  # long root at node n
        path[-1] = (rank - 2, rank - 1, -1, -2)
        return path
    if letter == "D":
        return path[:-1] + [(rank - 3, rank - 1, -1, -1)]
    if letter == "E":  # node 2 hangs off node 4; chain 1-3-4-5-...
        chain = [(0, 2, -1, -1), (1, 3, -1, -1)]
        chain += [(i, i + 1, -1, -1) for i in range(2, rank - 1)]
        return chain
    if letter == "F":
        return [(0, 1, -1, -1), (1, 2, -2, -1), (2, 3, -1, -1)]
    if letter == "G":
        return [(0, 1, -1, -3)]
    raise ClassificationError(letter)


def _cartan_matrix(letter: str, rank: int) -> tuple[tuple[int, ...], ...]:
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j, cij, cji in _dynkin_edges(letter, rank):
        c[i][j] = cij
        c[j][i] = cji
    return tuple(tuple(row) for row in c)


def _symmetrizer(cartan) -> tuple[int, ...]:
    """Positive integers d with d[j]*C[i][j] symmetric, normalized min = 1."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    queue = [0]
    while queue:
        i = queue.pop()
        for j in range(n):
            if i != j and cartan[i][j] != 0 and d[j] is None:
                # d[j] * C[i][j] = d[i] * C[j][i]
                d[j] = d[i] * cartan[j][i] / cartan[i][j]
                queue.append(j)
    if any(x is None for x in d):
        raise InvariantViolationError("Dynkin diagram is not connected")
    lo = min(d)
    out = tuple(int(x / lo) for x in d)
    if any(x / lo != int(x / lo) for x in d):
        raise InvariantViolationError("non-integer symmetrizer")
    return out


def _mat_inv_transpose(cartan) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse of the transposed Cartan matrix."""
    n = len(cartan)
    aug = [
        [Fraction(cartan[j][i]) for j in range(n)]
        + [Fraction(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _det(cartan) -> int:
    n = len(cartan)
    m = [[Fraction(x) for x in row] for row in cartan]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    if det != int(det):
        raise InvariantViolationError("non-integer Cartan determinant")
    return int(det)


class RootSystem:
    """Immutable bundle of Cartan data for one irreducible root system.

    Attributes
    ----------
    type_letter, rank : classification data ("A".."G", positive int).
    cartan : Cartan matrix as a tuple of integer row tuples.
    symmetrizer : per-node half squared lengths d_i, normalized min 1.
    pos_roots : positive roots in simple-root coordinates, sorted by
        (height, lexicographic).
    pos_root_weights : the same roots in fundamental-weight coordinates.
    pos_coroots : integer rows r with ``pairing(v, alpha) = r . v``.
    root_d : per-root half squared length; ``length_class`` tags long/short.
    highest_root, highest_short_root : indices into ``pos_roots``.
    coxeter_number, index_of_connection : the invariants h and f.
    minuscule : frozenset of 1-based node indices of minuscule weights.
    """

    def __init__(self, type_letter: str, rank: int):
        self.type_letter = type_letter
        self.rank = rank
        self.cartan = _cartan_matrix(type_letter, rank)
        self.symmetrizer = _symmetrizer(self.cartan)
        self._cartan_inv_t = _mat_inv_transpose(self.cartan)
        self.index_of_connection = abs(_det(self.cartan))

        self.pos_roots = self._generate_pos_roots()
        self._root_index = {r: i for i, r in enumerate(self.pos_roots)}
        self.pos_root_weights = tuple(
            tuple(sum(a * self.cartan[i][j] for i, a in enumerate(r)) for j in range(rank))
            for r in self.pos_roots
        )
        self.root_d = tuple(self._half_norm(r) for r in self.pos_roots)
        long_d = max(self.root_d)
        self.length_class = tuple("long" if d == long_d else "short" for d in self.root_d)
        self.pos_coroots = tuple(
            self._coroot_coords(r, d) for r, d in zip(self.pos_roots, self.root_d)
        )

        dominant = [
            i for i, cw in enumerate(self.pos_root_weights) if all(c >= 0 for c in cw)
        ]
        longs = [i for i in dominant if self.length_class[i] == "long"]
        shorts = [i for i in dominant if self.length_class[i] == "short"]
        if len(longs) != 1 or len(shorts) > 1:
            raise InvariantViolationError("dominant roots are not as classified")
        self.highest_root = longs[0]
        self.highest_short_root = shorts[0] if shorts else longs[0]

        self.coxeter_number = 1 + sum(self.pos_coroots[self.highest_short_root])
        self.minuscule = frozenset(
            j + 1
            for j in range(rank)
            if all(r[j] in (0, 1) for r in self.pos_coroots)
        )
        self._validate()

    # -- construction internals -------------------------------------------

    def _generate_pos_roots(self):
        """Closure of the simple roots under simple reflections."""
        n = self.rank
        simple = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        seen = set(simple)
        queue = list(simple)
        while queue:
            v = queue.pop()
            for j in range(n):
                c = sum(v[i] * self.cartan[i][j] for i in range(n))
                w = v[:j] + (v[j] - c,) + v[j + 1 :]
                if w not in seen and all(x >= 0 for x in w):
                    seen.add(w)
                    queue.append(w)
        return tuple(sorted(seen, key=lambda r: (sum(r), r)))

    def _half_norm(self, root: RootVec) -> int:
        """d_alpha = <alpha, alpha>/2 under the symmetrized form."""
        n = self.rank
        q = sum(
            root[i] * root[j] * self.symmetrizer[j] * self.cartan[i][j]
            for i in range(n)
            for j in range(n)
        )
        if q <= 0 or q % 2:
            raise InvariantViolationError(f"bad squared length for {root}")
        return q // 2

    def _coroot_coords(self, root: RootVec, d_alpha: int) -> tuple[int, ...]:
        out = []
        for j, a in enumerate(root):
            num = self.symmetrizer[j] * a
            if num % d_alpha:
                raise InvariantViolationError(f"non-integral coroot for {root}")
            out.append(num // d_alpha)
        return tuple(out)

    def _validate(self):
        n, h = self.rank, self.coxeter_number
        if 2 * len(self.pos_roots) != n * h:
            raise InvariantViolationError("positive-root count disagrees with n*h/2")
        theta = self.pos_roots[self.highest_root]
        if h != 1 + sum(theta):
            raise InvariantViolationError("Coxeter number mismatch")
        if any(not root_order_leq_root(self, r, theta) for r in self.pos_roots):
            raise InvariantViolationError("highest root is not a root-order maximum")
        if len(self.minuscule) != self.index_of_connection - 1:
            raise InvariantViolationError("minuscule count disagrees with f - 1")

    # -- small conveniences ------------------------------------------------

    @property
    def spec(self) -> str:
        return f"{self.type_letter}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return min(self.symmetrizer) == max(self.symmetrizer)

    def zero(self) -> Weight:
        return (0,) * self.rank

    def fundamental_weight(self, i: int) -> Weight:
        """The i-th fundamental weight (1-based node index)."""
        return tuple(1 if j == i - 1 else 0 for j in range(self.rank))

    def rho(self) -> Weight:
        return (1,) * self.rank

    def root_index(self, root: RootVec) -> int:
        """Index of a positive root in ``pos_roots``."""
        try:
            return self._root_index[tuple(root)]
        except KeyError:
            raise DomainError(f"{root} is not a positive root of {self.spec}") from None

    def is_root(self, v: RootVec) -> bool:
        v = tuple(v)
        return v in self._root_index or tuple(-x for x in v) in self._root_index

    def root_coords(self, weight) -> tuple[Fraction, ...]:
        """Exact simple-root coordinates of a vector given in weight coords."""
        inv = self._cartan_inv_t
        return tuple(
            sum(inv[i][j] * weight[j] for j in range(self.rank)) for i in range(self.rank)
        )

    def quad_norm(self, weight) -> Fraction:
        """Squared length of a weight-coordinate vector (symmetrized form)."""
        r = self.root_coords(weight)
        return sum(
            Fraction(self.symmetrizer[j]) * r[j] * weight[j] for j in range(self.rank)
        )

    def __repr__(self):
        return f"RootSystem({self.spec})"


@lru_cache(maxsize=None)
def build_root_system(type_letter: str, rank: int) -> RootSystem:
    """Construct (and cache) the irreducible root system of a given type."""
    letter, n = parse_system(f"{type_letter}{rank}")
    return RootSystem(letter, n)


def from_spec(spec: str) -> RootSystem:
    return build_root_system(*parse_system(spec))


# -- elementary operations ---------------------------------------------------


def pairing(rs: RootSystem, weight: Weight, root: RootVec) -> int:
    """Pairing of a weight with the coroot of ``root`` (root coordinates)."""
    root = tuple(root)
    neg = tuple(-x for x in root)
    if root in rs._root_index:
        row = rs.pos_coroots[rs._root_index[root]]
        return sum(r * c for r, c in zip(row, weight))
    if neg in rs._root_index:
        row = rs.pos_coroots[rs._root_index[neg]]
        return -sum(r * c for r, c in zip(row, weight))
    raise DomainError(f"{root} is not a root of {rs.spec}")


def reflect_simple(rs: RootSystem, i: int, weight):
    """Apply the i-th simple reflection (1-based) in weight coordinates.

    Works on integer weights and on exact-rational vectors alike.
    """
    if not 1 <= i <= rs.rank:
        raise DomainError(f"simple-reflection index {i} out of range for {rs.spec}")
    c = weight[i - 1]
    row = rs.cartan[i - 1]
    return tuple(x - c * a for x, a in zip(weight, row))


def apply_word(rs: RootSystem, word: WeylWord, weight):
    """Apply a Weyl word to a vector, leftmost reflection first."""
    v = tuple(weight)
    for i in word:
        v = reflect_simple(rs, i, v)
    return v


def apply_word_to_root(rs: RootSystem, word: WeylWord, root: RootVec) -> RootVec:
    """Apply a Weyl word to a vector in simple-root coordinates."""
    v = list(root)
    for idx in word:
        j = idx - 1
        c = sum(v[i] * rs.cartan[i][j] for i in range(rs.rank))
        v[j] -= c
    return tuple(v)


def word_inversions(rs: RootSystem, word: WeylWord) -> int:
    """Number of positive roots sent negative by the word's Weyl element."""
    count = 0
    for r in rs.pos_roots:
        img = apply_word_to_root(rs, word, r)
        if all(x <= 0 for x in img):
            count += 1
    return count


def dominant_rep(rs: RootSystem, weight: Weight) -> tuple[Weight, WeylWord]:
    """Dominant representative and the minimal word carrying it back.

    Returns ``(dom, w)`` with ``apply_word(rs, w, dom) == weight``.  The
    word is built greedily: reflect at the smallest negative coordinate
    until dominant.  Minimality is pinned by the inversion-count tests.
    """
    v = tuple(weight)
    recorded: list[int] = []
    cap = len(rs.pos_roots) + 1
    while True:
        neg = next((j for j, c in enumerate(v) if c < 0), None)
        if neg is None:
            return v, tuple(reversed(recorded))
        v = reflect_simple(rs, neg + 1, v)
        recorded.append(neg + 1)
        if len(recorded) > cap:
            raise InvariantViolationError("dominant_rep failed to terminate")


def is_dominant(weight: Weight) -> bool:
    return all(c >= 0 for c in weight)


def root_order_leq(rs: RootSystem, mu: Weight, lam: Weight) -> bool:
    """Whether ``lam - mu`` is a nonnegative integer sum of simple roots."""
    diff = tuple(a - b for a, b in zip(lam, mu))
    coords = rs.root_coords(diff)
    return all(x.denominator == 1 and x >= 0 for x in coords)


def root_order_leq_root(rs: RootSystem, r1: RootVec, r2: RootVec) -> bool:
    return all(b - a >= 0 for a, b in zip(r1, r2))


def weyl_orbit(rs: RootSystem, weight: Weight) -> tuple[Weight, ...]:
    """The full Weyl orbit, as a tuple sorted by coordinates."""
    start = tuple(weight)
    seen = {start}
    queue = [start]
    while queue:
        v = queue.pop()
        for i in range(1, rs.rank + 1):
            w = reflect_simple(rs, i, v)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return tuple(sorted(seen))


def minuscule_weights(rs: RootSystem) -> tuple[Weight, ...]:
    """Zero together with the minuscule fundamental weights, sorted."""
    out = [rs.zero()] + [rs.fundamental_weight(i) for i in sorted(rs.minuscule)]
    return tuple(sorted(out))


def subgroup_C(rs: RootSystem) -> tuple[WeylWord, ...]:
    """The lattice-quotient subgroup inside the Weyl group, as words.

    One element per coset representative in ``minuscule_weights``: the
    unique ``w`` moving the Weyl vector by h times that representative.
    The identity (for zero) comes first.
    """
    h = rs.coxeter_number
    out = []
    for omega in minuscule_weights(rs):
        target = tuple(r - h * o for r, o in zip(rs.rho(), omega))
        dom, word = dominant_rep(rs, target)
        if dom != rs.rho():
            raise InvariantViolationError("subgroup element does not move rho correctly")
        out.append((omega, word))
    out.sort(key=lambda t: (t[0] != rs.zero(), t[0]))
    return tuple(word for _, word in out)


def support_sets(rs: RootSystem, weight: Weight) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """1-based node sets where the dominant representative is 0 / in {0,1}."""
    dom, _ = dominant_rep(rs, weight)
    i0 = tuple(j + 1 for j, c in enumerate(dom) if c == 0)
    i01 = tuple(j + 1 for j, c in enumerate(dom) if c in (0, 1))
    return i0, i01
