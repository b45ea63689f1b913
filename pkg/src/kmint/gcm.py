"""Generalized Cartan matrices: validation, symmetrizer, type classification."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from gmpy2 import mpq

from .linalg import leading_principal_minors, psd_kernel_dim
from .util import Rat


class AxiomViolation(ValueError):
    def __init__(self, axiom: str, position: tuple[int, int] | None = None):
        self.axiom = axiom
        self.position = position
        where = f" at entry {position}" if position else ""
        super().__init__(f"GCM axiom violated: {axiom}{where}")


class NotSymmetrizable(ValueError):
    def __init__(self, cycle: list[int], forward: int, backward: int):
        self.cycle = cycle
        self.forward = forward
        self.backward = backward
        super().__init__(
            f"not symmetrizable: cycle {cycle} has product {forward} one way "
            f"and {backward} the other"
        )


class Decomposable(ValueError):
    def __init__(self, components: list[tuple[int, ...]]):
        self.components = components
        super().__init__(f"matrix is decomposable into components {components}")


@dataclass(frozen=True)
class MatrixType:
    kind: str  # "Finite" | "Affine" | "Indefinite"
    hyperbolic: bool = False


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def a(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def components(self) -> list[tuple[int, ...]]:
        return _components(self.entries)

    def is_indecomposable(self) -> bool:
        return len(self.components()) == 1

    def symmetrized(self) -> list[list[Rat]]:
        """diag(q) A, a symmetric rational matrix."""
        q = self.symmetrizer
        return [[mpq(q[i] * self.entries[i][j]) for j in range(self.size)]
                for i in range(self.size)]


def _components(entries) -> list[tuple[int, ...]]:
    n = len(entries)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and (entries[i][j] != 0 or entries[j][i] != 0):
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def validate_gcm(entries) -> CartanMatrix:
    """Check the GCM axioms and compute an integer symmetrizer.

    The symmetrizer is found by propagating along a spanning tree of the
    graph of nonzero off-diagonal entries; every non-tree edge is checked for
    consistency and a failing cycle is reported in NotSymmetrizable. Per
    indecomposable component the symmetrizer is normalized to positive
    integers with collective gcd 1.
    """
    rows = [tuple(int(v) for v in row) for row in entries]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise AxiomViolation("matrix must be square")
    for i in range(n):
        if rows[i][i] != 2:
            raise AxiomViolation("diagonal entries must equal 2", (i, i))
        for j in range(n):
            if i != j and rows[i][j] > 0:
                raise AxiomViolation("off-diagonal entries must be <= 0", (i, j))
            if (rows[i][j] == 0) != (rows[j][i] == 0):
                raise AxiomViolation("a_ij = 0 must imply a_ji = 0", (i, j))

    q: list[Rat | None] = [None] * n
    parent: list[int | None] = [None] * n
    for comp in _components(rows):
        root = comp[0]
        q[root] = mpq(1)
        stack = [root]
        order = []
        while stack:
            i = stack.pop()
            order.append(i)
            for j in comp:
                if q[j] is None and rows[i][j] != 0:
                    # q_i a_ij = q_j a_ji
                    q[j] = q[i] * rows[i][j] / rows[j][i]
                    parent[j] = i
                    stack.append(j)
        # consistency on non-tree edges; certificate cycle through the tree
        for i in comp:
            for j in comp:
                if i < j and rows[i][j] != 0 and q[i] * rows[i][j] != q[j] * rows[j][i]:
                    cycle = _tree_cycle(parent, i, j)
                    fwd = 1
                    bwd = 1
                    for a, b in zip(cycle, cycle[1:]):
                        fwd *= rows[a][b]
                        bwd *= rows[b][a]
                    raise NotSymmetrizable(cycle, fwd, bwd)
        # normalize to positive integers with gcd 1
        denom_lcm = 1
        for i in comp:
            d = q[i].denominator
            denom_lcm = denom_lcm * d // gcd(denom_lcm, d)
        ints = [int(q[i] * denom_lcm) for i in comp]
        g = 0
        for v in ints:
            g = gcd(g, v)
        for i, v in zip(comp, ints):
            q[i] = v // g
    return CartanMatrix(entries=tuple(rows), symmetrizer=tuple(int(x) for x in q))


def _tree_cycle(parent, i, j) -> list[int]:
    anc_i = [i]
    while parent[anc_i[-1]] is not None:
        anc_i.append(parent[anc_i[-1]])
    anc_j = [j]
    while parent[anc_j[-1]] is not None:
        anc_j.append(parent[anc_j[-1]])
    common = next(x for x in anc_i if x in anc_j)
    path_i = anc_i[: anc_i.index(common) + 1]
    path_j = anc_j[: anc_j.index(common) + 1]
    return path_i + list(reversed(path_j))[1:] + [i]


def _principal(cm: CartanMatrix, idx: tuple[int, ...]) -> CartanMatrix:
    entries = [[cm.entries[i][j] for j in idx] for i in idx]
    return validate_gcm(entries)


def classify(cm: CartanMatrix) -> MatrixType:
    """Finite / Affine / Indefinite (with hyperbolic flag) for indecomposable input."""
    comps = cm.components()
    if len(comps) != 1:
        raise Decomposable(comps)
    b = cm.symmetrized()
    if all(m > 0 for m in leading_principal_minors(b)):
        return MatrixType("Finite")
    psd, ker = psd_kernel_dim(b)
    if psd and ker == 1:
        return MatrixType("Affine")
    # hyperbolic iff every proper indecomposable principal submatrix is
    # finite or affine
    n = cm.size
    hyper = True
    for mask in range(1, (1 << n) - 1):
        idx = tuple(i for i in range(n) if mask >> i & 1)
        sub = _principal(cm, idx)
        for comp in sub.components():
            t = classify(_principal(sub, comp))
            if t.kind == "Indefinite":
                hyper = False
                break
        if not hyper:
            break
    return MatrixType("Indefinite", hyperbolic=hyper)


def classify_components(cm: CartanMatrix) -> list[tuple[tuple[int, ...], MatrixType]]:
    """Component-wise classification; the per-component report for decomposable input."""
    return [(comp, classify(_principal(cm, comp))) for comp in cm.components()]
