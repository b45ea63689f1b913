"""Depth-truncated integrable highest-weight modules over exact rationals.

A ModuleTruncation materializes weight spaces V_{lambda-beta} for a
downward-closed set of depth vectors beta. Each space carries a basis of
f-monomial words, the Gram matrix of the contravariant form on that basis,
and (lazily) the Hermite-normal-form basis of the integral lattice
V_{lambda-beta,Z} spanned by divided-power monomials.

Bases are built bottom-up: the candidate spanning set for depth beta is
{f_i u : u a basis word at beta - alpha_i}, whose Gram matrix is computed
from the e/f action matrices of the lower layers. The form is positive
definite on V^lambda, so a greedy sweep keeping candidates that enlarge an
invertible Gram minor yields a basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .gcm import CartanMatrix
from .linalg import RationalLattice, det, mat_vec_cols, solve_multi
from .oracle import Oracle
from .rootsys import Root, height
from .util import Rat

Word = tuple[int, ...]  # f-word: f_{i1} f_{i2} ... f_{ik} v_lambda
VectorV = dict[Root, list]  # depth vector -> coordinates in that space's basis


class ContentMismatch(ValueError):
    pass


class DepthExceeded(ValueError):
    pass


class TruncationOverflow(RuntimeError):
    def __init__(self, beta: Root, detail: str = ""):
        self.beta = beta
        super().__init__(f"action leaves the materialized region at depth {beta}"
                         + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class LambdaData:
    """A dominant regular weight, stored through n_i = <lambda, alpha_i^vee>."""

    n: tuple[int, ...]

    def __post_init__(self):
        if any(v < 1 for v in self.n):
            raise ValueError("lambda must be dominant regular: all n_i >= 1")


def word_content(word: Word, rank: int) -> Root:
    c = [0] * rank
    for i in word:
        c[i] += 1
    return tuple(c)


def string_bound(cm: CartanMatrix, lam: LambdaData, beta: Root, i: int) -> int:
    """Sharp bound on max m with f_i^m V_{lambda-beta} != 0: up-room + pairing."""
    pairing = lam.n[i] - sum(cm.entries[i][j] * beta[j] for j in range(cm.size))
    return max(0, beta[i] + pairing)


class WeightSpace:
    def __init__(self, beta: Root, words: tuple[Word, ...], gram):
        self.beta = beta
        self.words = words
        self.dim = len(words)
        self.gram = gram  # dim x dim rows of mpq
        self.lattice: RationalLattice | None = None  # built on demand


class ModuleTruncation:
    """V^lambda materialized on a downward-closed set of depth vectors."""

    def __init__(self, cm: CartanMatrix, lam: LambdaData, check_oracle: bool = True):
        if not cm.is_indecomposable():
            raise ValueError("module construction requires an indecomposable GCM")
        if len(lam.n) != cm.size:
            raise ValueError("lambda rank mismatch")
        self.cm = cm
        self.lam = lam
        self.oracle = Oracle(cm, lam.n)
        self.check_oracle = check_oracle
        self.spaces: dict[Root, WeightSpace] = {}
        self.f_mats: dict[tuple[Root, int], list] = {}  # source beta -> columns
        self.e_mats: dict[tuple[Root, int], list] = {}
        zero = tuple(0 for _ in range(cm.size))
        self.spaces[zero] = WeightSpace(zero, ((),), [[mpq(1)]])

    # -- materialization ------------------------------------------------------

    @property
    def max_height(self) -> int:
        return max(height(b) for b in self.spaces)

    def is_materialized(self, beta: Root) -> bool:
        return beta in self.spaces

    def space(self, beta: Root) -> WeightSpace:
        sp = self.spaces.get(beta)
        if sp is None:
            raise DepthExceeded(f"depth {beta} is not materialized")
        return sp

    def materialize(self, beta: Root) -> WeightSpace:
        """Materialize beta and everything below it (componentwise)."""
        if any(v < 0 for v in beta):
            raise ValueError(f"negative depth vector {beta}")
        todo = [beta]
        order = []
        seen = {beta}
        while todo:
            b = todo.pop()
            if b in self.spaces:
                continue
            order.append(b)
            for i in range(self.cm.size):
                if b[i] > 0:
                    p = tuple(v - (1 if j == i else 0) for j, v in enumerate(b))
                    if p not in seen and p not in self.spaces:
                        seen.add(p)
                        todo.append(p)
        for b in sorted(order, key=lambda v: (height(v), v)):
            self._build(b)
        return self.spaces[beta]

    def materialize_all(self, betas) -> None:
        for b in sorted(set(betas), key=lambda v: (height(v), v)):
            self.materialize(b)

    def materialize_box(self, depth: int) -> None:
        """All beta with height(beta) <= depth."""
        from .oracle import _vectors_of_height
        for h in range(1, depth + 1):
            for b in _vectors_of_height(self.cm.size, h):
                self.materialize(b)

    def _build(self, beta: Root) -> None:
        cm, lam = self.cm, self.lam
        rank = cm.size
        # candidates: f_i (basis word of the parent at beta - alpha_i)
        cands: list[tuple[Word, int, int]] = []  # (word, i, parent index)
        for i in range(rank):
            if beta[i] > 0:
                parent = tuple(v - (1 if j == i else 0) for j, v in enumerate(beta))
                for idx, u in enumerate(self.spaces[parent].words):
                    cands.append(((i,) + u, i, idx))
        cands.sort(key=lambda c: c[0])

        # e_i applied to each candidate, as coordinates at beta - alpha_i
        evecs: dict[tuple[int, int], list] = {}  # (cand index, i) -> vector
        for ci, (_, j, vidx) in enumerate(cands):
            gamma = tuple(v - (1 if k == j else 0) for k, v in enumerate(beta))
            gsp = self.spaces[gamma]
            for i in range(rank):
                if beta[i] == 0:
                    continue
                target = tuple(v - (1 if k == i else 0) for k, v in enumerate(beta))
                vec = [mpq(0)] * self.spaces[target].dim
                if gamma[i] > 0 and gsp.dim:
                    ev = self.e_mats[(gamma, i)][vidx]
                    if any(ev):
                        sub = tuple(v - (1 if k == i else 0)
                                    for k, v in enumerate(gamma))
                        fv = mat_vec_cols(self.f_mats[(sub, j)], ev,
                                          self.spaces[target].dim)
                        for r in range(len(vec)):
                            vec[r] += fv[r]
                if i == j:
                    pairing = lam.n[i] - sum(cm.entries[i][k] * gamma[k]
                                             for k in range(rank))
                    if pairing:
                        vec[vidx] += pairing
                evecs[(ci, i)] = vec

        n = len(cands)
        gram_full = [[mpq(0)] * n for _ in range(n)]
        for ci, (_, i, uidx) in enumerate(cands):
            parent = tuple(v - (1 if k == i else 0) for k, v in enumerate(beta))
            pgram = self.spaces[parent].gram
            for cj in range(n):
                y = evecs[(cj, i)]
                # <u, y> with u the uidx-th basis vector of the parent space
                gram_full[ci][cj] = sum((pgram[uidx][k] * y[k]
                                         for k in range(len(y)) if y[k]), mpq(0))

        basis_idx = _greedy_independent(gram_full)
        words = tuple(cands[k][0] for k in basis_idx)
        gram = [[gram_full[r][c] for c in basis_idx] for r in basis_idx]
        sp = WeightSpace(beta, words, gram)
        self.spaces[beta] = sp

        if self.check_oracle:
            expected = self.oracle.weight_mult(beta)
            if expected != sp.dim:
                raise ArithmeticError(
                    f"dimension {sp.dim} at depth {beta} disagrees with the "
                    f"multiplicity oracle value {expected}")

        # coordinates of every candidate in the chosen basis
        if sp.dim:
            rhs = [[gram_full[r][c] for r in basis_idx] for c in range(n)]
            coords = solve_multi(gram, rhs)
        else:
            coords = [[] for _ in range(n)]
        # f matrices from each parent into this space
        for i in range(rank):
            if beta[i] == 0:
                continue
            parent = tuple(v - (1 if k == i else 0) for k, v in enumerate(beta))
            cols = [None] * self.spaces[parent].dim
            for ci, (_, j, uidx) in enumerate(cands):
                if j == i:
                    cols[uidx] = coords[ci]
            self.f_mats[(parent, i)] = cols
        # e matrices out of this space
        for i in range(rank):
            if beta[i] == 0:
                continue
            ecols = []
            for b in basis_idx:
                ecols.append(evecs[(b, i)])
            self.e_mats[(beta, i)] = ecols
        for i in range(rank):
            if beta[i] == 0:
                # e_i annihilates this space (the target has a negative entry)
                self.e_mats[(beta, i)] = [[] for _ in range(sp.dim)]

    # -- words and the contravariant form -------------------------------------

    def word_vector(self, word: Word) -> list:
        """Coordinates of an arbitrary f-word in its weight-space basis."""
        beta = word_content(word, self.cm.size)
        self.materialize(beta)
        vec = [mpq(1)]
        gamma = tuple(0 for _ in range(self.cm.size))
        for i in reversed(word):
            cols = self.f_mats.get((gamma, i))
            gamma = tuple(v + (1 if k == i else 0) for k, v in enumerate(gamma))
            dim = self.spaces[gamma].dim
            if not any(vec) or dim == 0:
                vec = [mpq(0)] * dim
            else:
                vec = mat_vec_cols(cols, vec, dim)
        return vec

    def contravariant_form(self, u: Word, v: Word) -> Rat:
        cu = word_content(u, self.cm.size)
        cv = word_content(v, self.cm.size)
        if cu != cv:
            raise ContentMismatch(f"contents {cu} and {cv} differ")
        x = self.word_vector(u)
        y = self.word_vector(v)
        g = self.spaces[cu].gram
        return sum((x[r] * g[r][c] * y[c] for r in range(len(x))
                    for c in range(len(y)) if x[r] and y[c] and g[r][c]), mpq(0))

    def multiplicity(self, beta: Root) -> int:
        return self.space(beta).dim

    # -- e/f actions on vectors ------------------------------------------------

    def act_f(self, i: int, v: VectorV) -> VectorV:
        out: VectorV = {}
        for beta, x in v.items():
            if not any(x):
                continue
            target = tuple(b + (1 if k == i else 0) for k, b in enumerate(beta))
            if target not in self.spaces:
                if self.oracle.weight_mult(target) == 0:
                    continue
                raise TruncationOverflow(target, f"f_{i + 1} from {beta}")
            dim = self.spaces[target].dim
            if dim == 0:
                continue
            y = mat_vec_cols(self.f_mats[(beta, i)], x, dim)
            _accumulate(out, target, y)
        return _clean(out)

    def act_e(self, i: int, v: VectorV) -> VectorV:
        out: VectorV = {}
        for beta, x in v.items():
            if beta[i] == 0 or not any(x):
                continue
            target = tuple(b - (1 if k == i else 0) for k, b in enumerate(beta))
            dim = self.spaces[target].dim
            if dim == 0:
                continue
            ecols = self.e_mats[(beta, i)]
            y = [mpq(0)] * dim
            for idx, xv in enumerate(x):
                if xv:
                    col = ecols[idx]
                    for r in range(dim):
                        if col[r]:
                            y[r] += xv * col[r]
            _accumulate(out, target, y)
        return _clean(out)

    def act_coroot(self, i: int, v: VectorV) -> VectorV:
        out: VectorV = {}
        for beta, x in v.items():
            p = self.lam.n[i] - sum(self.cm.entries[i][k] * beta[k]
                                    for k in range(self.cm.size))
            if p:
                out[beta] = [p * xv for xv in x]
        return _clean(out)

    def divided_power_act(self, sign: int, i: int, m: int, v: VectorV) -> VectorV:
        """(x_{sign*alpha_i}^m / m!) . v, exactly."""
        act = self.act_f if sign < 0 else self.act_e
        w = v
        for j in range(1, m + 1):
            w = vec_scale(act(i, w), mpq(1, j))
            if not w:
                break
        return w

    # -- the integral lattice --------------------------------------------------

    def lattice(self, beta: Root) -> RationalLattice:
        sp = self.space(beta)
        if sp.lattice is None:
            gens = []
            memo: dict[Word, list] = {}
            for mono in _divided_monomials(beta):
                word: Word = ()
                fact = 1
                for i, m in mono:
                    word = word + (i,) * m
                    for k in range(2, m + 1):
                        fact *= k
                vec = self._word_vector_memo(word, memo)
                if any(vec):
                    gens.append([x / fact for x in vec])
            sp.lattice = RationalLattice(sp.dim, gens)
            if sp.dim and sp.lattice.rank != sp.dim:
                raise ArithmeticError(f"lattice at {beta} is not full rank")
        return sp.lattice

    def _word_vector_memo(self, word: Word, memo: dict[Word, list]) -> list:
        if word in memo:
            return memo[word]
        if not word:
            return [mpq(1)]
        tail = self._word_vector_memo(word[1:], memo)
        i = word[0]
        gamma = word_content(word[1:], self.cm.size)
        target = word_content(word, self.cm.size)
        dim = self.spaces[target].dim
        if not any(tail) or dim == 0:
            vec = [mpq(0)] * dim
        else:
            vec = mat_vec_cols(self.f_mats[(gamma, i)], tail, dim)
        memo[word] = vec
        return vec

    def membership_VZ(self, v: VectorV) -> tuple[bool, dict]:
        """Is v in the integral form? Returns (answer, per-weight certificate)."""
        cert: dict = {}
        ok = True
        for beta in sorted(v, key=lambda b: (height(b), b)):
            x = v[beta]
            lat = self.lattice(beta)
            sol = lat.solve(x)
            assert sol is not None
            bad = next((k for k, s in enumerate(sol) if s.denominator != 1), None)
            if bad is None:
                cert[beta] = [int(s) for s in sol]
            else:
                ok = False
                cert[beta] = {"non_integral_index": bad, "value": sol[bad]}
        return ok, cert

    def highest_weight_vector(self) -> VectorV:
        zero = tuple(0 for _ in range(self.cm.size))
        return {zero: [mpq(1)]}

    def basis_vector(self, beta: Root, idx: int) -> VectorV:
        dim = self.space(beta).dim
        x = [mpq(0)] * dim
        x[idx] = mpq(1)
        return {beta: x}

    def string_bound(self, beta: Root, i: int) -> int:
        return string_bound(self.cm, self.lam, beta, i)


def _greedy_independent(gram) -> list[int]:
    """First maximal index set with an invertible Gram principal minor."""
    chosen: list[int] = []
    for k in range(len(gram)):
        trial = chosen + [k]
        m = [[gram[r][c] for c in trial] for r in trial]
        if det(m) != 0:
            chosen.append(k)
    return chosen


def _divided_monomials(beta: Root):
    """Divided-power monomials of content beta with adjacent indices distinct."""
    rank = len(beta)

    def rec(remaining, last):
        if not any(remaining):
            yield ()
            return
        for i in range(rank):
            if i == last or remaining[i] == 0:
                continue
            for m in range(1, remaining[i] + 1):
                rest = tuple(v - (m if k == i else 0)
                             for k, v in enumerate(remaining))
                for tail in rec(rest, i):
                    yield ((i, m),) + tail

    yield from rec(beta, -1)


# -- VectorV helpers ----------------------------------------------------------


def _accumulate(out: VectorV, beta: Root, y: list) -> None:
    cur = out.get(beta)
    if cur is None:
        out[beta] = list(y)
    else:
        for r in range(len(y)):
            cur[r] += y[r]


def _clean(v: VectorV) -> VectorV:
    return {b: x for b, x in v.items() if any(x)}


def vec_add(u: VectorV, v: VectorV) -> VectorV:
    out = {b: list(x) for b, x in u.items()}
    for b, x in v.items():
        _accumulate(out, b, x)
    return _clean(out)


def vec_scale(v: VectorV, c) -> VectorV:
    if not c:
        return {}
    return {b: [c * x for x in xs] for b, xs in v.items()}


def vec_eq(u: VectorV, v: VectorV) -> bool:
    u, v = _clean(u), _clean(v)
    if set(u) != set(v):
        return False
    return all(u[b] == v[b] for b in u)


def vec_is_zero(v: VectorV) -> bool:
    return not _clean(v)
