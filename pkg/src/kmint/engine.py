"""Group operators on truncated modules.

Every group element used here compiles down to a word in the elementary
atoms exp(t e_i) and exp(t f_i). Words act on vectors right-to-left. The
closure planner (weight_closure) predicts every depth vector an application
can touch, so a caller can materialize the truncation up front and never
hit a truncation boundary mid-computation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq

from .gcm import CartanMatrix
from .hwmodule import (ModuleTruncation, TruncationOverflow, VectorV,
                       string_bound, vec_add, vec_eq, vec_scale)
from .linalg import solve_multi
from .rootsys import NotReduced, Root, Witness, Word as WeylWord, is_reduced
from .util import Rat, parse_rat


class ZeroParameter(ValueError):
    pass


@dataclass(frozen=True)
class GroupAtom:
    """exp(t e_i) when sign=+1, exp(t f_i) when sign=-1. t=0 is the identity."""

    sign: int
    index: int
    t: Rat

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def inverse(self) -> "GroupAtom":
        return GroupAtom(self.sign, self.index, -self.t)


GroupWord = tuple[GroupAtom, ...]


def inverse_word(g: GroupWord) -> GroupWord:
    return tuple(a.inverse() for a in reversed(g))


def wtilde_i(i: int, t: Rat = mpq(1)) -> GroupWord:
    """The lift exp(t e_i) exp(-t^-1 f_i) exp(t e_i) of the reflection s_i."""
    if t == 0:
        raise ZeroParameter("wtilde_i requires t != 0")
    t = mpq(t)
    return (GroupAtom(1, i, t), GroupAtom(-1, i, -1 / t), GroupAtom(1, i, t))


def wtilde(cm: CartanMatrix, w: WeylWord) -> GroupWord:
    if not is_reduced(cm, w):
        raise NotReduced(w)
    out: GroupWord = ()
    for i in w:
        out = out + wtilde_i(i)
    return out


def h_element(i: int, t: Rat) -> GroupWord:
    if t == 0:
        raise ZeroParameter("h_element requires t != 0")
    return wtilde_i(i, mpq(t)) + inverse_word(wtilde_i(i))


def chi_real_root(cm: CartanMatrix, witness: Witness, t: Rat) -> GroupWord:
    """chi_beta(t) for beta = w(alpha_i), compiled as wtilde(w) x_i(t) wtilde(w)^-1."""
    w, i = witness
    atom = (GroupAtom(1, i, mpq(t)),)
    if not w:
        return atom
    lift = wtilde(cm, w)
    return lift + atom + inverse_word(lift)


def wtilde_real_root(cm: CartanMatrix, witness: Witness) -> GroupWord:
    w, i = witness
    if not w:
        return wtilde_i(i)
    lift = wtilde(cm, w)
    return lift + wtilde_i(i) + inverse_word(lift)


# -- application --------------------------------------------------------------


def apply_atom(trunc: ModuleTruncation, a: GroupAtom, v: VectorV) -> VectorV:
    """Sum over m of t^m (divided power of x_{sign alpha_i})^(m) v, exact."""
    if a.t == 0:
        return dict(v)
    out: VectorV = {}
    for beta, x in v.items():
        if not any(x):
            continue
        if a.sign < 0:
            bound = trunc.string_bound(beta, a.index)
        else:
            bound = beta[a.index]
        piece: VectorV = {beta: list(x)}
        out = vec_add(out, piece)
        tm = mpq(1)
        for m in range(1, bound + 1):
            piece = vec_scale((trunc.act_f if a.sign < 0 else trunc.act_e)(
                a.index, piece), mpq(1, m))
            if not piece:
                break
            tm *= a.t
            out = vec_add(out, vec_scale(piece, tm))
    return out


def apply_word(trunc: ModuleTruncation, g: GroupWord, v: VectorV) -> VectorV:
    out = dict(v)
    for pos in range(len(g) - 1, -1, -1):
        try:
            out = apply_atom(trunc, g[pos], out)
        except TruncationOverflow as exc:
            raise TruncationOverflow(
                exc.beta, f"atom {pos} of the word") from exc
    return out


def weight_closure(trunc: ModuleTruncation, g: GroupWord, support) -> set[Root]:
    """All depth vectors any application of g to vectors supported on
    `support` can touch. String bounds are pruned through the multiplicity
    oracle: a string stops at the first zero-multiplicity rung (sl2 strings
    are unbroken intervals, so nothing beyond it can carry a component).
    """
    cm, lam = trunc.cm, trunc.lam
    mult = trunc.oracle.weight_mult
    touched: set[Root] = set(support)
    current: set[Root] = set(support)
    for a in reversed(g):
        nxt: set[Root] = set()
        for beta in current:
            nxt.add(beta)
            if a.sign < 0:
                bound = string_bound(cm, lam, beta, a.index)
                step = 1
            else:
                bound = beta[a.index]
                step = -1
            for m in range(1, bound + 1):
                b = tuple(x + (step * m if k == a.index else 0)
                          for k, x in enumerate(beta))
                if mult(b) == 0:
                    break
                nxt.add(b)
        touched |= nxt
        current = nxt
    return touched


def plan_and_apply(trunc: ModuleTruncation, g: GroupWord, v: VectorV) -> VectorV:
    trunc.materialize_all(weight_closure(trunc, g, v.keys()))
    return apply_word(trunc, g, v)


# -- polynomial coefficient extraction ----------------------------------------


def divided_power_extract(trunc: ModuleTruncation, witness: Witness, m: int,
                          v: VectorV, sign: int = 1) -> VectorV:
    """Coefficient of t^m in t -> chi_{sign beta}(t) v, for beta = w(alpha_i).

    The map is polynomial in t; the degree is bounded by the longest
    alpha_i string available after the conjugating prefix has acted.
    Evaluate at nodes 0..M and solve the Vandermonde system.
    """
    if m == 0:
        return dict(v)
    w, i = witness
    cm = trunc.cm
    suffix = inverse_word(wtilde(cm, w)) if w else ()
    u = plan_and_apply(trunc, suffix, v)
    if sign > 0:
        deg = max((beta[i] for beta in u), default=0)
    else:
        deg = max((trunc.string_bound(beta, i) for beta in u), default=0)
    if m > deg:
        return {}
    prefix = wtilde(cm, w) if w else ()
    nodes = [mpq(k) for k in range(deg + 1)]
    evals = []
    for t in nodes:
        word = prefix + (GroupAtom(sign, i, t),)
        evals.append(plan_and_apply(trunc, word, u))
    weights = sorted({b for ev in evals for b in ev}, key=lambda b: (sum(b), b))
    vand = [[t ** c for c in range(deg + 1)] for t in nodes]
    out: VectorV = {}
    for beta in weights:
        dim = trunc.space(beta).dim
        rhs = []
        for r in range(dim):
            rhs.append([ev.get(beta, [mpq(0)] * dim)[r] for ev in evals])
        coeffs = solve_multi(vand, rhs)
        col = [coeffs[r][m] for r in range(dim)]
        if any(col):
            out[beta] = col
    return out


def operators_equal_on_region(trunc: ModuleTruncation, g1: GroupWord,
                              g2: GroupWord, region) -> bool:
    """Extensional equality on every basis vector of every space in region."""
    for beta in sorted(set(region), key=lambda b: (sum(b), b)):
        trunc.materialize(beta)
        for idx in range(trunc.space(beta).dim):
            v = trunc.basis_vector(beta, idx)
            a = plan_and_apply(trunc, g1, v)
            b = plan_and_apply(trunc, g2, v)
            if not vec_eq(a, b):
                return False
    return True


# -- CLI text syntax ----------------------------------------------------------

_ATOM_RE = re.compile(r"x\[([+-])(\d+)\]\(([^)]*)\)")
_WT_RE = re.compile(r"wt\(([^)]*)\)")
_H_RE = re.compile(r"h\((\d+)\s*,\s*([^)]*)\)")
_XR_RE = re.compile(r"xr\(w=([^,]*),\s*(\d+)\s*,\s*([^)]*)\)")


class GroupWordSyntaxError(ValueError):
    pass


def _tokens(text: str):
    """Split on whitespace outside parentheses (macro arguments may contain
    spaces)."""
    buf = []
    depth = 0
    for ch in text:
        if ch.isspace() and depth == 0:
            if buf:
                yield "".join(buf)
                buf = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GroupWordSyntaxError("unbalanced ')'")
        buf.append(ch)
    if depth != 0:
        raise GroupWordSyntaxError("unbalanced '('")
    if buf:
        yield "".join(buf)


def parse_group_word(cm: CartanMatrix, text: str) -> GroupWord:
    """Whitespace-separated atoms and macros, 1-based indices:
    x[+i](p/q)  x[-i](p/q)  wt(i1 i2 ...)  h(i, p/q)  xr(w=i1 i2 ..., i, p/q)
    """
    out: GroupWord = ()
    for tok in _tokens(text):
        m = _ATOM_RE.fullmatch(tok)
        if m:
            i = _index(cm, m.group(2), tok)
            out = out + (GroupAtom(1 if m.group(1) == "+" else -1, i,
                                   parse_rat(m.group(3))),)
            continue
        m = _WT_RE.fullmatch(tok)
        if m:
            w = tuple(_index(cm, p, tok) for p in m.group(1).split())
            out = out + wtilde(cm, w)
            continue
        m = _H_RE.fullmatch(tok)
        if m:
            out = out + h_element(_index(cm, m.group(1), tok),
                                  parse_rat(m.group(2)))
            continue
        m = _XR_RE.fullmatch(tok)
        if m:
            w = tuple(_index(cm, p, tok) for p in m.group(1).split())
            i = _index(cm, m.group(2), tok)
            out = out + chi_real_root(cm, (w, i), parse_rat(m.group(3)))
            continue
        raise GroupWordSyntaxError(f"cannot parse group-word token {tok!r}")
    return out


def _index(cm: CartanMatrix, text: str, tok: str) -> int:
    i = int(text)
    if not 1 <= i <= cm.size:
        raise GroupWordSyntaxError(f"index {i} out of range in {tok!r}")
    return i - 1
