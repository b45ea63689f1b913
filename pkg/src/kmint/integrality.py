"""Integrality experiments on truncated highest-weight modules.

The central experiment: compile u = prod_k chi_{beta_k}(t_k) over the
Papi-ordered inversion set of a reduced word w, apply it to wtilde v_lambda,
and test membership in the integral form. The prediction is the
biconditional: membership holds exactly when every parameter is an integer.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .engine import (GroupAtom, GroupWord, chi_real_root,
                     divided_power_extract, inverse_word,
                     operators_equal_on_region, plan_and_apply,
                     wtilde, wtilde_i)
from .gcm import CartanMatrix
from .hwmodule import (LambdaData, ModuleTruncation, TruncationOverflow,
                       VectorV, vec_add, vec_eq, vec_scale)
from .rootsys import (NotReduced, Root, Witness, Word as WeylWord, height,
                      inversion_set, is_reduced, reflect_root, simple_root,
                      weight_pairing)
from .util import Rat, is_integral


class PreconditionFailed(ValueError):
    pass


class PairNotCommuting(ValueError):
    def __init__(self, a: Root, b: Root):
        self.pair = (a, b)
        super().__init__(f"root subgroups at {a} and {b} do not commute")


class RankNotTwo(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    gcm: CartanMatrix
    lam: LambdaData
    word: WeylWord
    params: tuple
    depth_margin: int = 2

    def __post_init__(self):
        if len(self.params) != len(self.word):
            raise ValueError("one parameter per inversion root")
        if not is_reduced(self.gcm, self.word):
            raise NotReduced(self.word)


@dataclass
class ExperimentReport:
    member: bool
    expected: bool
    agree: bool
    certificate: dict = field(default_factory=dict)
    depth_used: int = 0
    ms: int = 0


# -- lemma-level checks --------------------------------------------------------


def check_Lxx(trunc: ModuleTruncation, witness: Witness, mu_depth: Root) -> bool:
    """x_alpha^[n] x_{-alpha}^[n] fixes every vector of weight mu when
    mu + alpha is not a weight and n = <mu, alpha^vee> >= 1."""
    w, i = witness
    alpha = weyl_act_depth_root(trunc.cm, w, i)
    n = pairing_along(trunc, mu_depth, witness)
    if n <= 0:
        raise PreconditionFailed(f"<mu, alpha^vee> = {n} is not positive")
    up = tuple(b - a for b, a in zip(mu_depth, alpha))
    if all(x >= 0 for x in up) and trunc.oracle.weight_mult(up) > 0:
        raise PreconditionFailed(f"mu + alpha is a weight (depth {up})")
    trunc.materialize(mu_depth)
    for idx in range(trunc.space(mu_depth).dim):
        v = trunc.basis_vector(mu_depth, idx)
        down = divided_power_extract(trunc, witness, n, v, sign=-1)
        back = divided_power_extract(trunc, witness, n, down, sign=1)
        if not vec_eq(back, v):
            return False
    return True


def check_commutator_identity(trunc: ModuleTruncation, i: int, k: int,
                              region) -> bool:
    """[e_i, f_i^k] = k f_i^{k-1} (alpha_i^vee - (k-1)) on every basis
    vector of every weight space in the region."""
    def fk(v: VectorV, power: int) -> VectorV:
        for _ in range(power):
            v = trunc.act_f(i, v)
        return v

    for beta in sorted(set(region), key=lambda b: (height(b), b)):
        trunc.materialize(beta)
        closure = [tuple(b + (m if j == i else 0) for j, b in enumerate(beta))
                   for m in range(k + 1)]
        for target in closure:
            if trunc.oracle.weight_mult(target) > 0:
                trunc.materialize(target)
        for idx in range(trunc.space(beta).dim):
            v = trunc.basis_vector(beta, idx)
            lhs = vec_add(trunc.act_e(i, fk(v, k)),
                          vec_scale(fk(trunc.act_e(i, v), k), mpq(-1)))
            p = weight_pairing(trunc.cm, trunc.lam.n, beta, i)
            rhs = vec_scale(fk(v, k - 1), mpq(k) * (p - (k - 1)))
            if not vec_eq(lhs, rhs):
                return False
    return True


def check_hwtstab(trunc: ModuleTruncation, g: GroupWord) -> bool:
    """A word lying in the positive unipotent subgroup fixes v_lambda."""
    v = trunc.highest_weight_vector()
    return vec_eq(plan_and_apply(trunc, g, v), v)


# -- the experiments -----------------------------------------------------------


def base_case_experiment(trunc: ModuleTruncation, witness: Witness,
                         t: Rat) -> ExperimentReport:
    """chi_beta(t) wtilde_beta v_lambda lies in V_Z iff t is an integer."""
    start = time.monotonic()
    w, i = witness
    lift = wtilde(trunc.cm, w) if w else ()
    # chi_beta(t) wtilde_beta = lift x_i(t) wtilde_i lift^-1, the inner
    # lift^-1 lift pair cancelled
    word = lift + (GroupAtom(1, i, mpq(t)),) + wtilde_i(i) + inverse_word(lift)
    out = plan_and_apply(trunc, word, trunc.highest_weight_vector())
    member, cert = trunc.membership_VZ(out)
    expected = is_integral(t)
    return ExperimentReport(member, expected, member == expected, cert,
                            trunc.max_height,
                            int(1000 * (time.monotonic() - start)))


def compile_inversion_word(cm: CartanMatrix, word: WeylWord,
                           params) -> GroupWord:
    inv = inversion_set(cm, word)
    g: GroupWord = ()
    for entry, t in zip(inv.entries, params):
        g = g + chi_real_root(cm, (entry.prefix, entry.letter), mpq(t))
    return g


def telescoped_uw_wtilde(cm: CartanMatrix, word: WeylWord,
                         params) -> GroupWord:
    """The product u_(w) wtilde as one compiled word.

    With chi_{beta_k}(t_k) = L_k x_{i_k}(t_k) L_k^{-1}, where L_k lifts the
    length-(k-1) prefix, the inner lifts cancel pairwise:
    u_(w) wtilde = prod_k x_{i_k}(t_k) wtilde_{i_k}. The cancelled form
    never routes vectors through the deep w^{-1}-images the conjugated
    factors would visit, which keeps the truncation small.
    """
    g: GroupWord = ()
    for i, t in zip(word, params):
        g = g + (GroupAtom(1, i, mpq(t)),) + wtilde_i(i)
    return g


def inversion_experiment(trunc: ModuleTruncation,
                         cfg: ExperimentConfig) -> ExperimentReport:
    """u_(w) wtilde v_lambda in V_Z iff all parameters are integers."""
    start = time.monotonic()
    g = telescoped_uw_wtilde(cfg.gcm, cfg.word, cfg.params)
    out = plan_and_apply(trunc, g, trunc.highest_weight_vector())
    member, cert = trunc.membership_VZ(out)
    expected = all(is_integral(t) for t in cfg.params)
    return ExperimentReport(member, expected, member == expected, cert,
                            trunc.max_height,
                            int(1000 * (time.monotonic() - start)))


def uniqueness_probe(trunc: ModuleTruncation, word: WeylWord,
                     tuples) -> bool:
    """Distinct parameter tuples give distinct operators: first separated on
    wtilde v_lambda, then (if needed) on the materialized basis vectors."""
    tuples = [tuple(mpq(t) for t in tp) for tp in tuples]
    if len(set(tuples)) != len(tuples):
        raise PreconditionFailed("parameter tuples must be pairwise distinct")
    if not is_reduced(trunc.cm, word):
        raise NotReduced(word)
    images = []
    for tp in tuples:
        g = telescoped_uw_wtilde(trunc.cm, word, tp)
        images.append(plan_and_apply(trunc, g, trunc.highest_weight_vector()))
    for a in range(len(images)):
        for b in range(a + 1, len(images)):
            if vec_eq(images[a], images[b]):
                if not _separated_on_region(trunc, word, tuples[a], tuples[b]):
                    return False
    return True


def _separated_on_region(trunc, word, ta, tb) -> bool:
    ga = compile_inversion_word(trunc.cm, word, ta)
    gb = compile_inversion_word(trunc.cm, word, tb)
    region = [b for b in trunc.spaces if trunc.space(b).dim]
    return not operators_equal_on_region(trunc, ga, gb, region)


def commuting_experiment(trunc: ModuleTruncation, witnesses,
                         params, region) -> ExperimentReport:
    """Integrality of a product over commuting root subgroups, tested on the
    lattice generators of every weight space in the region."""
    start = time.monotonic()
    region = sorted(set(region), key=lambda b: (height(b), b))
    cm = trunc.cm
    words = [chi_real_root(cm, w, mpq(t)) for w, t in zip(witnesses, params)]
    for a in range(len(words)):
        for b in range(a + 1, len(words)):
            if not operators_equal_on_region(trunc, words[a] + words[b],
                                             words[b] + words[a], region):
                ra = weyl_act_depth_root(cm, witnesses[a][0], witnesses[a][1])
                rb = weyl_act_depth_root(cm, witnesses[b][0], witnesses[b][1])
                raise PairNotCommuting(ra, rb)
    u: GroupWord = ()
    for g in words:
        u = g + u
    member = True
    cert: dict = {}
    for beta in region:
        trunc.materialize(beta)
        lat = trunc.lattice(beta)
        for col in lat.basis_columns():
            out = plan_and_apply(trunc, u, {beta: list(col)})
            ok, c = trunc.membership_VZ(out)
            if not ok:
                member = False
                cert[beta] = c
                break
        if not member:
            break
    expected = all(is_integral(mpq(t)) for t in params)
    return ExperimentReport(member, expected, member == expected, cert,
                            trunc.max_height,
                            int(1000 * (time.monotonic() - start)))


def rank2_omega(cm: CartanMatrix, side: int, count: int) -> list[Root]:
    """The alternating family alpha_s, w_s(alpha_other), w_s w_other(alpha_s), ..."""
    if cm.size != 2:
        raise RankNotTwo(f"rank is {cm.size}")
    if side not in (1, 2):
        raise ValueError("side must be 1 or 2")
    out: list[Root] = []
    prefix: list[int] = []
    letter = side - 1
    for _ in range(count):
        beta = simple_root(cm, letter)
        for i in reversed(prefix):
            beta = reflect_root(cm, i, beta)
        out.append(beta)
        prefix.append(letter)
        letter = 1 - letter
    return out


def scan(cm: CartanMatrix, lam: LambdaData, words, param_tuples,
         depth_margin: int = 2, trunc: ModuleTruncation | None = None):
    """Cartesian driver: every (word, parameter tuple) cell runs an
    inversion experiment (base-case style when the word has length one)
    against one shared truncation. Overflow is a distinct status, retried
    once with a doubled margin."""
    if trunc is None:
        trunc = ModuleTruncation(cm, lam)
    cells = []
    for word in words:
        for tp in param_tuples:
            if len(tp) != len(word):
                continue
            cfg = ExperimentConfig(cm, lam, tuple(word),
                                   tuple(mpq(t) for t in tp), depth_margin)
            cell = {"word": tuple(word), "params": cfg.params}
            for attempt in range(2):
                try:
                    rep = inversion_experiment(trunc, cfg)
                    cell.update(status="ok", member=rep.member,
                                expected=rep.expected, agree=rep.agree,
                                depth_used=rep.depth_used, ms=rep.ms)
                    break
                except TruncationOverflow as exc:
                    cell.update(status="overflow", member=None,
                                expected=None, agree=None,
                                depth_used=trunc.max_height, ms=0,
                                detail=str(exc))
                except (NotReduced, PreconditionFailed) as exc:
                    cell.update(status="error", member=None, expected=None,
                                agree=None, depth_used=trunc.max_height,
                                ms=0, detail=str(exc))
                    break
            cells.append(cell)
    return cells


# -- helpers -------------------------------------------------------------------


def weyl_act_depth_root(cm: CartanMatrix, w: WeylWord, i: int) -> Root:
    from .rootsys import weyl_act_root
    return weyl_act_root(cm, w, simple_root(cm, i))


def pairing_along(trunc: ModuleTruncation, mu_depth: Root,
                   witness: Witness) -> int:
    from .rootsys import coroot_pairing
    return coroot_pairing(trunc.cm, trunc.lam.n, mu_depth, witness)
