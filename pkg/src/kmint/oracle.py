"""Independent multiplicity oracles.

Root multiplicities come from the Peterson recurrence and weight
multiplicities from Freudenthal's recursion, both run exactly over the
rationals. These never touch the module construction; they exist to
cross-check weight-space dimensions and to decide whether a truncation
overflow is real.
"""

from __future__ import annotations

from itertools import product

from gmpy2 import mpq

from .gcm import CartanMatrix
from .rootsys import Root, height
from .util import Rat


class HeightExceeded(ValueError):
    pass


def _bilinear(b, x, y) -> Rat:
    return sum((x[i] * b[i][j] * y[j] for i in range(len(x)) for j in range(len(x))
                if x[i] and b[i][j] and y[j]), mpq(0))


def _vectors_of_height(rank: int, h: int):
    if rank == 1:
        yield (h,)
        return
    for head in product(range(h + 1), repeat=rank - 1):
        rest = h - sum(head)
        if rest >= 0:
            yield head + (rest,)


class RootMultTable:
    """mult(alpha) for positive roots alpha up to a height bound."""

    def __init__(self, cm: CartanMatrix, h: int):
        self.cm = cm
        self.height = 0
        self._c: dict[Root, Rat] = {}
        self._mult: dict[Root, int] = {}
        self._b = cm.symmetrized()
        self._rho_dot = [mpq(q) for q in cm.symmetrizer]  # (rho, alpha_i) = q_i
        self.extend(h)

    def mult(self, beta: Root) -> int:
        if height(beta) > self.height:
            raise HeightExceeded(f"table built to height {self.height}")
        return self._mult.get(beta, 0)

    def positive_roots(self) -> list[Root]:
        return sorted(b for b, m in self._mult.items() if m > 0)

    def extend(self, h: int) -> None:
        cm, b = self.cm, self._b
        for ht in range(self.height + 1, h + 1):
            for beta in _vectors_of_height(cm.size, ht):
                if ht == 1:
                    self._c[beta] = mpq(1)
                    self._mult[beta] = 1
                    continue
                rhs = mpq(0)
                for bp, cp in self._c.items():
                    bpp = tuple(x - y for x, y in zip(beta, bp))
                    if all(v >= 0 for v in bpp) and any(bpp):
                        cpp = self._c.get(bpp)
                        if cpp:
                            rhs += _bilinear(b, bp, bpp) * cp * cpp
                two_rho = 2 * sum(self._rho_dot[i] * beta[i] for i in range(cm.size))
                denom = _bilinear(b, beta, beta) - two_rho
                lower = self._divisor_sum(beta)
                if denom == 0:
                    # only non-roots can make the coefficient vanish
                    if rhs != 0:
                        raise ArithmeticError(
                            f"Peterson recurrence degenerate at {beta}")
                    c = lower
                else:
                    c = rhs / denom
                m = c - lower
                if m.denominator != 1 or m < 0:
                    raise ArithmeticError(
                        f"non-integral root multiplicity {m} at {beta}")
                self._c[beta] = c
                if int(m):
                    self._mult[beta] = int(m)
        self.height = max(self.height, h)

    def _divisor_sum(self, beta: Root) -> Rat:
        """sum over n >= 2 of mult(beta/n)/n."""
        out = mpq(0)
        for n in range(2, height(beta) + 1):
            if all(v % n == 0 for v in beta):
                sub = tuple(v // n for v in beta)
                out += mpq(self._mult.get(sub, 0), n)
        return out


def peterson_mults(cm: CartanMatrix, h: int) -> RootMultTable:
    return RootMultTable(cm, h)


class Oracle:
    """Freudenthal weight multiplicities for V^lambda, memoized."""

    def __init__(self, cm: CartanMatrix, lam_n):
        self.cm = cm
        self.lam_n = tuple(lam_n)
        self._b = cm.symmetrized()
        self._table = RootMultTable(cm, 1)
        self._memo: dict[Root, int] = {}
        q = cm.symmetrizer
        # (lambda, alpha_i) = q_i n_i and (lambda + rho, alpha_i) = q_i (n_i + 1)
        self._lam_dot = [mpq(q[i] * self.lam_n[i]) for i in range(cm.size)]
        self._lam_rho_dot = [mpq(q[i] * (self.lam_n[i] + 1)) for i in range(cm.size)]

    def weight_mult(self, beta: Root) -> int:
        """Multiplicity of lambda - beta in V^lambda (0 off the positive cone)."""
        if any(v < 0 for v in beta):
            return 0
        if not any(beta):
            return 1
        if beta in self._memo:
            return self._memo[beta]
        h = height(beta)
        if self._table.height < h:
            self._table.extend(h)
        b = self._b
        num = mpq(0)
        for alpha in self._table.positive_roots():
            m_alpha = self._table.mult(alpha)
            aa = _bilinear(b, alpha, alpha)
            la = sum(self._lam_dot[i] * alpha[i] for i in range(self.cm.size))
            ba = _bilinear(b, beta, alpha)
            k = 1
            while True:
                sub = tuple(x - k * y for x, y in zip(beta, alpha))
                if any(v < 0 for v in sub):
                    break
                m_sub = self.weight_mult(sub)
                if m_sub:
                    # (lambda - beta + k alpha, alpha)
                    num += m_alpha * (la - ba + k * aa) * m_sub
                k += 1
        num *= 2
        denom = 2 * sum(self._lam_rho_dot[i] * beta[i]
                        for i in range(self.cm.size)) - _bilinear(b, beta, beta)
        if denom == 0:
            if num != 0:
                raise ArithmeticError(f"Freudenthal recursion degenerate at {beta}")
            mult = 0
        else:
            m = num / denom
            if m.denominator != 1 or m < 0:
                raise ArithmeticError(f"non-integral weight multiplicity {m} at {beta}")
            mult = int(m)
        self._memo[beta] = mult
        return mult


def freudenthal_mult(cm: CartanMatrix, lam_n, beta: Root,
                     table: RootMultTable) -> int:
    """One-shot Freudenthal multiplicity; `table` must cover height(beta)."""
    if height(beta) > table.height:
        raise HeightExceeded(f"table built to height {table.height}")
    return Oracle(cm, lam_n).weight_mult(beta)
