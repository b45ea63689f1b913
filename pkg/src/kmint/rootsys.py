"""Root and Weyl-group combinatorics.

Roots are integer coordinate tuples over the simple roots; Weyl words are
tuples of 0-based simple-reflection indices. A word, read left to right,
denotes the product w_{i1} w_{i2} ... w_{ik} acting on the left, so the
rightmost letter acts first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gcm import CartanMatrix

Root = tuple[int, ...]
Word = tuple[int, ...]


class NotReduced(ValueError):
    pass


class NotRealRoot(ValueError):
    pass


def height(beta: Root) -> int:
    return sum(beta)


def is_positive(beta: Root) -> bool:
    return any(beta) and all(c >= 0 for c in beta)


def coroot_pairing_root(cm: CartanMatrix, i: int, beta: Root) -> int:
    """<beta, alpha_i^vee> = sum_j a_ij beta_j."""
    return sum(cm.entries[i][j] * beta[j] for j in range(cm.size))


def reflect_root(cm: CartanMatrix, i: int, beta: Root) -> Root:
    p = coroot_pairing_root(cm, i, beta)
    return tuple(b - p if j == i else b for j, b in enumerate(beta))


def weyl_act_root(cm: CartanMatrix, word: Word, beta: Root) -> Root:
    for i in reversed(word):
        beta = reflect_root(cm, i, beta)
    return beta


def simple_root(cm: CartanMatrix, i: int) -> Root:
    return tuple(1 if j == i else 0 for j in range(cm.size))


# -- real root enumeration ---------------------------------------------------

Witness = tuple[Word, int]  # (w, i) with root = w(alpha_i)


def real_roots_up_to_height(cm: CartanMatrix, h: int) -> dict[Root, Witness]:
    """All positive real roots of height <= h with canonical witnesses.

    Breadth-first closure of the simple roots under simple reflections,
    layered by witness word length; within a layer the lexicographically
    smallest (word, i) wins. Roots of height > h are discarded during the
    search, which makes the canonical witness a function of (A, h) only.
    """
    if h < 1:
        raise ValueError("height bound must be >= 1")
    found: dict[Root, Witness] = {}
    layer: list[tuple[Root, Witness]] = []
    for i in range(cm.size):
        r = simple_root(cm, i)
        found[r] = ((), i)
        layer.append((r, ((), i)))
    while layer:
        candidates: list[tuple[Word, int, Root]] = []
        for root, (word, i) in layer:
            for j in range(cm.size):
                new = reflect_root(cm, j, root)
                if new in found or not is_positive(new) or height(new) > h:
                    continue
                candidates.append(((j,) + word, i, new))
        candidates.sort(key=lambda c: (c[0], c[1]))
        nxt: list[tuple[Root, Witness]] = []
        for word, i, root in candidates:
            if root not in found:
                found[root] = (word, i)
                nxt.append((root, (word, i)))
        layer = nxt
    return found


def find_word_containing_root(cm: CartanMatrix, beta: Root) -> Word:
    """A reduced word whose inversion set ends with beta (Lemma-style witness)."""
    if not is_positive(beta):
        raise NotRealRoot(f"{beta} is not a positive root")
    table = real_roots_up_to_height(cm, height(beta))
    if beta not in table:
        raise NotRealRoot(f"{beta} is not a real root")
    word, i = table[beta]
    return word + (i,)


# -- reduced words and inversion sets ----------------------------------------


def prefix_roots(cm: CartanMatrix, word: Word) -> list[Root]:
    """The roots w_{i1}...w_{i(k-1)} alpha_{ik} for k = 1..len(word)."""
    out = []
    for k, i in enumerate(word):
        out.append(weyl_act_root(cm, word[:k], simple_root(cm, i)))
    return out


def is_reduced(cm: CartanMatrix, word: Word) -> bool:
    roots = prefix_roots(cm, word)
    return all(is_positive(r) for r in roots) and len(set(roots)) == len(roots)


@dataclass(frozen=True)
class InvEntry:
    root: Root
    prefix: Word  # witness word: root = prefix(alpha_letter)
    letter: int


@dataclass(frozen=True)
class InversionSet:
    word: Word
    entries: tuple[InvEntry, ...]

    def roots(self) -> list[Root]:
        return [e.root for e in self.entries]


def inversion_set(cm: CartanMatrix, word: Word) -> InversionSet:
    if not is_reduced(cm, word):
        raise NotReduced(f"word {word} is not reduced")
    entries = tuple(
        InvEntry(root=weyl_act_root(cm, word[:k], simple_root(cm, i)),
                 prefix=word[:k], letter=i)
        for k, i in enumerate(word)
    )
    return InversionSet(word=word, entries=entries)


def reduced_words(cm: CartanMatrix, max_len: int) -> list[Word]:
    """All reduced words of length 1..max_len, in length-then-lex order."""
    out: list[Word] = []
    layer: list[Word] = [()]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for i in range(cm.size):
                cand = w + (i,)
                if is_reduced(cm, cand):
                    nxt.append(cand)
        nxt.sort()
        out.extend(nxt)
        layer = nxt
    return out


# -- weights as depth vectors -------------------------------------------------


def weight_pairing(cm: CartanMatrix, lam_n, beta: Root, i: int) -> int:
    """<lambda - beta, alpha_i^vee> for lambda given by its coroot values."""
    return lam_n[i] - coroot_pairing_root(cm, i, beta)


def reflect_depth(cm: CartanMatrix, lam_n, i: int, beta: Root) -> Root:
    """Depth vector of w_i(lambda - beta)."""
    p = weight_pairing(cm, lam_n, beta, i)
    return tuple(b + p if j == i else b for j, b in enumerate(beta))


def weyl_act_depth(cm: CartanMatrix, lam_n, word: Word, beta: Root) -> Root:
    for i in reversed(word):
        beta = reflect_depth(cm, lam_n, i, beta)
    return beta


def coroot_pairing(cm: CartanMatrix, lam_n, beta: Root, witness: Witness) -> int:
    """<lambda - beta, alpha^vee> for the real root alpha = w(alpha_i).

    Computed as <w^{-1}(lambda - beta), alpha_i^vee>; independent of the
    witness chosen for alpha.
    """
    word, i = witness
    # w^{-1} applies the letters of w leftmost-first
    for j in word:
        beta = reflect_depth(cm, lam_n, j, beta)
    return weight_pairing(cm, lam_n, beta, i)
