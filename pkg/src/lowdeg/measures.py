"""Exact finite measures over graphs, graph pairs, and labeled outcomes.

A DiscreteMeasure is a plain list of outcome atoms with weights, rational
when the underlying model parameters are rational.  Product, conditional
and mixture constructions are provided because the conditional-advantage
and planted-basis computations all need measure surgery.

Atom conventions used throughout the package:
  * a graph is a frozenset of normalized edges (u, v) with u < v;
  * a graph pair is a tuple (edges_a, edges_b);
  * a planted outcome is (sigma, edges) with sigma a tuple in [k]^n;
  * a matching-joint outcome is (pi, edges_a, edges_b) with pi a tuple.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable

from .graph_core import EnumerationBudgetError, _norm_edge

ENUMERATION_BUDGET = 1 << 22


def _all_pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


class DiscreteMeasure:
    """A finite distribution; exact when every weight is a Fraction."""

    def __init__(self, outcomes: Iterable, weights: Iterable, *, normalize: bool = False):
        self.outcomes = list(outcomes)
        self.weights = list(weights)
        if len(self.outcomes) != len(self.weights):
            raise ValueError("outcomes and weights differ in length")
        if any(w < 0 for w in self.weights):
            raise ValueError("negative weight")
        total = sum(self.weights)
        if normalize:
            if total == 0:
                raise ValueError("cannot normalize a zero measure")
            self.weights = [w / total for w in self.weights]
        else:
            if self.exact:
                if total != 1:
                    raise ValueError(f"weights sum to {total}, not 1")
            elif abs(float(total) - 1.0) > 1e-12:
                raise ValueError(f"weights sum to {float(total)}, not 1")

    @property
    def exact(self) -> bool:
        return all(isinstance(w, (Fraction, int)) for w in self.weights)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(zip(self.outcomes, self.weights))

    def expectation(self, fn: Callable):
        total = 0
        for x, w in self:
            total = total + w * fn(x)
        return total

    def mass(self, predicate: Callable) -> Fraction | float:
        return sum(w for x, w in self if predicate(x))

    def condition(self, predicate: Callable) -> "DiscreteMeasure":
        kept = [(x, w) for x, w in self if predicate(x) and w != 0]
        if not kept:
            raise ValueError("conditioning event has zero mass")
        return DiscreteMeasure([x for x, _ in kept], [w for _, w in kept], normalize=True)

    def map(self, fn: Callable) -> "DiscreteMeasure":
        """Pushforward, merging atoms with equal image."""
        acc: dict = {}
        for x, w in self:
            y = fn(x)
            acc[y] = acc.get(y, 0) + w
        return DiscreteMeasure(list(acc), list(acc.values()))

    def product(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        if len(self) * len(other) > ENUMERATION_BUDGET:
            raise EnumerationBudgetError("product support exceeds the enumeration budget")
        outs, ws = [], []
        for x, wx in self:
            for y, wy in other:
                outs.append((x, y))
                ws.append(wx * wy)
        return DiscreteMeasure(outs, ws)

    def power(self, m: int) -> "DiscreteMeasure":
        """m-fold product with tuple outcomes."""
        if len(self) ** m > ENUMERATION_BUDGET:
            raise EnumerationBudgetError("power support exceeds the enumeration budget")
        outs, ws = [()], [_one_like(self.weights)]
        for _ in range(m):
            outs = [o + (x,) for o in outs for x in self.outcomes]
            ws = [w * wx for w in ws for wx in self.weights]
        return DiscreteMeasure(outs, ws)

    @staticmethod
    def mixture(components: list["DiscreteMeasure"], coeffs: list) -> "DiscreteMeasure":
        acc: dict = {}
        for comp, c in zip(components, coeffs):
            for x, w in comp:
                acc[x] = acc.get(x, 0) + c * w
        return DiscreteMeasure(list(acc), list(acc.values()))

    def likelihood_ratio_table(self, null: "DiscreteMeasure") -> dict:
        """dP/dQ per atom; raises if P charges an atom Q does not."""
        qw = {x: w for x, w in null}
        out = {}
        for x, w in self:
            if w == 0:
                continue
            if x not in qw or qw[x] == 0:
                raise ValueError(f"alternative charges {x!r} outside the null support")
            out[x] = w / qw[x]
        for x, w in null:
            out.setdefault(x, 0 * w)
        return out

    def chi_square(self, null: "DiscreteMeasure"):
        """sum (P-Q)^2 / Q over the null support."""
        pw = {x: w for x, w in self}
        total = 0
        for x, qx in null:
            if qx == 0:
                if pw.get(x, 0) != 0:
                    raise ValueError("alternative charges a null-null atom")
                continue
            diff = pw.get(x, 0) - qx
            total = total + diff * diff / qx
        return total


def _one_like(weights) -> Fraction | float:
    return Fraction(1) if all(isinstance(w, (Fraction, int)) for w in weights) else 1.0


# -- enumerated model measures -------------------------------------------------


def _bernoulli_weight(prob, present: int):
    return prob if present else 1 - prob


def er_graph_measure(n: int, q) -> DiscreteMeasure:
    """All graphs on [n]; independent edges with probability q."""
    pairs = _all_pairs(n)
    if 2 ** len(pairs) > ENUMERATION_BUDGET:
        raise EnumerationBudgetError("graph space exceeds the enumeration budget")
    outs, ws = [], []
    for mask in range(2 ** len(pairs)):
        edges = frozenset(pairs[i] for i in range(len(pairs)) if mask >> i & 1)
        w = _one_like([q])
        for i in range(len(pairs)):
            w = w * _bernoulli_weight(q, mask >> i & 1)
        outs.append(edges)
        ws.append(w)
    return DiscreteMeasure(outs, ws)


def er_pair_measure(n: int, q) -> DiscreteMeasure:
    """Two independent edge-q graphs, as (edges_a, edges_b) atoms."""
    single = er_graph_measure(n, q)
    return single.product(single)


def sbm_joint_measure(n: int, k: int, lam, eps) -> DiscreteMeasure:
    """Joint (sigma, graph) law: uniform labels, block edge probabilities."""
    pairs = _all_pairs(n)
    if k ** n * 2 ** len(pairs) > ENUMERATION_BUDGET:
        raise EnumerationBudgetError("planted space exceeds the enumeration budget")
    p_in = (1 + (k - 1) * eps) * lam / n
    p_out = (1 - eps) * lam / n
    if not (0 <= p_in <= 1 and 0 <= p_out <= 1):
        raise ValueError("block edge probabilities outside [0,1]")
    label_w = Fraction(1, k ** n) if isinstance(p_in, Fraction) else 1.0 / k ** n
    outs, ws = [], []
    for sigma in itertools.product(range(k), repeat=n):
        intra = [sigma[u] == sigma[v] for u, v in pairs]
        for mask in range(2 ** len(pairs)):
            w = label_w
            for i in range(len(pairs)):
                w = w * _bernoulli_weight(p_in if intra[i] else p_out, mask >> i & 1)
            outs.append((sigma, frozenset(pairs[i] for i in range(len(pairs)) if mask >> i & 1)))
            ws.append(w)
    return DiscreteMeasure(outs, ws)


def sbm_graph_measure(n: int, k: int, lam, eps) -> DiscreteMeasure:
    return sbm_joint_measure(n, k, lam, eps).map(lambda x: x[1])


def correlated_er_joint_measure(n: int, p, s, *, keep_parent: bool = False) -> DiscreteMeasure:
    """Joint (pi, edges_a, edges_b) law of the correlated edge-subsampling model.

    The parent is edge-p; both children keep each parent edge independently
    with probability s, and the second child is relabeled by a uniform
    permutation pi.  With keep_parent the atoms are (pi, edges_g, edges_a,
    edges_b), which event-conditioning on the parent needs.
    """
    if p is None or s is None:
        raise ValueError("the matching joint needs (p, s); derive them from (q, rho) first")
    pairs = _all_pairs(n)
    n_pairs = len(pairs)
    import math as _math

    if _math.factorial(n) * 5 ** n_pairs > ENUMERATION_BUDGET:
        raise EnumerationBudgetError("matching-joint space exceeds the enumeration budget")
    one = _one_like([p, s])
    perm_w = one / _math.factorial(n)
    acc: dict = {}
    for pi in itertools.permutations(range(n)):
        for gmask in range(2 ** n_pairs):
            g_edges = [pairs[i] for i in range(n_pairs) if gmask >> i & 1]
            w_g = perm_w
            for i in range(n_pairs):
                w_g = w_g * _bernoulli_weight(p, gmask >> i & 1)
            g_frozen = frozenset(g_edges)
            for amask in range(2 ** len(g_edges)):
                a = frozenset(g_edges[i] for i in range(len(g_edges)) if amask >> i & 1)
                w_a = w_g
                for i in range(len(g_edges)):
                    w_a = w_a * _bernoulli_weight(s, amask >> i & 1)
                for bmask in range(2 ** len(g_edges)):
                    b = frozenset(
                        _norm_edge(pi[u], pi[v])
                        for i, (u, v) in enumerate(g_edges)
                        if bmask >> i & 1
                    )
                    w = w_a
                    for i in range(len(g_edges)):
                        w = w * _bernoulli_weight(s, bmask >> i & 1)
                    key = (pi, g_frozen, a, b) if keep_parent else (pi, a, b)
                    acc[key] = acc.get(key, 0) + w
    return DiscreteMeasure(list(acc), list(acc.values()))


def correlated_er_pair_measure(n: int, p, s) -> DiscreteMeasure:
    return correlated_er_joint_measure(n, p, s).map(lambda x: (x[1], x[2]))


def correlated_sbm_joint_measure(n: int, k: int, lam, eps, s) -> DiscreteMeasure:
    """Joint (pi, edges_a, edges_b) law with a block-model parent."""
    pairs = _all_pairs(n)
    n_pairs = len(pairs)
    import math as _math

    if _math.factorial(n) * k ** n * 5 ** n_pairs > ENUMERATION_BUDGET:
        raise EnumerationBudgetError("matching-joint space exceeds the enumeration budget")
    parent = sbm_joint_measure(n, k, lam, eps)
    one = _one_like([lam, eps, s])
    perm_w = one / _math.factorial(n)
    acc: dict = {}
    for (sigma, g), w_parent in parent:
        g_edges = sorted(g)
        for pi in itertools.permutations(range(n)):
            w_g = perm_w * w_parent
            for amask in range(2 ** len(g_edges)):
                a = frozenset(g_edges[i] for i in range(len(g_edges)) if amask >> i & 1)
                w_a = w_g
                for i in range(len(g_edges)):
                    w_a = w_a * _bernoulli_weight(s, amask >> i & 1)
                for bmask in range(2 ** len(g_edges)):
                    b = frozenset(
                        _norm_edge(pi[u], pi[v])
                        for i, (u, v) in enumerate(g_edges)
                        if bmask >> i & 1
                    )
                    w = w_a
                    for i in range(len(g_edges)):
                        w = w * _bernoulli_weight(s, bmask >> i & 1)
                    key = (pi, a, b)
                    acc[key] = acc.get(key, 0) + w
    return DiscreteMeasure(list(acc), list(acc.values()))
