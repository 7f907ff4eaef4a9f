"""Exact, desk-scale machinery for low-degree testing hardness experiments
on correlated random graph models: samplers, subgraph-indexed orthonormal
bases, advantage computations, a dual-certificate recursion, and numeric
audits of the combinatorial bounds behind them."""

__version__ = "0.1.0"
