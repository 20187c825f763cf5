"""Scripts reproducing the full-scale fairness experiments.

Run with ``python -m scripts.experiments.reproduce``.
"""
