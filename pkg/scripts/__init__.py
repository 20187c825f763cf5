"""Reproduction scripts."""
