"""Unit tests for satnoma modules."""
