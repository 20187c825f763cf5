"""Test suite for satnoma."""
