"""Tests for ncf_reliability."""
