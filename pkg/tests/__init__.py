"""Tests for laman_ric."""
