"""Tests for qaoactl."""
