"""Tests for the ntwfsm package."""
