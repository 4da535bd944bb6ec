"""Test graphent."""
