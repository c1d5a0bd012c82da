"""Howell-form lattices and ideal arithmetic."""
