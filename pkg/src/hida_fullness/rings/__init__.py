"""Coefficient rings: descriptors, elements, morphisms and p-adic helpers."""
