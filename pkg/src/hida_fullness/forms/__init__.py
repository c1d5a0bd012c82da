"""Dirichlet characters, q-expansions, eta products and twists."""
