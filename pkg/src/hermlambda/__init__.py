"""Exact lambda-operations on hermitian forms over algebras with involution."""
