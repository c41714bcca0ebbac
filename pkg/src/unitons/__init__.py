"""Extended solutions of harmonic maps into O(n): exact construction, verification and factorization."""
