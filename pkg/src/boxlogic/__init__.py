"""Provability logic toolkit: system P, its consistency filter, sequent proofs and the box game."""
