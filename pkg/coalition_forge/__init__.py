"""Cooperative games on curtailed coalition families: representations by user-blind facilities and the equitable solution."""
