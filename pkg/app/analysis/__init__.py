"""Analytic eigenvalue statistics and capacity evaluations."""
