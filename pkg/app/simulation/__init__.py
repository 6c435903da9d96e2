"""Monte Carlo simulation of the dual-hop channel."""
