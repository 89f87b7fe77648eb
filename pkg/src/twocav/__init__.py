"""Two-cavity damped bosonic field toolkit.

Evolves a two-mode field state restricted to a 4-dimensional Fock window
under Markovian and non-Markovian damping, quantifies its quantum
correlations (negativity, logarithmic negativity, concurrence, discord,
Wigner negativity volume), and evaluates teleportation through the evolved
state as a channel.
"""

__version__ = "1.0.0"
