"""Finite-scale constructions and exact certificates for spacing shifts, a mixing
tower of zero-density shifts, the Gehman dendrite and a comb dendrite map."""

__version__ = "0.1.0"

__all__ = ["core_words", "spacing", "chaos_metrics", "omega_factory", "mixing_tower",
           "gehman", "dendrite_d", "experiments", "cli"]
