"""Voter model discordance on random regular graphs."""

__version__ = "0.1.0"
