"""Bridging-node analysis for multi-platform disaster discourse networks.

Builds text-similarity content graphs and user projections from social media
posts, detects community structure, locates bridging nodes, and characterizes
them with centrality, linguistic, topic, bot, and identity analyses.
"""

__version__ = "0.1.0"
