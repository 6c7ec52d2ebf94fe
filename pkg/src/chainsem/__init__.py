"""chainsem: index Ethereum chain data into an agent/behavior knowledge graph."""

__version__ = "0.1.0"
