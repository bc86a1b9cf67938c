"""Report rendering for seqcover sweep CSVs."""

__version__ = "0.1.0"
