"""Rate-distortion frontiers for non-coherent MIMO sensing-and-communication links."""

__version__ = "0.1.0"
