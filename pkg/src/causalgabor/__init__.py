"""Time-causal and time-recursive analogue of the Gabor transform."""

__version__ = "0.1.0"
