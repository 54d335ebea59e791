"""MOFit: obesity, body-weight and body-fat prediction pipeline."""

__version__ = "0.1.0"
