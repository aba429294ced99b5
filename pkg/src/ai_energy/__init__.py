"""Industry-level energy and CO2 effects of AI-driven productivity gains."""

__version__ = "0.1.0"
