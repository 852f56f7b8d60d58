"""ffctl: Fedder's criterion and F-purity computations over prime fields."""

__version__ = "0.1.0"
