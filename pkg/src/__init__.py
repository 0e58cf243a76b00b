"""twistor-forge - computational checks for degenerate twistor families"""

__version__ = "0.1.0"
