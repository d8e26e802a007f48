"""THz ultra-massive MIMO hybrid beamforming toolkit."""

__version__ = '0.1.0'
