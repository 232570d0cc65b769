"""Exact symmetry analysis of the Fokker-Planck equation u_t = u_xx + x*u_x."""

__version__ = "0.1.0"
