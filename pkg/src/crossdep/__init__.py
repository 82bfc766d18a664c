"""
Smart-home and ICT ontologies, their cross-domain dependencies and the
occupancy-driven standby shutdown simulator.
"""

__version__ = "0.1.0"
