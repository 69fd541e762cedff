"""Topology construction toolkit for dense wireless testbeds.

Builds customized multi-hop topologies (constant-degree subgraphs and
layered trees with prescribed per-level breadth) from pairwise signal-loss
measurements, and maps them to transceiver power/sensitivity settings.
"""

__version__ = "0.1.0"
