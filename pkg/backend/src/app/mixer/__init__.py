"""
Constraint-preserving mixer synthesis for LX-QAOA.

This module provides:
- Exact Pauli algebra, GF(2) and rational linear algebra helpers
- Logical-X graph families, orbit discovery and diagonal stabilizer groups
- Projector restriction, candidate pricing and optimal selection
- Tensor-product and Hamming-weight compositions
- Gate-level circuits and statevector validation / QAOA simulation
"""
