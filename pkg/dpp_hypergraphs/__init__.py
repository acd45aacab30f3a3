"""Hypergraphs as i.i.d. draws from a determinantal point process with kernel beta * V V^T + diag(alpha)."""
