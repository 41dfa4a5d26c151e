"""Adaptive loss function learning: tape autodiff, learned loss networks, meta-training."""
