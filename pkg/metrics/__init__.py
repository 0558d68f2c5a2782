"""Equivariance and isometry defect meters, Ulam recovery and bound reports."""
