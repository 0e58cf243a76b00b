"""Differential-geometric and lattice computations"""
