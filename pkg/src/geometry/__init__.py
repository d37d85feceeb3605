"""Picard lattice of the quintic del Pezzo surface and its bidouble cover"""
