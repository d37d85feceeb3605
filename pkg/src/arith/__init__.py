"""Exact rational linear arithmetic: simplex oracle and Fourier-Motzkin elimination"""
