"""Utility functions package"""

