"""Configuration management package"""

