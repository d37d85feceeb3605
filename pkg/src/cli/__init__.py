"""Command-line reports, the divisor mini-language and command implementations"""
