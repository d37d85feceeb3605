"""Certificate language, parser and checker for the lct lower-bound arguments"""
