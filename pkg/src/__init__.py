"""
Co-jump Markov counting systems - Main package
"""
