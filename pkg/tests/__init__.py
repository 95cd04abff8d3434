"""
Test suite for the co-jump Markov counting system simulator
"""
