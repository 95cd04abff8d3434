"""
Run configuration documents shared by the tests
"""
