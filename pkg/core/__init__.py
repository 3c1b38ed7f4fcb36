"""
Core Django app configuration.
"""
