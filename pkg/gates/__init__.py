"""
Waveguide sqrt(NOT) gate simulator app.
"""
