"""
Test suite for lstransforms.

Numerical checks against closed forms and independent oracles, plus CLI runs.
"""
