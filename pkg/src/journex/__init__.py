"""Bootstrapped journal-name extraction from Japanese news text.

Learns left/right character-bigram context distributions around known
journal names, scores unseen candidate strings by a smoothed likelihood
ratio, and expands the dictionary iteratively with a human or oracle
judge in the loop.
"""

__version__ = "0.1.0"
