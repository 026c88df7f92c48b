"""Promise-problem tests of quantum gates.

Finite-automata simulation (classical and quantum), exact minimal-automaton
search, classical failure-floor optimization, and noise-robustness numerics
(failure probability vs. infidelity surveys), with a reproducible CLI.
"""

__version__ = "0.1.0"
